#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "toepexp/toeplitz.hpp"

namespace toepexp::cli {

enum class Command { expm, condition, bounds, bench, gap_sweep };
enum class Format { csv, json };

struct ExperimentConfig {
  Command command = Command::expm;
  SymbolSpec symbol;
  /// Optional matrix file in the toeplitz text format; replaces symbol/n.
  std::optional<std::string> matrix_path;
  std::vector<std::size_t> n_list{256};
  double t = 1.0;
  double gamma = 0.1;
  std::vector<double> tol_exp_list{1e-6};
  std::vector<double> eps_list{1e-6, 1e-9, 1e-12};
  std::uint64_t seed = 0;
  std::size_t seeds = 1;
  std::size_t m_max = 100;
  std::string algorithm = "inexact";
  std::string output_path;  // empty = standard output
  Format format = Format::csv;
  bool verify = false;
  bool timings = true;
  std::size_t threads = 1;
};

/// Parses argv and runs one experiment. Reports go to `out` (or the file in
/// --output); diagnostics go to `err`. Exit codes: 0 success, 1 numerical
/// failure (diagnostic names module and operation), 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace toepexp::cli
