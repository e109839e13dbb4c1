#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellwave/ellwave.h"
#include "table.hpp"

namespace ellwave::cli {

enum class Command { constants, figure1, verify, sample };
enum class Format { csv, json };

struct Grid {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
};

// Unset optionals take per-command defaults.
struct RunConfig {
  Command command = Command::verify;
  std::vector<ew_family> families;
  std::vector<ew_constant_kind> kinds;
  std::vector<int> p_list;
  std::optional<Grid> m_grid;
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<int> signs;
  int samples = 32;
  double tol = 1e-8;
  Format format = Format::csv;
  std::optional<std::string> output_path;
  // verify
  int points = 257;
  bool corrupt_velocity = false;
  int threads = 0;  // 0: hardware concurrency
  // sample
  std::optional<Grid> x_grid;
  std::vector<double> t_list;
};

struct CommandResult {
  Table table;
  int exit_code = 0;  // 0 pass, 1 verification failure, 2 usage error
  std::vector<std::string> warnings;
};

// Grid points start, start+step, ... up to stop inclusive (with 1e-9 step
// slack), rounded to 12 decimals so 0.1 steps land on the decimal values.
std::vector<double> expand(const Grid& g);

CommandResult cmd_constants(const RunConfig& cfg);
CommandResult cmd_figure1(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_sample(const RunConfig& cfg);
CommandResult run(const RunConfig& cfg);

}  // namespace ellwave::cli
