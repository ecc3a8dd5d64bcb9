#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "cfq/qubit/params.hpp"

namespace cfq::cli {

struct RunConfig {
  qubit::SimParams sim;  ///< dt, t_final, rates, seed
  double t_click = 6.25;  ///< Alice's actual click
  std::string out_dir = ".";
  std::string out;  ///< primary output file name (inside out_dir unless absolute)
  bool full_scale = false;
  std::size_t n_ostensible = 2000;
  std::size_t n_resample = 2000;
  std::size_t n_suspect = 1000;
  std::size_t stride = 10;  ///< output every stride * dt
  double bin_width = 0.01;
  std::size_t n_grid = 2048;
  double sigma0 = 0.01;
  double tau = 1.54;
  // chsh
  double alice_angle = 0.0;
  double bob_angle = 0.7853981633974483;
  double cf_angle = 1.5707963267948966;
  bool verbose = false;
  std::string scenario_path;
};

/// Throws InputError for inconsistent settings; run before any computation.
void validate(const RunConfig& c, const std::string& command);

int cmd_chsh(const RunConfig& c, std::ostream& out);
int cmd_supposability(const RunConfig& c, std::ostream& out);
int cmd_lindblad(const RunConfig& c, std::ostream& out);
int cmd_filter(const RunConfig& c, std::ostream& out);
int cmd_jumprate(const RunConfig& c, std::ostream& out);
int cmd_suspect(const RunConfig& c, std::ostream& out);
int cmd_fpe(const RunConfig& c, std::ostream& out);

/// Parses argv and dispatches; returns the process exit code (0 success,
/// 1 runtime failure, 2 usage error).
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace cfq::cli
