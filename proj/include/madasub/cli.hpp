#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "madasub/io.hpp"

namespace madasub {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitIo = 4,
};

// Everything a command line invocation can configure. Zero values of g, L
// and epsilon mean "use the default" (g = n, L = p, epsilon = 1/p).
struct RunSpec {
  std::string command;

  std::string data_path;
  std::string response = "y";
  bool no_header = false;
  bool demo = false;
  std::string family = "gaussian";

  std::string kernel = "g-prior";
  double g = 0.0;
  std::string model_prior = "uniform";
  double omega = 0.5;
  double a = 1.0;
  double b = 1.0;
  double gamma = 1.0;
  bool gamma_set = false;

  std::size_t iterations = 10000;
  std::size_t burn_in = 0;
  double weight = 0.0;
  double epsilon = 0.0;
  double q = 5.0;
  bool q_set = false;  // unset q falls back to p/2 when p <= q
  std::string r0;  // explicit comma-separated vector; overrides q
  std::string init = "constant";
  std::optional<double> delta;
  std::uint64_t seed = 1;
  std::string start;

  std::size_t workers = 4;
  std::size_t rounds = 10;
  bool share_cache = false;
  int threads = 0;

  // simulate
  std::size_t sim_n = 60;
  std::size_t sim_p = 20;
  double sim_rho = 0.9;
  std::string sim_beta;
  bool sim_randomized = false;
  double sim_sigma2 = 1.0;
  double sim_intercept = 0.0;

  std::string trace_path;
  std::string summary_path;
  std::string out_dir = ".";
};

// Parses arguments (without the program name) and runs the command. Errors
// are reported on stderr and mapped to ExitCode values.
int run_cli(const std::vector<std::string>& args);

// Runs a fully parsed spec; throws ConfigError/NumericError/IoError.
void execute(const RunSpec& spec);

}  // namespace madasub
