#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glimm/functionals.hpp"
#include "glimm/glimm.hpp"
#include "glimm/system_model.hpp"

namespace glimm {

struct InitialSpec {
  std::string type = "riemann";  // riemann | piecewise | random
  State uL, uR;
  double x0 = 0;
  std::vector<double> breaks;
  std::vector<State> states;
  double tv = 0.1;    // random: target total variation
  int jumps = 5;      // random: number of jumps
  double width = 0.5; // random: jumps inside [0, width]
};

struct ExperimentConfig {
  std::string model = "cubic";
  std::optional<double> delta0;
  std::optional<Box> domain;  // also fixes the speed normalization
  InitialSpec initial;
  double T = 0.5;
  std::vector<double> eps{1.0 / 64};
  std::string sequence = "vdc";
  FunctionalConstants constants;  // c0, c, delta0 used; C from C_factor
  double C_factor = 0.125;
  std::string reference = "exact";  // exact | fine
  std::string out = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  int trials = 50;
  std::optional<double> rho;
  std::uint64_t m = 0, n = 0;  // trace interval; n = 0 means all steps
  int max_interval = 64;
};

// Throws ConfigError. Missing keys keep their defaults.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);
std::string dump_config(const ExperimentConfig& c);

ModelPtr model_from(const ExperimentConfig& c);
// Random spec draws from seed; trial selects an independent stream.
InitialData initial_from(const SystemModel& model, const InitialSpec& spec, std::uint64_t seed = 1,
                         std::uint64_t trial = 0);
// delta0 from the config, else the model's validated value.
EvolveOptions evolve_options_from(const ExperimentConfig& c, const SystemModel& model);

}  // namespace glimm
