#ifndef MAXNORM_PRESETS_HPP_
#define MAXNORM_PRESETS_HPP_

#include <string>

#include "maxnorm/sampling.hpp"

namespace maxnorm {

/// Tuning constants expressed relative to ||Y_Omega||_F, one set per method.
struct TuningPreset {
  std::string name;
  double nuclear_mu_scale = 0.0;      // mu = scale * ||Y||_F
  double max_lambda_scale = 0.0;      // lambda = scale * ||Y||_F (mu = 0)
  double hybrid_lambda_scale = 0.0;   // lambda = scale * ||Y||_F
  double hybrid_mu_over_lambda = 0.0; // mu = ratio * lambda
};

/// Named presets: "uniform-noiseless", "uniform-noisy", "scheme23", "real-data".
TuningPreset preset_by_name(const std::string& name);

/// Default preset for a simulation setting.
TuningPreset auto_preset(SchemeKind kind, double sigma);

}  // namespace maxnorm

#endif  // MAXNORM_PRESETS_HPP_
