#include "maxnorm/presets.hpp"

#include "maxnorm/errors.hpp"

namespace maxnorm {

TuningPreset preset_by_name(const std::string& name) {
  if (name == "uniform-noiseless")
    return {name, 1e-4, 2.0, 0.01, 0.02};
  if (name == "uniform-noisy")
    return {name, 2e-4, 0.05, 0.8, 1e-4};
  if (name == "scheme23")
    return {name, 2e-4, 0.1, 0.2, 2e-4};
  if (name == "real-data")
    return {name, 2e-4, 0.5, 0.8, 1e-4};
  throw ArgumentError("unknown tuning preset: " + name);
}

TuningPreset auto_preset(SchemeKind kind, double sigma) {
  if (kind == SchemeKind::Uniform)
    return preset_by_name(sigma > 0.0 ? "uniform-noisy" : "uniform-noiseless");
  return preset_by_name("scheme23");
}

}  // namespace maxnorm
