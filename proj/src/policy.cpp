#include "recon/policy.hpp"

#include <cmath>

#include "recon/errors.hpp"

namespace recon {

std::string policy_name(const Policy& policy) {
  switch (policy.index()) {
    case 0:
      return "uniform";
    case 1:
      return "threshold";
    default:
      return "zero_wait";
  }
}

void validate_policy(const Policy& policy) {
  if (const auto* u = std::get_if<UniformPolicy>(&policy)) {
    if (!(u->rate > 0.0) || !std::isfinite(u->rate)) {
      throw ParameterError("uniform sampling rate must be positive and finite");
    }
  } else if (const auto* t = std::get_if<ThresholdPolicy>(&policy)) {
    if (t->beta < 1) throw ParameterError("threshold beta must be an integer >= 1");
  }
}

}  // namespace recon
