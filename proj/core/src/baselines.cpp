#include "myga/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace myga {

Distribution threshold_proportional(std::span<const double> mixture, double gamma) {
  Distribution out(mixture.begin(), mixture.end());
  double kept = 0.0;
  for (double x : mixture) {
    if (x > gamma) kept += x;
  }
  if (!(kept > 0.0)) return out;
  for (double& x : out) x = x > gamma ? x / kept : 0.0;
  return out;
}

Exp4Policy::Exp4Policy(std::size_t arms, std::size_t num_experts, double eta, Exp4Variant variant,
                       double gamma)
    : arms_(arms), eta_(eta), variant_(variant), gamma_(gamma), cum_loss_(num_experts, 0.0) {
  if (arms < 2 || num_experts < 1) throw std::invalid_argument("exp4: bad dimensions");
  if (!(eta > 0.0)) throw std::invalid_argument("exp4: eta must be positive");
  if (variant == Exp4Variant::thresholded && !(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("exp4: gamma outside [0, 1)");
  }
}

Distribution Exp4Policy::mixture(const AdviceSet& advices) const {
  if (advices.size() != cum_loss_.size()) {
    throw std::invalid_argument("exp4: expected " + std::to_string(cum_loss_.size()) + " advices");
  }
  const double shift = *std::min_element(cum_loss_.begin(), cum_loss_.end());
  std::vector<double> w(cum_loss_.size());
  for (std::size_t e = 0; e < w.size(); ++e) w[e] = std::exp(-eta_ * (cum_loss_[e] - shift));
  return weighted_average(advices, w);
}

Distribution Exp4Policy::advise(const AdviceSet& advices) const {
  Distribution mix = mixture(advices);
  if (variant_ == Exp4Variant::plain) return mix;
  return threshold_proportional(mix, gamma_);
}

void Exp4Policy::update(const AdviceSet& advices, std::span<const double> p, std::size_t arm,
                        double loss) {
  if (advices.size() != cum_loss_.size() || p.size() != arms_ || arm >= arms_) {
    throw std::invalid_argument("exp4: update dimension mismatch");
  }
  if (!(p[arm] > 0.0)) throw std::logic_error("exp4: played arm has zero probability");
  const double value = loss / p[arm];
  for (std::size_t e = 0; e < advices.size(); ++e) cum_loss_[e] += advices[e][arm] * value;
}

}  // namespace myga
