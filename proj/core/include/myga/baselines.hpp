#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "myga/simplex.hpp"

namespace myga {

enum class Exp4Variant { plain, thresholded };

/// Zeroes every arm with mass <= gamma and rescales the survivors
/// proportionally. Returns the input unchanged if nothing would survive.
Distribution threshold_proportional(std::span<const double> mixture, double gamma);

/// Exponential weights over the real experts with importance-weighted loss
/// estimates. The thresholded variant plays threshold_proportional(mixture).
class Exp4Policy {
 public:
  Exp4Policy(std::size_t arms, std::size_t num_experts, double eta, Exp4Variant variant,
             double gamma = 0.0);

  Distribution advise(const AdviceSet& advices) const;
  /// Mixture of advices under the current weights, before any thresholding.
  Distribution mixture(const AdviceSet& advices) const;
  void update(const AdviceSet& advices, std::span<const double> p, std::size_t arm, double loss);

  const std::vector<double>& cumulative_loss() const { return cum_loss_; }
  Exp4Variant variant() const { return variant_; }

 private:
  std::size_t arms_;
  double eta_;
  Exp4Variant variant_;
  double gamma_;
  std::vector<double> cum_loss_;
};

}  // namespace myga
