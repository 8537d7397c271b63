#pragma once

#include <cmath>

namespace mewma {

/// MEWMA chart design: dimension p, smoothing constant lambda and alarm
/// threshold h4 on T^2.  The derived quantities are always recomputed from
/// (lambda, h4).
class ChartConfig {
 public:
  ChartConfig(int p, double lambda, double h4);

  int p() const { return p_; }
  double lambda() const { return lambda_; }
  double h4() const { return h4_; }

  /// Threshold on the raw squared norm Z'Z: h = h4 * lambda / (2 - lambda).
  double h() const { return h4_ * lambda_ / (2.0 - lambda_); }

  /// Noncentrality scale ((1 - lambda) / lambda)^2.
  double eta() const {
    const double q = (1.0 - lambda_) / lambda_;
    return q * q;
  }

  ChartConfig with_h4(double h4) const { return {p_, lambda_, h4}; }

 private:
  int p_;
  double lambda_;
  double h4_;
};

/// Mean shift of squared magnitude delta = mu1' mu1.
class ShiftSpec {
 public:
  explicit ShiftSpec(double delta);
  static ShiftSpec from_distance(double sqrt_delta);

  double delta() const { return delta_; }
  double sqrt_delta() const { return std::sqrt(delta_); }

 private:
  double delta_;
};

}  // namespace mewma
