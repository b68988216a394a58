#include "telenoise/threshold.hpp"

#include <cmath>

namespace telenoise {

double pauli_probability_from_angle(double theta, int n_locations) {
  if (n_locations < 1) {
    throw DomainError("pauli_probability_from_angle: n_locations must be >= 1");
  }
  const double s = std::sin(static_cast<double>(n_locations) * theta);
  return s * s;
}

double threshold_lower_bound(int b) {
  if (b < 2) {
    throw DomainError("threshold_lower_bound: B must be >= 2");
  }
  const double d = 2.0 * (static_cast<double>(b) - 1.0);
  return 1.0 / (d * d);
}

double theta_threshold(double p_th, int n_locations) {
  if (p_th < 0.0 || p_th > 1.0) {
    throw DomainError("theta_threshold: p_th must lie in [0, 1]");
  }
  if (n_locations < 1) {
    throw DomainError("theta_threshold: n_locations must be >= 1");
  }
  return std::asin(std::sqrt(p_th)) / static_cast<double>(n_locations);
}

}  // namespace telenoise
