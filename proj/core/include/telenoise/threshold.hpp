#pragma once

#include "telenoise/errors.hpp"

namespace telenoise {

/// Equivalent Pauli flip probability of coherently combined rotations:
/// p = sin^2(n_locations * theta).
double pauli_probability_from_angle(double theta, int n_locations = 5);

/// Matching-decoder threshold lower bound 1 / (2 (B - 1))^2, with B the
/// maximum neighbour count of the decoding graph.
double threshold_lower_bound(int b);

/// Rotation angle whose combined flip probability reaches p_th:
/// arcsin(sqrt(p_th)) / n_locations.
double theta_threshold(double p_th, int n_locations = 5);

}  // namespace telenoise
