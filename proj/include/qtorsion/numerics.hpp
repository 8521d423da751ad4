#pragma once

#include <numbers>
#include <span>

namespace qtorsion {

inline constexpr double kPi = std::numbers::pi;

// x^p for x > 0. Every fractional power in the library goes through here so
// that L^{2a+1}, lambda^a, and friends round identically across modules.
double pow_pos(double x, double p);

// Pairwise (tree) summation. The reduction order depends only on the length
// of the input, so results are bit-stable for a given term sequence.
double pairwise_sum(std::span<const double> terms);

}  // namespace qtorsion
