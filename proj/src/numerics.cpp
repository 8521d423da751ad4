#include "qtorsion/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace qtorsion {

double pow_pos(double x, double p) {
  if (!(x > 0.0)) {
    throw std::domain_error("pow_pos: base must be positive");
  }
  if (p == 1.0) return x;
  return std::exp(p * std::log(x));
}

double pairwise_sum(std::span<const double> terms) {
  constexpr std::size_t kLeaf = 16;
  if (terms.size() <= kLeaf) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

}  // namespace qtorsion
