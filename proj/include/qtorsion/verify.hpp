#pragma once

#include <string>
#include <vector>

#include "qtorsion/spectral.hpp"

namespace qtorsion {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::vector<double> alphas = {0.3, 0.5, 0.8, 1.0};
  double kmax = 0.0;  // <= 0: 200 pi / l_min per graph
  SolverOptions solver;
  // Test hook: every eigenvalue is multiplied by (1 + lambda_perturbation)
  // before any fractional quantity is formed.
  double lambda_perturbation = 0.0;
  bool run_oracle = true;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  std::size_t failures() const;
};

/// Closed-form agreement, bound sandwiches, surgery monotonicity and oracle
/// cross-checks over the built-in graphs.
VerifyReport run_verification(const VerifyOptions& opts = {});

/// Rescales eigenvalues in place (wavenumbers follow); used by the test hook.
void perturb_eigenvalues(SpectralBasis& basis, double relative);

}  // namespace qtorsion
