#pragma once

#include <cstdint>
#include <vector>

#include "qmaxent/maxent.hpp"
#include "qmaxent/operator_core.hpp"

// Independent reference solvers used to cross-check the production path.
// Nothing here shares machinery with qmaxent::solve_maxent: the classical
// oracle works on probability vectors with cyclic 1-D bisection, the primal
// oracle ascends the entropy directly with projected gradients.

namespace oracle {

using qmaxent::Matrix;
using qmaxent::RVector;

/// Classical maximum entropy on a d-outcome simplex subject to f_i . p =
/// alpha_i. Solves the dual by cyclic coordinate bisection; targets must be
/// attainable with an interior distribution.
RVector classical_maxent(const std::vector<RVector>& f, const RVector& alpha, double tol = 1e-11);

struct PrimalResult {
  Matrix rho;
  double entropy_bits;
  double residual;
};

/// Projected-gradient entropy ascent over the affine slice tr(rho F_i) =
/// alpha_i with PSD repair, best of `restarts` random starts.
PrimalResult primal_maxent(const qmaxent::ObservableSet& f, const RVector& alpha,
                           int restarts = 10, std::uint64_t seed = 42, int max_iter = 4000);

}  // namespace oracle
