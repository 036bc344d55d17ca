#pragma once

#include <optional>
#include <vector>

#include "qmaxent/operator_core.hpp"
#include "qmaxent/partition.hpp"

namespace qmaxent {

struct ObservableSet {
  std::vector<HermitianOperator> observables;
  std::optional<SiteStructure> structure;
  // optional per-observable supports (sites the operator acts on nontrivially)
  std::vector<std::vector<int>> supports;

  int dim() const;
  int size() const { return static_cast<int>(observables.size()); }
  void validate() const;
};

struct ExpectationVector {
  RVector values;
};

enum class SolveStatus { Interior, FaceReduced };

struct MaxEntSolution {
  DensityMatrix state;
  std::optional<RVector> dual;  // absent when face-reduced
  Matrix support;               // projector onto range(state)
  SolveStatus status = SolveStatus::Interior;
  double residual = 0.0;  // max_i |tr(state F_i) - alpha_i|
  double entropy_bits = 0.0;
  std::vector<int> pruned_constraints;  // dependent/constant constraints dropped
};

struct SolverOptions {
  double grad_tol = 1e-9;
  double lambda_cap = 1e3;        // divergence trigger
  double lambda_extract = 1e8;    // magnitude at which the face is read off
  double eig_floor = 1e-8;        // below this the iterate counts as boundary
  double face_weight_cut = 1e-10; // Gibbs weight below which a level leaves the face
  double degeneracy_tol = 1e-8;   // relative to the spectral range
  double feas_tol = 1e-5;         // slack for constant/dependent constraint checks
  double dependence_tol = 1e-8;   // relative residual below which operators count as dependent
  int max_evals = 20000;          // dual evaluations per face
  int max_face_rounds = 64;
};

/// exp(sum lambda_i F_i - shift) / Z with shift = max eigenvalue.
DensityMatrix gibbs_state(const ObservableSet& f, const RVector& lambda);

struct DualEval {
  double value;  // log tr exp(sum lambda_i F_i) - lambda . alpha (natural log)
  RVector grad;  // tr(gibbs F_i) - alpha_i
};

DualEval dual_value_grad(const ObservableSet& f, const ExpectationVector& alpha,
                         const RVector& lambda);

/// Maximum-entropy state subject to tr(rho F_i) = alpha_i. Interior targets
/// converge by quasi-Newton descent of the dual; boundary targets are handled
/// by facial reduction (see solver notes in maxent.cpp). Throws
/// infeasible_error when alpha is not attainable.
MaxEntSolution solve_maxent(const ObservableSet& f, const ExpectationVector& alpha,
                            const SolverOptions& opts = {});

struct RdmTarget {
  std::vector<int> sites;
  DensityMatrix rdm;
};

struct RdmConstraintSet {
  SiteStructure structure;
  int k = 0;  // locality bound, 0 = unchecked
  std::vector<RdmTarget> targets;
};

/// Expands each target RDM into expectation constraints over a
/// trace-orthonormal product operator basis (deduplicated across overlapping
/// targets) and delegates to solve_maxent.
MaxEntSolution solve_maxent_rdm(const RdmConstraintSet& constraints,
                                const SolverOptions& opts = {});

/// Constraint set carrying all size-j reduced density matrices of rho.
RdmConstraintSet all_rdms(const DensityMatrix& rho, const SiteStructure& structure, int j);

/// The expansion used by solve_maxent_rdm, exposed for reuse.
std::pair<ObservableSet, ExpectationVector> expand_rdm_constraints(const RdmConstraintSet& c);

/// C^(k) = S(rho*(rho^(k-1))) - S(rho*(rho^(k))) in bits; rho*(rho^(0)) is
/// the maximally mixed state.
double irreducible_correlation_k(const DensityMatrix& rho, const SiteStructure& structure, int k,
                                 const SolverOptions& opts = {});

/// C^ABC = S(rho*_ABC) - S(rho_ABC) where rho*_ABC is the max-ent state with
/// the AB and BC marginals of rho pinned (AC deliberately unconstrained).
double irreducible_correlation_abc(const DensityMatrix& rho_abc, const RegionPartition& partition,
                                   const SiteStructure& structure, const SolverOptions& opts = {});

}  // namespace qmaxent
