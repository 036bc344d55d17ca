#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmaxent/maxent.hpp"
#include "qmaxent/operator_core.hpp"
#include "qmaxent/spin_models.hpp"

namespace qmaxent {

struct non_unique_ground_state : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A boundary approach H(eps) = sum (base_i + eta_i(eps)) F_i, with the
/// perturbation coefficients tabulated over a strictly decreasing eps grid.
struct PathSpec {
  RVector base_coeffs;
  std::vector<double> eps_grid;
  std::vector<RVector> perturbation_coeffs;  // one row per grid point

  void validate(int r) const;

  static std::vector<double> default_eps_grid();  // 1e-1 .. 1e-6, ratio 10
  static PathSpec linear(RVector base, const RVector& direction,
                         std::vector<double> grid = default_eps_grid());
};

enum class Verdict { Discontinuous, Continuous, Inconclusive };
const char* verdict_name(Verdict v);

struct DiscontinuityReport {
  DensityMatrix limit_state;   // extrapolated ground state along the path
  MaxEntSolution reference;    // max-ent inference at the limiting expectations
  RVector alpha_limit;
  double gap_trace = 0.0;
  double gap_entropy_bits = 0.0;
  double alpha_drift = 0.0;  // residual movement of the expectations over the tail
  Verdict verdict = Verdict::Inconclusive;
  bool cauchy_converged = false;
  std::vector<double> used_eps;  // grid points that had a resolvable unique ground state
};

struct ProbeOptions {
  double degeneracy_drop_tol = 1e-11;  // relative gap below which a point is dropped
  double extrap_noise_cap = 1e-6;      // eigenvector noise admitted into the extrapolation
  double cauchy_tol = 1e-4;
  double verdict_gap = 0.1;
  double verdict_drift = 0.01;
  double continuous_gap = 0.01;
  SolverOptions solver;
};

/// Follows the unique ground state of H(eps) down the grid, Richardson
/// extrapolates it to eps -> 0, and compares against the max-ent inference at
/// the limiting expectation values.
DiscontinuityReport path_limit_probe(const PathSpec& path, const ObservableSet& f,
                                     const ProbeOptions& opts = {});

enum class NecessaryOutcome { Satisfied, Violated };

struct NecessaryCheck {
  NecessaryOutcome outcome = NecessaryOutcome::Violated;
  std::optional<Matrix> witness;  // feasible state with strictly smaller range
  double best_residual = 0.0;     // smallest constraint residual over all probes
  bool heuristic_only = false;    // degeneracy > 2: probe-based search only
};

struct NecessaryOptions {
  double residual_tol = 1e-8;
  int grid_t = 48;     // (t, phi) grid for the two-fold case
  int grid_phi = 96;
  int probes = 50;     // random objectives for the rank-def mixed search
  std::uint64_t seed = 42;
};

/// Searches L(alpha) for a state whose range is strictly contained in the
/// range of the solution; existence is necessary for discontinuity.
NecessaryCheck check_necessary(const ObservableSet& f, const ExpectationVector& alpha,
                               const MaxEntSolution& solution, const NecessaryOptions& opts = {});

struct ErrorDetectCheck {
  bool holds = false;
  std::vector<PureState> basis;  // common eigenbasis when it exists
  double max_commutator = 0.0;
  double max_offdiagonal = 0.0;
};

/// The compressed observables P F_i P admit a shared basis with vanishing
/// off-diagonal entries iff they pairwise commute (threshold 1e-8).
ErrorDetectCheck check_partial_error_detect(const ObservableSet& f, const GroundSpace& v0);

struct SufficientCheck {
  bool holds = false;
  std::string detail;
  int degeneracy = 0;
  RVector alpha;  // expectations of the maximally mixed ground-space state
  ErrorDetectCheck error_detect;
  std::optional<DiscontinuityReport> probe;
  double superposition_distance = 1.0;  // limit state vs equal superposition
};

struct SufficientOptions {
  double superposition_tol = 1e-4;
  double degeneracy_tol = 1e-8;
  ProbeOptions probe;
};

/// Degenerate ground space + partial error-detecting condition + path limit
/// equal to the uniform superposition of the detected basis.
SufficientCheck check_sufficient(const ObservableSet& f, const RVector& h0_coeffs,
                                 const PathSpec& path, const SufficientOptions& opts = {});

}  // namespace qmaxent
