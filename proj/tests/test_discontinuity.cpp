#include <cmath>

#include "doctest.h"
#include "qmaxent/catalog.hpp"
#include "qmaxent/discontinuity.hpp"
#include "qmaxent/random.hpp"

using namespace qmaxent;

namespace {

RVector rvec(std::initializer_list<double> vals) {
  RVector v(static_cast<Eigen::Index>(vals.size()));
  int i = 0;
  for (double x : vals) v(i++) = x;
  return v;
}

PathSpec corner_path(const RVector& base, const RVector& dir) {
  return PathSpec::linear(base, dir);
}

}  // namespace

TEST_CASE("path specs validate their grids") {
  PathSpec p = PathSpec::linear(rvec({-1, 0}), rvec({0, 1}));
  CHECK_NOTHROW(p.validate(2));
  p.eps_grid[2] = p.eps_grid[1];  // not strictly decreasing
  CHECK_THROWS_AS(p.validate(2), std::invalid_argument);
}

TEST_CASE("corner approach is discontinuous with a one-bit entropy gap") {
  const auto f = catalog::ex1_observables();
  const DiscontinuityReport r =
      path_limit_probe(corner_path(rvec({-1, 0}), rvec({0, 1})), f);
  CHECK(r.verdict == Verdict::Discontinuous);
  CHECK(r.cauchy_converged);
  CHECK(r.gap_entropy_bits == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.gap_trace == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(r.alpha_drift < 1e-3);
  // the approached point is the corner (1, 1)
  CHECK(r.alpha_limit(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.alpha_limit(1) == doctest::Approx(1.0).epsilon(1e-6));
  // limit state is the balanced superposition of the two corner kets
  Matrix plus = Matrix::Zero(3, 3);
  plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
  CHECK(trace_distance_matrix(r.limit_state.matrix(), plus) < 1e-4);
}

TEST_CASE("segment approach stays continuous") {
  const auto f = catalog::ex2_observables();
  const DiscontinuityReport r =
      path_limit_probe(corner_path(rvec({-1, 0}), rvec({0, 1})), f);
  CHECK(r.verdict == Verdict::Continuous);
  CHECK(r.gap_trace < 1e-6);
  // the path slides to the (1, 0) end of the segment
  CHECK(r.alpha_limit(1) == doctest::Approx(0.0).epsilon(1e-4));
}

TEST_CASE("GHZ marginals: transverse approach jumps, longitudinal stays") {
  const auto f = catalog::two_local_pauli_set(3);

  const DiscontinuityReport x = path_limit_probe(catalog::ghz_x_path(+1.0), f);
  CHECK(x.verdict == Verdict::Discontinuous);
  CHECK(x.gap_entropy_bits == doctest::Approx(1.0).epsilon(1e-3));
  CVector odd = CVector::Zero(8);
  odd(0) = 1.0 / std::sqrt(2.0);
  odd(7) = -1.0 / std::sqrt(2.0);
  CHECK(trace_distance(x.limit_state, PureState(odd).to_density()) < 1e-3);

  const DiscontinuityReport z = path_limit_probe(catalog::ghz_z_path(+1.0), f);
  CHECK(z.verdict == Verdict::Continuous);
  CHECK(z.gap_trace < 1e-6);
}

TEST_CASE("necessary condition: corner satisfied by a basis ket") {
  const auto f = catalog::ex1_observables();
  const ExpectationVector alpha{rvec({1.0, 1.0})};
  const MaxEntSolution sol = solve_maxent(f, alpha);
  const NecessaryCheck c = check_necessary(f, alpha, sol);
  CHECK(c.outcome == NecessaryOutcome::Satisfied);
  REQUIRE(c.witness.has_value());
  // witness is feasible and rank one
  const EighResult e = eigh_matrix(*c.witness);
  CHECK(e.eigenvalues(e.eigenvalues.size() - 2) < 1e-8);
  for (int i = 0; i < f.size(); ++i)
    CHECK(std::abs(trace_product(*c.witness, f.observables[i].matrix()).real() - alpha.values(i)) <
          1e-8);
}

TEST_CASE("necessary condition: four-observable corner still admits a complex witness") {
  const auto f = catalog::ex7_observables();
  const ExpectationVector alpha{rvec({1.0, 1.0, 0.5, 1.0})};
  const MaxEntSolution sol = solve_maxent(f, alpha);
  const NecessaryCheck c = check_necessary(f, alpha, sol);
  // real superpositions of the two corner kets fail, but (|0> - i|1>)/sqrt(2)
  // reproduces all four moments
  CHECK(c.outcome == NecessaryOutcome::Satisfied);
  CHECK(c.best_residual < 1e-9);
}

TEST_CASE("necessary condition: symmetric-chain marginals admit no smaller-range state") {
  const auto f = catalog::two_local_pauli_set(3);
  const DensityMatrix mix = catalog::ex8_ground_mixture();
  RVector alpha(f.size());
  for (int i = 0; i < f.size(); ++i) alpha(i) = expectation(mix, f.observables[i]);
  const MaxEntSolution sol = solve_maxent(f, ExpectationVector{alpha});
  const NecessaryCheck c = check_necessary(f, ExpectationVector{alpha}, sol);
  CHECK(c.outcome == NecessaryOutcome::Violated);
  CHECK(c.best_residual > 1e-3);
}

TEST_CASE("error-detecting condition holds for the GHZ observable family") {
  const auto f = catalog::ghz_local_observables();
  const auto gs = ground_space_dense(build_ising({.n = 3}));
  const ErrorDetectCheck c = check_partial_error_detect(f, gs);
  CHECK(c.holds);
  REQUIRE(c.basis.size() == 2);
  // the detected basis is {|000>, |111>} up to phases and order
  for (const auto& b : c.basis) {
    const double w0 = std::norm(b.amplitudes()(0));
    const double w7 = std::norm(b.amplitudes()(7));
    CHECK(std::max(w0, w7) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("error-detecting condition holds on the three-dimensional corner family") {
  const auto f = catalog::ex6_observables();
  GroundSpace v0;
  v0.energy = -1.0;
  CVector e0 = CVector::Zero(3), e1 = CVector::Zero(3);
  e0(0) = 1.0;
  e1(1) = 1.0;
  v0.basis = {PureState(e0), PureState(e1)};
  v0.degeneracy = 2;
  const ErrorDetectCheck c = check_partial_error_detect(f, v0);
  CHECK(c.holds);
}

TEST_CASE("error-detecting condition fails for a non-commuting compression") {
  ObservableSet f;
  f.observables.emplace_back((Matrix(2, 2) << 1, 0, 0, -1).finished());
  f.observables.emplace_back((Matrix(2, 2) << 0, 1, 1, 0).finished());
  GroundSpace v0;
  v0.energy = 0.0;
  CVector e0 = CVector::Zero(2), e1 = CVector::Zero(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  v0.basis = {PureState(e0), PureState(e1)};
  v0.degeneracy = 2;
  const ErrorDetectCheck c = check_partial_error_detect(f, v0);
  CHECK_FALSE(c.holds);
  CHECK(c.max_commutator > 0.1);
}

TEST_CASE("sufficient condition: corner family along the second observable") {
  const auto f = catalog::ex6_observables();
  const PathSpec path = PathSpec::linear(rvec({-1, 0, 0}), rvec({0, 1, 0}));
  const SufficientCheck c = check_sufficient(f, rvec({-1, 0, 0}), path);
  CHECK(c.holds);
  CHECK(c.degeneracy == 2);
  CHECK(c.superposition_distance < 1e-4);
  REQUIRE(c.probe.has_value());
  CHECK(c.probe->verdict == Verdict::Discontinuous);
}

TEST_CASE("sufficient condition: GHZ family with a negative transverse approach") {
  const auto f = catalog::two_local_pauli_set(3);
  const SufficientCheck c =
      check_sufficient(f, catalog::ghz_h0_coeffs(), catalog::ghz_x_path(-1.0));
  CHECK(c.holds);
  // the limit is the even superposition (|000> + |111>)/sqrt(2)
  CHECK(c.superposition_distance < 1e-4);
}

TEST_CASE("sufficient condition is not established along a splitting direction") {
  const auto f = catalog::ex2_observables();
  const PathSpec path = PathSpec::linear(rvec({-1, 0}), rvec({0, 1}));
  const SufficientCheck c = check_sufficient(f, rvec({-1, 0}), path);
  CHECK_FALSE(c.holds);  // limit is |1>, not the balanced superposition
  CHECK(c.error_detect.holds);
  CHECK(c.superposition_distance > 0.5);
}

TEST_CASE("engineered quadratic path lands inside the segment and jumps") {
  const auto f = catalog::ex6_observables();
  PathSpec p;
  p.base_coeffs = rvec({-1, 0, 0});
  p.eps_grid = PathSpec::default_eps_grid();
  for (double e : p.eps_grid) p.perturbation_coeffs.push_back(rvec({0.0, e, e * e}));
  const DiscontinuityReport r = path_limit_probe(p, f);
  CHECK(r.verdict == Verdict::Discontinuous);
  // the limiting third moment is (2 - sqrt(2))/4, strictly inside (0, 1)
  CHECK(r.alpha_limit(2) == doctest::Approx((2.0 - std::sqrt(2.0)) / 4.0).epsilon(1e-3));
  CHECK(r.gap_trace > 0.1);
}

TEST_CASE("verdict bookkeeping: discontinuous verdicts respect the report invariants") {
  const auto f = catalog::ex1_observables();
  const DiscontinuityReport r =
      path_limit_probe(corner_path(rvec({-1, 0}), rvec({0, 1})), f);
  CHECK(r.gap_trace >= 0.0);
  CHECK(r.gap_trace <= 1.0);
  if (r.verdict == Verdict::Discontinuous) {
    CHECK(r.gap_trace > 0.1);
    CHECK(r.alpha_drift < 0.01);
  }
  // the limit state reproduces its own expectations under the reference solve
  for (int i = 0; i < f.size(); ++i)
    CHECK(std::abs(expectation(r.reference.state, f.observables[i]) - r.alpha_limit(i)) < 1e-6);
}

TEST_CASE("degenerate tails shrink the usable grid instead of failing") {
  const auto f = catalog::ex1_observables();
  const DiscontinuityReport r =
      path_limit_probe(corner_path(rvec({-1, 0}), rvec({0, 1})), f);
  // the in-face splitting is quadratic in eps, so the smallest grid points
  // are unresolvable and must have been dropped
  CHECK(r.used_eps.size() >= 3);
  CHECK(r.used_eps.size() < PathSpec::default_eps_grid().size());
}

TEST_CASE("necessary violated implies probed paths never report discontinuity") {
  const auto f = catalog::two_local_pauli_set(3);
  const DensityMatrix mix = catalog::ex8_ground_mixture();
  RVector alpha(f.size());
  for (int i = 0; i < f.size(); ++i) alpha(i) = expectation(mix, f.observables[i]);
  const MaxEntSolution sol = solve_maxent(f, ExpectationVector{alpha});
  const NecessaryCheck nc = check_necessary(f, ExpectationVector{alpha}, sol);
  REQUIRE(nc.outcome == NecessaryOutcome::Violated);

  // approach the same marginals with the transverse field on the chain sum
  RVector base = RVector::Zero(f.size());
  base(catalog::two_local_index(3, {{0, Pauli::Z}, {1, Pauli::Z}})) = 0.0;
  // use the symmetric-chain Hamiltonian itself as the base
  const auto ham = catalog::ex8_hamiltonian();
  for (const auto& term : ham.terms)
    base(catalog::two_local_index(3, term.factors)) += 2.0 * term.coefficient;
  const PathSpec path = PathSpec::linear(base, catalog::ghz_field_direction(Pauli::X, 1.0));
  const DiscontinuityReport r = path_limit_probe(path, f);
  CHECK(r.verdict != Verdict::Discontinuous);
}
