#include <sstream>

#include "doctest.h"
#include "qmaxent/catalog.hpp"
#include "qmaxent/random.hpp"
#include "qmaxent/serialize.hpp"

using namespace qmaxent;

TEST_CASE("operators survive the JSON wire format") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix m = random_hermitian(4, rng);
    const Matrix back = operator_from_json(operator_to_json(m));
    CHECK((m - back).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  }
}

TEST_CASE("operator JSON validates its shape") {
  Json j = operator_to_json(Matrix::Identity(2, 2));
  j["re"][0] = Json::array({1.0});  // ragged row
  CHECK_THROWS_AS(operator_from_json(j), std::invalid_argument);
}

TEST_CASE("problems round-trip including structure and supports") {
  const auto f = catalog::two_local_pauli_set(3);
  RVector alpha = RVector::Zero(f.size());
  alpha(0) = 0.25;
  const Json j = problem_to_json(f, ExpectationVector{alpha});
  const auto [f2, a2] = problem_from_json(j);
  CHECK(f2.size() == f.size());
  CHECK(f2.structure->n_sites == 3);
  CHECK(f2.supports == f.supports);
  CHECK(a2.values(0) == doctest::Approx(0.25));
  for (int i = 0; i < f.size(); ++i)
    CHECK((f2.observables[i].matrix() - f.observables[i].matrix()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("solution JSON carries status, entropy and residual") {
  const auto f = catalog::ex1_observables();
  RVector a(2);
  a << 1.0, 1.0;
  const MaxEntSolution sol = solve_maxent(f, ExpectationVector{a});
  const Json j = solution_to_json(sol);
  CHECK(j.at("status") == "face-reduced");
  CHECK(std::abs(j.at("entropy_bits").get<double>() - 1.0) < 1e-6);
  CHECK(j.at("residual").get<double>() < 1e-6);
}

TEST_CASE("path specs round-trip and accept the linear shorthand") {
  const PathSpec p = catalog::ghz_x_path(1.0);
  const PathSpec back = path_from_json(path_to_json(p));
  CHECK(back.eps_grid == p.eps_grid);
  CHECK((back.base_coeffs - p.base_coeffs).norm() == doctest::Approx(0.0));
  for (std::size_t k = 0; k < p.eps_grid.size(); ++k)
    CHECK((back.perturbation_coeffs[k] - p.perturbation_coeffs[k]).norm() ==
          doctest::Approx(0.0));

  Json shorthand{{"base", {-1.0, 0.0}}, {"grid", {0.1, 0.01}}, {"linear", {0.0, 1.0}}};
  const PathSpec lin = path_from_json(shorthand);
  CHECK(lin.perturbation_coeffs[0](1) == doctest::Approx(0.1));
  CHECK(lin.perturbation_coeffs[1](1) == doctest::Approx(0.01));
}

TEST_CASE("CSV writers are deterministic") {
  const RangeSample s = sample_boundary(catalog::ex1_observables(), 16);
  std::ostringstream a, b;
  write_range_csv(a, s);
  write_range_csv(b, s);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("theta_0,theta_1,alpha_0,alpha_1,degeneracy,face_id") == 0);

  QcmiResult r;
  r.n = 4;
  r.lambda = 0.5;
  r.value_bits = 0.25;
  std::ostringstream c;
  write_sweep_csv(c, {{r}});
  CHECK(c.str().find("n,lambda,I_bits,S_AB,S_BC,S_B,S_ABC") != std::string::npos);
  CHECK(c.str().find("bits") != std::string::npos);  // unit note in the header
}
