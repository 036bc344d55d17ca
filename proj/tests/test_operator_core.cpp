#include <cmath>

#include "doctest.h"
#include "qmaxent/catalog.hpp"
#include "qmaxent/operator_core.hpp"
#include "qmaxent/random.hpp"

using namespace qmaxent;

namespace {

// Independent embedding oracle for contiguous ascending sites: plain
// Kronecker chain identity (x) op (x) identity.
Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

const Matrix kZ = (Matrix(2, 2) << 1, 0, 0, -1).finished();

}  // namespace

TEST_CASE("embedding places single-site operators with site 0 most significant") {
  const SiteStructure st{2, 2};
  const Matrix m = embed_local(HermitianOperator(kZ), {0}, st).matrix();
  Matrix expected = Matrix::Zero(4, 4);
  expected.diagonal() << 1, 1, -1, -1;
  CHECK((m - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("embedding the identity gives the global identity") {
  const SiteStructure st{3, 2};
  const Matrix m = embed_local(HermitianOperator(Matrix::Identity(2, 2)), {1}, st).matrix();
  CHECK((m - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("two-site embedding matches the Kronecker oracle and |000> eigenvalue") {
  const SiteStructure st{3, 2};
  const Matrix zz = kron(kZ, kZ);
  const Matrix m = embed_local(HermitianOperator(zz), {1, 2}, st).matrix();
  const Matrix oracle = kron(Matrix::Identity(2, 2), kron(kZ, kZ));
  CHECK((m - oracle).cwiseAbs().maxCoeff() < 1e-14);
  CVector zero_state = CVector::Zero(8);
  zero_state(0) = 1.0;
  CHECK((m * zero_state - zero_state).norm() < 1e-14);
}

TEST_CASE("embedding respects non-ascending site order") {
  const SiteStructure st{2, 2};
  Matrix zx(4, 4);
  zx.setZero();
  // Z (x) X with first factor on site 1: equals X on site 0, Z on site 1
  const Matrix x = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  const Matrix direct = kron(x, kZ);
  zx = embed_local(HermitianOperator(kron(kZ, x)), {1, 0}, st).matrix();
  CHECK((zx - direct).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("embedding rejects bad site lists") {
  const SiteStructure st{2, 2};
  CHECK_THROWS_AS(embed_local(HermitianOperator(kZ), {0, 1}, st), std::invalid_argument);
  CHECK_THROWS_AS(embed_local(HermitianOperator(kron(kZ, kZ)), {0, 0}, st),
                  std::invalid_argument);
  CHECK_THROWS_AS(embed_local(HermitianOperator(kZ), {2}, st), std::invalid_argument);
}

TEST_CASE("hermitian construction symmetrizes noise and rejects real deviations") {
  Matrix almost = kZ;
  almost(0, 1) = Complex(1e-11, 1e-11);
  const HermitianOperator op(almost);
  CHECK((op.matrix() - op.matrix().adjoint()).cwiseAbs().maxCoeff() < 1e-15);

  Matrix bad = kZ;
  bad(0, 1) = 0.5;  // not mirrored
  CHECK_THROWS_AS(HermitianOperator{bad}, std::invalid_argument);
}

TEST_CASE("GHZ partial trace gives the classical two-qubit mixture") {
  const SiteStructure st{3, 2};
  const DensityMatrix rho = catalog::ghz_state(3).to_density();
  const Matrix r = partial_trace(rho, {0, 1}, st).matrix();
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = expected(3, 3) = 0.5;
  CHECK((r - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial trace of a product state factors") {
  const SiteStructure st{2, 2};
  CVector psi(4);
  const double s = 1.0 / std::sqrt(2.0);
  psi << s, s, 0, 0;  // |0> (x) |+>
  const Matrix r = reduced_density(PureState(psi), {1}, st);
  Matrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  CHECK((r - plus).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial trace preserves the trace and accepts an empty keep set") {
  const SiteStructure st{3, 2};
  Rng rng(7);
  const Matrix rho = random_density(8, rng);
  const Matrix r = partial_trace_matrix(rho, {0}, st);
  CHECK(std::abs(r.trace().real() - 1.0) < 1e-12);
  const Matrix scalar = partial_trace_matrix(rho, {}, st);
  CHECK(scalar.rows() == 1);
  CHECK(std::abs(scalar(0, 0).real() - 1.0) < 1e-12);
}

TEST_CASE("tracing out in stages matches tracing the union") {
  const SiteStructure st{4, 2};
  Rng rng(11);
  const Matrix rho = random_density(16, rng);
  // keep {0,3}: trace out {1} then {2} vs both at once
  const Matrix step1 = partial_trace_matrix(rho, {0, 2, 3}, st);
  const Matrix step2 = partial_trace_matrix(step1, {0, 2}, SiteStructure{3, 2});
  const Matrix direct = partial_trace_matrix(rho, {0, 3}, st);
  CHECK((step2 - direct).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("pure-state reduction matches the dense partial trace") {
  const SiteStructure st{4, 2};
  Rng rng(13);
  const PureState psi(random_state_vector(16, rng));
  const Matrix direct = partial_trace_matrix(psi.to_density().matrix(), {1, 2}, st);
  const Matrix fast = reduced_density(psi, {1, 2}, st);
  CHECK((direct - fast).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eigh orders eigenvalues ascending and reconstructs the operator") {
  const auto f1 = catalog::ex1_observables().observables[0];
  const EighResult e = eigh(f1);
  CHECK(e.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(1.0));
  CHECK(e.eigenvalues(2) == doctest::Approx(1.0));

  Rng rng(3);
  const Matrix h = random_hermitian(8, rng);
  const EighResult er = eigh_matrix(h);
  const Matrix rebuilt =
      er.eigenvectors * er.eigenvalues.asDiagonal() * er.eigenvectors.adjoint();
  const double scale = h.cwiseAbs().maxCoeff();
  CHECK((rebuilt - h).cwiseAbs().maxCoeff() < 1e-10 * scale);
  CHECK((er.eigenvectors.adjoint() * er.eigenvectors - Matrix::Identity(8, 8))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("eigh on the identity") {
  const EighResult e = eigh(HermitianOperator(Matrix::Identity(3, 3)));
  for (int i = 0; i < 3; ++i) CHECK(e.eigenvalues(i) == doctest::Approx(1.0));
}

TEST_CASE("entropy in bits: pure, maximally mixed, rank-two mixture") {
  Rng rng(5);
  const PureState psi(random_state_vector(4, rng));
  CHECK(von_neumann_entropy(psi.to_density()) == doctest::Approx(0.0).epsilon(1e-9));

  CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(3)) ==
        doctest::Approx(std::log2(3.0)));

  Matrix half = Matrix::Zero(3, 3);
  half(0, 0) = half(1, 1) = 0.5;
  CHECK(von_neumann_entropy(DensityMatrix(half)) == doctest::Approx(1.0));
  CHECK(entropy_of_matrix(half, EntropyBase::Nats) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("matrix exponential: zero, diagonal, inverse pairing") {
  CHECK((matrix_exp_hermitian(HermitianOperator(Matrix::Zero(3, 3))).matrix() -
         Matrix::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.3;
  d(1, 1) = -1.2;
  const Matrix e = matrix_exp_hermitian(HermitianOperator(d)).matrix();
  CHECK(e(0, 0).real() == doctest::Approx(std::exp(0.3)));
  CHECK(e(1, 1).real() == doctest::Approx(std::exp(-1.2)));

  Rng rng(17);
  const Matrix h = random_hermitian(6, rng);
  const Matrix prod = matrix_exp_hermitian(HermitianOperator(h)).matrix() *
                      matrix_exp_hermitian(HermitianOperator(-h)).matrix();
  CHECK((prod - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("trace distance basics") {
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  const DensityMatrix a(p0), b(p1);
  CHECK(trace_distance(a, a) == doctest::Approx(0.0));
  CHECK(trace_distance(a, b) == doctest::Approx(1.0));
  CHECK(trace_distance(a, DensityMatrix::maximally_mixed(2)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(trace_distance(a, DensityMatrix::maximally_mixed(3)), std::invalid_argument);
}

TEST_CASE("expectation values and linearity") {
  const auto f = catalog::ex1_observables();
  Matrix p0 = Matrix::Zero(3, 3);
  p0(0, 0) = 1;
  CHECK(expectation(DensityMatrix(p0), f.observables[0]) == doctest::Approx(1.0));

  Rng rng(23);
  const DensityMatrix rho(random_density(3, rng));
  CHECK(expectation(rho, HermitianOperator(Matrix::Identity(3, 3))) == doctest::Approx(1.0));

  // linearity in the observable on random triples
  const Matrix h1 = random_hermitian(3, rng), h2 = random_hermitian(3, rng);
  const double mix = expectation(rho, HermitianOperator(0.3 * h1 + 0.7 * h2));
  const double split = 0.3 * expectation(rho, HermitianOperator(h1)) +
                       0.7 * expectation(rho, HermitianOperator(h2));
  CHECK(mix == doctest::Approx(split).epsilon(1e-10));

  const auto ghz = catalog::ghz_state(3);
  const SiteStructure st{3, 2};
  const Matrix z1z2 = embed_local(HermitianOperator(kron(kZ, kZ)), {1, 2}, st).matrix();
  CHECK(expectation(ghz, HermitianOperator(z1z2)) == doctest::Approx(1.0));
}

TEST_CASE("Schmidt symmetry: complementary reductions of a pure state have equal entropy") {
  const SiteStructure st{4, 2};
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const PureState psi(random_state_vector(16, rng));
    const double sa = entropy_of_matrix(reduced_density(psi, {0, 2}, st));
    const double sb = entropy_of_matrix(reduced_density(psi, {1, 3}, st));
    CHECK(sa == doctest::Approx(sb).epsilon(1e-9));
  }
}

TEST_CASE("density matrix validation rejects bad inputs") {
  Matrix m = Matrix::Identity(2, 2);  // trace 2
  CHECK_THROWS_AS(DensityMatrix{m}, std::invalid_argument);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
  CVector bad(2);
  bad << 1.0, 1.0;
  CHECK_THROWS_AS(PureState{bad}, std::invalid_argument);
}
