#include "qmaxent/catalog.hpp"

#include <cmath>

namespace qmaxent::catalog {

namespace {

Matrix m3(std::initializer_list<double> rows) {
  Matrix m(3, 3);
  int k = 0;
  for (double v : rows) m(k / 3, k % 3) = v, ++k;
  return m;
}

const Matrix kPauliX = (Matrix(2, 2) << 0, 1, 1, 0).finished();
const Matrix kPauliY = (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
const Matrix kPauliZ = (Matrix(2, 2) << 1, 0, 0, -1).finished();

const Matrix& pauli_matrix(Pauli p) {
  switch (p) {
    case Pauli::X: return kPauliX;
    case Pauli::Y: return kPauliY;
    case Pauli::Z: return kPauliZ;
  }
  throw std::logic_error("bad Pauli");
}

}  // namespace

ObservableSet ex1_observables() {
  ObservableSet f;
  f.observables.emplace_back(m3({1, 0, 0, 0, 1, 0, 0, 0, -1}));
  f.observables.emplace_back(m3({1, 0, 1, 0, 1, 1, 1, 1, -1}));
  return f;
}

ObservableSet ex2_observables() {
  ObservableSet f;
  f.observables.emplace_back(m3({1, 0, 0, 0, 1, 0, 0, 0, -1}));
  f.observables.emplace_back(m3({1, 0, 1, 0, 0, 1, 1, 1, -1}));
  return f;
}

ObservableSet ex3_observables() {
  ObservableSet f;
  f.observables.emplace_back(m3({1, 0, 0, 0, 1, 0, 0, 0, -1}));
  f.observables.emplace_back(m3({1, 0, 0, 0, 0, 0, 0, 0, -1}));
  return f;
}

ObservableSet ex6_observables() {
  ObservableSet f = ex1_observables();
  f.observables.emplace_back(m3({1, 0, 1, 0, 0, 1, 1, 1, -1}));
  return f;
}

ObservableSet ex7_observables() {
  ObservableSet f = ex6_observables();
  f.observables.emplace_back(m3({1, 1, 0, 1, 1, 0, 0, 0, -1}));
  return f;
}

PureState ghz_state(int n) {
  const std::int64_t dim = std::int64_t(1) << n;
  CVector v = CVector::Zero(dim);
  v(0) = v(dim - 1) = 1.0 / std::sqrt(2.0);
  return PureState(v);
}

ObservableSet ghz_local_observables() {
  const SiteStructure st{3, 2};
  PauliSumHamiltonian zz;
  zz.structure = st;
  zz.terms = {{1.0, {{0, Pauli::Z}, {1, Pauli::Z}}}, {1.0, {{1, Pauli::Z}, {2, Pauli::Z}}}};
  PauliSumHamiltonian xs;
  xs.structure = st;
  PauliSumHamiltonian zs;
  zs.structure = st;
  for (int i = 0; i < 3; ++i) {
    xs.terms.push_back({1.0, {{i, Pauli::X}}});
    zs.terms.push_back({1.0, {{i, Pauli::Z}}});
  }
  ObservableSet f;
  f.structure = st;
  f.observables.emplace_back(dense_matrix(zz));
  f.observables.emplace_back(dense_matrix(xs));
  f.observables.emplace_back(dense_matrix(zs));
  return f;
}

ObservableSet two_local_pauli_set(int n) {
  const SiteStructure st{n, 2};
  ObservableSet f;
  f.structure = st;
  const Pauli paulis[3] = {Pauli::X, Pauli::Y, Pauli::Z};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (Pauli p : paulis) {
      f.observables.push_back(
          embed_local(HermitianOperator(inv_sqrt2 * pauli_matrix(p)), {i}, st));
      f.supports.push_back({i});
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (Pauli p : paulis)
        for (Pauli q : paulis) {
          Matrix op(4, 4);
          const Matrix &a = pauli_matrix(p), &b = pauli_matrix(q);
          for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) op.block(r * 2, c * 2, 2, 2) = a(r, c) * b;
          f.observables.push_back(embed_local(HermitianOperator(0.5 * op), {i, j}, st));
          f.supports.push_back({i, j});
        }
  return f;
}

int two_local_index(int n, const std::map<int, Pauli>& factors) {
  auto pauli_ord = [](Pauli p) { return p == Pauli::X ? 0 : (p == Pauli::Y ? 1 : 2); };
  if (factors.size() == 1) {
    const auto& [site, p] = *factors.begin();
    return site * 3 + pauli_ord(p);
  }
  if (factors.size() == 2) {
    auto it = factors.begin();
    const auto [si, pi] = *it++;
    const auto [sj, pj] = *it;
    if (si < 0 || sj >= n || si >= sj) throw std::invalid_argument("bad site pair");
    // position of (si, sj) in the i<j enumeration
    const int pair_index = si * n - si * (si + 1) / 2 + (sj - si - 1);
    return 3 * n + pair_index * 9 + pauli_ord(pi) * 3 + pauli_ord(pj);
  }
  throw std::invalid_argument("only weight-1 and weight-2 factors are catalogued");
}

RVector ghz_h0_coeffs() {
  const int n = 3;
  RVector c = RVector::Zero(two_local_pauli_set(n).size());
  // -Z0 Z1 - Z1 Z2, expressed over the normalized products (ZZ/2)
  c(two_local_index(n, {{0, Pauli::Z}, {1, Pauli::Z}})) = -2.0;
  c(two_local_index(n, {{1, Pauli::Z}, {2, Pauli::Z}})) = -2.0;
  return c;
}

RVector ghz_field_direction(Pauli axis, double sign) {
  const int n = 3;
  RVector dir = RVector::Zero(two_local_pauli_set(n).size());
  for (int i = 0; i < n; ++i) dir(two_local_index(n, {{i, axis}})) = sign * std::sqrt(2.0);
  return dir;
}

PathSpec ghz_x_path(double sign) {
  return PathSpec::linear(ghz_h0_coeffs(), ghz_field_direction(Pauli::X, sign));
}

PathSpec ghz_z_path(double sign) {
  return PathSpec::linear(ghz_h0_coeffs(), ghz_field_direction(Pauli::Z, sign));
}

HermitianOperator ex8_pair_term() {
  Matrix h = Matrix::Zero(4, 4);
  h(0, 0) = h(3, 3) = 2.0 / 9.0;
  h(1, 1) = h(2, 2) = 2.0 / 3.0;
  h(0, 3) = h(3, 0) = -4.0 / 9.0;
  return HermitianOperator(h);
}

PauliSumHamiltonian ex8_hamiltonian() {
  // 2/9 (ZZ + XX - YY) per bond equals the pair term up to an identity shift
  PauliSumHamiltonian h;
  h.structure = SiteStructure{3, 2};
  for (int bond = 0; bond < 2; ++bond) {
    const int i = bond, j = bond + 1;
    h.terms.push_back({-2.0 / 9.0, {{i, Pauli::Z}, {j, Pauli::Z}}});
    h.terms.push_back({-2.0 / 9.0, {{i, Pauli::X}, {j, Pauli::X}}});
    h.terms.push_back({+2.0 / 9.0, {{i, Pauli::Y}, {j, Pauli::Y}}});
  }
  return h;
}

PureState ex8_ground_basis_0() {
  CVector v = CVector::Zero(8);
  v(0) = 2;  // |000>
  v(3) = 1;  // |011>
  v(6) = 1;  // |110>
  return PureState::normalized(v);
}

PureState ex8_ground_basis_1() {
  CVector v = CVector::Zero(8);
  v(7) = 2;  // |111>
  v(4) = 1;  // |100>
  v(1) = 1;  // |001>
  return PureState::normalized(v);
}

DensityMatrix ex8_ground_mixture() {
  const CVector a = ex8_ground_basis_0().amplitudes();
  const CVector b = ex8_ground_basis_1().amplitudes();
  return DensityMatrix(HermitianOperator(0.5 * (a * a.adjoint() + b * b.adjoint())));
}

}  // namespace qmaxent::catalog
