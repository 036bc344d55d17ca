#include "qmaxent/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmaxent {

namespace {

// Per-site strides for the fixed site-0-most-significant ordering.
std::vector<std::int64_t> site_strides(const SiteStructure& st) {
  std::vector<std::int64_t> stride(st.n_sites);
  std::int64_t s = 1;
  for (int i = st.n_sites - 1; i >= 0; --i) {
    stride[i] = s;
    s *= st.local_dim;
  }
  return stride;
}

// Maps a sub-index (digits over `sites`, first site most significant) to the
// contribution it makes to the full basis index.
std::int64_t scatter_index(std::int64_t sub, const std::vector<int>& sites, int local_dim,
                           const std::vector<std::int64_t>& stride) {
  std::int64_t full = 0;
  for (int k = static_cast<int>(sites.size()) - 1; k >= 0; --k) {
    full += (sub % local_dim) * stride[sites[k]];
    sub /= local_dim;
  }
  return full;
}

std::int64_t pow_ll(int base, std::size_t exp) {
  std::int64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_sites(const std::vector<int>& sites, const SiteStructure& st, std::vector<char>& seen) {
  seen.assign(st.n_sites, 0);
  for (int s : sites) {
    if (s < 0 || s >= st.n_sites)
      throw std::invalid_argument("site index " + std::to_string(s) + " out of range");
    if (seen[s]++) throw std::invalid_argument("repeated site index " + std::to_string(s));
  }
}

}  // namespace

std::int64_t SiteStructure::dim() const {
  std::int64_t d = 1;
  for (int i = 0; i < n_sites; ++i) {
    d *= local_dim;
    if (d > (std::int64_t(1) << 48)) throw std::invalid_argument("total dimension too large");
  }
  return d;
}

void SiteStructure::validate() const {
  if (n_sites <= 0) throw std::invalid_argument("n_sites must be positive");
  if (local_dim <= 1) throw std::invalid_argument("local_dim must be at least 2");
}

HermitianOperator::HermitianOperator(Matrix entries) {
  if (entries.rows() == 0 || entries.rows() != entries.cols())
    throw std::invalid_argument("operator must be square and nonempty");
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  const Matrix anti = entries - entries.adjoint();
  const double dev = anti.cwiseAbs().maxCoeff();
  if (dev > kHermitianRepairTol * scale)
    throw std::invalid_argument("matrix is not Hermitian (relative deviation " +
                                std::to_string(dev / scale) + ")");
  mat_ = 0.5 * (entries + entries.adjoint());
}

DensityMatrix::DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
  const double tr = op_.matrix().trace().real();
  if (std::abs(tr - 1.0) > kDensityTraceTol)
    throw std::invalid_argument("density matrix trace " + std::to_string(tr) + " != 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(op_.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation failed");
  if (es.eigenvalues().minCoeff() < -kDensityEigTol)
    throw std::invalid_argument("density matrix has negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(HermitianOperator(Matrix::Identity(dim, dim) / double(dim)));
}

PureState::PureState(CVector amplitudes) : amp_(std::move(amplitudes)) {
  if (amp_.size() == 0) throw std::invalid_argument("empty state vector");
  const double n2 = amp_.squaredNorm();
  if (std::abs(n2 - 1.0) > kPureNormTol)
    throw std::invalid_argument("state vector squared norm " + std::to_string(n2) + " != 1");
}

PureState PureState::normalized(CVector amplitudes) {
  const double n = amplitudes.norm();
  if (n < 1e-12) throw std::invalid_argument("cannot normalize a (near) zero vector");
  return PureState(amplitudes / n);
}

DensityMatrix PureState::to_density() const {
  return DensityMatrix(HermitianOperator(amp_ * amp_.adjoint()));
}

HermitianOperator embed_local(const HermitianOperator& op, const std::vector<int>& sites,
                              const SiteStructure& st) {
  st.validate();
  std::vector<char> seen;
  check_sites(sites, st, seen);
  if (op.dim() != pow_ll(st.local_dim, sites.size()))
    throw std::invalid_argument("operator dimension does not match site count");

  const std::int64_t total = st.dim();
  const std::int64_t dsub = op.dim();
  const std::int64_t drest = total / dsub;
  const auto stride = site_strides(st);

  std::vector<int> rest;
  for (int i = 0; i < st.n_sites; ++i)
    if (!seen[i]) rest.push_back(i);

  std::vector<std::int64_t> rest_scatter(drest);
  for (std::int64_t t = 0; t < drest; ++t)
    rest_scatter[t] = scatter_index(t, rest, st.local_dim, stride);

  Matrix out = Matrix::Zero(total, total);
  for (std::int64_t a = 0; a < dsub; ++a) {
    const std::int64_t ra = scatter_index(a, sites, st.local_dim, stride);
    for (std::int64_t b = 0; b < dsub; ++b) {
      const Complex v = op.matrix()(a, b);
      if (v == Complex(0.0, 0.0)) continue;
      const std::int64_t cb = scatter_index(b, sites, st.local_dim, stride);
      for (std::int64_t t = 0; t < drest; ++t) out(ra + rest_scatter[t], cb + rest_scatter[t]) = v;
    }
  }
  return HermitianOperator(std::move(out));
}

Matrix partial_trace_matrix(const Matrix& rho, const std::vector<int>& keep,
                            const SiteStructure& st) {
  st.validate();
  if (rho.rows() != st.dim() || rho.cols() != st.dim())
    throw std::invalid_argument("state dimension does not match structure");
  std::vector<int> k = keep;
  std::sort(k.begin(), k.end());
  std::vector<char> seen;
  check_sites(k, st, seen);

  if (k.empty()) {
    Matrix out(1, 1);
    out(0, 0) = rho.trace();
    return out;
  }

  const auto stride = site_strides(st);
  std::vector<int> rest;
  for (int i = 0; i < st.n_sites; ++i)
    if (!seen[i]) rest.push_back(i);

  const std::int64_t dk = pow_ll(st.local_dim, k.size());
  const std::int64_t dt = pow_ll(st.local_dim, rest.size());

  std::vector<std::int64_t> ks(dk), ts(dt);
  for (std::int64_t a = 0; a < dk; ++a) ks[a] = scatter_index(a, k, st.local_dim, stride);
  for (std::int64_t t = 0; t < dt; ++t) ts[t] = scatter_index(t, rest, st.local_dim, stride);

  Matrix out = Matrix::Zero(dk, dk);
  for (std::int64_t a = 0; a < dk; ++a)
    for (std::int64_t b = 0; b < dk; ++b) {
      Complex acc(0.0, 0.0);
      for (std::int64_t t = 0; t < dt; ++t) acc += rho(ks[a] + ts[t], ks[b] + ts[t]);
      out(a, b) = acc;
    }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep,
                            const SiteStructure& st) {
  return DensityMatrix(HermitianOperator(partial_trace_matrix(rho.matrix(), keep, st)));
}

Matrix reduced_density(const PureState& psi, const std::vector<int>& keep,
                       const SiteStructure& st) {
  st.validate();
  if (psi.dim() != st.dim()) throw std::invalid_argument("state dimension does not match structure");
  std::vector<int> k = keep;
  std::sort(k.begin(), k.end());
  std::vector<char> seen;
  check_sites(k, st, seen);

  if (k.empty()) {
    Matrix out(1, 1);
    out(0, 0) = Complex(1.0, 0.0);
    return out;
  }

  const std::int64_t dk = pow_ll(st.local_dim, k.size());
  const std::int64_t dt = st.dim() / dk;
  const int n = st.n_sites, d = st.local_dim;

  // digit flags per site: 1 = kept
  std::vector<char> kept(n, 0);
  for (int s : k) kept[s] = 1;

  Matrix m = Matrix::Zero(dk, dt);
  std::vector<int> digits(n);
  for (std::int64_t idx = 0; idx < st.dim(); ++idx) {
    std::int64_t rem = idx;
    for (int i = n - 1; i >= 0; --i) {
      digits[i] = static_cast<int>(rem % d);
      rem /= d;
    }
    std::int64_t a = 0, t = 0;
    for (int i = 0; i < n; ++i) {
      if (kept[i])
        a = a * d + digits[i];
      else
        t = t * d + digits[i];
    }
    m(a, t) = psi.amplitudes()(idx);
  }
  return m * m.adjoint();
}

EighResult eigh_matrix(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (hermitian + hermitian.adjoint()));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation failed");
  return EighResult{es.eigenvalues(), es.eigenvectors()};
}

EighResult eigh(const HermitianOperator& op) { return eigh_matrix(op.matrix()); }

double entropy_of_spectrum(const RVector& eigenvalues, EntropyBase base) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double p = eigenvalues(i);
    if (p > kEntropyEigFloor) s -= p * std::log(p);
  }
  return base == EntropyBase::Bits ? s / std::log(2.0) : s;
}

double von_neumann_entropy(const DensityMatrix& rho, EntropyBase base) {
  return entropy_of_matrix(rho.matrix(), base);
}

double entropy_of_matrix(const Matrix& rho, EntropyBase base) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation failed");
  return entropy_of_spectrum(es.eigenvalues(), base);
}

HermitianOperator matrix_exp_hermitian(const HermitianOperator& op) {
  const EighResult e = eigh(op);
  const RVector w = e.eigenvalues.array().exp();
  Matrix out = e.eigenvectors * w.asDiagonal() * e.eigenvectors.adjoint();
  return HermitianOperator(std::move(out));
}

double trace_distance_matrix(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("trace distance requires equal dimensions");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance_matrix(a.matrix(), b.matrix());
}

Complex trace_product(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw std::invalid_argument("trace product dimension mismatch");
  return (a.transpose().cwiseProduct(b)).sum();
}

double expectation(const DensityMatrix& rho, const HermitianOperator& op) {
  if (rho.dim() != op.dim()) throw std::invalid_argument("expectation dimension mismatch");
  return trace_product(rho.matrix(), op.matrix()).real();
}

double expectation(const PureState& psi, const HermitianOperator& op) {
  if (psi.dim() != op.dim()) throw std::invalid_argument("expectation dimension mismatch");
  return (psi.amplitudes().adjoint() * op.matrix() * psi.amplitudes())(0, 0).real();
}

CVector phase_fixed(const CVector& v, int anchor) {
  int idx = anchor;
  if (idx < 0) {
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (std::abs(v(i)) > best) {
        best = std::abs(v(i));
        idx = static_cast<int>(i);
      }
  }
  const Complex a = v(idx);
  if (std::abs(a) < 1e-14) return v;
  return v * (std::conj(a) / std::abs(a));
}

}  // namespace qmaxent
