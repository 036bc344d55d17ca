#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "qmaxent/random.hpp"

namespace oracle {

using qmaxent::Complex;
using qmaxent::Rng;

namespace {

RVector softmax(const std::vector<RVector>& f, const RVector& lambda) {
  const int d = static_cast<int>(f.front().size());
  RVector logits = RVector::Zero(d);
  for (int i = 0; i < static_cast<int>(f.size()); ++i) logits += lambda(i) * f[i];
  const double m = logits.maxCoeff();
  RVector p = (logits.array() - m).exp();
  return p / p.sum();
}

}  // namespace

RVector classical_maxent(const std::vector<RVector>& f_raw, const RVector& alpha_raw, double tol) {
  const int d = static_cast<int>(f_raw.front().size());

  // Precondition: orthonormalize the centered constraint vectors. The span
  // (and hence the max-ent distribution) is unchanged, but coordinate-wise
  // bisection stops zigzagging on nearly dependent inputs.
  std::vector<RVector> f;
  std::vector<double> alpha_v;
  for (std::size_t i = 0; i < f_raw.size(); ++i) {
    RVector v = f_raw[i];
    double a = alpha_raw(static_cast<Eigen::Index>(i));
    const double mean = v.mean();
    v.array() -= mean;
    a -= mean;
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double proj = f[k].dot(v);
      v -= proj * f[k];
      a -= proj * alpha_v[k];
    }
    const double norm = v.norm();
    if (norm < 1e-10 * std::sqrt(double(d))) continue;  // dependent direction
    f.push_back(v / norm);
    alpha_v.push_back(a / norm);
  }
  const int r = static_cast<int>(f.size());
  RVector alpha(r);
  for (int i = 0; i < r; ++i) alpha(i) = alpha_v[i];
  RVector lambda = RVector::Zero(r);

  auto moment = [&](int i) { return f[i].dot(softmax(f, lambda)); };

  for (int cycle = 0; cycle < 20000; ++cycle) {
    for (int i = 0; i < r; ++i) {
      // g(t) = <f_i> - alpha_i is increasing in lambda_i; bisect it
      double lo = -60.0, hi = 60.0;
      const double keep = lambda(i);
      lambda(i) = lo;
      const double glo = moment(i) - alpha(i);
      lambda(i) = hi;
      const double ghi = moment(i) - alpha(i);
      if (glo > 0.0 || ghi < 0.0) {  // target pinned at an extreme; keep previous value
        lambda(i) = keep;
        continue;
      }
      for (int it = 0; it < 200; ++it) {
        lambda(i) = 0.5 * (lo + hi);
        if (moment(i) - alpha(i) > 0.0)
          hi = lambda(i);
        else
          lo = lambda(i);
      }
    }
    // residuals measured only after a full cycle; solving one coordinate
    // perturbs the others
    double worst = 0.0;
    for (int i = 0; i < r; ++i) worst = std::max(worst, std::abs(moment(i) - alpha(i)));
    if (worst < tol) return softmax(f, lambda);
  }
  throw std::runtime_error("classical oracle did not converge");
}

namespace {

// Real orthonormal basis of Hermitian d x d matrices, identity first.
std::vector<Matrix> herm_basis(int d) {
  std::vector<Matrix> out;
  out.push_back(Matrix::Identity(d, d) / std::sqrt(double(d)));
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Matrix a = Matrix::Zero(d, d);
      a(i, j) = a(j, i) = s;
      out.push_back(a);
      Matrix b = Matrix::Zero(d, d);
      b(i, j) = Complex(0, -s);
      b(j, i) = Complex(0, s);
      out.push_back(b);
    }
  for (int k = 1; k < d; ++k) {
    Matrix m = Matrix::Zero(d, d);
    const double norm = 1.0 / std::sqrt(double(k) * (k + 1));
    for (int i = 0; i < k; ++i) m(i, i) = norm;
    m(k, k) = -double(k) * norm;
    out.push_back(m);
  }
  return out;
}

}  // namespace

PrimalResult primal_maxent(const qmaxent::ObservableSet& f, const RVector& alpha, int restarts,
                           std::uint64_t seed, int max_iter) {
  const int d = f.dim();
  const auto basis = herm_basis(d);
  const int nb = static_cast<int>(basis.size());

  auto to_coords = [&](const Matrix& m) {
    RVector x(nb);
    for (int i = 0; i < nb; ++i) x(i) = qmaxent::trace_product(basis[i], m).real();
    return x;
  };
  auto to_matrix = [&](const RVector& x) {
    Matrix m = Matrix::Zero(d, d);
    for (int i = 0; i < nb; ++i) m += x(i) * basis[i];
    return m;
  };

  // constraint rows: observables plus the unit-trace row
  const int rows = f.size() + 1;
  Eigen::MatrixXd a(rows, nb);
  RVector b(rows);
  for (int i = 0; i < f.size(); ++i) {
    a.row(i) = to_coords(f.observables[i].matrix()).transpose();
    b(i) = alpha(i);
  }
  a.row(rows - 1) = to_coords(Matrix::Identity(d, d)).transpose();
  b(rows - 1) = 1.0;
  const Eigen::LDLT<Eigen::MatrixXd> gram(a * a.transpose());

  auto project_affine = [&](const RVector& x) -> RVector {
    return x - a.transpose() * gram.solve(a * x - b);
  };
  auto clip_psd = [&](const RVector& x) {
    const qmaxent::EighResult e = qmaxent::eigh_matrix(to_matrix(x));
    const RVector w = e.eigenvalues.cwiseMax(0.0);
    return to_coords(e.eigenvectors * w.asDiagonal() * e.eigenvectors.adjoint());
  };
  auto restore = [&](RVector x) {
    for (int i = 0; i < 120; ++i) {
      x = project_affine(x);
      const RVector c = clip_psd(x);
      if ((c - x).norm() < 1e-13) return project_affine(c);
      x = c;
    }
    return project_affine(x);
  };
  auto entropy_nats = [&](const RVector& x) {
    return qmaxent::entropy_of_matrix(to_matrix(x), qmaxent::EntropyBase::Nats);
  };
  auto residual_of = [&](const RVector& x) { return (a * x - b).lpNorm<Eigen::Infinity>(); };

  Rng rng(seed);
  PrimalResult best{Matrix::Identity(d, d) / double(d), -1.0, 1e9};

  for (int start = 0; start < restarts; ++start) {
    RVector x = restore(to_coords(qmaxent::random_density(d, rng)));
    double s = entropy_nats(x);

    for (int it = 0; it < max_iter; ++it) {
      // entropy gradient -(log rho + I), eigenvalues floored for the log
      const qmaxent::EighResult e = qmaxent::eigh_matrix(to_matrix(x));
      RVector logw(e.eigenvalues.size());
      for (int i = 0; i < logw.size(); ++i)
        logw(i) = -(std::log(std::max(e.eigenvalues(i), 1e-13)) + 1.0);
      const Matrix g_mat = e.eigenvectors * logw.asDiagonal() * e.eigenvectors.adjoint();
      RVector g = to_coords(g_mat);
      g -= a.transpose() * gram.solve(a * g);  // tangent to the affine slice
      if (g.norm() < 1e-10) break;

      double step = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 50; ++bt) {
        const RVector cand = restore(x + step * g);
        const double cs = entropy_nats(cand);
        if (cs > s + 1e-14 && residual_of(cand) < 1e-9) {
          x = cand;
          s = cs;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }

    const double res = residual_of(x);
    const double bits = s / std::log(2.0);
    if (res < 1e-8 && bits > best.entropy_bits) best = {to_matrix(x), bits, res};
  }
  if (best.entropy_bits < 0.0) throw std::runtime_error("primal oracle found no feasible state");
  return best;
}

}  // namespace oracle
