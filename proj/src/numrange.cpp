#include "qmaxent/numrange.hpp"

#include <cmath>

#include "qmaxent/random.hpp"

namespace qmaxent {

namespace {

// Ground-space isometry of H(theta) = sum theta_i F_i.
Matrix ground_isometry(const ObservableSet& f, const RVector& theta, double degeneracy_tol) {
  Matrix h = Matrix::Zero(f.dim(), f.dim());
  for (int i = 0; i < f.size(); ++i) h += theta(i) * f.observables[i].matrix();
  const EighResult e = eigh_matrix(h);
  const double range = e.eigenvalues(e.eigenvalues.size() - 1) - e.eigenvalues(0);
  const double tol = std::max(degeneracy_tol * range, 1e-13);
  int count = 0;
  while (count < e.eigenvalues.size() && e.eigenvalues(count) - e.eigenvalues(0) <= tol) ++count;
  return e.eigenvectors.leftCols(count);
}

RVector image_of(const ObservableSet& f, const Matrix& rho) {
  RVector alpha(f.size());
  for (int i = 0; i < f.size(); ++i)
    alpha(i) = trace_product(rho, f.observables[i].matrix()).real();
  return alpha;
}

}  // namespace

Direction::Direction(RVector t) : theta(std::move(t)) {
  if (theta.size() == 0) throw std::invalid_argument("empty direction");
  const double n = theta.norm();
  if (std::abs(n - 1.0) > 1e-12) {
    if (n < 1e-12) throw std::invalid_argument("zero direction");
    theta /= n;
  }
}

BoundaryPoint boundary_point(const ObservableSet& f, const Direction& theta,
                             double degeneracy_tol) {
  f.validate();
  if (theta.theta.size() != f.size()) throw std::invalid_argument("direction length mismatch");
  const Matrix v = ground_isometry(f, theta.theta, degeneracy_tol);
  const int m = static_cast<int>(v.cols());
  const Matrix rho = (v * v.adjoint()) / double(m);
  return BoundaryPoint{image_of(f, rho), m};
}

FaceDescriptor face_at_direction(const ObservableSet& f, const Direction& theta,
                                 int n_face_samples, std::uint64_t seed, double degeneracy_tol) {
  f.validate();
  if (theta.theta.size() != f.size()) throw std::invalid_argument("direction length mismatch");
  const Matrix v = ground_isometry(f, theta.theta, degeneracy_tol);
  const int m = static_cast<int>(v.cols());

  FaceDescriptor face{theta, v * v.adjoint(), {}, 0};
  Rng rng(seed);
  face.extreme_images.reserve(n_face_samples);
  if (m == 1) {
    const Matrix rho = v * v.adjoint();
    face.extreme_images.push_back(image_of(f, rho));
  } else {
    for (int s = 0; s < n_face_samples; ++s) {
      const CVector z = random_state_vector(m, rng);
      const CVector psi = v * z;
      const Matrix rho = psi * psi.adjoint();
      face.extreme_images.push_back(image_of(f, rho));
    }
  }

  // affine rank of the images
  const int np = static_cast<int>(face.extreme_images.size());
  RVector mean = RVector::Zero(f.size());
  for (const auto& a : face.extreme_images) mean += a;
  mean /= double(np);
  Eigen::MatrixXd centered(np, f.size());
  for (int i = 0; i < np; ++i) centered.row(i) = (face.extreme_images[i] - mean).transpose();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-8) ++rank;
  face.dimension_estimate = rank;
  return face;
}

RangeSample sample_boundary(const ObservableSet& f, int resolution, const SampleOptions& opts) {
  f.validate();
  if (resolution < 8) throw std::invalid_argument("resolution must be at least 8");
  const int r = f.size();

  std::vector<RVector> directions;
  if (r == 2) {
    for (int k = 0; k < resolution; ++k) {
      const double phi = 2.0 * M_PI * k / resolution;
      RVector t(2);
      t << std::cos(phi), std::sin(phi);
      directions.push_back(t);
    }
  } else if (r == 3) {
    const int na = std::max(8, resolution / 2);
    for (int ia = 0; ia <= na; ++ia) {
      const double a = M_PI * ia / na;
      for (int ip = 0; ip < resolution; ++ip) {
        const double phi = 2.0 * M_PI * ip / resolution;
        RVector t(3);
        t << std::cos(a), std::sin(a) * std::cos(phi), std::sin(a) * std::sin(phi);
        directions.push_back(t);
      }
    }
  } else {
    Rng rng(opts.seed);
    for (int k = 0; k < resolution; ++k) {
      RVector t(r);
      for (int i = 0; i < r; ++i) t(i) = rng.normal();
      directions.push_back(t);
    }
  }

  RangeSample sample;
  Rng face_rng(opts.seed + 1);
  for (const auto& t : directions) {
    const Direction dir{t};
    const BoundaryPoint bp = boundary_point(f, dir, opts.degeneracy_tol);
    int face_id = -1;
    if (bp.degeneracy > 1) {
      face_id = static_cast<int>(sample.faces.size());
      FaceDescriptor face =
          face_at_direction(f, dir, opts.n_face_samples, face_rng.raw(), opts.degeneracy_tol);
      for (const auto& img : face.extreme_images)
        sample.points.push_back(RangePoint{dir.theta, img, bp.degeneracy, face_id});
      sample.faces.push_back(std::move(face));
    }
    sample.points.push_back(RangePoint{dir.theta, bp.alpha, bp.degeneracy, face_id});
  }
  return sample;
}

}  // namespace qmaxent
