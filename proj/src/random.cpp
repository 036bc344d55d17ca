#include "qmaxent/random.hpp"

#include <cmath>

namespace qmaxent {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

CVector random_state_vector(int dim, Rng& rng) {
  CVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.cnormal();
  return v / v.norm();
}

Matrix random_hermitian(int dim, Rng& rng, double scale) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.cnormal();
  return scale * 0.5 * (g + g.adjoint());
}

Matrix random_density(int dim, Rng& rng, int rank) {
  const int k = rank > 0 ? rank : dim;
  Matrix g(dim, k);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = rng.cnormal();
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace qmaxent
