#pragma once

#include <cstdint>
#include <random>

#include "qmaxent/operator_core.hpp"

namespace qmaxent {

/// Deterministic RNG: mt19937_64 with a hand-rolled Box-Muller transform so
/// that streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double normal();
  Complex cnormal() { return Complex(normal(), normal()); }
  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-random unit vector.
CVector random_state_vector(int dim, Rng& rng);

Matrix random_hermitian(int dim, Rng& rng, double scale = 1.0);

/// Ginibre-induced random density matrix; rank 0 means full rank.
Matrix random_density(int dim, Rng& rng, int rank = 0);

}  // namespace qmaxent
