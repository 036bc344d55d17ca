#pragma once

#include <cstdint>
#include <vector>

#include "qmaxent/maxent.hpp"
#include "qmaxent/operator_core.hpp"

namespace qmaxent {

struct Direction {
  RVector theta;  // unit vector

  explicit Direction(RVector t);
};

struct BoundaryPoint {
  RVector alpha;
  int degeneracy;
};

/// Image of the maximally mixed state on the ground space of H = sum theta_i
/// F_i, i.e. the expectation tuple of the ground states the direction's
/// Hamiltonian selects, plus the ground-space degeneracy.
BoundaryPoint boundary_point(const ObservableSet& f, const Direction& theta,
                             double degeneracy_tol = 1e-8);

struct FaceDescriptor {
  Direction direction;
  Matrix projector;  // onto the ground space
  std::vector<RVector> extreme_images;
  int dimension_estimate;  // affine rank of the sampled images
};

FaceDescriptor face_at_direction(const ObservableSet& f, const Direction& theta,
                                 int n_face_samples = 200, std::uint64_t seed = 42,
                                 double degeneracy_tol = 1e-8);

struct RangePoint {
  RVector theta;
  RVector alpha;
  int degeneracy;
  int face_id;  // -1 for plain sweep points
};

struct RangeSample {
  std::vector<RangePoint> points;
  std::vector<FaceDescriptor> faces;
};

struct SampleOptions {
  int n_face_samples = 200;
  std::uint64_t seed = 42;
  double degeneracy_tol = 1e-8;
};

/// Sweeps supporting directions uniformly: an angle grid for two
/// observables, the (a, phi) sphere grid cos(a) F1 + sin(a) cos(phi) F2 +
/// sin(a) sin(phi) F3 for three, and seeded random directions otherwise.
/// Degenerate directions additionally sample pure ground states to trace the
/// flat faces. resolution < 8 is rejected.
RangeSample sample_boundary(const ObservableSet& f, int resolution, const SampleOptions& opts = {});

}  // namespace qmaxent
