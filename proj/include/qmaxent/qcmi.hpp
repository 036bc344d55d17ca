#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qmaxent/operator_core.hpp"
#include "qmaxent/partition.hpp"
#include "qmaxent/spin_models.hpp"

namespace qmaxent {

struct QcmiResult {
  double lambda = 0.0;  // sweep parameter (0 outside sweeps)
  int n = 0;
  double value_bits = 0.0;  // S(AB) + S(BC) - S(B) - S(ABC)
  double s_ab = 0.0, s_bc = 0.0, s_b = 0.0, s_abc = 0.0;
};

/// I(A:C|B) from explicit site lists. For a globally pure state every
/// entropy is taken on the smaller side of its bipartition, so the largest
/// diagonalization is 2^(n/2).
QcmiResult qcmi_sites(const PureState& state, const std::vector<int>& a, const std::vector<int>& b,
                      const std::vector<int>& c, const SiteStructure& structure);
QcmiResult qcmi_sites(const DensityMatrix& state, const std::vector<int>& a,
                      const std::vector<int>& b, const std::vector<int>& c,
                      const SiteStructure& structure);

QcmiResult qcmi(const PureState& state, const RegionPartition& partition);
QcmiResult qcmi(const DensityMatrix& state, const RegionPartition& partition,
                const SiteStructure& structure);

/// I(A:C) = S(A) + S(C) - S(AC).
double mutual_information_bits(const PureState& state, const std::vector<int>& a,
                               const std::vector<int>& c, const SiteStructure& structure);
double mutual_information_bits(const DensityMatrix& state, const std::vector<int>& a,
                               const std::vector<int>& c, const SiteStructure& structure);

enum class SweepField { TransverseX, LongitudinalZ };

struct SweepOptions {
  SweepField field = SweepField::TransverseX;
  std::uint64_t seed = 42;
  double lanczos_tol = 1e-8;
  int lanczos_max_iter = 4000;
  int threads = 1;
};

/// One ground-state solve plus one QCMI evaluation per grid point. The
/// transverse sweep starts Lanczos in the even sector of the global spin
/// flip, which holds the exact finite-size ground state for any positive
/// field and keeps the near-degenerate small-field points stable.
std::vector<QcmiResult> qcmi_sweep(const IsingParams& base, const std::vector<double>& lambda_grid,
                                   PartitionScheme scheme, const SweepOptions& opts = {});

struct Crossing {
  int n_low = 0, n_high = 0;
  double lambda_cross = 0.0;
};

struct CrossingReport {
  std::vector<Crossing> crossings;
  std::vector<std::pair<int, int>> degenerate_pairs;  // curves equal within noise
};

/// Linear-interpolated intersections of adjacent-size curves sharing a grid.
CrossingReport crossing_detect(const std::map<int, std::vector<QcmiResult>>& curves);

}  // namespace qmaxent
