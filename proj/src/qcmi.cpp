#include "qmaxent/qcmi.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

namespace qmaxent {

namespace {

std::vector<int> sorted_union(std::initializer_list<const std::vector<int>*> parts) {
  std::vector<int> out;
  for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> complement_of(const std::vector<int>& sites, int n) {
  std::set<int> s(sites.begin(), sites.end());
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!s.count(i)) out.push_back(i);
  return out;
}

// Entropy of the reduction of a globally pure state, via the smaller side.
double pure_subsystem_entropy(const PureState& psi, const std::vector<int>& sites,
                              const SiteStructure& st) {
  if (sites.empty() || static_cast<int>(sites.size()) == st.n_sites) return 0.0;
  const auto comp = complement_of(sites, st.n_sites);
  const auto& smaller = sites.size() <= comp.size() ? sites : comp;
  return entropy_of_matrix(reduced_density(psi, smaller, st));
}

double mixed_subsystem_entropy(const Matrix& rho, const std::vector<int>& sites,
                               const SiteStructure& st) {
  if (static_cast<int>(sites.size()) == st.n_sites) return entropy_of_matrix(rho);
  return entropy_of_matrix(partial_trace_matrix(rho, sites, st));
}

void check_disjoint(const std::vector<int>& a, const std::vector<int>& b,
                    const std::vector<int>& c) {
  std::set<int> seen;
  for (const auto* block : {&a, &b, &c})
    for (int s : *block)
      if (!seen.insert(s).second) throw std::invalid_argument("regions overlap");
  if (a.empty() || b.empty() || c.empty())
    throw std::invalid_argument("regions A, B, C must be nonempty");
}

QcmiResult assemble(double s_ab, double s_bc, double s_b, double s_abc, int n) {
  QcmiResult r;
  r.n = n;
  r.s_ab = s_ab;
  r.s_bc = s_bc;
  r.s_b = s_b;
  r.s_abc = s_abc;
  r.value_bits = s_ab + s_bc - s_b - s_abc;
  return r;
}

}  // namespace

QcmiResult qcmi_sites(const PureState& state, const std::vector<int>& a, const std::vector<int>& b,
                      const std::vector<int>& c, const SiteStructure& st) {
  st.validate();
  if (state.dim() != st.dim()) throw std::invalid_argument("state does not match structure");
  check_disjoint(a, b, c);
  const auto ab = sorted_union({&a, &b});
  const auto bc = sorted_union({&b, &c});
  const auto abc = sorted_union({&a, &b, &c});
  return assemble(pure_subsystem_entropy(state, ab, st), pure_subsystem_entropy(state, bc, st),
                  pure_subsystem_entropy(state, b, st), pure_subsystem_entropy(state, abc, st),
                  st.n_sites);
}

QcmiResult qcmi_sites(const DensityMatrix& state, const std::vector<int>& a,
                      const std::vector<int>& b, const std::vector<int>& c,
                      const SiteStructure& st) {
  st.validate();
  if (state.dim() != st.dim()) throw std::invalid_argument("state does not match structure");
  check_disjoint(a, b, c);
  const auto abc = sorted_union({&a, &b, &c});
  if (static_cast<int>(abc.size()) > 12)
    throw std::invalid_argument("dense mixed-state QCMI is limited to 12 sites in A,B,C");
  const auto ab = sorted_union({&a, &b});
  const auto bc = sorted_union({&b, &c});
  const Matrix& rho = state.matrix();
  return assemble(mixed_subsystem_entropy(rho, ab, st), mixed_subsystem_entropy(rho, bc, st),
                  mixed_subsystem_entropy(rho, b, st), mixed_subsystem_entropy(rho, abc, st),
                  st.n_sites);
}

QcmiResult qcmi(const PureState& state, const RegionPartition& partition) {
  partition.validate();
  const SiteStructure st{partition.n_sites, 2};
  return qcmi_sites(state, partition.region_a(), partition.region_b(), partition.region_c(), st);
}

QcmiResult qcmi(const DensityMatrix& state, const RegionPartition& partition,
                const SiteStructure& st) {
  partition.validate();
  if (partition.n_sites != st.n_sites) throw std::invalid_argument("partition size mismatch");
  return qcmi_sites(state, partition.region_a(), partition.region_b(), partition.region_c(), st);
}

double mutual_information_bits(const PureState& state, const std::vector<int>& a,
                               const std::vector<int>& c, const SiteStructure& st) {
  const auto ac = sorted_union({&a, &c});
  return pure_subsystem_entropy(state, a, st) + pure_subsystem_entropy(state, c, st) -
         pure_subsystem_entropy(state, ac, st);
}

double mutual_information_bits(const DensityMatrix& state, const std::vector<int>& a,
                               const std::vector<int>& c, const SiteStructure& st) {
  const auto ac = sorted_union({&a, &c});
  const Matrix& rho = state.matrix();
  return mixed_subsystem_entropy(rho, a, st) + mixed_subsystem_entropy(rho, c, st) -
         mixed_subsystem_entropy(rho, ac, st);
}

std::vector<QcmiResult> qcmi_sweep(const IsingParams& base, const std::vector<double>& lambda_grid,
                                   PartitionScheme scheme, const SweepOptions& opts) {
  if (lambda_grid.empty()) throw std::invalid_argument("empty lambda grid");
  for (std::size_t i = 1; i < lambda_grid.size(); ++i)
    if (lambda_grid[i] <= lambda_grid[i - 1])
      throw std::invalid_argument("lambda grid must be strictly ascending");

  const RegionPartition partition = default_partition(base.n, scheme);
  std::vector<QcmiResult> results(lambda_grid.size());

  auto run_point = [&](std::size_t idx) {
    IsingParams p = base;
    if (opts.field == SweepField::TransverseX)
      p.lambda_x = lambda_grid[idx];
    else
      p.lambda_z = lambda_grid[idx];
    const PauliSumHamiltonian h = build_ising(p);
    LanczosOptions lo;
    lo.tol = opts.lanczos_tol;
    lo.max_iter = opts.lanczos_max_iter;
    lo.seed = opts.seed;
    lo.z2_symmetric_start = opts.field == SweepField::TransverseX && p.lambda_z == 0.0;
    QcmiResult r;
    try {
      const LanczosResult gs = ground_state_lanczos(h, lo);
      r = qcmi(gs.state, partition);
    } catch (const no_convergence_error& e) {
      throw no_convergence_error(std::string(e.what()) + " at lambda = " +
                                 std::to_string(lambda_grid[idx]));
    }
    r.lambda = lambda_grid[idx];
    results[idx] = r;
  };

  const int threads = std::max(1, opts.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) run_point(i);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < lambda_grid.size(); i += threads) {
          try {
            run_point(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  return results;
}

CrossingReport crossing_detect(const std::map<int, std::vector<QcmiResult>>& curves) {
  CrossingReport report;
  if (curves.size() < 2) return report;

  std::vector<int> sizes;
  for (const auto& [n, curve] : curves) {
    (void)curve;
    sizes.push_back(n);
  }
  const auto& ref = curves.begin()->second;
  for (const auto& [n, curve] : curves) {
    (void)n;
    if (curve.size() != ref.size()) throw std::invalid_argument("curves use different grids");
    for (std::size_t i = 0; i < curve.size(); ++i)
      if (std::abs(curve[i].lambda - ref[i].lambda) > 1e-12)
        throw std::invalid_argument("curves use different grids");
  }

  constexpr double kNoiseFloor = 1e-12;
  for (std::size_t s = 0; s + 1 < sizes.size(); ++s) {
    const auto& lo = curves.at(sizes[s]);
    const auto& hi = curves.at(sizes[s + 1]);
    bool all_equal = true;
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (std::abs(lo[i].value_bits - hi[i].value_bits) > 1e-9) all_equal = false;
    if (all_equal) {
      report.degenerate_pairs.emplace_back(sizes[s], sizes[s + 1]);
      continue;
    }
    for (std::size_t i = 0; i + 1 < lo.size(); ++i) {
      const double d0 = lo[i].value_bits - hi[i].value_bits;
      const double d1 = lo[i + 1].value_bits - hi[i + 1].value_bits;
      if (std::abs(d0) >= kNoiseFloor && std::abs(d1) >= kNoiseFloor && d0 * d1 < 0.0) {
        const double x0 = lo[i].lambda, x1 = lo[i + 1].lambda;
        report.crossings.push_back(
            Crossing{sizes[s], sizes[s + 1], x0 + d0 * (x1 - x0) / (d0 - d1)});
      }
    }
    // curves touching a grid point exactly
    for (std::size_t i = 1; i + 1 < lo.size(); ++i) {
      const double dm = lo[i - 1].value_bits - hi[i - 1].value_bits;
      const double d0 = lo[i].value_bits - hi[i].value_bits;
      const double dp = lo[i + 1].value_bits - hi[i + 1].value_bits;
      if (std::abs(d0) < kNoiseFloor && dm * dp < 0.0 && std::abs(dm) >= kNoiseFloor &&
          std::abs(dp) >= kNoiseFloor)
        report.crossings.push_back(Crossing{sizes[s], sizes[s + 1], lo[i].lambda});
    }
  }
  return report;
}

}  // namespace qmaxent
