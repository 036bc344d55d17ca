#include "qmaxent/discontinuity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmaxent/random.hpp"

namespace qmaxent {

namespace {

RVector expectations_of(const ObservableSet& f, const Matrix& rho) {
  RVector alpha(f.size());
  for (int i = 0; i < f.size(); ++i)
    alpha(i) = trace_product(rho, f.observables[i].matrix()).real();
  return alpha;
}

RVector expectations_of(const ObservableSet& f, const CVector& psi) {
  RVector alpha(f.size());
  for (int i = 0; i < f.size(); ++i)
    alpha(i) = (psi.adjoint() * f.observables[i].matrix() * psi)(0, 0).real();
  return alpha;
}

double pure_distance(const CVector& a, const CVector& b) {
  const Complex ov = (a.adjoint() * b)(0, 0);
  const double s = 1.0 - std::norm(ov);
  return std::sqrt(std::max(0.0, s));
}

// Polynomial extrapolation to eps = 0 through the given (eps, state) nodes.
CVector extrapolate_to_zero(const std::vector<double>& eps, const std::vector<CVector>& states) {
  const int k = static_cast<int>(eps.size());
  CVector out = CVector::Zero(states.front().size());
  for (int j = 0; j < k; ++j) {
    double w = 1.0;
    for (int l = 0; l < k; ++l)
      if (l != j) w *= eps[l] / (eps[l] - eps[j]);
    out += w * states[j];
  }
  const double n = out.norm();
  if (n < 0.1) throw no_convergence_error("state extrapolation collapsed");
  return phase_fixed(out / n);
}

}  // namespace

void PathSpec::validate(int r) const {
  if (base_coeffs.size() != r) throw std::invalid_argument("base coefficient length mismatch");
  if (eps_grid.empty()) throw std::invalid_argument("empty eps grid");
  if (eps_grid.front() <= 0.0) throw std::invalid_argument("eps grid must be positive");
  for (std::size_t i = 1; i < eps_grid.size(); ++i)
    if (eps_grid[i] >= eps_grid[i - 1] || eps_grid[i] <= 0.0)
      throw std::invalid_argument("eps grid must decrease strictly toward 0");
  if (perturbation_coeffs.size() != eps_grid.size())
    throw std::invalid_argument("perturbation table length mismatch");
  for (const auto& row : perturbation_coeffs)
    if (row.size() != r) throw std::invalid_argument("perturbation row length mismatch");
}

std::vector<double> PathSpec::default_eps_grid() {
  return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
}

PathSpec PathSpec::linear(RVector base, const RVector& direction, std::vector<double> grid) {
  PathSpec p;
  p.base_coeffs = std::move(base);
  p.eps_grid = std::move(grid);
  for (double e : p.eps_grid) p.perturbation_coeffs.push_back(e * direction);
  return p;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Discontinuous: return "discontinuous";
    case Verdict::Continuous: return "continuous";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

DiscontinuityReport path_limit_probe(const PathSpec& path, const ObservableSet& f,
                                     const ProbeOptions& opts) {
  f.validate();
  path.validate(f.size());
  const int d = f.dim();

  std::vector<double> used_eps;      // unique ground state, ordering resolvable
  std::vector<double> extrap_eps;    // additionally: eigenvector noise within budget
  std::vector<CVector> states;       // parallel to used_eps
  std::vector<CVector> extrap_states;
  std::vector<RVector> alphas;

  for (std::size_t k = 0; k < path.eps_grid.size(); ++k) {
    Matrix h = Matrix::Zero(d, d);
    for (int i = 0; i < f.size(); ++i)
      h += (path.base_coeffs(i) + path.perturbation_coeffs[k](i)) * f.observables[i].matrix();
    const EighResult e = eigh_matrix(h);
    const double range = e.eigenvalues(d - 1) - e.eigenvalues(0);
    const double gap = e.eigenvalues(1) - e.eigenvalues(0);
    // unresolvable near-degeneracy: drop the point, the grid shrinks
    if (gap <= std::max(opts.degeneracy_drop_tol * range, 1e-14)) continue;
    used_eps.push_back(path.eps_grid[k]);
    states.push_back(phase_fixed(e.eigenvectors.col(0)));
    alphas.push_back(expectations_of(f, states.back()));
    // near a crossing the ground vector carries O(eps_mach * range / gap)
    // rotation noise; only clean points enter the extrapolation
    if (gap * opts.extrap_noise_cap >= 2.3e-16 * range) {
      extrap_eps.push_back(path.eps_grid[k]);
      extrap_states.push_back(states.back());
    }
  }

  if (used_eps.size() < 2 || extrap_eps.size() < 3)
    throw non_unique_ground_state(
        "fewer than 3 grid points have a resolvable unique ground state");

  // anchor all phases on the same component (taken from the last clean state)
  int anchor = 0;
  for (int i = 1; i < d; ++i)
    if (std::abs(extrap_states.back()(i)) > std::abs(extrap_states.back()(anchor))) anchor = i;
  for (auto* vec : {&states, &extrap_states})
    for (auto& s : *vec)
      if (std::abs(s(anchor)) > 0.1 / std::sqrt(double(d))) s = phase_fixed(s, anchor);

  const std::size_t k = extrap_eps.size();
  const CVector limit2 = extrapolate_to_zero({extrap_eps[k - 2], extrap_eps[k - 1]},
                                             {extrap_states[k - 2], extrap_states[k - 1]});
  const CVector limit3 =
      extrapolate_to_zero({extrap_eps[k - 3], extrap_eps[k - 2], extrap_eps[k - 1]},
                          {extrap_states[k - 3], extrap_states[k - 2], extrap_states[k - 1]});
  const bool cauchy = pure_distance(limit2, limit3) < opts.cauchy_tol;

  const PureState limit = PureState::normalized(limit2);
  const RVector alpha_limit = expectations_of(f, limit.amplitudes());
  const MaxEntSolution reference = solve_maxent(f, ExpectationVector{alpha_limit}, opts.solver);

  DiscontinuityReport report{limit.to_density(),
                             reference,
                             alpha_limit,
                             0.0,
                             0.0,
                             0.0,
                             Verdict::Inconclusive,
                             cauchy,
                             extrap_eps};
  report.gap_trace = trace_distance(report.limit_state, reference.state);
  report.gap_entropy_bits =
      std::abs(reference.entropy_bits - von_neumann_entropy(report.limit_state));
  const std::size_t kt = used_eps.size();
  const double tail_move = (alphas[kt - 1] - alphas[kt - 2]).lpNorm<Eigen::Infinity>();
  const double to_limit = (alphas[kt - 1] - alpha_limit).lpNorm<Eigen::Infinity>();
  report.alpha_drift = std::max(tail_move, to_limit);

  if (!cauchy)
    report.verdict = Verdict::Inconclusive;
  else if (report.gap_trace > opts.verdict_gap && report.alpha_drift < opts.verdict_drift)
    report.verdict = Verdict::Discontinuous;
  else if (report.gap_trace <= opts.continuous_gap)
    report.verdict = Verdict::Continuous;
  else
    report.verdict = Verdict::Inconclusive;
  return report;
}

namespace {

// Objective for the rank-1 feasibility search: squared constraint residual of
// the pure state cos(t) v0 + e^{i phi} sin(t) v1.
struct TwoFoldSearch {
  const ObservableSet& f;
  const RVector& alpha;
  Matrix v;  // d x 2 isometry

  double residual_sq(double t, double phi) const {
    const CVector psi =
        std::cos(t) * v.col(0) + std::polar(std::sin(t), phi) * v.col(1);
    double r = 0.0;
    for (int i = 0; i < f.size(); ++i) {
      const double e = (psi.adjoint() * f.observables[i].matrix() * psi)(0, 0).real();
      r += (e - alpha(i)) * (e - alpha(i));
    }
    return r;
  }

  double residual_max(double t, double phi) const {
    const CVector psi =
        std::cos(t) * v.col(0) + std::polar(std::sin(t), phi) * v.col(1);
    double r = 0.0;
    for (int i = 0; i < f.size(); ++i)
      r = std::max(r, std::abs((psi.adjoint() * f.observables[i].matrix() * psi)(0, 0).real() -
                               alpha(i)));
    return r;
  }
};

// Compass (pattern) search with shrinking steps; the objective is smooth.
std::pair<double, double> compass_refine(const TwoFoldSearch& s, double t, double phi, double step) {
  double best = s.residual_sq(t, phi);
  while (step > 1e-12) {
    bool moved = false;
    const double cand[4][2] = {{t + step, phi}, {t - step, phi}, {t, phi + step}, {t, phi - step}};
    for (const auto& c : cand) {
      const double r = s.residual_sq(c[0], c[1]);
      if (r < best) {
        best = r;
        t = c[0];
        phi = c[1];
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return {t, phi};
}

Matrix support_isometry(const Matrix& projector) {
  const EighResult e = eigh_matrix(projector);
  int count = 0;
  for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i)
    if (e.eigenvalues(i) > 0.5) ++count;
  return e.eigenvectors.rightCols(count);
}

// Isometric real coordinates for Hermitian m x m matrices (Frobenius inner
// product becomes the standard dot product).
struct HermCoords {
  int m;
  int dims() const { return m * m; }

  RVector vec(const Matrix& h) const {
    RVector v(dims());
    int k = 0;
    const double s = std::sqrt(2.0);
    for (int i = 0; i < m; ++i) v(k++) = h(i, i).real();
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        v(k++) = s * h(i, j).real();
        v(k++) = s * h(i, j).imag();
      }
    return v;
  }

  Matrix unvec(const RVector& v) const {
    Matrix h(m, m);
    int k = 0;
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < m; ++i) h(i, i) = v(k++);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        h(i, j) = Complex(s * v(k), s * v(k + 1));
        h(j, i) = std::conj(h(i, j));
        k += 2;
      }
    return h;
  }
};

// Pushes a linear objective to an extreme point of the feasible slice
// {tr(rho A_i) = alpha_i, tr rho = 1, rho >= 0}; extreme points of a
// spectrahedron slice are typically rank deficient.
struct MixedFaceProbe {
  HermCoords hc;
  Eigen::MatrixXd a;          // constraint rows
  RVector b;
  Eigen::LDLT<Eigen::MatrixXd> gram;

  MixedFaceProbe(const std::vector<Matrix>& ops, const RVector& targets, int m) : hc{m} {
    const int rows = static_cast<int>(ops.size()) + 1;
    a.resize(rows, hc.dims());
    b.resize(rows);
    for (int i = 0; i < static_cast<int>(ops.size()); ++i) {
      a.row(i) = hc.vec(ops[i]).transpose();
      b(i) = targets(i);
    }
    a.row(rows - 1) = hc.vec(Matrix::Identity(m, m)).transpose();
    b(rows - 1) = 1.0;
    gram.compute(a * a.transpose());
  }

  RVector project_affine(const RVector& v) const {
    return v - a.transpose() * gram.solve(a * v - b);
  }

  RVector clip_psd(const RVector& v) const {
    const EighResult e = eigh_matrix(hc.unvec(v));
    const RVector w = e.eigenvalues.cwiseMax(0.0);
    return hc.vec(e.eigenvectors * w.asDiagonal() * e.eigenvectors.adjoint());
  }

  // alternating projections back to (near) feasibility
  RVector restore(RVector v) const {
    for (int i = 0; i < 60; ++i) {
      v = project_affine(v);
      const RVector clipped = clip_psd(v);
      if ((clipped - v).norm() < 1e-13) return project_affine(clipped);
      v = clipped;
    }
    return project_affine(v);
  }
};

}  // namespace

NecessaryCheck check_necessary(const ObservableSet& f, const ExpectationVector& alpha,
                               const MaxEntSolution& solution, const NecessaryOptions& opts) {
  f.validate();
  const Matrix v = support_isometry(solution.support);
  const int m = static_cast<int>(v.cols());

  NecessaryCheck result;
  if (m <= 1) {
    // a strictly smaller range would be empty
    result.outcome = NecessaryOutcome::Violated;
    result.best_residual = std::numeric_limits<double>::infinity();
    return result;
  }

  double best = std::numeric_limits<double>::infinity();
  Matrix best_state;

  if (m == 2) {
    const TwoFoldSearch search{f, alpha.values, v};
    std::vector<std::pair<double, std::pair<double, double>>> seeds;
    for (int it = 0; it <= opts.grid_t; ++it)
      for (int ip = 0; ip < opts.grid_phi; ++ip) {
        const double t = 0.5 * M_PI * it / opts.grid_t;
        const double phi = 2.0 * M_PI * ip / opts.grid_phi;
        seeds.push_back({search.residual_sq(t, phi), {t, phi}});
      }
    std::partial_sort(seeds.begin(), seeds.begin() + 8, seeds.end());
    for (int s = 0; s < 8; ++s) {
      auto [t, phi] = compass_refine(search, seeds[s].second.first, seeds[s].second.second,
                                     0.5 * M_PI / opts.grid_t);
      const double r = search.residual_max(t, phi);
      if (r < best) {
        best = r;
        const CVector psi = std::cos(t) * v.col(0) + std::polar(std::sin(t), phi) * v.col(1);
        best_state = psi * psi.adjoint();
      }
    }
  } else {
    // degeneracy > 2: random-start pure-state descent, reported as heuristic
    result.heuristic_only = true;
    Rng rng(opts.seed);
    std::vector<Matrix> compressed;
    for (const auto& o : f.observables) compressed.push_back(v.adjoint() * o.matrix() * v);
    for (int probe = 0; probe < opts.probes; ++probe) {
      CVector z = random_state_vector(m, rng);
      double step = 0.3;
      auto res_sq = [&](const CVector& q) {
        double r = 0.0;
        for (int i = 0; i < f.size(); ++i) {
          const double e = (q.adjoint() * compressed[i] * q)(0, 0).real();
          r += (e - alpha.values(i)) * (e - alpha.values(i));
        }
        return r;
      };
      double cur = res_sq(z);
      for (int it = 0; it < 600 && step > 1e-12; ++it) {
        CVector grad = CVector::Zero(m);
        for (int i = 0; i < f.size(); ++i) {
          const double e = (z.adjoint() * compressed[i] * z)(0, 0).real();
          grad += 2.0 * (e - alpha.values(i)) * (compressed[i] * z - e * z);
        }
        CVector cand = z - step * grad;
        cand /= cand.norm();
        const double r = res_sq(cand);
        if (r < cur) {
          z = cand;
          cur = r;
          step *= 1.3;
        } else {
          step *= 0.5;
        }
      }
      double rmax = 0.0;
      for (int i = 0; i < f.size(); ++i)
        rmax = std::max(rmax,
                        std::abs((z.adjoint() * compressed[i] * z)(0, 0).real() - alpha.values(i)));
      if (rmax < best) {
        best = rmax;
        const CVector psi = v * z;
        best_state = psi * psi.adjoint();
      }
    }

    // rank-deficient mixed states: push random linear objectives to extreme
    // points of the feasible slice
    const MixedFaceProbe probe(compressed, alpha.values, m);
    RVector start = probe.hc.vec(v.adjoint() * solution.state.matrix() * v);
    start = probe.restore(start);
    for (int trial = 0; trial < opts.probes; ++trial) {
      const RVector w = probe.hc.vec(random_hermitian(m, rng));
      RVector x = start;
      double step = 0.5;
      double obj = x.dot(w);
      for (int it = 0; it < 200 && step > 1e-10; ++it) {
        const RVector cand = probe.restore(x - step * w);
        const double cobj = cand.dot(w);
        if (cobj < obj - 1e-14) {
          x = cand;
          obj = cobj;
        } else {
          step *= 0.5;
        }
      }
      const Matrix rho = probe.hc.unvec(x);
      const EighResult e = eigh_matrix(rho);
      if (e.eigenvalues.minCoeff() < -1e-9 || e.eigenvalues.minCoeff() > 1e-8) continue;
      double rmax = 0.0;
      for (int i = 0; i < f.size(); ++i)
        rmax = std::max(rmax, std::abs(trace_product(rho, compressed[i]).real() - alpha.values(i)));
      if (rmax < best) {
        best = rmax;
        const Matrix clipped =
            e.eigenvectors * e.eigenvalues.cwiseMax(0.0).asDiagonal() * e.eigenvectors.adjoint();
        best_state = v * (clipped / clipped.trace().real()) * v.adjoint();
      }
    }
  }

  result.best_residual = best;
  if (best < opts.residual_tol) {
    result.outcome = NecessaryOutcome::Satisfied;
    result.witness = best_state;
  } else {
    result.outcome = NecessaryOutcome::Violated;
  }
  return result;
}

ErrorDetectCheck check_partial_error_detect(const ObservableSet& f, const GroundSpace& v0) {
  f.validate();
  if (v0.degeneracy < 2) throw std::invalid_argument("ground space must be degenerate");
  const int m = v0.degeneracy;
  const int d = f.dim();
  Matrix v(d, m);
  for (int i = 0; i < m; ++i) {
    if (v0.basis[i].dim() != d) throw std::invalid_argument("ground space dimension mismatch");
    v.col(i) = v0.basis[i].amplitudes();
  }

  std::vector<Matrix> compressed;
  for (const auto& o : f.observables) compressed.push_back(v.adjoint() * o.matrix() * v);

  ErrorDetectCheck result;
  for (std::size_t i = 0; i < compressed.size(); ++i)
    for (std::size_t j = i + 1; j < compressed.size(); ++j) {
      const Matrix c = compressed[i] * compressed[j] - compressed[j] * compressed[i];
      result.max_commutator = std::max(result.max_commutator, c.cwiseAbs().maxCoeff());
    }
  if (result.max_commutator > 1e-8) {
    result.holds = false;
    return result;
  }

  // common eigenbasis from a generic combination; retry weights if a
  // degenerate combination fails to split the family
  for (int attempt = 0; attempt < 3; ++attempt) {
    Rng rng(1234 + attempt);
    Matrix mix = Matrix::Zero(m, m);
    for (const auto& c : compressed) mix += (1.0 + rng.uniform()) * c;
    const EighResult e = eigh_matrix(mix);
    double max_off = 0.0;
    for (const auto& c : compressed) {
      const Matrix r = e.eigenvectors.adjoint() * c * e.eigenvectors;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          if (a != b) max_off = std::max(max_off, std::abs(r(a, b)));
    }
    if (max_off <= 1e-8) {
      result.holds = true;
      result.max_offdiagonal = max_off;
      result.basis.clear();
      for (int a = 0; a < m; ++a)
        result.basis.push_back(PureState::normalized(phase_fixed(v * e.eigenvectors.col(a))));
      return result;
    }
    result.max_offdiagonal = max_off;
  }
  result.holds = false;
  return result;
}

SufficientCheck check_sufficient(const ObservableSet& f, const RVector& h0_coeffs,
                                 const PathSpec& path, const SufficientOptions& opts) {
  f.validate();
  if (h0_coeffs.size() != f.size()) throw std::invalid_argument("coefficient length mismatch");

  SufficientCheck result;
  Matrix h0 = Matrix::Zero(f.dim(), f.dim());
  for (int i = 0; i < f.size(); ++i) h0 += h0_coeffs(i) * f.observables[i].matrix();
  const GroundSpace v0 = ground_space_of_matrix(h0, opts.degeneracy_tol);
  result.degeneracy = v0.degeneracy;
  if (v0.degeneracy < 2) {
    result.detail = "ground space of H0 is nondegenerate";
    return result;
  }

  Matrix proj = Matrix::Zero(f.dim(), f.dim());
  for (const auto& b : v0.basis) proj += b.amplitudes() * b.amplitudes().adjoint();
  result.alpha = expectations_of(f, Matrix(proj / double(v0.degeneracy)));

  result.error_detect = check_partial_error_detect(f, v0);
  if (!result.error_detect.holds) {
    result.detail = "partial error-detecting condition fails";
    return result;
  }

  result.probe = path_limit_probe(path, f, opts.probe);

  CVector sup = CVector::Zero(f.dim());
  for (const auto& b : result.error_detect.basis) sup += b.amplitudes();
  sup /= sup.norm();
  const PureState superposition = PureState::normalized(phase_fixed(sup));
  result.superposition_distance =
      trace_distance(result.probe->limit_state, superposition.to_density());

  if (result.probe->verdict != Verdict::Discontinuous) {
    result.detail = "path probe did not report a discontinuity";
    return result;
  }
  if (result.superposition_distance >= opts.superposition_tol) {
    result.detail = "path limit is not the uniform superposition of the detected basis";
    return result;
  }
  result.holds = true;
  result.detail = "all three conditions hold";
  return result;
}

}  // namespace qmaxent
