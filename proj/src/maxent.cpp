#include "qmaxent/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <string>

// Solver notes
// ------------
// The dual of the entropy maximization is f(lambda) = log tr exp(sum_i
// lambda_i F_i) - lambda . alpha, smooth and convex, with gradient
// tr(gibbs(lambda) F_i) - alpha_i. Interior targets have a finite minimizer.
// Targets on the boundary of the attainable set make the dual diverge along a
// recession direction; the Gibbs iterate then concentrates on a face of the
// state space. We detect divergence (gradient converged while the iterate is
// numerically rank deficient, or the magnitude cap is hit), then grow the
// multiplier magnitude in boost rounds (scale by 10, re-optimize) so the
// bounded on-face components become negligible relative to the recession
// part. Only then is the face read off the top eigenvalue cluster of
// H(lambda/|lambda|); extracting at small magnitudes tilts the face subspace
// by O(|lambda_face|/|lambda|), which is fatal for the compressed solve.
// After compressing every observable to the face the problem repeats one
// dimension lower: constant constraints are checked against alpha and
// dropped, affinely dependent constraints are pruned, and the remaining
// interior problem is solved by BFGS.

namespace qmaxent {

namespace {

constexpr double kConstantTol = 1e-9;  // compressed operator counts as a multiple of I

struct CompressedProblem {
  std::vector<Matrix> ops;
  RVector targets;
  std::vector<int> source;  // original constraint indices
  int dim = 0;
};

struct DualPoint {
  double value = 0.0;
  RVector grad;
  double min_prob = 1.0;
  double noise = 0.0;  // cancellation level of `value` at this magnitude
  Matrix rho;
};

DualPoint eval_dual_point(const CompressedProblem& p, const RVector& lam) {
  Matrix a = Matrix::Zero(p.dim, p.dim);
  for (int i = 0; i < static_cast<int>(p.ops.size()); ++i) a += lam(i) * p.ops[i];
  const EighResult e = eigh_matrix(a);
  const double mu_max = e.eigenvalues(e.eigenvalues.size() - 1);
  RVector w = (e.eigenvalues.array() - mu_max).exp();
  const double z = w.sum();
  w /= z;

  DualPoint out;
  out.value = mu_max + std::log(z) - lam.dot(p.targets);
  out.noise = 4e-16 * (std::abs(mu_max) + std::abs(lam.dot(p.targets)) + 1.0);
  out.rho = e.eigenvectors * w.asDiagonal() * e.eigenvectors.adjoint();
  out.min_prob = w.minCoeff();
  out.grad.resize(p.ops.size());
  for (int i = 0; i < static_cast<int>(p.ops.size()); ++i)
    out.grad(i) = trace_product(out.rho, p.ops[i]).real() - p.targets(i);
  return out;
}

enum class DualExit { Converged, CapHit, EvalLimit, Stalled };

struct DualRun {
  DualExit exit;
  RVector lambda;
  DualPoint point;
  int evals = 0;
};

// BFGS with backtracking Armijo line search. Stops when the gradient sup-norm
// drops below grad_tol or the multiplier magnitude exceeds cap.
DualRun minimize_dual(const CompressedProblem& p, RVector lam, double grad_tol, double cap,
                      int max_evals) {
  const int r = static_cast<int>(p.ops.size());
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(r, r);
  DualPoint cur = eval_dual_point(p, lam);
  int evals = 1;
  int stall = 0;
  bool reset_tried = false;

  while (true) {
    if (cur.grad.lpNorm<Eigen::Infinity>() < grad_tol)
      return DualRun{DualExit::Converged, lam, cur, evals};
    if (lam.norm() > cap) return DualRun{DualExit::CapHit, lam, cur, evals};
    if (evals >= max_evals) return DualRun{DualExit::EvalLimit, lam, cur, evals};

    RVector dir = -(hinv * cur.grad);
    double slope = dir.dot(cur.grad);
    if (!(slope < 0.0)) {  // stale curvature; reset to steepest descent
      hinv.setIdentity();
      dir = -cur.grad;
      slope = dir.dot(cur.grad);
    }
    // curvature inflation along recession directions can propose steps far
    // past the cap; clamp so the magnitude check stays in charge
    const double reach = 4.0 * (cap + lam.norm());
    if (dir.norm() > reach) {
      dir *= reach / dir.norm();
      slope = dir.dot(cur.grad);
    }

    double step = 1.0;
    DualPoint next;
    RVector lam_next;
    bool accepted = false;
    for (int bt = 0; bt < 60 && evals < max_evals; ++bt) {
      lam_next = lam + step * dir;
      next = eval_dual_point(p, lam_next);
      ++evals;
      const double allowance = 2.0 * (next.noise + cur.noise);
      // Armijo with an allowance for the cancellation noise of the value; in
      // the noise-dominated tail a strict gradient decrease also counts
      if (next.value <= cur.value + 1e-4 * step * slope + allowance ||
          (std::abs(next.value - cur.value) <= allowance &&
           next.grad.lpNorm<Eigen::Infinity>() <= 0.9 * cur.grad.lpNorm<Eigen::Infinity>())) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (cur.grad.lpNorm<Eigen::Infinity>() < 10 * grad_tol)
        return DualRun{DualExit::Converged, lam, cur, evals};
      return DualRun{DualExit::EvalLimit, lam, cur, evals};
    }
    // expand along flat recessions, where unit steps would crawl forever;
    // each doubling must pay its own marginal Armijo decrease so the
    // expansion cannot coast past a finite minimum on earlier gains
    if (step == 1.0 && slope < -1e-8) {
      for (int ex = 0; ex < 40 && evals < max_evals && lam_next.norm() < 2.0 * cap; ++ex) {
        const RVector lam_try = lam + (2.0 * step) * dir;
        const DualPoint t = eval_dual_point(p, lam_try);
        ++evals;
        if (t.value > next.value + 1e-4 * step * slope + 2.0 * (t.noise + next.noise)) break;
        step *= 2.0;
        lam_next = lam_try;
        next = t;
      }
    }

    // Progress monitor: a polluted curvature model (after traveling a
    // recession direction) produces noise-level steps even though real
    // descent remains. Reset once; if that does not help, hand the decision
    // back to the caller.
    if (std::abs(next.value - cur.value) <= 4.0 * (next.noise + cur.noise) &&
        next.grad.lpNorm<Eigen::Infinity>() > 0.9 * cur.grad.lpNorm<Eigen::Infinity>()) {
      if (++stall >= 3) {
        if (!reset_tried) {
          hinv.setIdentity();
          reset_tried = true;
          stall = 0;
        } else {
          return DualRun{DualExit::Stalled, lam_next, next, evals};
        }
      }
    } else {
      stall = 0;
      reset_tried = false;
    }

    const RVector s = lam_next - lam;
    const RVector y = next.grad - cur.grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const RVector hy = hinv * y;
      const double yhy = y.dot(hy);
      hinv += ((sy + yhy) / (sy * sy)) * (s * s.transpose()) -
              (hy * s.transpose() + s * hy.transpose()) / sy;
    }
    lam = lam_next;
    cur = next;
  }
}

struct PruneResult {
  CompressedProblem kept;
  std::vector<int> pruned;  // original indices
};

// Splits each compressed operator into a multiple of the identity plus a
// traceless part. Constant constraints are checked against the target and
// dropped; traceless parts that depend affinely on earlier ones must carry
// consistent targets or the problem is infeasible.
PruneResult prune_constraints(const CompressedProblem& p, const SolverOptions& opts) {
  const int m = p.dim;
  PruneResult out;
  out.kept.dim = m;

  const int vec_len = 2 * m * m;
  auto vectorize = [&](const Matrix& t) {
    RVector v(vec_len);
    int k = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        v(k++) = t(i, j).real();
        v(k++) = t(i, j).imag();
      }
    return v;
  };

  Eigen::MatrixXd stacked(vec_len, 0);
  std::vector<double> kept_beta;
  std::vector<double> kept_targets;

  for (int i = 0; i < static_cast<int>(p.ops.size()); ++i) {
    const Matrix& a = p.ops[i];
    const double c = a.trace().real() / m;
    const Matrix t = a - c * Matrix::Identity(m, m);
    const double tnorm = t.norm();
    const double anorm = std::max(1.0, a.norm());
    const double beta = p.targets(i) - c;

    if (tnorm < kConstantTol * anorm) {
      if (std::abs(beta) > opts.feas_tol)
        throw infeasible_error("constraint " + std::to_string(p.source[i]) +
                               " is constant on the current face but off target by " +
                               std::to_string(beta));
      out.pruned.push_back(p.source[i]);
      continue;
    }

    const RVector v = vectorize(t);
    if (stacked.cols() > 0) {
      const RVector x = stacked.colPivHouseholderQr().solve(v);
      const double resid = (stacked * x - v).norm();
      if (resid < opts.dependence_tol * tnorm) {
        // affinely dependent: target must satisfy the same relation
        double predicted = 0.0;
        for (int k = 0; k < x.size(); ++k) predicted += x(k) * kept_beta[k];
        if (std::abs(beta - predicted) > opts.feas_tol * (1.0 + x.lpNorm<1>()))
          throw infeasible_error("constraint " + std::to_string(p.source[i]) +
                                 " conflicts with earlier constraints");
        out.pruned.push_back(p.source[i]);
        continue;
      }
    }

    kept_beta.push_back(beta);
    stacked.conservativeResize(Eigen::NoChange, stacked.cols() + 1);
    stacked.col(stacked.cols() - 1) = v;
    out.kept.ops.push_back(a);
    out.kept.source.push_back(p.source[i]);
    kept_targets.push_back(p.targets(i));
  }

  out.kept.targets = Eigen::Map<const RVector>(kept_targets.data(), kept_targets.size());
  return out;
}

// Top eigenvalue cluster of H(theta) at tolerance max(degeneracy, kappa/|lambda|).
Matrix extract_face(const CompressedProblem& p, const RVector& lam, const SolverOptions& opts) {
  const double norm = lam.norm();
  Matrix h = Matrix::Zero(p.dim, p.dim);
  for (int i = 0; i < static_cast<int>(p.ops.size()); ++i) h += (lam(i) / norm) * p.ops[i];
  const EighResult e = eigh_matrix(h);
  const double mu_max = e.eigenvalues(e.eigenvalues.size() - 1);
  const double range = mu_max - e.eigenvalues(0);
  const double kappa = -std::log(opts.face_weight_cut);
  const double tol = std::max(opts.degeneracy_tol * range, kappa / norm);

  int first = 0;
  while (first < e.eigenvalues.size() && mu_max - e.eigenvalues(first) > tol) ++first;
  const int count = static_cast<int>(e.eigenvalues.size()) - first;
  if (count == p.dim)
    throw infeasible_error("facial reduction stalled: target lies outside the attainable set");
  return e.eigenvectors.rightCols(count);
}

std::vector<Matrix> raw_ops(const ObservableSet& f) {
  std::vector<Matrix> ops;
  ops.reserve(f.observables.size());
  for (const auto& o : f.observables) ops.push_back(o.matrix());
  return ops;
}

}  // namespace

int ObservableSet::dim() const {
  if (observables.empty()) throw std::invalid_argument("empty observable set");
  return observables.front().dim();
}

void ObservableSet::validate() const {
  if (observables.empty()) throw std::invalid_argument("empty observable set");
  const int d = observables.front().dim();
  for (const auto& o : observables)
    if (o.dim() != d) throw std::invalid_argument("observables have mixed dimensions");
  if (structure) {
    structure->validate();
    if (structure->dim() != d)
      throw std::invalid_argument("site structure does not match operator dimension");
  }
  if (!supports.empty()) {
    if (!structure) throw std::invalid_argument("supports require a site structure");
    if (static_cast<int>(supports.size()) != size())
      throw std::invalid_argument("supports list length mismatch");
    for (int i = 0; i < size(); ++i) {
      // operator must equal the embedding of its restriction to the support
      const auto& sup = supports[i];
      std::vector<int> sorted = sup;
      std::sort(sorted.begin(), sorted.end());
      std::int64_t dsub = 1;
      for (std::size_t k = 0; k < sorted.size(); ++k) dsub *= structure->local_dim;
      // restriction: fix all other digits to 0
      const auto stride = [&] {
        std::vector<std::int64_t> s(structure->n_sites);
        std::int64_t acc = 1;
        for (int q = structure->n_sites - 1; q >= 0; --q) {
          s[q] = acc;
          acc *= structure->local_dim;
        }
        return s;
      }();
      auto scatter = [&](std::int64_t sub) {
        std::int64_t full = 0;
        for (int k = static_cast<int>(sorted.size()) - 1; k >= 0; --k) {
          full += (sub % structure->local_dim) * stride[sorted[k]];
          sub /= structure->local_dim;
        }
        return full;
      };
      Matrix sub(dsub, dsub);
      for (std::int64_t a = 0; a < dsub; ++a)
        for (std::int64_t b = 0; b < dsub; ++b)
          sub(a, b) = observables[i].matrix()(scatter(a), scatter(b));
      const Matrix rebuilt =
          embed_local(HermitianOperator(sub), sorted, *structure).matrix();
      if ((rebuilt - observables[i].matrix()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("observable " + std::to_string(i) +
                                    " is not identity outside its declared support");
    }
  }
}

DensityMatrix gibbs_state(const ObservableSet& f, const RVector& lambda) {
  f.validate();
  if (lambda.size() != f.size()) throw std::invalid_argument("lambda length mismatch");
  CompressedProblem p;
  p.ops = raw_ops(f);
  p.dim = f.dim();
  p.targets = RVector::Zero(f.size());
  p.source.resize(f.size());
  const DualPoint pt = eval_dual_point(p, lambda);
  return DensityMatrix(HermitianOperator(pt.rho));
}

DualEval dual_value_grad(const ObservableSet& f, const ExpectationVector& alpha,
                         const RVector& lambda) {
  f.validate();
  if (lambda.size() != f.size() || alpha.values.size() != f.size())
    throw std::invalid_argument("lambda/alpha length mismatch");
  CompressedProblem p;
  p.ops = raw_ops(f);
  p.dim = f.dim();
  p.targets = alpha.values;
  p.source.resize(f.size());
  const DualPoint pt = eval_dual_point(p, lambda);
  return DualEval{pt.value, pt.grad};
}

MaxEntSolution solve_maxent(const ObservableSet& f, const ExpectationVector& alpha,
                            const SolverOptions& opts) {
  f.validate();
  if (alpha.values.size() != f.size())
    throw std::invalid_argument("alpha length does not match the observable set");
  for (int i = 0; i < alpha.values.size(); ++i)
    if (!std::isfinite(alpha.values(i))) throw std::invalid_argument("non-finite target");

  const int d = f.dim();
  const std::vector<Matrix> full_ops = raw_ops(f);

  Matrix isometry = Matrix::Identity(d, d);
  bool reduced = false;
  std::set<int> pruned;
  Matrix rho_face;
  std::optional<RVector> dual;

  for (int round = 0;; ++round) {
    if (round >= opts.max_face_rounds)
      throw no_convergence_error("facial reduction exceeded the round limit");
    const int m = static_cast<int>(isometry.cols());

    CompressedProblem p;
    p.dim = m;
    for (int i = 0; i < f.size(); ++i) {
      p.ops.push_back(isometry.adjoint() * full_ops[i] * isometry);
      p.source.push_back(i);
    }
    p.targets = alpha.values;

    PruneResult pr = prune_constraints(p, opts);
    for (int i : pr.pruned) pruned.insert(i);

    if (pr.kept.ops.empty()) {
      rho_face = Matrix::Identity(m, m) / double(m);
      break;
    }

    RVector lam = RVector::Zero(pr.kept.ops.size());
    DualRun run = minimize_dual(pr.kept, lam, opts.grad_tol, opts.lambda_cap, opts.max_evals);

    const bool trace = std::getenv("QMAXENT_TRACE") != nullptr;
    bool need_reduction = false;
    while (true) {
      if (trace)
        std::fprintf(stderr, "[solve] round=%d exit=%d |lam|=%g grad=%g minp=%g evals=%d\n", round,
                     int(run.exit), run.lambda.norm(), run.point.grad.lpNorm<Eigen::Infinity>(),
                     run.point.min_prob, run.evals);
      if (run.exit == DualExit::Converged && run.point.min_prob > opts.eig_floor) {
        rho_face = run.point.rho;
        if (!reduced) {
          RVector full = RVector::Zero(f.size());
          for (int i = 0; i < static_cast<int>(pr.kept.source.size()); ++i)
            full(pr.kept.source[i]) = run.lambda(i);
          dual = full;
        }
        break;
      }
      if (run.exit == DualExit::EvalLimit ||
          (run.exit == DualExit::Stalled && run.point.min_prob > 100.0 * opts.eig_floor))
        throw no_convergence_error("dual optimizer stalled (gradient " +
                                   std::to_string(run.point.grad.lpNorm<Eigen::Infinity>()) + ")");
      // divergence (cap hit, or stalled on a rank-deficient iterate): boost
      // the multiplier until the face can be read off safely
      if (run.lambda.norm() >= opts.lambda_extract) {
        need_reduction = true;
        break;
      }
      run = minimize_dual(pr.kept, 10.0 * run.lambda, opts.grad_tol,
                          std::max(opts.lambda_cap, 100.0 * run.lambda.norm()), opts.max_evals);
    }

    if (!need_reduction) break;

    const Matrix w = extract_face(pr.kept, run.lambda, opts);
    isometry = isometry * w;
    reduced = true;
    dual.reset();
  }

  Matrix rho_full = isometry * rho_face * isometry.adjoint();
  rho_full = 0.5 * (rho_full + rho_full.adjoint());
  rho_full /= rho_full.trace().real();

  MaxEntSolution sol{DensityMatrix(HermitianOperator(rho_full)),
                     dual,
                     isometry * isometry.adjoint(),
                     reduced ? SolveStatus::FaceReduced : SolveStatus::Interior,
                     0.0,
                     0.0,
                     std::vector<int>(pruned.begin(), pruned.end())};
  for (int i = 0; i < f.size(); ++i)
    sol.residual = std::max(sol.residual,
                            std::abs(trace_product(rho_full, full_ops[i]).real() - alpha.values(i)));
  sol.entropy_bits = von_neumann_entropy(sol.state);
  return sol;
}

namespace {

// Orthonormal traceless Hermitian basis on one site (generalized Gell-Mann,
// ordered: symmetric pairs, antisymmetric pairs, diagonal).
std::vector<Matrix> site_basis(int d) {
  std::vector<Matrix> out;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Matrix s = Matrix::Zero(d, d);
      s(i, j) = s(j, i) = inv_sqrt2;
      out.push_back(s);
      Matrix a = Matrix::Zero(d, d);
      a(i, j) = Complex(0, -inv_sqrt2);
      a(j, i) = Complex(0, inv_sqrt2);
      out.push_back(a);
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

std::pair<ObservableSet, ExpectationVector> expand_rdm_constraints(const RdmConstraintSet& c) {
  c.structure.validate();
  if (c.targets.empty()) throw std::invalid_argument("no RDM targets");
  const int d = c.structure.local_dim;
  const auto basis = site_basis(d);
  const int nb = static_cast<int>(basis.size());

  // key: sorted (site, basis index) factors of a product operator
  std::map<std::vector<std::pair<int, int>>, double> values;
  std::map<std::vector<std::pair<int, int>>, int> counts;

  for (const auto& target : c.targets) {
    std::vector<int> sites = target.sites;
    std::sort(sites.begin(), sites.end());
    if (std::adjacent_find(sites.begin(), sites.end()) != sites.end())
      throw std::invalid_argument("RDM target repeats a site");
    for (int s : sites)
      if (s < 0 || s >= c.structure.n_sites)
        throw std::invalid_argument("RDM target site out of range");
    if (c.k > 0 && static_cast<int>(sites.size()) > c.k)
      throw std::invalid_argument("RDM target larger than the declared locality");
    const int ns = static_cast<int>(sites.size());
    std::int64_t dsub = 1;
    for (int i = 0; i < ns; ++i) dsub *= d;
    if (target.rdm.dim() != dsub)
      throw std::invalid_argument("RDM dimension does not match its site set");

    const SiteStructure local{ns, d};
    // enumerate nonempty subsets of the target's sites
    for (unsigned mask = 1; mask < (1u << ns); ++mask) {
      std::vector<int> subset_pos, subset_sites;
      for (int i = 0; i < ns; ++i)
        if (mask & (1u << i)) {
          subset_pos.push_back(i);
          subset_sites.push_back(sites[i]);
        }
      const int sz = static_cast<int>(subset_pos.size());
      std::vector<int> assign(sz, 0);
      while (true) {
        Matrix op = Matrix::Ones(1, 1);
        for (int i = 0; i < sz; ++i) {
          Matrix next(op.rows() * d, op.cols() * d);
          for (int r = 0; r < op.rows(); ++r)
            for (int cc = 0; cc < op.cols(); ++cc)
              next.block(r * d, cc * d, d, d) = op(r, cc) * basis[assign[i]];
          op = std::move(next);
        }
        const Matrix embedded =
            embed_local(HermitianOperator(op), subset_pos, local).matrix();
        const double v = trace_product(target.rdm.matrix(), embedded).real();

        std::vector<std::pair<int, int>> key(sz);
        for (int i = 0; i < sz; ++i) key[i] = {subset_sites[i], assign[i]};
        auto it = values.find(key);
        if (it == values.end()) {
          values[key] = v;
          counts[key] = 1;
        } else {
          if (std::abs(it->second / counts[key] - v) > 1e-8)
            throw inconsistent_error("overlapping RDM targets disagree on a shared marginal");
          it->second += v;
          counts[key] += 1;
        }
        // next assignment
        int i = sz - 1;
        while (i >= 0 && ++assign[i] == nb) assign[i--] = 0;
        if (i < 0) break;
      }
    }
  }

  ObservableSet f;
  f.structure = c.structure;
  RVector alpha(values.size());
  int idx = 0;
  for (const auto& [key, vsum] : values) {
    std::vector<int> sites;
    Matrix op = Matrix::Ones(1, 1);
    for (const auto& [site, b] : key) {
      sites.push_back(site);
      Matrix next(op.rows() * d, op.cols() * d);
      for (int r = 0; r < op.rows(); ++r)
        for (int cc = 0; cc < op.cols(); ++cc)
          next.block(r * d, cc * d, d, d) = op(r, cc) * basis[b];
      op = std::move(next);
    }
    f.observables.push_back(embed_local(HermitianOperator(op), sites, c.structure));
    f.supports.push_back(sites);
    alpha(idx++) = vsum / counts.at(key);
  }
  return {std::move(f), ExpectationVector{std::move(alpha)}};
}

MaxEntSolution solve_maxent_rdm(const RdmConstraintSet& constraints, const SolverOptions& opts) {
  auto [f, alpha] = expand_rdm_constraints(constraints);
  return solve_maxent(f, alpha, opts);
}

RdmConstraintSet all_rdms(const DensityMatrix& rho, const SiteStructure& structure, int j) {
  structure.validate();
  if (j < 1 || j > structure.n_sites) throw std::invalid_argument("RDM order out of range");
  RdmConstraintSet out;
  out.structure = structure;
  out.k = j;
  std::vector<int> subset(j);
  // lexicographic enumeration of all size-j site subsets
  for (int i = 0; i < j; ++i) subset[i] = i;
  while (true) {
    out.targets.push_back({subset, partial_trace(rho, subset, structure)});
    int i = j - 1;
    while (i >= 0 && subset[i] == structure.n_sites - j + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int k2 = i + 1; k2 < j; ++k2) subset[k2] = subset[k2 - 1] + 1;
  }
  return out;
}

double irreducible_correlation_k(const DensityMatrix& rho, const SiteStructure& structure, int k,
                                 const SolverOptions& opts) {
  structure.validate();
  const int n = structure.n_sites;
  if (k < 1 || k > n) throw std::invalid_argument("irreducible correlation order out of range");

  auto level_entropy = [&](int j) {
    if (j == 0) return n * std::log2(double(structure.local_dim));
    if (j == n) return von_neumann_entropy(rho);
    return solve_maxent_rdm(all_rdms(rho, structure, j), opts).entropy_bits;
  };
  return level_entropy(k - 1) - level_entropy(k);
}

double irreducible_correlation_abc(const DensityMatrix& rho_abc, const RegionPartition& partition,
                                   const SiteStructure& structure, const SolverOptions& opts) {
  partition.validate();
  structure.validate();
  if (structure.dim() != rho_abc.dim())
    throw std::invalid_argument("state dimension does not match the structure");
  const auto abc = partition.abc_sites();
  if (static_cast<int>(abc.size()) != structure.n_sites)
    throw std::invalid_argument("partition must cover exactly the sites of rho_ABC");
  if (structure.local_dim == 2 && structure.n_sites > 8)
    throw std::invalid_argument("C^ABC is limited to 8 qubits");

  auto join = [](std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    return a;
  };
  const auto ab = join(partition.region_a(), partition.region_b());
  const auto bc = join(partition.region_b(), partition.region_c());

  RdmConstraintSet c;
  c.structure = structure;
  c.targets.push_back({ab, partial_trace(rho_abc, ab, structure)});
  c.targets.push_back({bc, partial_trace(rho_abc, bc, structure)});
  const MaxEntSolution sol = solve_maxent_rdm(c, opts);
  return sol.entropy_bits - von_neumann_entropy(rho_abc);
}

}  // namespace qmaxent
