#include "qmaxent/spin_models.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <sstream>

#include "qmaxent/random.hpp"

namespace qmaxent {

namespace {

constexpr int kLanczosWindow = 160;

struct TermMasks {
  std::uint64_t flip = 0;  // X and Y sites
  std::uint64_t zy = 0;    // Z and Y sites (phase-carrying)
  Complex prefactor;       // coefficient * i^{#Y}
};

std::vector<TermMasks> compile_terms(const PauliSumHamiltonian& h) {
  const int n = h.structure.n_sites;
  std::vector<TermMasks> out;
  out.reserve(h.terms.size());
  for (const auto& term : h.terms) {
    TermMasks m;
    int n_y = 0;
    for (const auto& [site, p] : term.factors) {
      const std::uint64_t bit = std::uint64_t(1) << (n - 1 - site);
      switch (p) {
        case Pauli::X: m.flip |= bit; break;
        case Pauli::Y: m.flip |= bit; m.zy |= bit; ++n_y; break;
        case Pauli::Z: m.zy |= bit; break;
      }
    }
    static const Complex i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    m.prefactor = term.coefficient * i_pow[n_y % 4];
    out.push_back(m);
  }
  return out;
}

}  // namespace

double PauliSumHamiltonian::coefficient_norm() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::abs(t.coefficient);
  return s;
}

void PauliSumHamiltonian::validate() const {
  structure.validate();
  if (structure.local_dim != 2) throw std::invalid_argument("Pauli sums require qubit sites");
  if (structure.n_sites > 24) throw std::invalid_argument("site count exceeds the n <= 24 guard");
  for (const auto& t : terms) {
    if (!std::isfinite(t.coefficient)) throw std::invalid_argument("non-finite coefficient");
    for (const auto& [site, p] : t.factors) {
      (void)p;
      if (site < 0 || site >= structure.n_sites)
        throw std::invalid_argument("term site " + std::to_string(site) + " out of range");
    }
  }
}

PauliSumHamiltonian build_ising(const IsingParams& params) {
  if (params.n < 2) throw std::invalid_argument("Ising chain needs at least 2 sites");
  if (params.coupling <= 0.0) throw std::invalid_argument("coupling J must be positive");
  PauliSumHamiltonian h;
  h.structure = SiteStructure{params.n, 2};
  const double j = params.coupling;
  for (int i = 0; i + 1 < params.n; ++i)
    h.terms.push_back({-j, {{i, Pauli::Z}, {i + 1, Pauli::Z}}});
  if (params.boundary == Boundary::Periodic)
    h.terms.push_back({-j, {{params.n - 1, Pauli::Z}, {0, Pauli::Z}}});
  if (params.lambda_x != 0.0)
    for (int i = 0; i < params.n; ++i) h.terms.push_back({-j * params.lambda_x, {{i, Pauli::X}}});
  if (params.lambda_z != 0.0)
    for (int i = 0; i < params.n; ++i) h.terms.push_back({-j * params.lambda_z, {{i, Pauli::Z}}});
  return h;
}

void apply(const PauliSumHamiltonian& h, const CVector& in, CVector& out) {
  h.validate();
  const std::int64_t dim = h.structure.dim();
  if (in.size() != dim) throw std::invalid_argument("amplitude vector length mismatch");
  out.setZero(dim);
  const auto masks = compile_terms(h);
  for (const auto& m : masks) {
    for (std::int64_t b = 0; b < dim; ++b) {
      const int parity = std::popcount(std::uint64_t(b) & m.zy) & 1;
      const Complex v = parity ? -m.prefactor : m.prefactor;
      out(b ^ m.flip) += v * in(b);
    }
  }
}

CVector apply(const PauliSumHamiltonian& h, const CVector& in) {
  CVector out;
  apply(h, in, out);
  return out;
}

Matrix dense_matrix(const PauliSumHamiltonian& h) {
  h.validate();
  if (h.structure.n_sites > 14)
    throw std::invalid_argument("dense construction guarded to n <= 14");
  const std::int64_t dim = h.structure.dim();
  Matrix out = Matrix::Zero(dim, dim);
  const auto masks = compile_terms(h);
  for (const auto& m : masks)
    for (std::int64_t b = 0; b < dim; ++b) {
      const int parity = std::popcount(std::uint64_t(b) & m.zy) & 1;
      out(b ^ m.flip, b) += parity ? -m.prefactor : m.prefactor;
    }
  return out;
}

LanczosResult ground_state_lanczos(const PauliSumHamiltonian& h, const LanczosOptions& opts) {
  h.validate();
  const std::int64_t dim = h.structure.dim();
  const double scale = std::max(h.coefficient_norm(), 1e-300);

  Rng rng(opts.seed);
  CVector v(dim);
  for (std::int64_t i = 0; i < dim; ++i) v(i) = rng.cnormal();
  if (opts.z2_symmetric_start) {
    const std::uint64_t mask = (dim - 1);
    CVector sym(dim);
    for (std::int64_t b = 0; b < dim; ++b) sym(b) = v(b) + v(std::int64_t(~std::uint64_t(b) & mask));
    if (sym.norm() > 1e-8)
      v = sym;
    else
      v.setOnes();
  }
  v /= v.norm();

  const int window = static_cast<int>(std::min<std::int64_t>({kLanczosWindow, dim, opts.max_iter}));
  int total_iter = 0;

  std::vector<CVector> basis;
  std::vector<double> alpha, beta;  // beta[j] couples basis[j] to basis[j+1]
  CVector w(dim), ritz(dim);

  auto tridiag_ground = [&](RVector* vec_out) {
    const int k = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    if (vec_out) *vec_out = es.eigenvectors().col(0);
    return es.eigenvalues()(0);
  };

  double energy = 0.0;
  while (total_iter < opts.max_iter) {
    basis.clear();
    alpha.clear();
    beta.clear();
    basis.push_back(v);
    bool exhausted = false;

    for (int j = 0; j < window && total_iter < opts.max_iter; ++j, ++total_iter) {
      apply(h, basis[j], w);
      alpha.push_back((basis[j].adjoint() * w)(0, 0).real());
      // full reorthogonalization, twice for stability
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) w -= q * (q.adjoint() * w)(0, 0);
      const double b = w.norm();
      if (b < 1e-13 * scale) {  // Krylov space exhausted
        exhausted = true;
        break;
      }
      beta.push_back(b);
      basis.push_back(w / b);

      if (j >= 4 && (j % 5 == 0 || j == window - 1)) {
        RVector y;
        const double theta = tridiag_ground(&y);
        // residual estimate from the last tridiagonal component
        if (std::abs(b * y(y.size() - 1)) < 0.1 * opts.tol * scale) {
          energy = theta;
          break;
        }
      }
    }

    RVector y;
    energy = tridiag_ground(&y);
    ritz.setZero(dim);
    for (int i = 0; i < y.size(); ++i) ritz += y(i) * basis[i];
    ritz /= ritz.norm();

    apply(h, ritz, w);
    const double resid = (w - energy * ritz).norm();
    if (resid <= opts.tol * scale || exhausted)
      return LanczosResult{energy, PureState::normalized(ritz), total_iter};

    v = ritz;  // restart
  }
  throw no_convergence_error("Lanczos did not converge in " + std::to_string(opts.max_iter) +
                             " iterations");
}

GroundSpace ground_space_of_matrix(const Matrix& h, double degeneracy_tol) {
  const EighResult e = eigh_matrix(h);
  const double range = e.eigenvalues(e.eigenvalues.size() - 1) - e.eigenvalues(0);
  const double tol = std::max(degeneracy_tol * range, 1e-13);
  GroundSpace gs;
  gs.energy = e.eigenvalues(0);
  for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) {
    if (e.eigenvalues(i) - gs.energy <= tol)
      gs.basis.push_back(PureState::normalized(e.eigenvectors.col(i)));
  }
  gs.degeneracy = static_cast<int>(gs.basis.size());
  return gs;
}

GroundSpace ground_space_dense(const PauliSumHamiltonian& h, double degeneracy_tol) {
  return ground_space_of_matrix(dense_matrix(h), degeneracy_tol);
}

PauliSumHamiltonian parse_pauli_string(const std::string& text, int n_sites) {
  PauliSumHamiltonian h;
  int max_site = -1;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank

    PauliString term;
    try {
      std::size_t used = 0;
      term.coefficient = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw parse_error(line_no, "expected a coefficient, got '" + tok + "'");
    }

    bool any = false;
    while (ls >> tok) {
      any = true;
      if (tok.size() < 2 || (tok[0] != 'X' && tok[0] != 'Y' && tok[0] != 'Z'))
        throw parse_error(line_no, "expected X<i>, Y<i> or Z<i>, got '" + tok + "'");
      Pauli p = tok[0] == 'X' ? Pauli::X : (tok[0] == 'Y' ? Pauli::Y : Pauli::Z);
      int site = 0;
      try {
        std::size_t used = 0;
        site = std::stoi(tok.substr(1), &used);
        if (used != tok.size() - 1 || site < 0) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw parse_error(line_no, "bad site index in '" + tok + "'");
      }
      if (term.factors.count(site))
        throw parse_error(line_no, "duplicate site " + std::to_string(site) + " in one term");
      term.factors[site] = p;
      max_site = std::max(max_site, site);
    }
    if (!any) throw parse_error(line_no, "term has no Pauli factors");
    h.terms.push_back(std::move(term));
  }
  const int inferred = max_site + 1;
  if (n_sites < 0) n_sites = inferred;
  if (n_sites < inferred)
    throw std::invalid_argument("declared n_sites smaller than largest site index");
  if (n_sites <= 0) throw std::invalid_argument("empty Pauli sum with no site count");
  h.structure = SiteStructure{n_sites, 2};
  h.validate();
  return h;
}

std::string format_pauli_sum(const PauliSumHamiltonian& h) {
  std::ostringstream out;
  for (const auto& t : h.terms) {
    out << t.coefficient;
    for (const auto& [site, p] : t.factors)
      out << ' ' << (p == Pauli::X ? 'X' : p == Pauli::Y ? 'Y' : 'Z') << site;
    out << '\n';
  }
  return out.str();
}

}  // namespace qmaxent
