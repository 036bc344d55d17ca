#include "qmaxent/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace qmaxent {

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

Json operator_to_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row_re = Json::array(), row_im = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row_re.push_back(m(i, j).real());
      row_im.push_back(m(i, j).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  return Json{{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix operator_from_json(const Json& j) {
  const int dim = j.at("dim").get<int>();
  if (dim <= 0) throw std::invalid_argument("operator dim must be positive");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<int>(re.size()) != dim || static_cast<int>(im.size()) != dim)
    throw std::invalid_argument("operator row count does not match dim");
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (static_cast<int>(re[i].size()) != dim || static_cast<int>(im[i].size()) != dim)
      throw std::invalid_argument("operator column count does not match dim");
    for (int c = 0; c < dim; ++c)
      m(i, c) = Complex(re[i][c].get<double>(), im[i][c].get<double>());
  }
  return m;
}

Json observable_set_to_json(const ObservableSet& f) {
  Json obs = Json::array();
  for (const auto& o : f.observables) obs.push_back(operator_to_json(o.matrix()));
  Json j{{"observables", std::move(obs)}};
  if (f.structure)
    j["structure"] = {{"n_sites", f.structure->n_sites}, {"local_dim", f.structure->local_dim}};
  if (!f.supports.empty()) j["supports"] = f.supports;
  return j;
}

ObservableSet observable_set_from_json(const Json& j) {
  ObservableSet f;
  for (const auto& o : j.at("observables")) f.observables.emplace_back(operator_from_json(o));
  if (j.contains("structure"))
    f.structure = SiteStructure{j["structure"].at("n_sites").get<int>(),
                                j["structure"].value("local_dim", 2)};
  if (j.contains("supports")) f.supports = j["supports"].get<std::vector<std::vector<int>>>();
  f.validate();
  return f;
}

Json problem_to_json(const ObservableSet& f, const ExpectationVector& alpha) {
  Json j = observable_set_to_json(f);
  j["alpha"] = std::vector<double>(alpha.values.data(), alpha.values.data() + alpha.values.size());
  return j;
}

std::pair<ObservableSet, ExpectationVector> problem_from_json(const Json& j) {
  ObservableSet f = observable_set_from_json(j);
  const auto a = j.at("alpha").get<std::vector<double>>();
  if (static_cast<int>(a.size()) != f.size())
    throw std::invalid_argument("alpha length does not match the observable count");
  ExpectationVector alpha{Eigen::Map<const RVector>(a.data(), a.size())};
  return {std::move(f), std::move(alpha)};
}

Json solution_to_json(const MaxEntSolution& sol) {
  Json j{{"rho", operator_to_json(sol.state.matrix())},
         {"status", sol.status == SolveStatus::Interior ? "interior" : "face-reduced"},
         {"entropy_bits", sol.entropy_bits},
         {"residual", sol.residual}};
  if (sol.dual)
    j["dual"] = std::vector<double>(sol.dual->data(), sol.dual->data() + sol.dual->size());
  if (!sol.pruned_constraints.empty()) j["pruned"] = sol.pruned_constraints;
  return j;
}

Json path_to_json(const PathSpec& p) {
  Json rows = Json::array();
  for (const auto& r : p.perturbation_coeffs)
    rows.push_back(std::vector<double>(r.data(), r.data() + r.size()));
  return Json{
      {"base", std::vector<double>(p.base_coeffs.data(), p.base_coeffs.data() + p.base_coeffs.size())},
      {"grid", p.eps_grid},
      {"coefficients", std::move(rows)}};
}

PathSpec path_from_json(const Json& j) {
  PathSpec p;
  const auto base = j.at("base").get<std::vector<double>>();
  p.base_coeffs = Eigen::Map<const RVector>(base.data(), base.size());
  p.eps_grid = j.contains("grid") ? j["grid"].get<std::vector<double>>()
                                  : PathSpec::default_eps_grid();
  if (j.contains("linear")) {
    const auto dir = j["linear"].get<std::vector<double>>();
    const RVector d = Eigen::Map<const RVector>(dir.data(), dir.size());
    for (double e : p.eps_grid) p.perturbation_coeffs.push_back(e * d);
  } else {
    for (const auto& row : j.at("coefficients")) {
      const auto r = row.get<std::vector<double>>();
      p.perturbation_coeffs.push_back(Eigen::Map<const RVector>(r.data(), r.size()));
    }
  }
  return p;
}

Json report_to_json(const DiscontinuityReport& r) {
  return Json{
      {"limit_state", operator_to_json(r.limit_state.matrix())},
      {"reference", solution_to_json(r.reference)},
      {"alpha_limit",
       std::vector<double>(r.alpha_limit.data(), r.alpha_limit.data() + r.alpha_limit.size())},
      {"gap_trace", r.gap_trace},
      {"gap_entropy_bits", r.gap_entropy_bits},
      {"alpha_drift", r.alpha_drift},
      {"verdict", verdict_name(r.verdict)},
      {"cauchy_converged", r.cauchy_converged},
      {"used_eps", r.used_eps}};
}

void write_range_csv(std::ostream& out, const RangeSample& sample) {
  if (sample.points.empty()) return;
  const int r = static_cast<int>(sample.points.front().theta.size());
  for (int i = 0; i < r; ++i) out << "theta_" << i << ",";
  for (int i = 0; i < r; ++i) out << "alpha_" << i << ",";
  out << "degeneracy,face_id\n";
  for (const auto& p : sample.points) {
    for (int i = 0; i < r; ++i) out << fmt_g(p.theta(i)) << ",";
    for (int i = 0; i < r; ++i) out << fmt_g(p.alpha(i)) << ",";
    out << p.degeneracy << "," << p.face_id << "\n";
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<std::vector<QcmiResult>>& curves) {
  out << "# conditional mutual information and entropies in bits\n";
  out << "n,lambda,I_bits,S_AB,S_BC,S_B,S_ABC\n";
  for (const auto& curve : curves)
    for (const auto& p : curve)
      out << p.n << "," << fmt_g(p.lambda) << "," << fmt_g(p.value_bits) << "," << fmt_g(p.s_ab)
          << "," << fmt_g(p.s_bc) << "," << fmt_g(p.s_b) << "," << fmt_g(p.s_abc) << "\n";
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace qmaxent
