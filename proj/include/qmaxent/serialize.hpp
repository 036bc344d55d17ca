#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "qmaxent/discontinuity.hpp"
#include "qmaxent/maxent.hpp"
#include "qmaxent/numrange.hpp"
#include "qmaxent/qcmi.hpp"

namespace qmaxent {

using Json = nlohmann::json;

// Dense operator wire format: {"dim": d, "re": [[..]], "im": [[..]]},
// row-major, site 0 most significant.
Json operator_to_json(const Matrix& m);
Matrix operator_from_json(const Json& j);

Json observable_set_to_json(const ObservableSet& f);
ObservableSet observable_set_from_json(const Json& j);

// {"observables": [...], "alpha": [...]}
Json problem_to_json(const ObservableSet& f, const ExpectationVector& alpha);
std::pair<ObservableSet, ExpectationVector> problem_from_json(const Json& j);

Json solution_to_json(const MaxEntSolution& sol);

// {"base": [...], "grid": [...], "coefficients": [[...], ...]} or
// {"base": [...], "grid": [...], "linear": [...]}
Json path_to_json(const PathSpec& p);
PathSpec path_from_json(const Json& j);

Json report_to_json(const DiscontinuityReport& r);

void write_range_csv(std::ostream& out, const RangeSample& sample);
void write_sweep_csv(std::ostream& out, const std::vector<std::vector<QcmiResult>>& curves);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);
void save_text_file(const std::string& path, const std::string& text);

}  // namespace qmaxent
