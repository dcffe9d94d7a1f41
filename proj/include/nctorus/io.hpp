#pragma once

// JSON serialization.
//
//   TorusElement      [{"exp": [r_1, ..., r_n], "re": x, "im": y}, ...]
//   DeformationMatrix row-major array (flat, or nested rows on input)
//   TorusMatrix       {"q": q, "entries": [TorusElement, ...]}  (row-major)
//   Module            {"q": q, "p": TorusMatrix}
//   Connection        {"convention": "dynamical"|"spectral", "module": Module, "potentials": [TorusMatrix, ...]}
//   DescentTrace      JSON lines, one record per iteration

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "nctorus/connection.hpp"
#include "nctorus/optimize.hpp"

namespace nctorus {

using json = nlohmann::json;

json element_to_json(const TorusElement& a);
TorusElement element_from_json(const json& j, const AlgebraPtr& alg);

json theta_to_json(const DeformationMatrix& theta);
// Skew-symmetry is checked to 1e-12, then the matrix is exactly antisymmetrized.
DeformationMatrix theta_from_json(const json& j, int n);

json policy_to_json(const TruncationPolicy& p);
TruncationPolicy policy_from_json(const json& j);

json matrix_to_json(const TorusMatrix& m);
TorusMatrix matrix_from_json(const json& j, const AlgebraPtr& alg);

json module_to_json(const ProjectiveModule& m);
ModulePtr module_from_json(const json& j, const AlgebraPtr& alg);

json connection_to_json(const Connection& c);
Connection connection_from_json(const json& j, const AlgebraPtr& alg);

Convention convention_from_string(const std::string& s);

json record_to_json(const DescentRecord& r);
// One JSON object per line.
void write_trace_jsonl(const DescentTrace& trace, std::ostream& os);

}  // namespace nctorus
