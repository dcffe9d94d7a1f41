#include "nctorus/io.hpp"

#include <ostream>

#include "nctorus/errors.hpp"

namespace nctorus {

namespace {

template <typename T>
T get_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace

json element_to_json(const TorusElement& a) {
  json out = json::array();
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto r = a.exponent(i);
    out.push_back({{"exp", std::vector<int>(r.begin(), r.end())}, {"re", a.coeff(i).real()}, {"im", a.coeff(i).imag()}});
  }
  return out;
}

TorusElement element_from_json(const json& j, const AlgebraPtr& alg) {
  if (!j.is_array()) throw ConfigError("torus element must be a JSON array of terms");
  std::vector<std::pair<Exponent, complex>> terms;
  for (const auto& rec : j) {
    auto exp = get_field<std::vector<int>>(rec, "exp");
    if (static_cast<int>(exp.size()) != alg->dim())
      throw ConfigError("torus element term has exponent of length " + std::to_string(exp.size()) + ", expected " +
                        std::to_string(alg->dim()));
    double re = rec.contains("re") ? get_field<double>(rec, "re") : 0.0;
    double im = rec.contains("im") ? get_field<double>(rec, "im") : 0.0;
    terms.emplace_back(std::move(exp), complex(re, im));
  }
  return TorusElement::from_terms(alg, terms);
}

json theta_to_json(const DeformationMatrix& theta) { return theta.row_major(); }

DeformationMatrix theta_from_json(const json& j, int n) {
  if (!j.is_array()) throw ConfigError("theta must be an array");
  std::vector<double> flat;
  try {
    if (!j.empty() && j.front().is_array()) {
      for (const auto& row : j)
        for (const auto& x : row) flat.push_back(x.get<double>());
    } else {
      flat = j.get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("theta: ") + e.what());
  }
  if (flat.size() != static_cast<std::size_t>(n) * n)
    throw ConfigError("theta must have n*n = " + std::to_string(n * n) + " entries");
  try {
    return DeformationMatrix(n, std::move(flat), 1e-12);
  } catch (const DimensionError& e) {
    throw ConfigError(e.what());
  }
}

json policy_to_json(const TruncationPolicy& p) {
  return {{"r_max", p.r_max}, {"mode", p.mode == TruncationMode::strict ? "strict" : "lossy"}, {"eps_drop", p.eps_drop}};
}

TruncationPolicy policy_from_json(const json& j) {
  TruncationPolicy p;
  if (j.is_null()) return p;
  if (!j.is_object()) throw ConfigError("truncation must be an object");
  if (j.contains("r_max")) p.r_max = get_field<int>(j, "r_max");
  if (j.contains("mode")) {
    auto mode = get_field<std::string>(j, "mode");
    if (mode == "strict")
      p.mode = TruncationMode::strict;
    else if (mode == "lossy")
      p.mode = TruncationMode::lossy;
    else
      throw ConfigError("truncation mode must be 'strict' or 'lossy'");
  }
  if (j.contains("eps_drop")) p.eps_drop = get_field<double>(j, "eps_drop");
  p.validate();
  return p;
}

json matrix_to_json(const TorusMatrix& m) {
  json entries = json::array();
  for (const auto& e : m.entries()) entries.push_back(element_to_json(e));
  return {{"q", m.q()}, {"entries", std::move(entries)}};
}

TorusMatrix matrix_from_json(const json& j, const AlgebraPtr& alg) {
  const int q = get_field<int>(j, "q");
  if (q < 1) throw ConfigError("matrix size q must be >= 1");
  const json& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(q) * q)
    throw ConfigError("matrix 'entries' must hold q*q torus elements");
  std::vector<TorusElement> elems;
  for (const auto& e : entries) elems.push_back(element_from_json(e, alg));
  return TorusMatrix(q, std::move(elems));
}

json module_to_json(const ProjectiveModule& m) { return {{"q", m.q()}, {"p", matrix_to_json(m.projection())}}; }

ModulePtr module_from_json(const json& j, const AlgebraPtr& alg) {
  const int q = get_field<int>(j, "q");
  if (q < 1) throw ConfigError("module rank q must be >= 1");
  const json& p = j.contains("p") ? j.at("p") : json("free");
  if (p.is_string()) {
    if (p.get<std::string>() != "free") throw ConfigError("module 'p' must be \"free\" or a matrix");
    return std::make_shared<const ProjectiveModule>(ProjectiveModule::free(alg, q));
  }
  TorusMatrix pm = matrix_from_json(p, alg);
  if (pm.q() != q) throw ConfigError("module 'p' size does not match q");
  return module_new(std::move(pm));
}

Convention convention_from_string(const std::string& s) {
  if (s == "dynamical") return Convention::dynamical;
  if (s == "spectral") return Convention::spectral;
  throw ConfigError("convention must be 'dynamical' or 'spectral'");
}

json connection_to_json(const Connection& c) {
  json pots = json::array();
  for (const auto& a : c.potentials()) pots.push_back(matrix_to_json(a));
  return {{"convention", to_string(c.convention())}, {"module", module_to_json(*c.module())}, {"potentials", pots}};
}

Connection connection_from_json(const json& j, const AlgebraPtr& alg) {
  const Convention conv = convention_from_string(get_field<std::string>(j, "convention"));
  ModulePtr module = module_from_json(j.at("module"), alg);
  const json& pots = j.at("potentials");
  if (!pots.is_array()) throw ConfigError("'potentials' must be an array");
  std::vector<TorusMatrix> mats;
  for (const auto& p : pots) mats.push_back(matrix_from_json(p, alg));
  return Connection(std::move(module), conv, std::move(mats));
}

json record_to_json(const DescentRecord& r) {
  return {{"iteration", r.iteration}, {"ym", r.ym}, {"grad_norm", r.grad_norm}, {"step", r.step}};
}

void write_trace_jsonl(const DescentTrace& trace, std::ostream& os) {
  for (const auto& r : trace.records) os << record_to_json(r).dump() << '\n';
}

}  // namespace nctorus
