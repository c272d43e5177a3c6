#ifndef SGOP_IO_HPP
#define SGOP_IO_HPP

#include "interp_quad.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace sgop {

using Json = nlohmann::ordered_json;

inline Json to_json(const SobolevParams& p) {
  Json j;
  j["m"] = p.order();
  j["chi"] = Json::array();
  for (auto& c : p.chi) j["chi"].push_back(to_string(c));
  if (!p.energy_weights.empty()) {
    j["energy_weights"] = Json::array();
    for (auto& c : p.energy_weights) j["energy_weights"].push_back(to_string(c));
  }
  if (!p.boundary_matrices.empty()) {
    j["boundary_matrices"] = Json::array();
    for (auto& m : p.boundary_matrices) {
      Json mj = Json::array();
      for (auto& r : m) {
        Json rj = Json::array();
        for (auto& x : r) rj.push_back(to_string(x));
        mj.push_back(rj);
      }
      j["boundary_matrices"].push_back(mj);
    }
  }
  return j;
}

inline Json to_json(const Poly& f) {
  Json j = Json::object();
  for (auto& [m, c] : f.terms()) j["(" + std::to_string(m.j) + "," + std::to_string(m.k) + ")"] = to_string(c);
  return j;
}

inline Json to_json(const GramMatrix& g) {
  Json j;
  j["params"] = to_json(g.params);
  j["family"] = g.family == 0 ? Json("mixed") : Json(g.family);
  j["basis"] = Json::array();
  for (auto& b : g.basis) j["basis"].push_back({b.j, b.k});
  j["entries"] = Json::array();
  for (auto& r : g.entries) {
    Json rj = Json::array();
    for (auto& x : r) rj.push_back(to_string(x));
    j["entries"].push_back(rj);
  }
  return j;
}

inline Json to_json(const OPFamily& f) {
  Json j;
  j["family"] = f.family;
  j["params"] = to_json(f.params);
  j["method"] = f.method;
  j["first_degree"] = f.first_degree;
  j["polys"] = Json::array();
  for (auto& p : f.polys) j["polys"].push_back(to_json(p));
  j["norms_sq"] = Json::array();
  for (auto& n : f.norms_sq) j["norms_sq"].push_back(to_string(n));
  Json rec = Json::object();
  for (auto& [name, vals] : f.recurrence) {
    Json v = Json::object();
    for (auto& [n, x] : vals) v[std::to_string(n)] = to_string(x);
    rec[name] = v;
  }
  j["recurrence"] = rec;
  j["verified"] = f.verified;
  return j;
}

inline Json to_json(const QuadratureRule& q) {
  Json j;
  j["n"] = q.n;
  j["nodes"] = Json::array();
  for (auto& v : q.nodes.nodes) j["nodes"].push_back(v.str());
  j["weights"] = Json::array();
  for (auto& w : q.weights) j["weights"].push_back(to_string(w));
  return j;
}

// Minimal CSV writer: header row, comma separated, LF line endings. Fields holding commas or quotes are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  CsvWriter& row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os_ << ',';
      os_ << quote(fields[i]);
    }
    os_ << '\n';
    return *this;
  }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  std::ostream& os_;
};

}  // namespace sgop

#endif
