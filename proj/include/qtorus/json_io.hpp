#pragma once

// JSON encodings for the public value types.  Complex numbers are [re, im]
// pairs; operator data is row-major.  No timestamps anywhere: outputs must be
// byte-identical across runs with the same inputs.

#include <json.hpp>

#include <string>
#include <vector>

#include "groupoid.hpp"
#include "operators.hpp"
#include "report.hpp"
#include "tensorlinalg.hpp"
#include "weights.hpp"

namespace qtorus {

using nlohmann::json;

inline json complex_to_json(const cd& z) { return json::array({z.real(), z.imag()}); }

inline cd complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    fail(errc::constraint_violation, "complex value must be [re, im]");
  return cd(j[0].get<double>(), j[1].get<double>());
}

inline void to_json(json& j, const Weight& w) {
  j = json{{"x", complex_to_json(w.x)}, {"y", complex_to_json(w.y)}};
}

inline void from_json(const json& j, Weight& w) {
  w = Weight::unchecked(complex_from_json(j.at("x")), complex_from_json(j.at("y")));
}

inline void to_json(json& j, const TensorOperator& op) {
  json data = json::array();
  for (Eigen::Index r = 0; r < op.mat.rows(); ++r)
    for (Eigen::Index c = 0; c < op.mat.cols(); ++c)
      data.push_back(complex_to_json(op.mat(r, c)));
  j = json{{"arity", op.arity}, {"N", op.N}, {"data", std::move(data)}};
}

inline void from_json(const json& j, TensorOperator& op) {
  const int arity = j.at("arity").get<int>();
  const int n = j.at("N").get<int>();
  const long side = power_of(n, arity);
  const json& data = j.at("data");
  if (static_cast<long>(data.size()) != side * side)
    fail(errc::dimension_mismatch, "operator data length is not side^2");
  Mat m(side, side);
  long k = 0;
  for (long r = 0; r < side; ++r)
    for (long c = 0; c < side; ++c) m(r, c) = complex_from_json(data[k++]);
  op = TensorOperator{n, arity, std::move(m)};
}

inline void to_json(json& j, const RelationReport& rep) {
  j = json{{"name", rep.name},
           {"residual", rep.residual},
           {"passed", rep.passed},
           {"N", rep.N},
           {"weights", rep.weights_used}};
  if (rep.scalar) j["scalar"] = complex_to_json(*rep.scalar);
}

inline void to_json(json& j, const EdgeRecord& e) {
  j = json{{"weight", e.weight}, {"boundary", e.boundary}};
}

inline void from_json(const json& j, EdgeRecord& e) {
  e.weight = j.at("weight").get<Weight>();
  e.boundary = j.at("boundary").get<bool>();
}

inline void to_json(json& j, const LDTriangulation& t) {
  json tris = json::object();
  for (const auto& [label, tri] : t.triangles)
    tris[std::to_string(label)] = json::array(
        {tri.edges[0], tri.edges[1], tri.edges[2]});
  json edges = json::object();
  json weights = json::object();
  for (const auto& [id, rec] : t.edges) {
    edges[std::to_string(id)] = json{{"boundary", rec.boundary}};
    weights[std::to_string(id)] = rec.weight;
  }
  json gluing = json::object();
  for (const auto& [id, inc] : edge_incidences(t)) {
    json slots = json::array();
    for (const auto& [tri, slot] : inc) slots.push_back(json::array({tri, slot}));
    gluing[std::to_string(id)] = std::move(slots);
  }
  j = json{{"triangles", std::move(tris)},
           {"edges", std::move(edges)},
           {"gluing", std::move(gluing)},
           {"weights", std::move(weights)}};
}

inline void from_json(const json& j, LDTriangulation& t) {
  t = LDTriangulation{};
  for (const auto& [key, val] : j.at("triangles").items()) {
    TriangleRecord rec;
    if (!val.is_array() || val.size() != 3)
      fail(errc::invalid_combinatorics, "triangle must list three edge ids");
    for (int s = 0; s < 3; ++s) rec.edges[s] = val[s].get<int>();
    t.triangles[std::stoi(key)] = rec;
  }
  const json& weights = j.at("weights");
  for (const auto& [key, val] : j.at("edges").items()) {
    EdgeRecord rec;
    rec.boundary = val.at("boundary").get<bool>();
    rec.weight = weights.at(key).get<Weight>();
    t.edges[std::stoi(key)] = rec;
  }
  validate_combinatorics(t);
}

inline void to_json(json& j, const BlockedMove& b) {
  j = json{{"at", b.at_node}, {"move", b.move}, {"reason", b.reason}};
}

inline void to_json(json& j, const ExploreResult& r) {
  j = json{{"nodes", r.nodes},
           {"truncated", r.truncated},
           {"cumulative_by_depth", r.cumulative_by_depth},
           {"blocked", r.blocked}};
}

inline void to_json(json& j, const TorusReport& r) {
  j = json{{"explore", r.explore},
           {"x_pattern_ok", r.x_pattern_ok},
           {"flip_pattern_ok", r.flip_pattern_ok},
           {"flips_all_admissible", r.flips_all_admissible},
           {"counts_strictly_monotone", r.counts_strictly_monotone},
           {"notes", r.notes}};
}

}  // namespace qtorus
