#pragma once

// Input schema ("jacloc/1") and canonical JSON rendering. Parsing is strict:
// unknown fields are rejected, rationals arrive as "p/q" strings or JSON
// integers, and floating point literals are refused outright.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jacloc/curve.hpp"
#include "jacloc/errors.hpp"
#include "jacloc/local_ring.hpp"
#include "jacloc/rational.hpp"
#include "jacloc/stability.hpp"

namespace jacloc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaId = "jacloc/1";
inline constexpr int kMaxInputVertices = 12;
inline constexpr int kMaxInputEdges = 16;

struct SpecOptions {
  int degree_bound = 6;
  int t_max = 20;
};

/// Parsed problem description. Exactly one of polarization / phi may be
/// present; line_bundle_M rides along with a polarization.
struct ProblemSpec {
  explicit ProblemSpec(CurveGraph c) : curve(std::move(c)) {}

  CurveGraph curve;
  std::optional<SheafDatum> sheaf;
  std::optional<Polarization> polarization;
  std::optional<LineBundleDatum> line_bundle_m;
  std::optional<std::int64_t> twist_degree;  // the d paired with line_bundle_M
  std::optional<PhiParameter> phi;
  ModuliMode mode = ModuliMode::Jacobian;
  SpecOptions options;
};

namespace io_detail {

inline void require_keys(const Json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw SchemaError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key))
      throw SchemaError("unknown field '" + key + "' in " + where);
}

inline std::int64_t get_int(const Json& v, const std::string& where) {
  if (v.is_number_float())
    throw SchemaError(where + " must be an integer, not a float");
  if (!v.is_number_integer())
    throw SchemaError(where + " must be an integer");
  return v.get<std::int64_t>();
}

inline Rational get_rational(const Json& v, const std::string& where) {
  if (v.is_number_float())
    throw SchemaError(where + " must be an exact rational \"p/q\" or an integer, "
                      "not a float");
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  throw SchemaError(where + " must be an exact rational \"p/q\" or an integer");
}

inline std::map<int, std::int64_t> get_degrees(const Json& v, const CurveGraph& c,
                                               const std::string& where) {
  if (!v.is_array()) throw SchemaError(where + " must be an array");
  const auto& vs = c.graph().vertices();
  if (v.size() != vs.size())
    throw SchemaError(where + " must list one degree per vertex (" +
                      std::to_string(vs.size()) + " expected)");
  std::map<int, std::int64_t> out;
  for (std::size_t i = 0; i < vs.size(); ++i)
    out[vs[i]] = get_int(v[i], where + "[" + std::to_string(i) + "]");
  return out;
}

inline CurveGraph parse_curve(const Json& j) {
  require_keys(j, "curve", {"vertices", "edges"});
  if (!j.contains("vertices")) throw SchemaError("curve.vertices is required");
  if (!j.contains("edges")) throw SchemaError("curve.edges is required");
  if (!j["vertices"].is_array() || !j["edges"].is_array())
    throw SchemaError("curve.vertices and curve.edges must be arrays");
  std::vector<int> vertices;
  std::map<int, int> genus;
  for (const Json& v : j["vertices"]) {
    require_keys(v, "curve.vertices[]", {"id", "genus"});
    if (!v.contains("id")) throw SchemaError("vertex entry needs an id");
    const int id = static_cast<int>(get_int(v["id"], "vertex id"));
    const int g =
        v.contains("genus") ? static_cast<int>(get_int(v["genus"], "vertex genus")) : 0;
    if (g < 0) throw SchemaError("vertex genus must be nonnegative");
    // per-vertex arrays elsewhere are aligned with this list, so its order
    // must be canonical
    if (!vertices.empty() && id <= vertices.back())
      throw SchemaError("curve.vertices must be listed in increasing id order");
    vertices.push_back(id);
    genus[id] = g;
  }
  std::vector<Edge> edges;
  for (const Json& e : j["edges"]) {
    require_keys(e, "curve.edges[]", {"id", "source", "target"});
    for (const char* key : {"id", "source", "target"})
      if (!e.contains(key))
        throw SchemaError(std::string("edge entry needs '") + key + "'");
    edges.push_back({static_cast<int>(get_int(e["id"], "edge id")),
                     static_cast<int>(get_int(e["source"], "edge source")),
                     static_cast<int>(get_int(e["target"], "edge target"))});
  }
  if (static_cast<int>(vertices.size()) > kMaxInputVertices)
    throw ScaleLimitError("desk-scale limit: at most " +
                          std::to_string(kMaxInputVertices) + " vertices");
  if (static_cast<int>(edges.size()) > kMaxInputEdges)
    throw ScaleLimitError("desk-scale limit: at most " +
                          std::to_string(kMaxInputEdges) + " edges");
  try {
    return CurveGraph(MultiGraph(std::move(vertices), std::move(edges)),
                      std::move(genus));
  } catch (const InvalidDataError& e) {
    throw SchemaError(e.what());
  }
}

}  // namespace io_detail

inline ProblemSpec parse_problem_spec(const Json& j) {
  using io_detail::get_degrees;
  using io_detail::get_int;
  using io_detail::get_rational;
  using io_detail::require_keys;

  require_keys(j, "the input",
               {"schema", "curve", "sheaf", "polarization", "line_bundle_M", "phi",
                "mode", "options"});
  if (!j.contains("schema") || !j["schema"].is_string() ||
      j["schema"].get<std::string>() != kSchemaId)
    throw SchemaError(std::string("input must declare \"schema\": \"") + kSchemaId +
                      "\"");
  if (!j.contains("curve")) throw SchemaError("curve is required");

  ProblemSpec spec(io_detail::parse_curve(j["curve"]));
  const CurveGraph& curve = spec.curve;

  if (j.contains("sheaf")) {
    require_keys(j["sheaf"], "sheaf", {"degrees", "nonfree"});
    if (!j["sheaf"].contains("degrees"))
      throw SchemaError("sheaf.degrees is required");
    SheafDatum s;
    s.component_degree = get_degrees(j["sheaf"]["degrees"], curve, "sheaf.degrees");
    if (j["sheaf"].contains("nonfree")) {
      if (!j["sheaf"]["nonfree"].is_array())
        throw SchemaError("sheaf.nonfree must be an array of edge ids");
      for (const Json& e : j["sheaf"]["nonfree"]) {
        const int id = static_cast<int>(get_int(e, "sheaf.nonfree[]"));
        if (!curve.graph().has_edge(id))
          throw SchemaError("sheaf.nonfree references unknown edge " +
                            std::to_string(id));
        s.nonfree.insert(id);
      }
    }
    spec.sheaf = std::move(s);
  }

  if (j.contains("polarization")) {
    require_keys(j["polarization"], "polarization", {"degrees"});
    if (!j["polarization"].contains("degrees"))
      throw SchemaError("polarization.degrees is required");
    Polarization l;
    l.component_degree =
        get_degrees(j["polarization"]["degrees"], curve, "polarization.degrees");
    try {
      validate_polarization(curve, l);
    } catch (const InvalidDataError& e) {
      throw SchemaError(e.what());
    }
    spec.polarization = std::move(l);
  }

  if (j.contains("line_bundle_M")) {
    require_keys(j["line_bundle_M"], "line_bundle_M", {"degrees", "d"});
    if (!j["line_bundle_M"].contains("degrees") || !j["line_bundle_M"].contains("d"))
      throw SchemaError("line_bundle_M needs both degrees and d");
    if (!spec.polarization)
      throw SchemaError("line_bundle_M requires a polarization");
    LineBundleDatum m;
    m.component_degree =
        get_degrees(j["line_bundle_M"]["degrees"], curve, "line_bundle_M.degrees");
    spec.line_bundle_m = std::move(m);
    spec.twist_degree = get_int(j["line_bundle_M"]["d"], "line_bundle_M.d");
  }

  if (j.contains("phi")) {
    if (spec.polarization)
      throw SchemaError("supply exactly one of polarization and phi");
    require_keys(j["phi"], "phi", {"values", "target_sum"});
    if (!j["phi"].contains("values") || !j["phi"]["values"].is_array())
      throw SchemaError("phi.values must be an array");
    const auto& vs = curve.graph().vertices();
    if (j["phi"]["values"].size() != vs.size())
      throw SchemaError("phi.values must list one value per vertex");
    std::map<int, Rational> values;
    Rational sum = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      values[vs[i]] =
          get_rational(j["phi"]["values"][i], "phi.values[" + std::to_string(i) + "]");
      sum += values[vs[i]];
    }
    if (!sum.is_integer())
      throw SchemaError("phi entries must sum to an integer, got " + sum.str());
    std::int64_t target = static_cast<std::int64_t>(sum.num());
    if (j["phi"].contains("target_sum")) {
      target = get_int(j["phi"]["target_sum"], "phi.target_sum");
      if (!(sum == Rational(target)))
        throw SchemaError("phi.target_sum disagrees with the sum of phi.values");
    }
    spec.phi = PhiParameter(std::move(values), target);
  }

  if (j.contains("mode")) {
    if (!j["mode"].is_string()) throw SchemaError("mode must be a string");
    const std::string mode = j["mode"].get<std::string>();
    if (mode == "jacobian") spec.mode = ModuliMode::Jacobian;
    else if (mode == "universal") spec.mode = ModuliMode::UniversalJacobian;
    else throw SchemaError("mode must be \"jacobian\" or \"universal\"");
  }

  if (j.contains("options")) {
    require_keys(j["options"], "options", {"degree_bound", "t_max"});
    if (j["options"].contains("degree_bound"))
      spec.options.degree_bound =
          static_cast<int>(get_int(j["options"]["degree_bound"], "degree_bound"));
    if (j["options"].contains("t_max"))
      spec.options.t_max = static_cast<int>(get_int(j["options"]["t_max"], "t_max"));
    if (spec.options.degree_bound < 0 || spec.options.t_max < 0)
      throw SchemaError("options must be nonnegative");
  }

  return spec;
}

// --- serialization ----------------------------------------------------------

inline Json to_json(const CurveGraph& c, const std::map<int, std::int64_t>& degrees) {
  Json arr = Json::array();
  for (int v : c.graph().vertices()) arr.push_back(degrees.at(v));
  return arr;
}

inline Json to_json(const CurveGraph& c, const PhiParameter& phi) {
  Json values = Json::array();
  for (int v : c.graph().vertices()) values.push_back(phi.at(v).str());
  Json out;
  out["values"] = std::move(values);
  out["target_sum"] = phi.target_sum();
  return out;
}

inline Json to_json(const Orientation& o) {
  Json arr = Json::array();
  for (const auto& [e, dir] : o.assignment)
    arr.push_back(Json{{"edge", e}, {"direction", to_string(dir)}});
  return arr;
}

inline Json to_json(const OrientedCircuit& c) {
  Json arr = Json::array();
  for (const auto& [e, dir] : c.edges)
    arr.push_back(Json{{"edge", e}, {"direction", to_string(dir)}});
  return arr;
}

inline Json to_json(const Circulation& c) {
  Json arr = Json::array();
  for (const auto& [e, f] : c.entries())
    arr.push_back(Json{{"edge", e}, {"value", f}});
  return arr;
}

inline Json to_json(const TorusWeight& w) {
  Json arr = Json::array();
  for (const auto& [v, k] : w.weight)
    arr.push_back(Json{{"vertex", v}, {"exponent", k}});
  return arr;
}

inline Json to_json(const StabilityVerdict& v) {
  Json out;
  out["status"] = to_string(v.status);
  Json witnesses = Json::array();
  for (const Subcurve& y : v.witnesses) {
    Json sub = Json::array();
    for (int vertex : y.vertices) sub.push_back(vertex);
    witnesses.push_back(std::move(sub));
  }
  out["witnesses"] = std::move(witnesses);
  return out;
}

inline Json to_json(const RingPresentation& p) {
  Json out;
  out["name"] = to_string(p.name);
  if (p.attached_edge) out["attached_edge"] = *p.attached_edge;
  Json vars = Json::array();
  for (const RingVariable& v : p.variables) {
    Json entry;
    entry["symbol"] = v.symbol;
    entry["kind"] = to_string(v.kind);
    if (v.index >= 0) entry["index"] = v.index;
    entry["weight"] = to_json(v.weight);
    vars.push_back(std::move(entry));
  }
  out["variables"] = std::move(vars);
  Json rels = Json::array();
  for (const RingRelation& r : p.relations)
    rels.push_back(Json{{"lhs", r.lhs}, {"rhs", r.rhs}});
  out["relations"] = std::move(rels);
  if (!p.generators.empty()) {
    Json gens = Json::array();
    for (const InvariantGenerator& g : p.generators) {
      Json entry;
      entry["symbol"] = g.symbol;
      if (g.circulation) entry["flow"] = to_json(*g.circulation);
      gens.push_back(std::move(entry));
    }
    out["generators"] = std::move(gens);
  }
  return out;
}

inline Json to_json(const LocalReport& r) {
  Json out;
  out["mode"] = to_string(r.mode);
  out["smooth"] = r.smooth;
  out["local_dimension"] = r.local_dimension;
  out["embedding_dimension"] = r.embedding_dimension;
  out["multiplicity"] = r.multiplicity;
  out["component_count"] = r.component_count;
  out["invariant_ring_dimension"] = r.invariant_ring_dimension;
  out["g_sigma"] = r.g_sigma;
  out["aut_torus_rank"] = r.aut_torus_rank;
  if (!r.asserted_properties.empty()) {
    Json props = Json::array();
    for (const std::string& p : r.asserted_properties) props.push_back(p);
    out["asserted_properties"] = std::move(props);
    out["asserted_properties_note"] = "asserted by the structure theory, not computed";
  }
  if (r.mode == ModuliMode::UniversalJacobian)
    out["experimental_note"] =
        "embedding_dimension and multiplicity in universal mode are experimental";
  if (!r.warnings.empty()) {
    Json warnings = Json::array();
    for (const std::string& w : r.warnings) warnings.push_back(w);
    out["warnings"] = std::move(warnings);
  }
  return out;
}

inline Json error_json(const std::string& name, const std::string& message) {
  Json out;
  out["error"] = Json{{"name", name}, {"message", message}};
  return out;
}

}  // namespace jacloc
