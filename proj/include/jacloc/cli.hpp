#pragma once

// Command-line surface: analyze | stability | chambers | convert |
// orientations | circuits | presentation, all driven by a JSON problem
// file. Exit codes: 0 ok, 2 schema violation, 3 domain error, 4 desk-scale
// limit.

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jacloc/invariants.hpp"
#include "jacloc/json_io.hpp"
#include "jacloc/local_ring.hpp"
#include "jacloc/stability.hpp"

namespace jacloc {

namespace cli_detail {

struct CommonArgs {
  std::string input;
  bool text = false;
  std::optional<std::string> mode;
  std::optional<int> degree_bound;
  std::optional<int> t_max;
  std::string presentation_name;  // presentation subcommand only
};

inline ProblemSpec load_spec(const CommonArgs& args) {
  std::ifstream in(args.input);
  if (!in) throw SchemaError("cannot open input file: " + args.input);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("input is not valid JSON: ") + e.what());
  }
  ProblemSpec spec = parse_problem_spec(j);
  if (args.mode) {
    if (*args.mode == "jacobian") spec.mode = ModuliMode::Jacobian;
    else if (*args.mode == "universal") spec.mode = ModuliMode::UniversalJacobian;
    else throw SchemaError("--mode must be jacobian or universal");
  }
  if (args.degree_bound) {
    if (*args.degree_bound < 0) throw SchemaError("--degree-bound must be >= 0");
    spec.options.degree_bound = *args.degree_bound;
  }
  if (args.t_max) {
    if (*args.t_max < 0) throw SchemaError("--tmax must be >= 0");
    spec.options.t_max = *args.t_max;
  }
  return spec;
}

inline const SheafDatum& require_sheaf(const ProblemSpec& spec) {
  if (!spec.sheaf) throw SchemaError("this command requires a sheaf");
  return *spec.sheaf;
}

/// The stability parameter as a phi-parameter: either phi itself, or the
/// polarization converted through the twisting dictionary. Without a
/// twisting bundle the conversion keeps the sheaf degree as the target sum.
inline PhiParameter effective_phi(const ProblemSpec& spec) {
  if (spec.phi) return *spec.phi;
  if (spec.polarization) {
    std::int64_t d = 0;
    if (spec.line_bundle_m) d = *spec.twist_degree;
    else if (spec.sheaf) d = total_degree(spec.curve, *spec.sheaf);
    return slope_to_phi(spec.curve, *spec.polarization, spec.line_bundle_m, d);
  }
  throw SchemaError("this command requires a polarization or a phi parameter");
}

inline Json stability_json(const ProblemSpec& spec) {
  const SheafDatum& s = require_sheaf(spec);
  Json out;
  StabilityVerdict verdict{Status::Stable, {}};
  PolyStabilityResult poly{false, {}};
  if (spec.phi) {
    out["parameter"] = "phi";
    verdict = phi_semistable(spec.curve, s, *spec.phi);
    poly = phi_polystable(spec.curve, s, *spec.phi);
  } else if (spec.polarization) {
    out["parameter"] = "polarization";
    verdict = slope_semistable(spec.curve, s, *spec.polarization);
    const PhiParameter phi = slope_to_phi(spec.curve, *spec.polarization, std::nullopt,
                                          total_degree(spec.curve, s));
    poly = phi_polystable(spec.curve, s, phi);
  } else {
    throw SchemaError("stability requires a polarization or a phi parameter");
  }
  out["verdict"] = to_json(verdict);
  out["polystable"] = poly.polystable;
  if (poly.polystable) {
    Json parts = Json::array();
    for (const auto& part : poly.partition) {
      Json p = Json::array();
      for (int v : part) p.push_back(v);
      parts.push_back(std::move(p));
    }
    out["partition"] = std::move(parts);
  }
  return out;
}

inline std::string monomial_symbol(const MonomialAB& m) {
  std::ostringstream s;
  bool first = true;
  auto append = [&](const std::string& base, int e, int k) {
    if (!first) s << "*";
    first = false;
    s << base << "_" << e;
    if (k > 1) s << "^" << k;
  };
  for (const auto& [e, k] : m.x_exp) append("X", e, k);
  for (const auto& [e, k] : m.y_exp) append("Y", e, k);
  if (m.t_exp)
    for (const auto& [e, k] : *m.t_exp) append("T", e, k);
  return first ? "1" : s.str();
}

inline Json presentation_json(const ProblemSpec& spec, RingName name) {
  const SheafDatum& s = require_sheaf(spec);
  Json out = to_json(presentation(spec.curve, s, name));
  if (name == RingName::InvariantRingRI || name == RingName::InvariantRingRXI) {
    const MultiGraph gamma = gamma_of(spec.curve, s).graph;
    const RingMode mode =
        name == RingName::InvariantRingRI ? RingMode::A : RingMode::B;
    Json monomials = Json::array();
    for (const MonomialAB& m :
         invariant_monomials_upto(gamma, spec.options.degree_bound, mode))
      monomials.push_back(monomial_symbol(m));
    out["invariant_monomials"] = std::move(monomials);
    out["invariant_monomials_degree_bound"] = spec.options.degree_bound;
  }
  return out;
}

inline Json analyze_json(const ProblemSpec& spec) {
  const SheafDatum& s = require_sheaf(spec);
  Json out;
  out["schema"] = kSchemaId;
  out["command"] = "analyze";
  out["mode"] = to_string(spec.mode);
  if (spec.phi || spec.polarization) out["stability"] = stability_json(spec);
  out["report"] = to_json(local_report(spec.curve, s, spec.mode, spec.options.t_max));
  Json presentations = Json::array();
  const RingName main_ring =
      spec.mode == ModuliMode::Jacobian ? RingName::RI : RingName::RXI;
  const RingName invariant_ring = spec.mode == ModuliMode::Jacobian
                                      ? RingName::InvariantRingRI
                                      : RingName::InvariantRingRXI;
  presentations.push_back(to_json(presentation(spec.curve, s, main_ring)));
  presentations.push_back(presentation_json(spec, invariant_ring));
  for (const RingPresentation& piece : deformation_ring_local_pieces(s, spec.mode))
    presentations.push_back(to_json(piece));
  out["presentations"] = std::move(presentations);
  return out;
}

inline Json chambers_json(const ProblemSpec& spec) {
  const PhiParameter phi = effective_phi(spec);
  const ChamberCount counts = count_stable_line_multidegrees(spec.curve, phi);
  Json out;
  out["schema"] = kSchemaId;
  out["command"] = "chambers";
  out["phi"] = to_json(spec.curve, phi);
  auto degrees_json = [&](const std::vector<std::map<int, std::int64_t>>& list) {
    Json arr = Json::array();
    for (const auto& degree : list) arr.push_back(to_json(spec.curve, degree));
    return arr;
  };
  out["stable"] = degrees_json(counts.stable);
  out["stable_count"] = counts.stable.size();
  out["strictly_semistable"] = degrees_json(counts.strictly_semistable);
  out["strictly_semistable_count"] = counts.strictly_semistable.size();
  return out;
}

inline Json convert_json(const ProblemSpec& spec) {
  Json out;
  out["schema"] = kSchemaId;
  out["command"] = "convert";
  if (spec.polarization) {
    const std::int64_t d = spec.line_bundle_m ? *spec.twist_degree : 0;
    out["direction"] = "polarization_to_phi";
    out["phi"] =
        to_json(spec.curve, slope_to_phi(spec.curve, *spec.polarization,
                                         spec.line_bundle_m, d));
  } else if (spec.phi) {
    out["direction"] = "phi_to_polarization";
    const PolarizationForPhi conv = phi_to_polarization(spec.curve, *spec.phi);
    out["polarization"] = Json{{"degrees", to_json(spec.curve, conv.l.component_degree)}};
    out["line_bundle_M"] =
        Json{{"degrees", to_json(spec.curve, conv.m.component_degree)}, {"d", conv.d}};
  } else {
    throw SchemaError("convert requires a polarization or a phi parameter");
  }
  return out;
}

/// Enumerations run on the smoothed dual graph when a sheaf is present,
/// otherwise on the curve's own dual graph.
inline MultiGraph enumeration_graph(const ProblemSpec& spec) {
  if (spec.sheaf) return gamma_of(spec.curve, *spec.sheaf).graph;
  return spec.curve.graph();
}

inline Json orientations_json(const ProblemSpec& spec) {
  const MultiGraph g = enumeration_graph(spec);
  Json out;
  out["schema"] = kSchemaId;
  out["command"] = "orientations";
  Json arr = Json::array();
  for (const Orientation& o : g.totally_cyclic_orientations()) arr.push_back(to_json(o));
  out["count"] = arr.size();
  out["orientations"] = std::move(arr);
  return out;
}

inline Json circuits_json(const ProblemSpec& spec) {
  const MultiGraph g = enumeration_graph(spec);
  Json out;
  out["schema"] = kSchemaId;
  out["command"] = "circuits";
  Json arr = Json::array();
  for (const OrientedCircuit& c : g.oriented_circuits()) arr.push_back(to_json(c));
  out["count"] = arr.size();
  out["circuits"] = std::move(arr);
  return out;
}

// --- text rendering ----------------------------------------------------------

inline void render_text(const Json& j, std::ostream& os, int indent = 0);

inline void render_scalar(const Json& j, std::ostream& os) {
  if (j.is_string()) os << j.get<std::string>();
  else os << j.dump();
}

inline bool is_scalar_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const Json& item : j)
    if (item.is_object() || item.is_array()) return false;
  return true;
}

inline bool is_row_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const Json& item : j)
    if (!is_scalar_array(item)) return false;
  return !j.empty();
}

inline void render_row(const Json& row, std::ostream& os) {
  bool first = true;
  for (const Json& item : row) {
    if (!first) os << " ";
    first = false;
    render_scalar(item, os);
  }
}

inline void render_text(const Json& j, std::ostream& os, int indent) {
  const std::string pad(indent, ' ');
  if (j.is_object()) {
    std::size_t width = 0;
    for (const auto& [key, value] : j.items()) width = std::max(width, key.size());
    for (const auto& [key, value] : j.items()) {
      if (is_row_array(value)) {
        os << pad << key << ":\n";
        for (const Json& row : value) {
          os << pad << "  - ";
          render_row(row, os);
          os << "\n";
        }
      } else if (value.is_object() || (value.is_array() && !is_scalar_array(value))) {
        os << pad << key << ":\n";
        render_text(value, os, indent + 2);
      } else {
        os << pad << std::left << std::setw(static_cast<int>(width) + 2) << key;
        if (is_scalar_array(value)) render_row(value, os);
        else render_scalar(value, os);
        os << "\n";
      }
    }
  } else if (j.is_array()) {
    int i = 0;
    for (const Json& item : j) {
      if (is_scalar_array(item)) {
        os << pad << "- ";
        render_row(item, os);
        os << "\n";
      } else {
        os << pad << "[" << i << "]\n";
        render_text(item, os, indent + 2);
      }
      ++i;
    }
  } else {
    os << pad;
    render_scalar(j, os);
    os << "\n";
  }
}

inline void emit(const Json& j, bool text, std::ostream& os) {
  if (text) render_text(j, os);
  else os << j.dump(2) << "\n";
}

}  // namespace cli_detail

/// Runs one CLI invocation; returns the process exit code. Errors are
/// reported as structured JSON on stdout carrying the originating module
/// error name verbatim.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  using cli_detail::CommonArgs;

  CLI::App app{"local structure of compactified Jacobians of nodal curves"};
  app.require_subcommand(1);
  CommonArgs common;

  const std::vector<std::string> commands = {"analyze",      "stability", "chambers",
                                             "convert",      "orientations",
                                             "circuits",     "presentation"};
  std::map<std::string, CLI::App*> subs;
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--input", common.input, "problem JSON file")->required();
    sub->add_flag("--text", common.text, "render aligned text instead of JSON");
    sub->add_option("--mode", common.mode, "jacobian | universal");
    sub->add_option("--degree-bound", common.degree_bound,
                    "degree bound for invariant monomial listings");
    sub->add_option("--tmax", common.t_max, "Hilbert-Samuel cutoff");
    if (name == "presentation")
      sub->add_option("--name", common.presentation_name,
                      "ring to present (default R_I, or R_XI in universal mode)");
    subs[name] = sub;
  }

  std::vector<const char*> argv;
  argv.push_back("jacloc");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }

  try {
    const ProblemSpec spec = cli_detail::load_spec(common);
    Json result;
    if (subs["analyze"]->parsed()) {
      result = cli_detail::analyze_json(spec);
    } else if (subs["stability"]->parsed()) {
      result["schema"] = kSchemaId;
      result["command"] = "stability";
      result.update(cli_detail::stability_json(spec));
    } else if (subs["chambers"]->parsed()) {
      result = cli_detail::chambers_json(spec);
    } else if (subs["convert"]->parsed()) {
      result = cli_detail::convert_json(spec);
    } else if (subs["orientations"]->parsed()) {
      result = cli_detail::orientations_json(spec);
    } else if (subs["circuits"]->parsed()) {
      result = cli_detail::circuits_json(spec);
    } else if (subs["presentation"]->parsed()) {
      RingName name = spec.mode == ModuliMode::Jacobian ? RingName::RI : RingName::RXI;
      if (!common.presentation_name.empty()) {
        auto parsed = ring_name_from_string(common.presentation_name);
        if (!parsed)
          throw SchemaError("unknown ring name: " + common.presentation_name);
        name = *parsed;
      }
      result["schema"] = kSchemaId;
      result["command"] = "presentation";
      result.update(cli_detail::presentation_json(spec, name));
    }
    cli_detail::emit(result, common.text, out);
    return 0;
  } catch (const SchemaError& e) {
    cli_detail::emit(error_json(e.name(), e.what()), common.text, out);
    return 2;
  } catch (const ScaleLimitError& e) {
    cli_detail::emit(error_json(e.name(), e.what()), common.text, out);
    return 4;
  } catch (const Error& e) {
    cli_detail::emit(error_json(e.name(), e.what()), common.text, out);
    return 3;
  }
}

}  // namespace jacloc
