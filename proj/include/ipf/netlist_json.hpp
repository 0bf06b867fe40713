#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "ipf/constants.hpp"
#include "ipf/errors.hpp"
#include "ipf/netlist.hpp"

namespace ipf {

// =============================================================================
// Netlist text format (JSON). Unit-suffixed parameter keys are mandatory:
// ohm, F, H, rad, Hz.
//
// {
//   "nodes": ["0", "in", "out"],
//   "elements": [
//     {"kind": "resistor",  "params": {"r_ohm": 50.0}, "terminals": ["in", "0"]},
//     {"kind": "capacitor", "params": {"c_f": 1e-14},  "terminals": ["in", "out"]},
//     {"kind": "inductor",  "params": {"l_h": 1e-9},   "terminals": ["out", "0"]},
//     {"kind": "mutual_inductor",
//      "params": {"l1_h": 1e-10, "l2_h": 1e-9, "k": 1.0},
//      "terminals": ["a", "b", "c", "d"]},
//     {"kind": "tline",
//      "params": {"z0_ohm": 50.0, "theta_ref_rad": 1.5708, "f_ref_hz": 5e9},
//      "terminals": ["in", "out"]},
//     {"kind": "vsource", "params": {"v_re": 1.0, "v_im": 0.0}, "terminals": ["in", "0"]},
//     {"kind": "isource", "params": {"i_re": 1.0, "i_im": 0.0}, "terminals": ["in", "0"]}
//   ],
//   "ports": [{"terminals": ["in", "0"], "z0_ohm": 50.0}]
// }
// =============================================================================

namespace detail {

inline double num_field(const nlohmann::json& obj, const std::string& key,
                        const std::string& ctx) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw ParseError(ctx + ": missing numeric field '" + key + "'");
  return obj[key].get<double>();
}

inline std::string str_field(const nlohmann::json& obj, const std::string& key,
                             const std::string& ctx) {
  if (!obj.contains(key) || !obj[key].is_string())
    throw ParseError(ctx + ": missing string field '" + key + "'");
  return obj[key].get<std::string>();
}

}  // namespace detail

inline Netlist netlist_from_json(const nlohmann::json& doc) {
  using detail::num_field;
  if (!doc.is_object()) throw ParseError("netlist: top level must be an object");
  if (!doc.contains("elements") || !doc["elements"].is_array())
    throw ParseError("netlist: missing 'elements' array");

  Netlist nl;
  bool ground_declared = false;
  if (doc.contains("nodes")) {
    if (!doc["nodes"].is_array()) throw ParseError("netlist: 'nodes' must be an array");
    for (const auto& n : doc["nodes"]) {
      if (!n.is_string()) throw ParseError("netlist: node names must be strings");
      const std::string name = n.get<std::string>();
      if (Netlist::is_ground_name(name)) ground_declared = true;
      nl.add_node(name);
    }
  }
  if (doc.contains("nodes") && !ground_declared)
    throw ParseError("netlist: node list must include the ground node '0'");

  auto terminal = [&](const nlohmann::json& el, std::size_t i, const std::string& ctx) {
    const auto& terms = el["terminals"];
    if (i >= terms.size() || !terms[i].is_string())
      throw ParseError(ctx + ": bad terminal list");
    const std::string name = terms[i].get<std::string>();
    if (doc.contains("nodes") && !nl.has_node(name))
      throw ParseError(ctx + ": terminal references undeclared node '" + name + "'");
    return nl.add_node(name);
  };

  std::size_t idx = 0;
  for (const auto& el : doc["elements"]) {
    const std::string ctx = "element[" + std::to_string(idx++) + "]";
    const std::string kind = detail::str_field(el, "kind", ctx);
    if (!el.contains("params") || !el["params"].is_object())
      throw ParseError(ctx + ": missing 'params' object");
    if (!el.contains("terminals") || !el["terminals"].is_array())
      throw ParseError(ctx + ": missing 'terminals' array");
    const auto& p = el["params"];
    const std::string name = el.value("name", std::string{});

    if (kind == "resistor") {
      nl.add_resistor(terminal(el, 0, ctx), terminal(el, 1, ctx),
                      num_field(p, "r_ohm", ctx), name);
    } else if (kind == "capacitor") {
      nl.add_capacitor(terminal(el, 0, ctx), terminal(el, 1, ctx),
                       num_field(p, "c_f", ctx), name);
    } else if (kind == "inductor") {
      nl.add_inductor(terminal(el, 0, ctx), terminal(el, 1, ctx),
                      num_field(p, "l_h", ctx), name);
    } else if (kind == "mutual_inductor") {
      nl.add_coupled_inductors(terminal(el, 0, ctx), terminal(el, 1, ctx),
                               terminal(el, 2, ctx), terminal(el, 3, ctx),
                               num_field(p, "l1_h", ctx), num_field(p, "l2_h", ctx),
                               num_field(p, "k", ctx), name);
    } else if (kind == "tline") {
      nl.add_tline(terminal(el, 0, ctx), terminal(el, 1, ctx),
                   num_field(p, "z0_ohm", ctx), num_field(p, "theta_ref_rad", ctx),
                   hz_to_rad(num_field(p, "f_ref_hz", ctx)), name);
    } else if (kind == "vsource") {
      nl.add_voltage_source(terminal(el, 0, ctx), terminal(el, 1, ctx),
                            Complex{num_field(p, "v_re", ctx), num_field(p, "v_im", ctx)},
                            name);
    } else if (kind == "isource") {
      nl.add_current_source(terminal(el, 0, ctx), terminal(el, 1, ctx),
                            Complex{num_field(p, "i_re", ctx), num_field(p, "i_im", ctx)},
                            name);
    } else {
      throw ParseError(ctx + ": unknown element kind '" + kind + "'");
    }
  }

  if (doc.contains("ports")) {
    if (!doc["ports"].is_array()) throw ParseError("netlist: 'ports' must be an array");
    std::size_t pidx = 0;
    for (const auto& port : doc["ports"]) {
      const std::string ctx = "port[" + std::to_string(pidx++) + "]";
      if (!port.contains("terminals") || !port["terminals"].is_array() ||
          port["terminals"].size() != 2)
        throw ParseError(ctx + ": needs a 2-entry 'terminals' array");
      nl.add_port(terminal(port, 0, ctx), terminal(port, 1, ctx),
                  detail::num_field(port, "z0_ohm", ctx));
    }
  }

  nl.validate();
  return nl;
}

inline nlohmann::json netlist_to_json(const Netlist& nl) {
  nlohmann::json doc;
  auto& nodes = doc["nodes"] = nlohmann::json::array();
  nodes.push_back("0");
  for (std::size_t i = 0; i < nl.num_nodes(); ++i)
    nodes.push_back(nl.node_name(static_cast<NodeId>(i)));

  auto& elements = doc["elements"] = nlohmann::json::array();
  for (const auto& el : nl.elements()) {
    nlohmann::json e;
    nlohmann::json params;
    std::visit(
        [&](const auto& dev) {
          using T = std::decay_t<decltype(dev)>;
          if constexpr (std::is_same_v<T, Resistor>) {
            e["kind"] = "resistor";
            params["r_ohm"] = dev.ohms;
          } else if constexpr (std::is_same_v<T, Capacitor>) {
            e["kind"] = "capacitor";
            params["c_f"] = dev.farads;
          } else if constexpr (std::is_same_v<T, Inductor>) {
            e["kind"] = "inductor";
            params["l_h"] = dev.henries;
          } else if constexpr (std::is_same_v<T, CoupledInductors>) {
            e["kind"] = "mutual_inductor";
            params["l1_h"] = dev.l1_h;
            params["l2_h"] = dev.l2_h;
            params["k"] = dev.k;
          } else if constexpr (std::is_same_v<T, TransmissionLine>) {
            e["kind"] = "tline";
            params["z0_ohm"] = dev.z0_ohm;
            params["theta_ref_rad"] = dev.theta_ref_rad;
            params["f_ref_hz"] = rad_to_hz(dev.omega_ref);
          } else if constexpr (std::is_same_v<T, VoltageSource>) {
            e["kind"] = "vsource";
            params["v_re"] = dev.volts.real();
            params["v_im"] = dev.volts.imag();
          } else if constexpr (std::is_same_v<T, CurrentSource>) {
            e["kind"] = "isource";
            params["i_re"] = dev.amps.real();
            params["i_im"] = dev.amps.imag();
          }
        },
        el.device);
    e["params"] = std::move(params);
    auto& terms = e["terminals"] = nlohmann::json::array();
    for (NodeId n : el.nodes) terms.push_back(nl.node_name(n));
    if (!el.name.empty()) e["name"] = el.name;
    elements.push_back(std::move(e));
  }

  auto& ports = doc["ports"] = nlohmann::json::array();
  for (const auto& p : nl.ports()) {
    nlohmann::json jp;
    jp["terminals"] = {nl.node_name(p.pos), nl.node_name(p.neg)};
    jp["z0_ohm"] = p.z0_ohm;
    ports.push_back(std::move(jp));
  }
  return doc;
}

/// Parse a JSON document, converting byte offsets in parse errors to
/// line/column diagnostics.
inline nlohmann::json parse_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open: " + path.string());
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < err.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(path.string() + ":" + std::to_string(line) + ":" +
                     std::to_string(col) + ": " + err.what());
  }
}

inline Netlist load_netlist(const std::filesystem::path& path) {
  return netlist_from_json(parse_json_file(path));
}

inline void save_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open for writing: " + path.string());
  os << doc.dump(2) << "\n";
  if (!os) throw Error("write failed: " + path.string());
}

}  // namespace ipf
