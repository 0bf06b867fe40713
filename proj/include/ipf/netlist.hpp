#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ipf/constants.hpp"
#include "ipf/errors.hpp"

namespace ipf {

// =============================================================================
// Linear frequency-domain circuit description.
//
// Nodes are referenced by index; ground is the fixed index -1 and is named
// "0" or "gnd". Inductors, coupled pairs and voltage sources carry explicit
// branch-current unknowns so that k = 1 coupled pairs remain solvable.
// =============================================================================

using NodeId = int;
inline constexpr NodeId ground_node = -1;

struct Resistor {
  double ohms;
};

struct Capacitor {
  double farads;
};

struct Inductor {
  double henries;
};

/// Two magnetically coupled windings. Terminal order fixes the dot
/// convention: the first terminal of each winding carries the dot, and the
/// mutual term is M = k*sqrt(l1*l2) for branch currents entering the dots.
struct CoupledInductors {
  double l1_h;
  double l2_h;
  double k;
  double mutual() const { return k * std::sqrt(l1_h * l2_h); }
};

/// Lossless transmission line, both ends referenced to ground.
/// Electrical length scales linearly with frequency:
///   theta(omega) = theta_ref * omega / omega_ref.
struct TransmissionLine {
  double z0_ohm;
  double theta_ref_rad;
  double omega_ref;
  double theta(double omega) const { return theta_ref_rad * omega / omega_ref; }
};

/// Ideal source, used only for probing (admittance/S-parameter extraction).
struct VoltageSource {
  Complex volts;
};

struct CurrentSource {
  Complex amps;
};

using Device = std::variant<Resistor, Capacitor, Inductor, CoupledInductors,
                            TransmissionLine, VoltageSource, CurrentSource>;

struct Element {
  Device device;
  std::vector<NodeId> nodes;  // 2 terminals; 4 for coupled pairs
  std::string name;
};

struct Port {
  NodeId pos = ground_node;
  NodeId neg = ground_node;
  double z0_ohm = 50.0;
};

class Netlist {
 public:
  // --- nodes ---

  /// Add (or look up) a named node and return its index. "0" and "gnd"
  /// always map to ground.
  NodeId add_node(const std::string& name) {
    if (is_ground_name(name)) return ground_node;
    auto it = node_ids_.find(name);
    if (it != node_ids_.end()) return it->second;
    NodeId id = static_cast<NodeId>(node_names_.size());
    node_ids_.emplace(name, id);
    node_names_.push_back(name);
    return id;
  }

  NodeId node(const std::string& name) const {
    if (is_ground_name(name)) return ground_node;
    auto it = node_ids_.find(name);
    if (it == node_ids_.end()) throw InvalidNetlist("unknown node: " + name);
    return it->second;
  }

  bool has_node(const std::string& name) const {
    return is_ground_name(name) || node_ids_.count(name) != 0;
  }

  const std::string& node_name(NodeId id) const {
    static const std::string gnd = "0";
    if (id == ground_node) return gnd;
    return node_names_.at(static_cast<std::size_t>(id));
  }

  std::size_t num_nodes() const { return node_names_.size(); }

  static bool is_ground_name(const std::string& name) {
    return name == "0" || name == "gnd" || name == "GND";
  }

  // --- elements ---

  std::size_t add_element(Device dev, std::vector<NodeId> nodes, std::string name = {}) {
    elements_.push_back(Element{std::move(dev), std::move(nodes), std::move(name)});
    return elements_.size() - 1;
  }

  std::size_t add_resistor(NodeId a, NodeId b, double ohms, std::string name = {}) {
    return add_element(Resistor{ohms}, {a, b}, std::move(name));
  }
  std::size_t add_capacitor(NodeId a, NodeId b, double farads, std::string name = {}) {
    return add_element(Capacitor{farads}, {a, b}, std::move(name));
  }
  std::size_t add_inductor(NodeId a, NodeId b, double henries, std::string name = {}) {
    return add_element(Inductor{henries}, {a, b}, std::move(name));
  }
  std::size_t add_coupled_inductors(NodeId p1, NodeId p2, NodeId s1, NodeId s2,
                                    double l1_h, double l2_h, double k,
                                    std::string name = {}) {
    return add_element(CoupledInductors{l1_h, l2_h, k}, {p1, p2, s1, s2}, std::move(name));
  }
  std::size_t add_tline(NodeId a, NodeId b, double z0_ohm, double theta_ref_rad,
                        double omega_ref, std::string name = {}) {
    return add_element(TransmissionLine{z0_ohm, theta_ref_rad, omega_ref}, {a, b},
                       std::move(name));
  }
  std::size_t add_voltage_source(NodeId pos, NodeId neg, Complex volts,
                                 std::string name = {}) {
    return add_element(VoltageSource{volts}, {pos, neg}, std::move(name));
  }
  std::size_t add_current_source(NodeId pos, NodeId neg, Complex amps,
                                 std::string name = {}) {
    return add_element(CurrentSource{amps}, {pos, neg}, std::move(name));
  }

  const std::vector<Element>& elements() const { return elements_; }
  std::vector<Element>& elements() { return elements_; }

  // --- ports ---

  std::size_t add_port(NodeId pos, NodeId neg, double z0_ohm) {
    if (!(z0_ohm > 0.0) || !std::isfinite(z0_ohm))
      throw InvalidNetlist("port reference impedance must be positive and finite");
    ports_.push_back(Port{pos, neg, z0_ohm});
    return ports_.size() - 1;
  }

  const std::vector<Port>& ports() const { return ports_; }
  std::vector<Port>& ports() { return ports_; }

  /// Copy of this netlist keeping only the selected ports (same order as
  /// given). Elements and nodes are untouched.
  Netlist with_ports(const std::vector<std::size_t>& keep) const {
    Netlist out = *this;
    out.ports_.clear();
    for (std::size_t i : keep) out.ports_.push_back(ports_.at(i));
    return out;
  }

  // --- validation ---

  /// Check structural invariants; throws InvalidNetlist on violation.
  void validate() const {
    for (const auto& el : elements_) validate_element(el);
    for (const auto& p : ports_) {
      check_node(p.pos);
      check_node(p.neg);
      if (!(p.z0_ohm > 0.0) || !std::isfinite(p.z0_ohm))
        throw InvalidNetlist("port reference impedance must be positive and finite");
    }
    check_ground_connectivity();
  }

 private:
  std::vector<std::string> node_names_;
  std::unordered_map<std::string, NodeId> node_ids_;
  std::vector<Element> elements_;
  std::vector<Port> ports_;

  void check_node(NodeId id) const {
    if (id == ground_node) return;
    if (id < 0 || static_cast<std::size_t>(id) >= node_names_.size())
      throw InvalidNetlist("element references undeclared node");
  }

  static void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidNetlist(std::string(what) + " must be positive and finite");
  }

  void validate_element(const Element& el) const {
    for (NodeId n : el.nodes) check_node(n);
    std::visit(
        [&](const auto& dev) {
          using T = std::decay_t<decltype(dev)>;
          if constexpr (std::is_same_v<T, CoupledInductors>) {
            if (el.nodes.size() != 4)
              throw InvalidNetlist("coupled pair needs 4 terminals");
            require_positive(dev.l1_h, "L1");
            require_positive(dev.l2_h, "L2");
            if (!(dev.k >= 0.0 && dev.k <= 1.0))
              throw InvalidNetlist("coupling coefficient must satisfy 0 <= k <= 1");
          } else {
            if (el.nodes.size() != 2)
              throw InvalidNetlist("two-terminal element needs 2 terminals");
            if constexpr (std::is_same_v<T, Resistor>) require_positive(dev.ohms, "R");
            if constexpr (std::is_same_v<T, Capacitor>) require_positive(dev.farads, "C");
            if constexpr (std::is_same_v<T, Inductor>) require_positive(dev.henries, "L");
            if constexpr (std::is_same_v<T, TransmissionLine>) {
              require_positive(dev.z0_ohm, "Z0");
              require_positive(dev.theta_ref_rad, "theta_ref");
              require_positive(dev.omega_ref, "omega_ref");
            }
          }
        },
        el.device);
  }

  // Every node must have a galvanic path to ground. Coupled-pair windings do
  // not conduct across; a transmission line ties both ends to ground.
  void check_ground_connectivity() const {
    const std::size_t n = node_names_.size();
    std::vector<std::size_t> parent(n + 1);
    for (std::size_t i = 0; i <= n; ++i) parent[i] = i;
    const std::size_t gnd = n;
    auto slot = [&](NodeId id) {
      return id == ground_node ? gnd : static_cast<std::size_t>(id);
    };
    std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

    for (const auto& el : elements_) {
      if (std::holds_alternative<CoupledInductors>(el.device)) {
        unite(slot(el.nodes[0]), slot(el.nodes[1]));
        unite(slot(el.nodes[2]), slot(el.nodes[3]));
      } else if (std::holds_alternative<TransmissionLine>(el.device)) {
        unite(slot(el.nodes[0]), gnd);
        unite(slot(el.nodes[1]), gnd);
      } else {
        unite(slot(el.nodes[0]), slot(el.nodes[1]));
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (find(i) != find(gnd))
        throw InvalidNetlist("node '" + node_names_[i] + "' has no path to ground");
    }
  }
};

}  // namespace ipf
