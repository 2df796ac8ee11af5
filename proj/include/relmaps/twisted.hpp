#pragma once
// Stacky bookkeeping for twisted maps: coprime reduction of weighted
// projective targets, divisibility checks on stabilizer orders,
// minimal-stabilizer assignment, and the translation from elliptic-surface
// configurations (marked multiplicative fibers, j-map degrees) to dual map
// graphs over P(4,6).

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relmaps/conditions.hpp"
#include "relmaps/errors.hpp"
#include "relmaps/graph.hpp"
#include "relmaps/json_io.hpp"
#include "relmaps/smoothing.hpp"
#include "relmaps/target.hpp"

namespace relmaps {

// ---------------------------------------------------------------------------
// Coprime reduction

struct CoprimeReduction {
    long long a = 1;
    long long b = 1;
    long long k = 1;  // the common factor: input = (k*a, k*b)

    auto operator<=>(const CoprimeReduction&) const = default;
};

// P(a,b) -> P(a/k, b/k) with k = gcd(a,b); the induced cover of targets is
// etale, so smoothability questions reduce to the coprime case.
inline CoprimeReduction coprime_reduce(long long a, long long b) {
    if (a < 1 || b < 1)
        throw input_error("coprime_reduce requires positive weights, got (" +
                          std::to_string(a) + "," + std::to_string(b) + ")");
    const long long k = std::gcd(a, b);
    return {a / k, b / k, k};
}

// ---------------------------------------------------------------------------
// Stabilizer checks

struct StabilizerIssue {
    std::string kind;  // "mark_stabilizer" | "edge_stabilizer"
    int mark = -1;
    int edge = -1;
    long long stabilizer = 1;
    long long must_divide = 1;
    std::string message;

    auto operator<=>(const StabilizerIssue&) const = default;
};

struct StabilizerReport {
    bool pass = true;
    std::vector<StabilizerIssue> issues;
    std::vector<std::pair<int, long long>> node_orders;  // (edge id, stabilizer)
};

// Representability bookkeeping: a mark lying over a relative point (which has
// the target's generic stabilizer) must carry a stabilizer dividing the
// generic order; node stabilizers are free data, recorded and required
// positive by validate.
inline StabilizerReport check_stabilizers(const DualMapGraph& g, const StackyTarget& target) {
    require_valid(g, "check_stabilizers");
    target.check();
    StabilizerReport report;
    for (const auto& m : g.marks) {
        if (!m.target || !m.target->is_relative()) continue;
        if (target.generic_order % m.stabilizer != 0) {
            report.pass = false;
            report.issues.push_back(
                {"mark_stabilizer", m.id, -1, m.stabilizer, target.generic_order,
                 "mark " + std::to_string(m.id) + " over relative point '" + m.target->label +
                     "' has stabilizer " + std::to_string(m.stabilizer) +
                     ", which does not divide the generic stabilizer order " +
                     std::to_string(target.generic_order)});
        }
    }
    for (const auto& e : g.edges) report.node_orders.emplace_back(e.id, e.stabilizer);
    return report;
}

// ---------------------------------------------------------------------------
// Minimal stabilizers

struct StabilizerAssignment {
    std::map<int, long long> marks;  // mark id -> minimal stabilizer order
    std::map<int, long long> edges;  // edge id -> minimal stabilizer order
};

namespace tdetail {

// Minimal s >= 1 with b | s*c.
inline long long minimal_order(long long b, long long c) {
    if (b < 1 || c < 1)
        throw input_error("stabilizer assignment needs positive order and contact exponent");
    return b / std::gcd(b, c);
}

}  // namespace tdetail

// The minimal stabilizer order at each mark and node making the map
// representable: at a point with contact exponent c over a target point of
// stabilizer order b, the minimal order s with b | s*c, i.e. b/gcd(b,c).
// Nodes joining two active branches take the lcm of both branches' demands;
// nodes of constant components impose nothing.
inline StabilizerAssignment minimal_stabilizers(const DualMapGraph& g,
                                                const StackyTarget& target) {
    require_valid(g, "minimal_stabilizers");
    target.check();
    GraphIndex ix(g);
    StabilizerAssignment out;
    for (const auto& m : g.marks) {
        const long long b = m.target ? target.order_at(*m.target) : target.generic_order;
        const long long c = m.tangency > 0 ? m.tangency : m.ramification;
        out.marks[m.id] = tdetail::minimal_order(b, c);
    }

    // Image point of each contracted component.
    std::map<int, int> comp;
    for (const auto& v : g.vertices)
        if (v.contracted()) comp[v.id] = v.id;
    std::function<int(int)> find = [&](int x) {
        while (comp[x] != x) { comp[x] = comp[comp[x]]; x = comp[x]; }
        return x;
    };
    for (const auto& e : g.edges) {
        const Vertex& p = ix.v(e.endpoints.first);
        const Vertex& q = ix.v(e.endpoints.second);
        if (p.contracted() && q.contracted()) {
            int ra = find(p.id), rb = find(q.id);
            if (ra != rb) comp[std::max(ra, rb)] = std::min(ra, rb);
        }
    }
    std::map<int, std::optional<TargetPointId>> comp_target;
    for (const auto& v : g.vertices)
        if (v.contracted()) {
            auto& slot = comp_target[find(v.id)];
            if (v.target) slot = v.target;
        }

    for (const auto& e : g.edges) {
        const Vertex& p = ix.v(e.endpoints.first);
        const Vertex& q = ix.v(e.endpoints.second);
        if (p.contracted() && q.contracted()) {
            out.edges[e.id] = 1;  // the map is constant near the node
            continue;
        }
        if (p.active() && q.active()) {
            const long long b =
                e.over ? target.order_at(*e.over) : target.generic_order;
            out.edges[e.id] = std::lcm(tdetail::minimal_order(b, e.ramification_at(p.id)),
                                       tdetail::minimal_order(b, e.ramification_at(q.id)));
            continue;
        }
        const Vertex& contracted = p.contracted() ? p : q;
        const auto& t = comp_target[find(contracted.id)];
        const long long b = t ? target.order_at(*t) : target.generic_order;
        out.edges[e.id] = tdetail::minimal_order(b, e.ramification);
    }
    return out;
}

// Enlarge a simple extension so it also realizes the stabilizer assignment:
// characteristic multipliers combine by lcm.
inline SimpleExtension compose_extension(const SimpleExtension& ext,
                                         const StabilizerAssignment& stabs) {
    SimpleExtension out = ext;
    for (auto& [id, m] : out.edge_multipliers) {
        auto it = stabs.edges.find(id);
        if (it != stabs.edges.end()) m = lcm(m, Int(it->second));
    }
    for (auto& [id, m] : out.mark_multipliers) {
        auto it = stabs.marks.find(id);
        if (it != stabs.marks.end()) m = lcm(m, Int(it->second));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Elliptic-surface translation

// One component of the base-curve configuration of an elliptic surface: the
// degree of its j-map (or constant j = infinity), with the multiplicative
// singular fibers that are marked.
struct EllipticComponent {
    int id = 0;
    bool constant_j = false;         // constant j = infinity: contracted
    int j_degree = 0;                // non-constant components: deg j >= 1
    std::vector<int> marked_fibers;  // orders n of marked I_n fibers
};

struct EllipticEdge {
    int id = 0;
    std::pair<int, int> components{0, 0};
    long long ramification = 1;  // local index of j at the node (moving side)
};

struct EllipticConfig {
    std::vector<EllipticComponent> components;
    std::vector<EllipticEdge> edges;
};

struct EllipticTranslation {
    DualMapGraph graph;     // over P(4,6), the moduli of elliptic curves
    TangencyData gamma;     // one relative point "inf"; tangency n per marked I_n
    bool smoothable = false;
    ConditionReport report;
};

inline const std::string kEllipticInfinity = "inf";

// Translate a marked elliptic-surface configuration to a dual map graph over
// P(4,6): components with j-degree m become active vertices of degree m,
// constant-j components become contracted vertices over j = infinity, and a
// marked I_n fiber becomes a mark of tangency n over that point (j has a pole
// of order n at a multiplicative fiber).  The smoothability verdict is
// membership in the smoothable locus for the resulting prescription.
inline EllipticTranslation elliptic_to_gamma(const EllipticConfig& cfg) {
    EllipticTranslation out;
    DualMapGraph& g = out.graph;
    g.target = StackyTarget::weighted_projective(4, 6);

    int total_degree = 0;
    int marked_total = 0;
    std::map<int, const EllipticComponent*> by_id;
    for (const auto& comp : cfg.components) {
        if (!by_id.emplace(comp.id, &comp).second)
            throw input_error("elliptic component id " + std::to_string(comp.id) +
                              " appears twice");
        if (comp.constant_j) {
            if (comp.j_degree != 0)
                throw input_error("component " + std::to_string(comp.id) +
                                  ": constant-j components must not carry a j-degree");
        } else {
            if (comp.j_degree < 1)
                throw input_error("component " + std::to_string(comp.id) +
                                  ": j-degree must be at least 1");
            total_degree += comp.j_degree;
            int marked_here = 0;
            for (int n : comp.marked_fibers) marked_here += n;
            if (marked_here > comp.j_degree)
                throw input_error("component " + std::to_string(comp.id) +
                                  ": marked fiber orders sum to " +
                                  std::to_string(marked_here) + ", exceeding j-degree " +
                                  std::to_string(comp.j_degree));
        }
        for (int n : comp.marked_fibers)
            if (n < 1)
                throw input_error("component " + std::to_string(comp.id) +
                                  ": marked fiber order must be positive");
    }
    if (cfg.components.empty()) throw input_error("elliptic configuration has no components");

    g.degree = total_degree;
    int next_mark = 0;
    std::vector<int> tangencies;
    for (const auto& comp : cfg.components) {
        if (comp.constant_j)
            g.vertices.push_back({comp.id, VertexRole::contracted, 0,
                                  TargetPointId::relative(kEllipticInfinity)});
        else
            g.vertices.push_back({comp.id, VertexRole::active, comp.j_degree, std::nullopt});
        for (int n : comp.marked_fibers) {
            g.marks.push_back({next_mark++, comp.id, n, std::max(n, 1),
                               TargetPointId::relative(kEllipticInfinity), 1});
            tangencies.push_back(n);
            marked_total += n;
        }
    }
    for (const auto& e : cfg.edges) {
        auto pit = by_id.find(e.components.first);
        auto qit = by_id.find(e.components.second);
        if (pit == by_id.end() || qit == by_id.end())
            throw input_error("elliptic edge " + std::to_string(e.id) +
                              " references an unknown component");
        const bool p_const = pit->second->constant_j;
        const bool q_const = qit->second->constant_j;
        if (!p_const && !q_const) {
            if (e.ramification != 1)
                throw input_error(
                    "elliptic edge " + std::to_string(e.id) +
                    ": a node between two moving components lies over an unconstrained "
                    "point and must be unramified");
            g.edges.push_back({e.id, e.components, 1, std::nullopt, 1, std::nullopt});
        } else {
            g.edges.push_back({e.id, e.components, e.ramification, std::nullopt, 1,
                               std::nullopt});
        }
    }

    if (marked_total > total_degree)
        throw input_error("marked fiber orders sum to " + std::to_string(marked_total) +
                          ", exceeding the total j-degree " + std::to_string(total_degree));
    if (marked_total < total_degree) g.set_full_fiber(kEllipticInfinity, false);

    std::sort(tangencies.begin(), tangencies.end(), std::greater<int>());
    out.gamma.free_marks = 0;
    out.gamma.relative.push_back({kEllipticInfinity, tangencies});

    require_valid(g, "elliptic_to_gamma");
    out.report = check_relative(g, out.gamma);
    out.smoothable = all_pass(out.report);
    return out;
}

// Parse a marked fiber entry: an integer n, or a Kodaira symbol "In" / "I_n"
// with n >= 1.  Everything else (additive types) is outside the modeled
// multiplicative-fiber dictionary.
inline int parse_fiber_symbol(const JsonReader& f) {
    if (f.raw().is_number_integer()) {
        const long long n = f.raw().get<long long>();
        if (n < 1) f.fail("marked fiber order must be positive");
        return static_cast<int>(n);
    }
    if (f.raw().is_string()) {
        const std::string s = f.raw().get<std::string>();
        if (s.size() >= 2 && (s[0] == 'I' || s[0] == 'i') && s.back() != '*') {
            const std::string digits = s.substr(s[1] == '_' ? 2 : 1);
            if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](unsigned char c) {
                    return std::isdigit(c) != 0;
                })) {
                const int n = std::stoi(digits);
                if (n < 1) f.fail("marked fiber 'I0' is additive, not multiplicative");
                return n;
            }
        }
        f.fail("marked fiber '" + s +
               "' is not a multiplicative type I_n; only multiplicative fibers are modeled");
    }
    f.fail("marked fiber must be an integer order or an 'In' symbol");
}

inline EllipticConfig elliptic_config_from_json(const nlohmann::json& j) {
    JsonReader root(j, "$");
    root.allow_keys({"schema", "components", "edges"});
    require_schema_version(root);
    EllipticConfig cfg;
    JsonReader comps = root.at("components");
    for (std::size_t i = 0; i < comps.size(); ++i) {
        JsonReader c = comps.item(i);
        c.allow_keys({"id", "constant_j", "j_degree", "marked_fibers"});
        EllipticComponent comp;
        comp.id = c.at("id").as_int();
        if (auto cj = c.opt("constant_j")) comp.constant_j = cj->as_bool();
        if (auto jd = c.opt("j_degree")) comp.j_degree = jd->as_int();
        if (auto mf = c.opt("marked_fibers")) {
            for (std::size_t k = 0; k < mf->size(); ++k)
                comp.marked_fibers.push_back(parse_fiber_symbol(mf->item(k)));
        }
        cfg.components.push_back(std::move(comp));
    }
    if (auto edges = root.opt("edges")) {
        for (std::size_t i = 0; i < edges->size(); ++i) {
            JsonReader e = edges->item(i);
            e.allow_keys({"id", "components", "ramification"});
            EllipticEdge edge;
            edge.id = e.at("id").as_int();
            JsonReader ends = e.at("components");
            if (ends.size() != 2) e.fail("edge endpoints must list exactly two components");
            edge.components = {ends.item(0).as_int(), ends.item(1).as_int()};
            if (auto r = e.opt("ramification")) edge.ramification = r->as_integer_min(1);
            cfg.edges.push_back(std::move(edge));
        }
    }
    return cfg;
}

inline nlohmann::json to_json(const EllipticConfig& cfg) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : cfg.components) {
        nlohmann::json jc{{"id", c.id}, {"marked_fibers", c.marked_fibers}};
        if (c.constant_j) jc["constant_j"] = true;
        else jc["j_degree"] = c.j_degree;
        comps.push_back(std::move(jc));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : cfg.edges)
        edges.push_back({{"id", e.id},
                         {"components", {e.components.first, e.components.second}},
                         {"ramification", e.ramification}});
    return {{"schema", 1}, {"components", comps}, {"edges", edges}};
}

inline nlohmann::json to_json(const CoprimeReduction& r) {
    return {{"a", r.a}, {"b", r.b}, {"k", r.k}};
}

inline nlohmann::json to_json(const StabilizerIssue& i) {
    nlohmann::json j{{"kind", i.kind},
                     {"stabilizer", i.stabilizer},
                     {"must_divide", i.must_divide},
                     {"message", i.message}};
    if (i.mark >= 0) j["mark"] = i.mark;
    if (i.edge >= 0) j["edge"] = i.edge;
    return j;
}

inline nlohmann::json to_json(const StabilizerReport& r) {
    nlohmann::json issues = nlohmann::json::array();
    for (const auto& i : r.issues) issues.push_back(to_json(i));
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& [edge, order] : r.node_orders)
        nodes.push_back({{"edge", edge}, {"stabilizer", order}});
    return {{"schema", 1}, {"pass", r.pass}, {"issues", issues}, {"nodes", nodes}};
}

inline nlohmann::json to_json(const StabilizerAssignment& a) {
    nlohmann::json marks = nlohmann::json::object(), edges = nlohmann::json::object();
    for (const auto& [id, s] : a.marks) marks[std::to_string(id)] = s;
    for (const auto& [id, s] : a.edges) edges[std::to_string(id)] = s;
    return {{"schema", 1}, {"marks", marks}, {"edges", edges}};
}

inline nlohmann::json to_json(const EllipticTranslation& t) {
    return {{"schema", 1},
            {"smoothable", t.smoothable},
            {"graph", to_json(t.graph)},
            {"gamma", to_json(t.gamma)},
            {"report", to_json(t.report)}};
}

}  // namespace relmaps
