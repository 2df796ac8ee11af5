// Explicit smoothing recipes and their exact-rational certificates.
//
// Fix a relative point x and a graph that is reduced over x (every contracted
// subtree over x is a single vertex E_i).  Writing e_ij for the ramification
// of the edge joining E_i to the active component C_j and r_ij >= 1 for an
// optional multiplier (default 1), the recipe assigns
//
//     a_i  = prod_j (r_ij e_ij)                  (coefficient of E_i)
//     m_ij = a_i / e_ij = r_ij prod_{k != j} (r_ik e_ik)
//
// so that a_i / m_ij = e_ij exactly — the pullback multiplicity along the
// node is independent of the multipliers, which only deepen the singularity.
// The node E_i ∩ C_j acquires an A_{m_ij - 1} total-space singularity, a node
// stabilizer of order m_ij and a smoothing exponent m_ij (local equation
// xy = z^{m_ij}); these three numbers coincide and are recorded once.  Since
// r_ij divides m_ij, prescribing divisibility targets is direct.
//
// verify_intersections recomputes, in exact rationals, the intersection
// numbers on the one-parameter total space:  E_i·C_j = 1/m_ij at a shared
// node, E_i·E_k = 0 for i != k, E_i^2 = -sum_j 1/m_ij, D·E_i = sum of
// tangencies of marks on E_i.  It then certifies the two identities
//
//     a_i E_i·C_j = e_ij               (pullback identity)
//     (D + sum_k a_k E_k)·E_i = 0      (descent identity)
//
// The descent identity at E_i is equivalent to the ramification-balance
// condition there — for every choice of multipliers — so the verifier
// doubles as an independent certificate (or refutation) of smoothability.
// verify_degree_zero performs the companion componentwise count: the divisor
// D + sum a_i E_i - B (B = the fiber class, of degree deg(v) on an active
// component and 0 on a contracted one) must restrict to degree 0 everywhere.
//
// The computation is intentionally permitted on graphs that fail the balance
// condition: the verifiers then pinpoint exactly the unbalanced components.
#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"

#include "relmaps/errors.hpp"
#include "relmaps/graph.hpp"
#include "relmaps/numeric.hpp"

namespace relmaps {

struct SmoothingNode {
    int edge = 0;           // edge id of the node E_i ∩ C_j
    int active_vertex = 0;  // id of C_j
    long long e = 1;        // edge ramification e_ij
    long long r = 1;        // multiplier r_ij
    Int m = 1;              // order m_ij = singularity A_{m-1} = node stabilizer = exponent

    std::string singularity() const { return "A_" + Int(m - 1).str(); }
};

struct SmoothingComponent {
    int vertex = 0;  // id of the contracted component E_i
    Int a = 1;       // coefficient a_i
    std::vector<SmoothingNode> nodes;  // in edge-id order
};

struct SmoothingRecipe {
    std::string point;  // relative-point label
    std::vector<SmoothingComponent> components;  // in vertex-id order

    const SmoothingComponent* component(int vertex) const {
        for (const auto& c : components)
            if (c.vertex == vertex) return &c;
        return nullptr;
    }
};

// ---------------------------------------------------------------------------
// Recipe computation

using MultiplierMap = std::map<int, long long>;  // edge id -> r

// Computes the smoothing recipe over one relative point.  Pre: the graph
// validates and is reduced over the point.  The balance condition is *not*
// required; the verifiers below certify or refute it.
inline SmoothingRecipe recipe(const DualMapGraph& g, const std::string& point,
                              const MultiplierMap& multipliers = {}) {
    require_valid(g, "recipe");
    const TargetPointId x = TargetPointId::relative(point);
    if (!is_reduced_over(g, x))
        throw input_error("recipe: graph is not reduced over '" + point +
                          "' (adjacent contracted components remain)");
    for (const auto& [edge_id, r] : multipliers)
        if (r < 1)
            throw input_error("recipe: multiplier for edge " + std::to_string(edge_id) +
                              " must be >= 1");

    GraphIndex ix(g);
    SmoothingRecipe rec;
    rec.point = point;

    std::vector<const Vertex*> contracted;
    for (const auto& v : g.vertices)
        if (v.contracted_to(x)) contracted.push_back(&v);
    std::sort(contracted.begin(), contracted.end(),
              [](const Vertex* a, const Vertex* b) { return a->id < b->id; });

    std::set<int> touched_edges;
    for (const Vertex* v : contracted) {
        SmoothingComponent comp;
        comp.vertex = v->id;
        std::vector<const Edge*> edges = ix.edges_at.at(v->id);
        std::sort(edges.begin(), edges.end(),
                  [](const Edge* a, const Edge* b) { return a->id < b->id; });
        for (const Edge* e : edges) {
            SmoothingNode node;
            node.edge = e->id;
            node.active_vertex = e->other(v->id);
            node.e = e->ramification;
            auto it = multipliers.find(e->id);
            node.r = it == multipliers.end() ? 1 : it->second;
            comp.nodes.push_back(std::move(node));
            touched_edges.insert(e->id);
        }
        comp.a = 1;
        for (const auto& n : comp.nodes) comp.a *= Int(n.r) * n.e;
        // m_ij = a_i / e_ij = r_ij * prod_{k != j} (r_ik e_ik): exact division.
        for (auto& n : comp.nodes) n.m = comp.a / n.e;
        rec.components.push_back(std::move(comp));
    }

    for (const auto& [edge_id, r] : multipliers)
        if (!touched_edges.count(edge_id))
            throw input_error("recipe: multiplier prescribed for edge " +
                              std::to_string(edge_id) + ", which is not a node over '" +
                              point + "'");
    return rec;
}

// Resolves divisibility targets into minimal multipliers: for each edge id in
// `targets`, the final recipe must have target | m at that node.  Because
// m_ij = r_ij * prod_{k != j} (r_ik e_ik), the node's own multiplier enters
// its order directly, so a deficient target t is repaired in place by
// multiplying r_ij by t / gcd(t, m).  Nodes are processed in ascending
// edge-id order; later repairs only enlarge earlier orders by integer
// factors, so one pass suffices and the result is deterministic and minimal
// per step.
inline MultiplierMap resolve_multiples(const DualMapGraph& g, const std::string& point,
                                       const std::map<int, long long>& targets) {
    require_valid(g, "resolve_multiples");
    const TargetPointId x = TargetPointId::relative(point);
    if (!is_reduced_over(g, x))
        throw input_error("resolve_multiples: graph is not reduced over '" + point + "'");
    for (const auto& [edge_id, t] : targets)
        if (t < 1)
            throw input_error("resolve_multiples: target for edge " + std::to_string(edge_id) +
                              " must be >= 1");

    GraphIndex ix(g);
    MultiplierMap result;
    std::set<int> touched;

    for (const auto& v : g.vertices) {
        if (!v.contracted_to(x)) continue;
        std::vector<const Edge*> edges = ix.edges_at.at(v.id);
        std::sort(edges.begin(), edges.end(),
                  [](const Edge* a, const Edge* b) { return a->id < b->id; });
        std::map<int, Int> r;  // per edge id, working multiplier
        for (const Edge* e : edges) r[e->id] = 1;
        for (const Edge* e : edges) {
            auto it = targets.find(e->id);
            touched.insert(e->id);
            if (it == targets.end()) continue;
            Int t = it->second;
            Int m = r[e->id];
            for (const Edge* k : edges)
                if (k->id != e->id) m *= r[k->id] * k->ramification;
            Int deficiency = t / boost::multiprecision::gcd(t, m);
            if (deficiency == 1) continue;
            r[e->id] *= deficiency;
        }
        for (const Edge* e : edges) {
            if (r[e->id] == 1) continue;
            if (r[e->id] > Int(std::numeric_limits<long long>::max()))
                throw capacity_error("resolve_multiples: multiplier exceeds 64-bit range");
            result[e->id] = static_cast<long long>(r[e->id]);
        }
    }

    for (const auto& [edge_id, t] : targets)
        if (!touched.count(edge_id))
            throw input_error("resolve_multiples: target prescribed for edge " +
                              std::to_string(edge_id) + ", which is not a node over '" +
                              point + "'");
    return result;
}

// ---------------------------------------------------------------------------
// Exact-rational verification

struct NodeIdentity {
    int edge = 0;
    int contracted_vertex = 0;
    int active_vertex = 0;
    Rat E_dot_C;          // E_i · C_j = 1/m_ij
    Rat a_E_dot_C;        // a_i E_i · C_j
    Int expected;         // e_ij
    bool pullback_holds = false;
};

struct ComponentIdentity {
    int vertex = 0;       // contracted component E_i
    Rat E_squared;        // -sum_j 1/m_ij
    Int D_dot_E;          // sum of tangencies of marks on E_i
    Rat descent;          // (D + sum_k a_k E_k) · E_i
    bool descent_holds = false;
};

struct IntersectionReport {
    std::string point;
    std::vector<NodeIdentity> nodes;
    std::vector<ComponentIdentity> components;
    bool cross_terms_zero = true;  // E_i·E_k = 0 for i != k (structural once reduced)
    bool all_pullback = true;
    bool all_descent = true;
};

inline IntersectionReport verify_intersections(const DualMapGraph& g, const std::string& point,
                                               const SmoothingRecipe& rec) {
    require_valid(g, "verify_intersections");
    GraphIndex ix(g);
    IntersectionReport report;
    report.point = rec.point.empty() ? point : rec.point;
    if (rec.point != point)
        throw input_error("verify_intersections: recipe was computed for point '" + rec.point +
                          "', not '" + point + "'");

    for (const auto& comp : rec.components) {
        ComponentIdentity ci;
        ci.vertex = comp.vertex;
        ci.E_squared = 0;
        for (const auto& node : comp.nodes) {
            NodeIdentity ni;
            ni.edge = node.edge;
            ni.contracted_vertex = comp.vertex;
            ni.active_vertex = node.active_vertex;
            ni.E_dot_C = Rat(1) / Rat(node.m);
            ni.a_E_dot_C = Rat(comp.a) / Rat(node.m);
            ni.expected = node.e;
            ni.pullback_holds = ni.a_E_dot_C == Rat(ni.expected);
            report.all_pullback = report.all_pullback && ni.pullback_holds;
            ci.E_squared -= ni.E_dot_C;
            report.nodes.push_back(std::move(ni));
        }
        ci.D_dot_E = 0;
        for (const MarkedPoint* m : ix.marks_on.at(comp.vertex)) ci.D_dot_E += m->tangency;
        // Cross terms a_k E_k · E_i vanish for k != i (disjoint components in
        // a reduced graph), leaving D·E_i + a_i E_i².
        ci.descent = Rat(ci.D_dot_E) + Rat(comp.a) * ci.E_squared;
        ci.descent_holds = ci.descent == 0;
        report.all_descent = report.all_descent && ci.descent_holds;
        report.components.push_back(std::move(ci));
    }
    return report;
}

struct ComponentDegree {
    int vertex = 0;
    bool active = false;
    Int degree;  // deg of (D + sum a_i E_i - B) restricted to this component
    bool zero = false;
};

struct DegreeReport {
    std::string point;
    std::vector<ComponentDegree> components;  // every vertex of the graph
    bool all_zero = true;
};

// Componentwise degree of D + sum a_i E_i - B over the given point, where B
// restricts to degree deg(v) on an active component and 0 on a contracted
// one.  All degrees vanish exactly when the recipe's divisor descends to the
// fiber class, i.e. on balanced full-fiber graphs.
inline DegreeReport verify_degree_zero(const DualMapGraph& g, const std::string& point,
                                       const SmoothingRecipe& rec) {
    require_valid(g, "verify_degree_zero");
    if (rec.point != point)
        throw input_error("verify_degree_zero: recipe was computed for point '" + rec.point +
                          "', not '" + point + "'");
    const TargetPointId x = TargetPointId::relative(point);
    GraphIndex ix(g);

    // a_i and the pullback multiplicity a_i/m_ij = e_ij per edge over x.
    std::map<int, Int> coefficient;          // contracted vertex id -> a_i
    std::map<int, Int> edge_contribution;    // edge id -> e_ij
    for (const auto& comp : rec.components) {
        coefficient[comp.vertex] = comp.a;
        for (const auto& node : comp.nodes) edge_contribution[node.edge] = node.e;
    }

    DegreeReport report;
    report.point = point;
    for (const auto& v : g.vertices) {
        ComponentDegree cd;
        cd.vertex = v.id;
        cd.active = v.active();
        Int deg = 0;
        for (const MarkedPoint* m : ix.marks_on.at(v.id))
            if (m->target && *m->target == x) deg += m->tangency;
        if (v.active()) {
            for (const Edge* e : ix.edges_at.at(v.id)) {
                auto it = edge_contribution.find(e->id);
                if (it != edge_contribution.end()) deg += it->second;  // a_i E_i · C_v
            }
            deg -= v.degree;  // B restricted to an active component
        } else if (v.contracted_to(x)) {
            auto it = coefficient.find(v.id);
            if (it != coefficient.end()) {
                // a_i E_i² = -sum_j a_i/m_ij = -sum_j e_ij, an integer.
                for (const Edge* e : ix.edges_at.at(v.id)) {
                    auto jt = edge_contribution.find(e->id);
                    if (jt != edge_contribution.end()) deg -= jt->second;
                }
            }
        }
        cd.degree = deg;
        cd.zero = deg == 0;
        report.all_zero = report.all_zero && cd.zero;
        report.components.push_back(std::move(cd));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Simple extensions

// The multiplier record of the induced morphism of log/twisted structures:
// multiplication by m_ij at each smoothed node, by 1 at every untouched node
// and marked point.
struct SimpleExtension {
    std::map<int, Int> edge_multipliers;  // every edge id of the graph
    std::map<int, Int> mark_multipliers;  // every mark id of the graph

    // The tuple (m_1, ..., m_r) in edge-id order.
    std::vector<Int> phi() const {
        std::vector<Int> out;
        out.reserve(edge_multipliers.size());
        for (const auto& [id, m] : edge_multipliers) out.push_back(m);
        return out;
    }
};

inline SimpleExtension simple_extension(const DualMapGraph& g, const SmoothingRecipe& rec) {
    SimpleExtension ext;
    for (const auto& e : g.edges) ext.edge_multipliers[e.id] = 1;
    for (const auto& m : g.marks) ext.mark_multipliers[m.id] = 1;
    for (const auto& comp : rec.components)
        for (const auto& node : comp.nodes) ext.edge_multipliers[node.edge] = node.m;
    return ext;
}

// ---------------------------------------------------------------------------
// JSON rendering

inline nlohmann::json to_json(const SmoothingRecipe& rec) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : rec.components) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& n : c.nodes)
            nodes.push_back({{"edge", n.edge},
                             {"active_vertex", n.active_vertex},
                             {"e", n.e},
                             {"r", n.r},
                             {"m", n.m.str()},
                             {"singularity", n.singularity()},
                             {"node_stabilizer", n.m.str()},
                             {"smoothing_exponent", n.m.str()}});
        comps.push_back(
            {{"vertex", c.vertex}, {"a", c.a.str()}, {"nodes", std::move(nodes)}});
    }
    return {{"schema", 1}, {"point", rec.point}, {"components", std::move(comps)}};
}

inline nlohmann::json to_json(const IntersectionReport& r) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : r.nodes)
        nodes.push_back({{"edge", n.edge},
                         {"contracted_vertex", n.contracted_vertex},
                         {"active_vertex", n.active_vertex},
                         {"E_dot_C", Rat(n.E_dot_C).str()},
                         {"a_E_dot_C", Rat(n.a_E_dot_C).str()},
                         {"expected", n.expected.str()},
                         {"pullback_holds", n.pullback_holds}});
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : r.components)
        comps.push_back({{"vertex", c.vertex},
                         {"E_squared", Rat(c.E_squared).str()},
                         {"D_dot_E", c.D_dot_E.str()},
                         {"descent", Rat(c.descent).str()},
                         {"descent_holds", c.descent_holds}});
    return {{"schema", 1},
            {"point", r.point},
            {"nodes", std::move(nodes)},
            {"components", std::move(comps)},
            {"cross_terms_zero", r.cross_terms_zero},
            {"all_pullback", r.all_pullback},
            {"all_descent", r.all_descent}};
}

inline nlohmann::json to_json(const DegreeReport& r) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : r.components)
        comps.push_back({{"vertex", c.vertex},
                         {"active", c.active},
                         {"degree", c.degree.str()},
                         {"zero", c.zero}});
    return {{"schema", 1},
            {"point", r.point},
            {"components", std::move(comps)},
            {"all_zero", r.all_zero}};
}

inline nlohmann::json to_json(const SimpleExtension& ext) {
    nlohmann::json phi = nlohmann::json::array();
    for (const Int& m : ext.phi()) phi.push_back(m.str());
    nlohmann::json edges = nlohmann::json::object();
    for (const auto& [id, m] : ext.edge_multipliers) edges[std::to_string(id)] = m.str();
    nlohmann::json marks = nlohmann::json::object();
    for (const auto& [id, m] : ext.mark_multipliers) marks[std::to_string(id)] = m.str();
    return {{"schema", 1},
            {"phi", std::move(phi)},
            {"edges", std::move(edges)},
            {"marks", std::move(marks)}};
}

}  // namespace relmaps
