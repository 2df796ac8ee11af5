// Dual graphs of genus-zero prestable maps to a rational (possibly stacky)
// target curve.  A DualMapGraph records the combinatorial type of a map: one
// vertex per irreducible component of the source (active = mapped with
// positive degree, contracted = mapped to a point), edges for the nodes,
// marked points with their prescribed contact data, and stabilizer orders for
// the twisted refinement.  Continuous moduli (positions of points,
// cross-ratios) are deliberately not modeled.
//
// Conventions enforced by validate():
//   * the underlying graph is a connected tree (genus zero);
//   * active degrees sum to the total degree;
//   * a contracted component carries >= 3 special points (marks + nodes);
//   * an edge between two contracted vertices forces equal image points;
//   * for each active vertex and each named target point, the fiber
//     multiplicities accounted for by marks and edges sum to at most the
//     vertex degree (the checker, not validate, decides whether a shortfall
//     is a problem — see the `full_fiber` flags).
//
// Edge ramification convention: for a contracted–active edge, `ramification`
// is the local index of the map on the active branch at the node.  For an
// active–active edge with a recorded common image (`over`), both local
// indices are kept as the ordered pair (ramification, ramification2) aligned
// with `endpoints`.  Other edges carry no meaningful index and must store the
// defaults (ramification 1, no ramification2).
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "relmaps/errors.hpp"
#include "relmaps/gamma.hpp"
#include "relmaps/target.hpp"

namespace relmaps {

struct MarkedPoint {
    int id = 0;
    int vertex = 0;
    int tangency = 0;  // prescribed contact order; 0 = free mark
    // Local index of the map at the mark when it lies on an active component.
    // Defaults to the tangency (or 1 for free marks); a value larger than the
    // tangency models a mark sitting at a more ramified point of the fiber.
    long long ramification = 1;
    std::optional<TargetPointId> target;  // prescribed image, if any
    long long stabilizer = 1;             // twisted stabilizer order

    auto operator<=>(const MarkedPoint&) const = default;
};

enum class VertexRole { active, contracted };

struct Vertex {
    int id = 0;
    VertexRole role = VertexRole::active;
    int degree = 0;                       // active vertices: mapping degree >= 1
    std::optional<TargetPointId> target;  // contracted vertices: image point

    auto operator<=>(const Vertex&) const = default;

    bool active() const { return role == VertexRole::active; }
    bool contracted() const { return role == VertexRole::contracted; }
    bool contracted_to(const TargetPointId& p) const {
        return contracted() && target && *target == p;
    }
};

struct Edge {
    int id = 0;
    std::pair<int, int> endpoints{0, 0};         // vertex ids
    long long ramification = 1;                  // see convention above
    std::optional<long long> ramification2;      // active–active over a point only
    long long stabilizer = 1;                    // twisted node stabilizer order
    std::optional<TargetPointId> over;           // common image (active–active only)

    auto operator<=>(const Edge&) const = default;

    bool touches(int v) const { return endpoints.first == v || endpoints.second == v; }
    int other(int v) const { return endpoints.first == v ? endpoints.second : endpoints.first; }
    // Local index at the branch on vertex v (active–active edges).
    long long ramification_at(int v) const {
        if (v == endpoints.first) return ramification;
        return ramification2 ? *ramification2 : ramification;
    }
};

struct DualMapGraph {
    StackyTarget target = StackyTarget::weighted_projective(1, 1);
    int degree = 0;  // total mapping degree
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<MarkedPoint> marks;
    // Per relative-point flags: true (the default for absent keys) claims the
    // data exhausts the fiber over that point, so the checker must treat any
    // shortfall as a fiber-containment failure.  Normal form stores only the
    // `false` entries; use set_full_fiber / full_fiber_at.
    std::map<std::string, bool> full_fiber;

    bool operator==(const DualMapGraph&) const = default;

    bool full_fiber_at(const std::string& point) const {
        auto it = full_fiber.find(point);
        return it == full_fiber.end() ? true : it->second;
    }
    void set_full_fiber(const std::string& point, bool claimed) {
        if (claimed)
            full_fiber.erase(point);
        else
            full_fiber[point] = false;
    }
    // Drops redundant `true` entries so that operator== matches semantics.
    void normalize_flags() {
        for (auto it = full_fiber.begin(); it != full_fiber.end();)
            it = it->second ? full_fiber.erase(it) : ++it;
    }
};

// ---------------------------------------------------------------------------
// Lookup index

// Id-based lookup tables for one graph.  Requires unique ids (checked by
// validate); operations that demand a valid graph build one of these.
struct GraphIndex {
    std::map<int, const Vertex*> vertex;
    std::map<int, const Edge*> edge;
    std::map<int, const MarkedPoint*> mark;
    std::map<int, std::vector<const Edge*>> edges_at;        // vertex id -> incident edges
    std::map<int, std::vector<const MarkedPoint*>> marks_on; // vertex id -> marks

    explicit GraphIndex(const DualMapGraph& g) {
        for (const auto& v : g.vertices) {
            vertex[v.id] = &v;
            edges_at[v.id];
            marks_on[v.id];
        }
        for (const auto& e : g.edges) {
            edge[e.id] = &e;
            edges_at[e.endpoints.first].push_back(&e);
            if (e.endpoints.second != e.endpoints.first)
                edges_at[e.endpoints.second].push_back(&e);
        }
        for (const auto& m : g.marks) {
            mark[m.id] = &m;
            marks_on[m.vertex].push_back(&m);
        }
    }

    const Vertex& v(int id) const { return *vertex.at(id); }
    int special_point_count(int vertex_id) const {
        return static_cast<int>(edges_at.at(vertex_id).size() + marks_on.at(vertex_id).size());
    }
};

// ---------------------------------------------------------------------------
// Validation

struct ValidationIssue {
    std::string code;     // stable machine-readable identifier
    std::string message;  // human-readable description
    auto operator<=>(const ValidationIssue&) const = default;
};

using ValidationReport = std::vector<ValidationIssue>;

namespace detail {

inline void issue(ValidationReport& r, std::string code, std::string message) {
    r.push_back({std::move(code), std::move(message)});
}

template <typename T>
inline bool ids_unique(const std::vector<T>& items, const char* what, ValidationReport& r) {
    std::set<int> seen;
    bool ok = true;
    for (const auto& item : items) {
        if (!seen.insert(item.id).second) {
            issue(r, std::string(what) + "_id_duplicate",
                  std::string(what) + " id " + std::to_string(item.id) + " appears twice");
            ok = false;
        }
    }
    return ok;
}

}  // namespace detail

// Reports every violated structural invariant; an empty report means the
// graph is a well-formed genus-zero prestable-map graph.  Never throws.
inline ValidationReport validate(const DualMapGraph& g) {
    ValidationReport r;
    using detail::issue;

    try {
        g.target.check();
    } catch (const input_error& e) {
        issue(r, "bad_target", e.what());
    }
    if (g.degree < 1) issue(r, "bad_degree", "total degree must be >= 1");
    if (g.vertices.empty()) {
        issue(r, "empty_graph", "graph has no vertices");
        return r;
    }

    bool ids_ok = detail::ids_unique(g.vertices, "vertex", r) &
                  detail::ids_unique(g.edges, "edge", r) &
                  detail::ids_unique(g.marks, "mark", r);

    std::set<int> vertex_ids;
    for (const auto& v : g.vertices) vertex_ids.insert(v.id);

    // Per-vertex role invariants.
    long long degree_sum = 0;
    for (const auto& v : g.vertices) {
        if (v.active()) {
            if (v.degree < 1)
                issue(r, "active_degree", "active vertex " + std::to_string(v.id) +
                                              " must have degree >= 1");
            if (v.target)
                issue(r, "active_target", "active vertex " + std::to_string(v.id) +
                                              " must not carry a target point");
            degree_sum += v.degree;
        } else {
            if (!v.target)
                issue(r, "contracted_target", "contracted vertex " + std::to_string(v.id) +
                                                  " must record its image point");
            else if (v.target->is_relative() &&
                     (v.target->label.empty() || is_reserved_label(v.target->label) ||
                      g.target.is_special_label(v.target->label)))
                issue(r, "bad_point_label", "contracted vertex " + std::to_string(v.id) +
                                                " uses an invalid relative point label '" +
                                                v.target->label + "'");
            else if (v.target->is_special() && !g.target.is_special_label(v.target->label))
                issue(r, "unknown_special", "contracted vertex " + std::to_string(v.id) +
                                                " maps to unknown special point '" +
                                                v.target->label + "'");
            if (v.degree != 0)
                issue(r, "contracted_degree", "contracted vertex " + std::to_string(v.id) +
                                                  " must have degree 0");
        }
    }
    if (degree_sum != g.degree)
        issue(r, "degree_sum", "active degrees sum to " + std::to_string(degree_sum) +
                                   ", expected total degree " + std::to_string(g.degree));

    if (!ids_ok) return r;  // id-based checks below assume uniqueness

    // Edge endpoint sanity.
    for (const auto& e : g.edges) {
        if (!vertex_ids.count(e.endpoints.first) || !vertex_ids.count(e.endpoints.second)) {
            issue(r, "edge_endpoint", "edge " + std::to_string(e.id) +
                                          " references a missing vertex");
            return r;
        }
        if (e.endpoints.first == e.endpoints.second)
            issue(r, "edge_loop",
                  "edge " + std::to_string(e.id) + " is a loop (genus-zero violation)");
    }
    for (const auto& m : g.marks) {
        if (!vertex_ids.count(m.vertex)) {
            issue(r, "mark_vertex",
                  "mark " + std::to_string(m.id) + " references a missing vertex");
            return r;
        }
    }

    GraphIndex ix(g);

    // Tree check: connected and |E| = |V| - 1.
    {
        std::set<int> seen;
        std::vector<int> stack{g.vertices.front().id};
        seen.insert(stack.back());
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const Edge* e : ix.edges_at.at(v)) {
                int w = e->other(v);
                if (seen.insert(w).second) stack.push_back(w);
            }
        }
        if (seen.size() != g.vertices.size())
            issue(r, "not_connected", "graph is not connected");
        if (g.edges.size() + 1 != g.vertices.size())
            issue(r, "not_a_tree", "graph has " + std::to_string(g.edges.size()) +
                                       " edges and " + std::to_string(g.vertices.size()) +
                                       " vertices; a tree requires |E| = |V| - 1");
    }

    // Contracted-vertex stability: >= 3 special points.
    for (const auto& v : g.vertices) {
        if (v.contracted() && ix.special_point_count(v.id) < 3)
            issue(r, "unstable_contracted",
                  "contracted vertex " + std::to_string(v.id) + " carries only " +
                      std::to_string(ix.special_point_count(v.id)) +
                      " special points (needs >= 3)");
    }

    // Edge decorations per edge type.
    for (const auto& e : g.edges) {
        const Vertex& a = ix.v(e.endpoints.first);
        const Vertex& b = ix.v(e.endpoints.second);
        if (e.ramification < 1)
            issue(r, "edge_ramification", "edge " + std::to_string(e.id) +
                                              " must have ramification >= 1");
        if (e.ramification2 && *e.ramification2 < 1)
            issue(r, "edge_ramification", "edge " + std::to_string(e.id) +
                                              " must have second ramification >= 1");
        if (e.stabilizer < 1)
            issue(r, "edge_stabilizer",
                  "edge " + std::to_string(e.id) + " must have stabilizer order >= 1");

        if (a.contracted() && b.contracted()) {
            if (a.target && b.target && !(*a.target == *b.target))
                issue(r, "contracted_edge_targets",
                      "edge " + std::to_string(e.id) +
                          " joins contracted vertices with different image points");
            if (e.over || e.ramification2 || e.ramification != 1)
                issue(r, "edge_decoration", "edge " + std::to_string(e.id) +
                                                " joins contracted vertices and must carry "
                                                "no ramification data");
        } else if (a.active() && b.active()) {
            if (e.over) {
                if (!e.ramification2)
                    issue(r, "edge_decoration",
                          "edge " + std::to_string(e.id) +
                              " between active vertices over a point needs both local "
                              "indices (ramification, ramification2)");
                if (e.over->is_relative() &&
                    (e.over->label.empty() || is_reserved_label(e.over->label) ||
                     g.target.is_special_label(e.over->label)))
                    issue(r, "bad_point_label",
                          "edge " + std::to_string(e.id) +
                              " sits over an invalid relative point label '" +
                              e.over->label + "'");
                if (e.over->is_special() && !g.target.is_special_label(e.over->label))
                    issue(r, "unknown_special",
                          "edge " + std::to_string(e.id) +
                              " sits over unknown special point '" + e.over->label + "'");
            } else if (e.ramification2 || e.ramification != 1) {
                issue(r, "edge_decoration",
                      "edge " + std::to_string(e.id) +
                          " between active vertices records local indices but no common "
                          "image point");
            }
        } else {  // contracted–active
            if (e.over || e.ramification2)
                issue(r, "edge_decoration",
                      "edge " + std::to_string(e.id) +
                          " joins a contracted and an active vertex; its image is implied "
                          "and only the active-side ramification is stored");
        }
    }

    // Mark decorations.
    for (const auto& m : g.marks) {
        if (m.tangency < 0)
            issue(r, "mark_tangency",
                  "mark " + std::to_string(m.id) + " has negative tangency");
        if (m.ramification < 1)
            issue(r, "mark_ramification",
                  "mark " + std::to_string(m.id) + " must have local ramification >= 1");
        // On an active component the actual local index can only exceed the
        // prescribed contact order; on a contracted component the map is
        // constant and the field is inert.
        if (m.tangency > 0 && m.ramification < m.tangency && ix.v(m.vertex).active())
            issue(r, "mark_ramification",
                  "mark " + std::to_string(m.id) + " has local ramification " +
                      std::to_string(m.ramification) + " below its tangency " +
                      std::to_string(m.tangency));
        if (m.stabilizer < 1)
            issue(r, "mark_stabilizer",
                  "mark " + std::to_string(m.id) + " must have stabilizer order >= 1");
        if (m.tangency > 0 && (!m.target || !m.target->is_relative()))
            issue(r, "mark_target", "mark " + std::to_string(m.id) +
                                        " has positive tangency but no relative target point");
        if (m.target) {
            if (m.target->is_generic())
                issue(r, "mark_target", "mark " + std::to_string(m.id) +
                                            " cannot target an unnamed generic point");
            if (m.target->is_relative() &&
                (m.target->label.empty() || is_reserved_label(m.target->label) ||
                 g.target.is_special_label(m.target->label)))
                issue(r, "bad_point_label", "mark " + std::to_string(m.id) +
                                                " uses an invalid relative point label '" +
                                                m.target->label + "'");
            if (m.target->is_special() && !g.target.is_special_label(m.target->label))
                issue(r, "unknown_special", "mark " + std::to_string(m.id) +
                                                " targets unknown special point '" +
                                                m.target->label + "'");
        }
    }

    // Fiber multiplicity bounds per active vertex and named target point.
    for (const auto& v : g.vertices) {
        if (!v.active()) continue;
        std::map<TargetPointId, long long> load;
        for (const MarkedPoint* m : ix.marks_on.at(v.id))
            if (m->target) load[*m->target] += m->ramification;
        for (const Edge* e : ix.edges_at.at(v.id)) {
            const Vertex& w = ix.v(e->other(v.id));
            if (w.contracted() && w.target) {
                if (w.target->is_generic()) {
                    // Each generic image point is its own fiber.
                    if (e->ramification > v.degree)
                        issue(r, "fiber_overflow",
                              "edge " + std::to_string(e->id) + " has ramification " +
                                  std::to_string(e->ramification) +
                                  " exceeding the degree of active vertex " +
                                  std::to_string(v.id));
                } else {
                    load[*w.target] += e->ramification;
                }
            } else if (w.active() && e->over) {
                if (e->over->is_generic()) {
                    if (e->ramification_at(v.id) > v.degree)
                        issue(r, "fiber_overflow",
                              "edge " + std::to_string(e->id) +
                                  " has local index exceeding the degree of active vertex " +
                                  std::to_string(v.id));
                } else {
                    load[*e->over] += e->ramification_at(v.id);
                }
            }
        }
        for (const auto& [point, total] : load) {
            if (total > v.degree)
                issue(r, "fiber_overflow",
                      "active vertex " + std::to_string(v.id) + " accounts for multiplicity " +
                          std::to_string(total) + " over point '" + point.display() +
                          "' but has degree " + std::to_string(v.degree));
        }
    }

    std::sort(r.begin(), r.end());
    return r;
}

// Throws input_error when the graph fails validation; used as the common
// precondition check of the higher-level operations.
inline void require_valid(const DualMapGraph& g, const std::string& context) {
    ValidationReport r = validate(g);
    if (!r.empty()) {
        std::string msg = context + ": graph fails validation";
        for (const auto& v : r) msg += "\n  [" + v.code + "] " + v.message;
        throw input_error(msg);
    }
}

// ---------------------------------------------------------------------------
// Derived queries

// Labels of all relative points referenced anywhere in the graph, sorted.
inline std::vector<std::string> relative_labels(const DualMapGraph& g) {
    std::set<std::string> labels;
    for (const auto& m : g.marks)
        if (m.target && m.target->is_relative()) labels.insert(m.target->label);
    for (const auto& v : g.vertices)
        if (v.contracted() && v.target && v.target->is_relative()) labels.insert(v.target->label);
    for (const auto& e : g.edges)
        if (e.over && e.over->is_relative()) labels.insert(e.over->label);
    for (const auto& [label, claimed] : g.full_fiber) labels.insert(label);
    return {labels.begin(), labels.end()};
}

// Maximal connected subtrees of vertices contracted to the given point;
// each subtree is returned as a sorted list of vertex ids.
inline std::vector<std::vector<int>> contracted_subtrees(const DualMapGraph& g,
                                                         const GraphIndex& ix,
                                                         const TargetPointId& point) {
    std::set<int> pending;
    for (const auto& v : g.vertices)
        if (v.contracted_to(point)) pending.insert(v.id);

    std::vector<std::vector<int>> out;
    while (!pending.empty()) {
        std::vector<int> comp;
        std::vector<int> stack{*pending.begin()};
        pending.erase(pending.begin());
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (const Edge* e : ix.edges_at.at(v)) {
                int w = e->other(v);
                auto it = pending.find(w);
                if (it != pending.end()) {
                    pending.erase(it);
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// True when no edge joins two vertices contracted to the same point, i.e.
// every contracted subtree is a single vertex.
inline bool is_reduced(const DualMapGraph& g) {
    GraphIndex ix(g);
    for (const auto& e : g.edges) {
        const Vertex& a = ix.v(e.endpoints.first);
        const Vertex& b = ix.v(e.endpoints.second);
        if (a.contracted() && b.contracted()) return false;
    }
    return true;
}

inline bool is_reduced_over(const DualMapGraph& g, const TargetPointId& point) {
    GraphIndex ix(g);
    for (const auto& e : g.edges) {
        const Vertex& a = ix.v(e.endpoints.first);
        const Vertex& b = ix.v(e.endpoints.second);
        if (a.contracted_to(point) && b.contracted_to(point)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// DOT rendering

inline std::string to_dot(const DualMapGraph& g, const std::string& name = "g") {
    std::string out = "graph " + name + " {\n";
    out += "  // target " + g.target.display() + ", degree " + std::to_string(g.degree) + "\n";
    for (const auto& v : g.vertices) {
        if (v.active()) {
            out += "  v" + std::to_string(v.id) + " [label=\"A:d=" + std::to_string(v.degree) +
                   "\", shape=circle];\n";
        } else {
            std::string img = v.target ? v.target->display() : "?";
            out += "  v" + std::to_string(v.id) + " [label=\"E→" + img +
                   "\", shape=box];\n";
        }
    }
    for (const auto& m : g.marks) {
        std::string label = "p" + std::to_string(m.id);
        if (m.tangency > 0)
            label += ":d=" + std::to_string(m.tangency);
        else
            label += ":free";
        if (m.target) label += "→" + m.target->display();
        if (m.ramification > std::max<long long>(m.tangency, 1))
            label += ",r=" + std::to_string(m.ramification);
        if (m.stabilizer > 1) label += ",μ" + std::to_string(m.stabilizer);
        out += "  m" + std::to_string(m.id) + " [label=\"" + label +
               "\", shape=plaintext, fontsize=10];\n";
        out += "  v" + std::to_string(m.vertex) + " -- m" + std::to_string(m.id) +
               " [style=dotted];\n";
    }
    for (const auto& e : g.edges) {
        std::string label = "e=" + std::to_string(e.ramification);
        if (e.ramification2) label += ":" + std::to_string(*e.ramification2);
        label += ",μ" + std::to_string(e.stabilizer);
        if (e.over) label += " @" + e.over->display();
        out += "  v" + std::to_string(e.endpoints.first) + " -- v" +
               std::to_string(e.endpoints.second) + " [label=\"" + label + "\"];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace relmaps
