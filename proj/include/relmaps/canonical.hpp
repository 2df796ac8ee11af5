// Canonical forms for decorated dual-map trees.  Two graphs are isomorphic
// (as decorated trees: roles, degrees, image points, tangencies,
// ramifications, stabilizers all preserved) exactly when their canonical keys
// are equal; canonical_form additionally rebuilds the graph with a canonical
// labeling so that isomorphic inputs yield operator==-identical outputs.
//
// The key is the classical rooted-tree encoding minimized over all root
// choices: each subtree serializes to payload(vertex) followed by the sorted
// list of (edge payload, child key) strings.  Marks with identical
// decorations are interchangeable; set `labeled_marks` to make mark
// identities significant (they are then kept, not renumbered).
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "relmaps/graph.hpp"

namespace relmaps {
namespace detail {

inline std::string escape_label(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '\\' || c == '|' || c == '(' || c == ')' || c == '[' || c == ']' ||
            c == ',' || c == '<' || c == '>')
            out += '\\';
        out += c;
    }
    return out;
}

inline std::string point_payload(const std::optional<TargetPointId>& p) {
    if (!p) return "-";
    switch (p->kind) {
        case PointKind::relative_point: return "R:" + escape_label(p->label);
        case PointKind::special_point: return "S:" + escape_label(p->label);
        case PointKind::generic_point: return "G";
    }
    return "?";
}

inline std::string mark_payload(const MarkedPoint& m, bool labeled) {
    std::string s;
    if (labeled) s += "#" + std::to_string(m.id) + ".";
    s += "t" + std::to_string(m.tangency) + ".r" + std::to_string(m.ramification) + ".s" +
         std::to_string(m.stabilizer) + "@" + point_payload(m.target);
    return s;
}

inline std::string vertex_payload(const Vertex& v, const std::vector<const MarkedPoint*>& marks,
                                  bool labeled) {
    std::string s = v.active() ? "A" + std::to_string(v.degree) : "E@" + point_payload(v.target);
    std::vector<std::string> ms;
    ms.reserve(marks.size());
    for (const MarkedPoint* m : marks) ms.push_back(mark_payload(*m, labeled));
    std::sort(ms.begin(), ms.end());
    s += "[";
    for (size_t i = 0; i < ms.size(); ++i) s += (i ? "," : "") + ms[i];
    s += "]";
    return s;
}

// Payload of an edge as traversed from `parent` into the subtree below it.
inline std::string edge_payload(const Edge& e, int parent, const GraphIndex& ix) {
    const Vertex& a = ix.v(e.endpoints.first);
    const Vertex& b = ix.v(e.endpoints.second);
    std::string s;
    if (a.contracted() && b.contracted()) {
        s = "cc";
    } else if (a.active() && b.active()) {
        if (e.over) {
            int child = e.other(parent);
            s = "aa." + std::to_string(e.ramification_at(parent)) + "." +
                std::to_string(e.ramification_at(child)) + "@" + point_payload(e.over);
        } else {
            s = "aa";
        }
    } else {
        s = "ca.e" + std::to_string(e.ramification);
    }
    return s + ".s" + std::to_string(e.stabilizer);
}

inline std::string rooted_key(int v, int via_edge, const GraphIndex& ix, bool labeled) {
    std::string s = vertex_payload(ix.v(v), ix.marks_on.at(v), labeled);
    std::vector<std::string> children;
    for (const Edge* e : ix.edges_at.at(v)) {
        if (e->id == via_edge) continue;
        children.push_back("<" + edge_payload(*e, v, ix) + ">" +
                           rooted_key(e->other(v), e->id, ix, labeled));
    }
    std::sort(children.begin(), children.end());
    s += "(";
    for (const auto& c : children) s += c;
    s += ")";
    return s;
}

inline std::string graph_header(const DualMapGraph& g) {
    std::string s = "T" + escape_label(g.target.display()) + "|d" + std::to_string(g.degree) + "|ff[";
    bool first = true;
    for (const auto& [label, claimed] : g.full_fiber) {
        if (claimed) continue;  // normal form stores only the false entries
        if (!first) s += ",";
        s += escape_label(label);
        first = false;
    }
    return s + "]|";
}

struct CanonicalBuilder {
    const GraphIndex& ix;
    bool labeled;
    DualMapGraph out;
    int next_vertex = 0;
    int next_edge = 0;
    int next_mark = 0;

    int emit(int v, int via_edge) {
        int my = next_vertex++;
        const Vertex& src = ix.v(v);
        Vertex nv = src;
        nv.id = my;
        out.vertices.push_back(nv);

        // Marks in payload order; identities renumbered unless labeled.
        std::vector<const MarkedPoint*> ms = ix.marks_on.at(v);
        std::sort(ms.begin(), ms.end(), [&](const MarkedPoint* x, const MarkedPoint* y) {
            return mark_payload(*x, labeled) < mark_payload(*y, labeled);
        });
        for (const MarkedPoint* m : ms) {
            MarkedPoint nm = *m;
            nm.vertex = my;
            nm.id = labeled ? m->id : next_mark++;
            out.marks.push_back(nm);
        }

        // Children in canonical order.
        std::vector<std::pair<std::string, const Edge*>> children;
        for (const Edge* e : ix.edges_at.at(v)) {
            if (e->id == via_edge) continue;
            children.emplace_back("<" + edge_payload(*e, v, ix) + ">" +
                                      rooted_key(e->other(v), e->id, ix, labeled),
                                  e);
        }
        std::sort(children.begin(), children.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [key, e] : children) {
            int eid = next_edge++;
            size_t slot = out.edges.size();
            out.edges.push_back(Edge{});
            int child_old = e->other(v);
            int child_new = emit(child_old, e->id);

            Edge ne;
            ne.id = eid;
            ne.endpoints = {my, child_new};
            ne.stabilizer = e->stabilizer;
            ne.over = e->over;
            const Vertex& a = ix.v(e->endpoints.first);
            const Vertex& b = ix.v(e->endpoints.second);
            if (a.active() && b.active() && e->over) {
                ne.ramification = e->ramification_at(v);
                ne.ramification2 = e->ramification_at(child_old);
            } else if (a.contracted() != b.contracted()) {
                ne.ramification = e->ramification;  // active-side index, orientation-free
            }
            out.edges[slot] = ne;
        }
        return my;
    }
};

}  // namespace detail

// Canonical isomorphism-class key.  Pre: validate(g) passes.
inline std::string canonical_key(const DualMapGraph& g, bool labeled_marks = false) {
    require_valid(g, "canonical_key");
    GraphIndex ix(g);
    std::string best;
    for (const auto& v : g.vertices) {
        std::string k = detail::rooted_key(v.id, -1, ix, labeled_marks);
        if (best.empty() || k < best) best = k;
    }
    return detail::graph_header(g) + best;
}

// Canonically relabeled copy: isomorphic inputs produce operator==-identical
// outputs.  Mark ids are preserved when labeled_marks is set, renumbered
// canonically otherwise.  Pre: validate(g) passes.
inline DualMapGraph canonical_form(const DualMapGraph& g, bool labeled_marks = false) {
    require_valid(g, "canonical_form");
    GraphIndex ix(g);
    int best_root = g.vertices.front().id;
    std::string best;
    for (const auto& v : g.vertices) {
        std::string k = detail::rooted_key(v.id, -1, ix, labeled_marks);
        if (best.empty() || k < best) {
            best = k;
            best_root = v.id;
        }
    }
    detail::CanonicalBuilder builder{ix, labeled_marks, DualMapGraph{}, 0, 0, 0};
    builder.out.target = g.target;
    builder.out.degree = g.degree;
    builder.out.full_fiber = g.full_fiber;
    builder.out.normalize_flags();
    builder.emit(best_root, -1);
    return std::move(builder.out);
}

}  // namespace relmaps
