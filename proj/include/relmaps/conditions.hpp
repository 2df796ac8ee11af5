// The smoothability checker: per relative point, decide the three
// combinatorial conditions that characterize smoothable genus-zero relative
// maps, with explicit witnesses for every failure.
//
//   (1) evaluation      — every mark with positive tangency at x sits on an
//                         active component or on a component contracted to x;
//   (2) fiber containment — every point of the fiber over x is a mark or lies
//                         on a component contracted to x: active-vertex fiber
//                         degrees must be exhausted by mark and node
//                         multiplicities (when the graph claims the full
//                         fiber), and no node between two active components
//                         may sit over x;
//   (3) ramification balance — each maximal contracted subtree T over x pulls
//                         as much as its marks prescribe: Σ tangencies of
//                         marks on T equals Σ ramifications of edges leaving
//                         T; degenerately, a mark over x on an active
//                         component must have local index equal to its
//                         tangency, and a free mark may not lie over x at all.
//
// A graph passing all three conditions at every relative point is a member of
// the smoothable locus; single-vertex graphs passing them are interior
// points.  reduce_contracted collapses contracted subtrees to single vertices
// without changing any verdict.
#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"

#include "relmaps/gamma.hpp"
#include "relmaps/graph.hpp"

namespace relmaps {

struct ConditionWitness {
    std::string kind;  // mark_wrong_position | fiber_deficit | unmarked_node |
                       // unbalanced_subtree | mark_ramification | free_mark_in_fiber
    int mark = -1;
    int vertex = -1;
    int edge = -1;
    std::vector<int> vertices;  // subtree witnesses only
    long long lhs = 0;          // tangency-side quantity (see to_json for naming)
    long long rhs = 0;          // ramification/degree-side quantity

    auto operator<=>(const ConditionWitness&) const = default;
};

struct ConditionStatus {
    int index = 0;  // 1, 2 or 3
    bool pass = true;
    std::vector<ConditionWitness> witnesses;
};

struct PointReport {
    std::string point;  // relative-point label
    std::array<ConditionStatus, 3> conditions{ConditionStatus{1}, ConditionStatus{2},
                                              ConditionStatus{3}};
    bool all_pass() const {
        return conditions[0].pass && conditions[1].pass && conditions[2].pass;
    }
};

using ConditionReport = std::vector<PointReport>;  // one entry per relative point, in input order

inline bool all_pass(const ConditionReport& report) {
    return std::all_of(report.begin(), report.end(),
                       [](const PointReport& p) { return p.all_pass(); });
}

// ---------------------------------------------------------------------------
// Tangency-data matching

// Throws input_error unless the graph's marks realize exactly the given
// tangency data: per relative point the multiset of positive tangencies must
// match, the number of unconstrained marks must match, and the graph may not
// reference relative points absent from the data.
inline void match_tangency_data(const DualMapGraph& g, const TangencyData& gamma) {
    validate_tangency_data(gamma);

    std::set<std::string> declared;
    for (const auto& r : gamma.relative) declared.insert(r.point);
    for (const std::string& label : relative_labels(g))
        if (!declared.count(label))
            throw input_error("graph references relative point '" + label +
                              "' which is absent from the tangency data");

    int free_count = 0;
    std::map<std::string, std::multiset<int>> realized;
    for (const auto& m : g.marks) {
        if (!m.target) {
            ++free_count;
        } else if (m.target->is_relative() && m.tangency > 0) {
            realized[m.target->label].insert(m.tangency);
        }
        // Marks with special targets (stacky contact data) and tangency-zero
        // marks pinned to a relative point occupy no slot of the tangency
        // data; the latter are condition-(3) failures reported by the checker.
    }
    if (free_count != gamma.free_marks)
        throw input_error("graph has " + std::to_string(free_count) +
                          " unconstrained marks but the tangency data prescribes " +
                          std::to_string(gamma.free_marks));
    for (const auto& r : gamma.relative) {
        std::multiset<int> want(r.tangencies.begin(), r.tangencies.end());
        const auto& have = realized[r.point];
        if (want != have) {
            auto render = [](const std::multiset<int>& s) {
                std::string out = "(";
                for (auto it = s.begin(); it != s.end(); ++it)
                    out += (it == s.begin() ? "" : ",") + std::to_string(*it);
                return out + ")";
            };
            throw input_error("tangencies over '" + r.point + "' are " + render(have) +
                              " in the graph but " + render(want) + " in the tangency data");
        }
    }
}

// ---------------------------------------------------------------------------
// The checker

namespace detail {

inline PointReport check_point(const DualMapGraph& g, const GraphIndex& ix,
                               const std::string& label) {
    PointReport report;
    report.point = label;
    const TargetPointId x = TargetPointId::relative(label);

    auto& c1 = report.conditions[0];
    auto& c2 = report.conditions[1];
    auto& c3 = report.conditions[2];

    // (1) evaluation: marks prescribed at x must not sit on a component
    // contracted elsewhere.
    for (const auto& m : g.marks) {
        if (!(m.target && *m.target == x)) continue;
        const Vertex& v = ix.v(m.vertex);
        if (v.contracted() && !v.contracted_to(x)) {
            ConditionWitness w;
            w.kind = "mark_wrong_position";
            w.mark = m.id;
            w.vertex = v.id;
            c1.witnesses.push_back(std::move(w));
        }
    }

    // (2) fiber containment, part one: nodes between active components over x
    // are fiber points that are neither marks nor on contracted components.
    for (const auto& e : g.edges) {
        if (!(e.over && *e.over == x)) continue;
        if (ix.v(e.endpoints.first).active() && ix.v(e.endpoints.second).active()) {
            ConditionWitness w;
            w.kind = "unmarked_node";
            w.edge = e.id;
            c2.witnesses.push_back(std::move(w));
        }
    }

    // (2) part two: when the graph claims the full fiber over x, each active
    // vertex must exhaust its fiber degree by mark multiplicities and node
    // multiplicities into x-contracted subtrees.
    if (g.full_fiber_at(label)) {
        for (const auto& v : g.vertices) {
            if (!v.active()) continue;
            long long accounted = 0;
            for (const MarkedPoint* m : ix.marks_on.at(v.id))
                if (m->target && *m->target == x) accounted += m->ramification;
            for (const Edge* e : ix.edges_at.at(v.id)) {
                const Vertex& w = ix.v(e->other(v.id));
                if (w.contracted_to(x)) accounted += e->ramification;
                else if (w.active() && e->over && *e->over == x)
                    accounted += e->ramification_at(v.id);
            }
            if (accounted < v.degree) {
                ConditionWitness w;
                w.kind = "fiber_deficit";
                w.vertex = v.id;
                w.lhs = accounted;
                w.rhs = v.degree;
                c2.witnesses.push_back(std::move(w));
            }
        }
    }

    // (3) ramification balance over each maximal contracted subtree.
    for (const auto& subtree : contracted_subtrees(g, ix, x)) {
        std::set<int> inside(subtree.begin(), subtree.end());
        long long tangency_sum = 0;
        long long ramification_sum = 0;
        for (int vid : subtree) {
            for (const MarkedPoint* m : ix.marks_on.at(vid)) tangency_sum += m->tangency;
            for (const Edge* e : ix.edges_at.at(vid))
                if (!inside.count(e->other(vid))) ramification_sum += e->ramification;
        }
        if (tangency_sum != ramification_sum) {
            ConditionWitness w;
            w.kind = "unbalanced_subtree";
            w.vertices = subtree;
            w.lhs = tangency_sum;
            w.rhs = ramification_sum;
            c3.witnesses.push_back(std::move(w));
        }
    }

    // (3) degenerate subtrees: a mark over x on an active component is its own
    // contracted locus; its actual local index must equal its tangency.
    for (const auto& m : g.marks) {
        if (!(m.target && *m.target == x)) continue;
        const Vertex& v = ix.v(m.vertex);
        if (v.active() && m.ramification != m.tangency) {
            ConditionWitness w;
            w.kind = "mark_ramification";
            w.mark = m.id;
            w.vertex = v.id;
            w.lhs = m.tangency;
            w.rhs = m.ramification;
            c3.witnesses.push_back(std::move(w));
        }
    }

    // (3) free marks may not lie over x: a contact-order-0 mark sitting on an
    // x-contracted component would be a fiber point of multiplicity 0, which
    // no smoothing can realize (the minimum, 1, is shown).  Marks pinned to a
    // different point are reported there by condition (1), not here.
    for (const auto& m : g.marks) {
        if (m.tangency != 0) continue;
        if (m.target && *m.target != x) continue;
        const Vertex& v = ix.v(m.vertex);
        if (v.contracted_to(x)) {
            ConditionWitness w;
            w.kind = "free_mark_in_fiber";
            w.mark = m.id;
            w.vertex = v.id;
            w.lhs = 0;
            w.rhs = 1;
            c3.witnesses.push_back(std::move(w));
        }
    }

    for (auto& c : report.conditions) c.pass = c.witnesses.empty();
    return report;
}

}  // namespace detail

// Checks the three conditions at every relative point of the tangency data
// (in input order).  Pre: the graph validates and matches the tangency data.
inline ConditionReport check_relative(const DualMapGraph& g, const TangencyData& gamma) {
    require_valid(g, "check_relative");
    match_tangency_data(g, gamma);
    GraphIndex ix(g);
    ConditionReport report;
    report.reserve(gamma.relative.size());
    for (const auto& r : gamma.relative)
        report.push_back(detail::check_point(g, ix, r.point));
    return report;
}

// ---------------------------------------------------------------------------
// Membership predicates

// Member of the smoothable locus: all conditions pass at every relative
// point.  With no relative points at all this is vacuously true (every
// genus-zero twisted stable map to a rational stacky curve smooths).
inline bool is_K_Gamma(const DualMapGraph& g, const TangencyData& gamma) {
    return all_pass(check_relative(g, gamma));
}

// Additionally the source is smooth near every constrained fiber: no
// contracted component and no node over any relative point of the data.
inline bool is_N_Gamma(const DualMapGraph& g, const TangencyData& gamma) {
    if (!is_K_Gamma(g, gamma)) return false;
    for (const auto& r : gamma.relative) {
        const TargetPointId x = TargetPointId::relative(r.point);
        for (const auto& v : g.vertices)
            if (v.contracted_to(x)) return false;
        for (const auto& e : g.edges)
            if (e.over && *e.over == x) return false;
    }
    return true;
}

// Interior point: a single active vertex (smooth source) meeting all mark
// conditions.
inline bool is_M_Gamma(const DualMapGraph& g, const TangencyData& gamma) {
    if (!is_K_Gamma(g, gamma)) return false;
    return g.vertices.size() == 1 && g.vertices.front().active();
}

// ---------------------------------------------------------------------------
// Contracted-subtree reduction

// Merges every maximal connected subtree of vertices contracted to a common
// point into a single contracted vertex, transporting marks and external
// edges (with their ramifications and stabilizers) onto the merged vertex.
// Checker verdicts are invariant under this operation.
inline DualMapGraph reduce_contracted(const DualMapGraph& g) {
    require_valid(g, "reduce_contracted");
    GraphIndex ix(g);

    // Union–find over edges joining two contracted vertices (validate
    // guarantees equal image points on such edges).
    std::map<int, int> parent;
    for (const auto& v : g.vertices) parent[v.id] = v.id;
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::set<int> dropped_edges;
    for (const auto& e : g.edges) {
        const Vertex& a = ix.v(e.endpoints.first);
        const Vertex& b = ix.v(e.endpoints.second);
        if (a.contracted() && b.contracted()) {
            int ra = find(a.id), rb = find(b.id);
            if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
            dropped_edges.insert(e.id);
        }
    }

    DualMapGraph out;
    out.target = g.target;
    out.degree = g.degree;
    out.full_fiber = g.full_fiber;
    for (const auto& v : g.vertices)
        if (find(v.id) == v.id) out.vertices.push_back(v);
    for (const auto& e : g.edges) {
        if (dropped_edges.count(e.id)) continue;
        Edge ne = e;
        ne.endpoints = {find(e.endpoints.first), find(e.endpoints.second)};
        out.edges.push_back(std::move(ne));
    }
    for (const auto& m : g.marks) {
        MarkedPoint nm = m;
        nm.vertex = find(m.vertex);
        out.marks.push_back(std::move(nm));
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON rendering

inline nlohmann::json to_json(const ConditionWitness& w) {
    nlohmann::json j{{"kind", w.kind}};
    if (w.kind == "mark_wrong_position") {
        j["mark"] = w.mark;
        j["vertex"] = w.vertex;
    } else if (w.kind == "fiber_deficit") {
        j["vertex"] = w.vertex;
        j["accounted"] = w.lhs;
        j["degree"] = w.rhs;
    } else if (w.kind == "unmarked_node") {
        j["edge"] = w.edge;
    } else if (w.kind == "unbalanced_subtree") {
        j["vertices"] = w.vertices;
        j["tangency_sum"] = w.lhs;
        j["ramification_sum"] = w.rhs;
    } else if (w.kind == "mark_ramification") {
        j["mark"] = w.mark;
        j["vertex"] = w.vertex;
        j["tangency"] = w.lhs;
        j["ramification"] = w.rhs;
    } else if (w.kind == "free_mark_in_fiber") {
        j["mark"] = w.mark;
        j["vertex"] = w.vertex;
        j["tangency"] = w.lhs;
        j["multiplicity"] = w.rhs;
    }
    return j;
}

inline nlohmann::json to_json(const ConditionReport& report) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : report) {
        nlohmann::json conditions = nlohmann::json::array();
        for (const auto& c : p.conditions) {
            nlohmann::json ws = nlohmann::json::array();
            for (const auto& w : c.witnesses) ws.push_back(to_json(w));
            conditions.push_back(
                {{"index", c.index}, {"pass", c.pass}, {"witnesses", std::move(ws)}});
        }
        points.push_back({{"point", p.point},
                          {"pass", p.all_pass()},
                          {"conditions", std::move(conditions)}});
    }
    return {{"schema", 1}, {"pass", all_pass(report)}, {"points", std::move(points)}};
}

}  // namespace relmaps
