#pragma once
// Enumeration of boundary strata: all isomorphism classes of reduced,
// checker-passing, cover-realizable dual graphs for a given tangency
// prescription and degree, together with their dimensions.
//
// Scope: strata are generated as one active core vertex with irreducible
// contracted components attached over the relative points.  Degenerations
// away from the relative points (nodes between active components over
// unconstrained points, ramification conditions at unnamed points) do not
// affect membership in the smoothable locus and are not enumerated.

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "relmaps/canonical.hpp"
#include "relmaps/conditions.hpp"
#include "relmaps/errors.hpp"
#include "relmaps/graph.hpp"
#include "relmaps/hurwitz.hpp"
#include "relmaps/json_io.hpp"

namespace relmaps {

// ---------------------------------------------------------------------------
// Dimension bookkeeping

// Expected dimension of the moduli of maps with the given tangency
// prescription: 2d + (number of marks) - 2, minus one condition per unit of
// prescribed contact.
inline int moduli_dimension(const TangencyData& gamma, int degree) {
    validate_tangency_data(gamma);
    int marks = gamma.free_marks;
    int contact = 0;
    for (const auto& rp : gamma.relative) {
        marks += static_cast<int>(rp.tangencies.size());
        contact += rp.total();
    }
    return 2 * degree + marks - 2 - contact;
}

// Dimension of the locus of maps with this dual graph.  Each active vertex
// contributes the dimension of its space of covers with marked fiber points,
// 2·deg + k - 2, minus the prescribed-contact conditions at its special
// points; a prescribed image costs the full local index e, a free image one
// less.  Each contracted vertex contributes its moduli of marked points,
// max(0, k - 3).
inline int stratum_dimension(const DualMapGraph& g) {
    require_valid(g, "stratum_dimension");
    GraphIndex ix(g);

    // Image point of each contracted component (shared across the component).
    std::map<int, int> comp;
    for (const auto& v : g.vertices)
        if (v.role == VertexRole::contracted) comp[v.id] = v.id;
    std::function<int(int)> find = [&](int a) {
        while (comp[a] != a) { comp[a] = comp[comp[a]]; a = comp[a]; }
        return a;
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
            if (v.target && !v.target->is_generic()) slot = v.target;
        }

    int dim = 0;
    for (const auto& v : g.vertices) {
        const int k = ix.special_point_count(v.id);
        if (v.contracted()) {
            dim += std::max(0, k - 3);
            continue;
        }
        int cost = 0;
        for (const MarkedPoint* m : ix.marks_on.at(v.id)) {
            const int e = static_cast<int>(m->ramification);
            if (m->target && !m->target->is_generic()) cost += e;
            else cost += e - 1;  // ramification prescribed, image free
        }
        for (const Edge* e : ix.edges_at.at(v.id)) {
            const Vertex& w = ix.v(e->other(v.id));
            if (w.contracted()) {
                const int r = static_cast<int>(e->ramification);
                const auto& t = comp_target[find(w.id)];
                cost += (t && !t->is_generic()) ? r : r - 1;
            } else {
                const int r = static_cast<int>(e->ramification_at(v.id));
                cost += (e->over && !e->over->is_generic()) ? r : r - 1;
            }
        }
        dim += 2 * v.degree + k - 2 - cost;
    }
    return dim;
}

// ---------------------------------------------------------------------------
// Stratum enumeration

struct Stratum {
    DualMapGraph graph;  // canonical form
    int dimension = 0;
    int codimension = 0;  // relative to moduli_dimension of the prescription
    bool is_M = false;
    bool is_N = false;
    bool is_K = false;
};

struct EnumerateOptions {
    int degree_cap = 6;
    int mark_cap = 8;
    int leaves_per_fiber_cap = 4;
    int jobs = 1;
    RealizabilityOptions realizability;
};

namespace sdetail {

// Distinct sub-multisets of `pool` (a descending multiset) with at least
// `min_size` elements, each returned with its complement; used to split one
// fiber's tangencies into a contracted component and the rest.
inline std::vector<std::pair<std::vector<int>, std::vector<int>>> submultisets(
    const std::vector<int>& pool, std::size_t min_size) {
    std::vector<std::pair<int, int>> vals;  // (value, multiplicity), descending
    for (int t : pool) {
        if (!vals.empty() && vals.back().first == t) ++vals.back().second;
        else vals.emplace_back(t, 1);
    }
    std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
    std::vector<int> take, leave;
    auto rec = [&](auto&& self, std::size_t idx) -> void {
        if (idx == vals.size()) {
            if (take.size() >= min_size) out.emplace_back(take, leave);
            return;
        }
        const auto [value, mult] = vals[idx];
        for (int c = 0; c <= mult; ++c) {
            for (int i = 0; i < c; ++i) take.push_back(value);
            for (int i = 0; i < mult - c; ++i) leave.push_back(value);
            self(self, idx + 1);
            for (int i = 0; i < c; ++i) take.pop_back();
            for (int i = 0; i < mult - c; ++i) leave.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

// For one fiber's tangency multiset: all ways to group some of the marks
// into contracted components (each carrying >= 2 marks, to be stable with
// the node), leaving the rest on the active vertex.  Components are listed
// in non-increasing multiset order so each grouping appears exactly once.
inline std::vector<std::vector<std::vector<int>>> fiber_groupings(std::vector<int> tangencies,
                                                                  int max_components) {
    std::sort(tangencies.begin(), tangencies.end(), std::greater<int>());
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<std::vector<int>> acc;
    auto rec = [&](auto&& self, const std::vector<int>& remaining) -> void {
        out.push_back(acc);  // stop here; `remaining` stays on the active vertex
        if (static_cast<int>(acc.size()) >= max_components) return;
        for (auto& [block, rest] : submultisets(remaining, 2)) {
            if (!acc.empty() && block > acc.back()) continue;  // canonical order
            acc.push_back(block);
            self(self, rest);
            acc.pop_back();
        }
    };
    rec(rec, tangencies);
    return out;
}

}  // namespace sdetail

// All isomorphism classes of reduced dual graphs of total degree d satisfying
// the smoothing conditions at every relative point, with every active vertex
// realizable as an honest cover.  Deterministic: sorted by canonical key.
inline std::vector<Stratum> enumerate_strata(const TangencyData& gamma,
                                             const StackyTarget& target, int degree,
                                             const EnumerateOptions& opts = {}) {
    target.check();
    validate_tangency_data(gamma);
    require_fiber_totals(gamma, degree);
    if (degree < 1) throw input_error("degree must be at least 1");
    if (degree > opts.degree_cap)
        throw capacity_error("degree " + std::to_string(degree) +
                             " exceeds the enumeration cap of " +
                             std::to_string(opts.degree_cap));
    if (gamma.mark_count() > opts.mark_cap)
        throw capacity_error("total marks " + std::to_string(gamma.mark_count()) +
                             " exceed the enumeration cap of " + std::to_string(opts.mark_cap));

    // Per relative point: the ways to split its tangencies between the active
    // vertex and contracted components.
    std::vector<std::string> points;
    std::vector<std::vector<std::vector<std::vector<int>>>> groupings;
    for (const auto& rp : gamma.relative) {
        points.push_back(rp.point);
        groupings.push_back(sdetail::fiber_groupings(rp.tangencies, opts.leaves_per_fiber_cap));
    }

    // Assemble one candidate graph per combination of per-point groupings.
    std::vector<DualMapGraph> candidates;
    std::vector<std::size_t> pick(points.size(), 0);
    while (true) {
        DualMapGraph g;
        g.target = target;
        g.degree = degree;
        g.vertices.push_back({0, VertexRole::active, degree, std::nullopt});
        int next_vertex = 1, next_edge = 0, next_mark = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& groups = groupings[i][pick[i]];
            std::vector<int> grouped;  // marks placed on contracted components
            for (const auto& block : groups) {
                const int leaf = next_vertex++;
                int e = 0;
                for (int t : block) e += t;
                g.vertices.push_back(
                    {leaf, VertexRole::contracted, 0, TargetPointId::relative(points[i])});
                g.edges.push_back({next_edge++, {0, leaf}, e, std::nullopt, 1, std::nullopt});
                for (int t : block) {
                    g.marks.push_back(
                        {next_mark++, leaf, t, std::max(t, 1), TargetPointId::relative(points[i]), 1});
                    grouped.push_back(t);
                }
            }
            // Remaining tangencies sit on the active vertex at honest
            // ramification points of the cover.
            std::vector<int> remaining = gamma.relative[i].tangencies;
            std::sort(remaining.begin(), remaining.end(), std::greater<int>());
            std::sort(grouped.begin(), grouped.end(), std::greater<int>());
            std::vector<int> active_marks;
            std::set_difference(remaining.begin(), remaining.end(), grouped.begin(),
                                grouped.end(), std::back_inserter(active_marks),
                                std::greater<int>());
            for (int t : active_marks)
                g.marks.push_back(
                    {next_mark++, 0, t, std::max(t, 1), TargetPointId::relative(points[i]), 1});
        }
        for (int i = 0; i < gamma.free_marks; ++i)
            g.marks.push_back({next_mark++, 0, 0, 1, std::nullopt, 1});
        candidates.push_back(std::move(g));

        std::size_t i = points.size();
        bool rolled = true;
        while (i > 0) {
            --i;
            if (++pick[i] < groupings[i].size()) { rolled = false; break; }
            pick[i] = 0;
        }
        if (points.empty() || rolled) break;
    }

    // Filter: structural validity, the smoothing conditions at every relative
    // point, and realizability of the active vertex as a cover.
    std::vector<std::optional<Stratum>> kept(candidates.size());
    const int mdim = moduli_dimension(gamma, degree);
    auto evaluate = [&](std::size_t idx) {
        const DualMapGraph& g = candidates[idx];
        if (!validate(g).empty()) return;
        ConditionReport report = check_relative(g, gamma);
        if (!all_pass(report)) return;
        RealizabilityOptions cheap = opts.realizability;
        cheap.with_covers = false;
        for (const auto& v : g.vertices)
            if (v.active() && !vertex_realizable(g, v.id, cheap)) return;
        Stratum s;
        s.graph = canonical_form(g);
        s.dimension = stratum_dimension(g);
        s.codimension = mdim - s.dimension;
        s.is_K = true;
        s.is_N = is_N_Gamma(g, gamma);
        s.is_M = is_M_Gamma(g, gamma);
        kept[idx] = std::move(s);
    };
    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1 || candidates.size() < 2) {
        for (std::size_t i = 0; i < candidates.size(); ++i) evaluate(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> cursor{0};
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = cursor.fetch_add(1); i < candidates.size();
                     i = cursor.fetch_add(1))
                    evaluate(i);
            });
        for (auto& th : pool) th.join();
    }

    // Deduplicate isomorphic graphs and order deterministically.
    std::map<std::string, Stratum> by_key;
    for (auto& s : kept)
        if (s) by_key.emplace(canonical_key(s->graph), std::move(*s));
    std::vector<Stratum> out;
    out.reserve(by_key.size());
    for (auto& [key, s] : by_key) out.push_back(std::move(s));
    return out;
}

// ---------------------------------------------------------------------------
// JSON rendering

inline nlohmann::json to_json(const Stratum& s) {
    return {{"graph", to_json(s.graph)},
            {"canonical_key", canonical_key(s.graph)},
            {"dimension", s.dimension},
            {"codimension", s.codimension},
            {"is_M", s.is_M},
            {"is_N", s.is_N},
            {"is_K", s.is_K}};
}

inline nlohmann::json strata_to_json(const TangencyData& gamma, int degree,
                                     const std::vector<Stratum>& strata) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& s : strata) list.push_back(to_json(s));
    return {{"schema", 1},
            {"gamma", to_json(gamma)},
            {"degree", degree},
            {"moduli_dimension", moduli_dimension(gamma, degree)},
            {"count", strata.size()},
            {"strata", list}};
}

}  // namespace relmaps
