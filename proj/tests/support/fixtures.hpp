// Hand-built graphs used as goldens across the test suite: the two reference
// configurations from the smoothability discussion (a totally ramified comb
// and a degree-3 graph violating the balance condition), plus small building
// blocks for smoothing and strata checks.
#pragma once

#include <string>
#include <vector>

#include "relmaps/gamma.hpp"
#include "relmaps/graph.hpp"

namespace relmaps::fixtures {

inline const std::string kInf = "inf";

inline TargetPointId inf_point() { return TargetPointId::relative(kInf); }

// Totally ramified comb: one active vertex of degree n joined by a single
// edge of ramification n to a contracted vertex over "inf" carrying n marks
// of tangency 1.  Satisfies all three conditions (balance: n = n).
inline DualMapGraph comb(int n) {
    DualMapGraph g;
    g.degree = n;
    g.vertices.push_back({0, VertexRole::active, n, std::nullopt});
    g.vertices.push_back({1, VertexRole::contracted, 0, inf_point()});
    g.edges.push_back({0, {0, 1}, n, std::nullopt, 1, std::nullopt});
    for (int k = 0; k < n; ++k) g.marks.push_back({k, 1, 1, 1, inf_point(), 1});
    return g;
}

inline TangencyData comb_gamma(int n) {
    TangencyData gamma;
    gamma.relative.push_back({kInf, std::vector<int>(n, 1)});
    return gamma;
}

// Transverse comb: as above but the single edge has ramification 1, so the
// contracted vertex is unbalanced (n marks of tangency 1 vs boundary sum 1).
// Satisfies condition (1); fails (3) for n > 1.  The fiber flag is withdrawn
// so condition (2) does not also fire on the uncovered fiber mass.
inline DualMapGraph transverse_comb(int n) {
    DualMapGraph g = comb(n);
    g.edges[0].ramification = 1;
    g.set_full_fiber(kInf, false);
    return g;
}

// The degree-3 counterexample: active vertex of degree 3 carrying a mark of
// tangency 1 with local ramification 2 over "inf", plus an edge of
// ramification 1 to a contracted vertex over "inf" with two tangency-1 marks.
// Conditions (1) and (2) hold; (3) fails with two witnesses (the contracted
// vertex: 2 vs 1; the over-ramified mark: 1 vs 2).
inline DualMapGraph ramified_mark_graph() {
    DualMapGraph g;
    g.degree = 3;
    g.vertices.push_back({0, VertexRole::active, 3, std::nullopt});
    g.vertices.push_back({1, VertexRole::contracted, 0, inf_point()});
    g.edges.push_back({0, {0, 1}, 1, std::nullopt, 1, std::nullopt});
    g.marks.push_back({0, 0, 1, 2, inf_point(), 1});  // on the active vertex, ram 2
    g.marks.push_back({1, 1, 1, 1, inf_point(), 1});
    g.marks.push_back({2, 1, 1, 1, inf_point(), 1});
    return g;
}

inline TangencyData ramified_mark_gamma() { return comb_gamma(3); }

// Single active vertex with the given tangencies over "inf", each mark
// unramified beyond its contact order; an interior point of the stratum.
inline DualMapGraph single_vertex(const std::vector<int>& tangencies) {
    DualMapGraph g;
    int d = 0;
    for (int t : tangencies) d += t;
    g.degree = d;
    g.vertices.push_back({0, VertexRole::active, d, std::nullopt});
    int id = 0;
    for (int t : tangencies)
        g.marks.push_back({id++, 0, t, static_cast<long long>(std::max(t, 1)), inf_point(), 1});
    return g;
}

inline TangencyData single_vertex_gamma(const std::vector<int>& tangencies) {
    TangencyData gamma;
    std::vector<int> sorted = tangencies;
    std::sort(sorted.begin(), sorted.end(), std::greater<int>());
    gamma.relative.push_back({kInf, sorted});
    return gamma;
}

// Star configuration for the smoothing module: one contracted vertex over
// "inf" with boundary edges of the given ramifications (each to its own
// active vertex of matching degree) and marks of the given tangencies.
inline DualMapGraph fiber_star(const std::vector<long long>& edge_rams,
                               const std::vector<int>& tangencies) {
    DualMapGraph g;
    g.vertices.push_back({0, VertexRole::contracted, 0, inf_point()});
    int degree = 0;
    int eid = 0;
    for (long long e : edge_rams) {
        const int v = eid + 1;
        g.vertices.push_back({v, VertexRole::active, static_cast<int>(e), std::nullopt});
        g.edges.push_back({eid, {v, 0}, e, std::nullopt, 1, std::nullopt});
        degree += static_cast<int>(e);
        ++eid;
    }
    int mid = 0;
    for (int t : tangencies) g.marks.push_back({mid++, 0, t, std::max(1, t), inf_point(), 1});
    // Keep the contracted vertex stable if the configuration is tiny.
    while (g.edges.size() + g.marks.size() < 3)
        g.marks.push_back({mid++, 0, 0, 1, std::nullopt, 1});
    g.degree = degree;
    g.set_full_fiber(kInf, false);
    return g;
}

// Chain of two contracted vertices over "inf" (the merge golden): active
// vertex -- e=2 --> contracted A (one tangency-2 mark) -- contracted edge -->
// contracted B (two tangency-1 marks) <-- e=2 -- active vertex.
inline DualMapGraph contracted_chain() {
    DualMapGraph g;
    g.degree = 4;
    g.vertices.push_back({0, VertexRole::active, 2, std::nullopt});
    g.vertices.push_back({1, VertexRole::contracted, 0, inf_point()});
    g.vertices.push_back({2, VertexRole::contracted, 0, inf_point()});
    g.vertices.push_back({3, VertexRole::active, 2, std::nullopt});
    g.edges.push_back({0, {0, 1}, 2, std::nullopt, 1, std::nullopt});
    g.edges.push_back({1, {1, 2}, 1, std::nullopt, 1, std::nullopt});
    g.edges.push_back({2, {3, 2}, 2, std::nullopt, 1, std::nullopt});
    g.marks.push_back({0, 1, 2, 2, inf_point(), 1});
    g.marks.push_back({1, 2, 1, 1, inf_point(), 1});
    g.marks.push_back({2, 2, 1, 1, inf_point(), 1});
    return g;
}

inline TangencyData contracted_chain_gamma() {
    TangencyData gamma;
    gamma.relative.push_back({kInf, {2, 1, 1}});
    return gamma;
}

}  // namespace relmaps::fixtures
