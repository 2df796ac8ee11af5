#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "relmaps/smoothing.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace relmaps;

TEST_CASE("recipe for a two-edge contracted component") {
    DualMapGraph g = fixtures::fiber_star({2, 3}, {5});
    SmoothingRecipe rec = recipe(g, "inf");
    REQUIRE(rec.components.size() == 1);
    const SmoothingComponent& comp = rec.components[0];
    CHECK(comp.a == 6);
    REQUIRE(comp.nodes.size() == 2);
    CHECK(comp.nodes[0].e == 2);
    CHECK(comp.nodes[0].m == 3);
    CHECK(comp.nodes[0].singularity() == "A_2");
    CHECK(comp.nodes[1].e == 3);
    CHECK(comp.nodes[1].m == 2);
    CHECK(comp.nodes[1].singularity() == "A_1");
    // a / m_ij recovers the edge ramification on each node.
    CHECK(comp.a / comp.nodes[0].m == 2);
    CHECK(comp.a / comp.nodes[1].m == 3);
}

TEST_CASE("recipe for the comb: single edge, smooth total space") {
    DualMapGraph g = fixtures::comb(4);
    SmoothingRecipe rec = recipe(g, "inf");
    REQUIRE(rec.components.size() == 1);
    CHECK(rec.components[0].a == 4);
    REQUIRE(rec.components[0].nodes.size() == 1);
    CHECK(rec.components[0].nodes[0].m == 1);
    CHECK(rec.components[0].nodes[0].singularity() == "A_0");

    SimpleExtension ext = simple_extension(g, rec);
    REQUIRE(ext.phi() == std::vector<Int>{1});
}

TEST_CASE("verification identities on the balanced two-edge component") {
    DualMapGraph g = fixtures::fiber_star({2, 3}, {5});
    SmoothingRecipe rec = recipe(g, "inf");
    IntersectionReport ir = verify_intersections(g, "inf", rec);
    REQUIRE(ir.components.size() == 1);
    REQUIRE(ir.nodes.size() == 2);
    CHECK(ir.cross_terms_zero);
    CHECK(ir.all_pullback);
    CHECK(ir.all_descent);
    // E·C = 1/m at each node; aE·C = e exactly.
    CHECK(ir.nodes[0].E_dot_C == Rat(1, 3));
    CHECK(ir.nodes[0].a_E_dot_C == Rat(2));
    CHECK(ir.nodes[0].expected == 2);
    CHECK(ir.nodes[1].E_dot_C == Rat(1, 2));
    CHECK(ir.nodes[1].a_E_dot_C == Rat(3));
    // E² = −(1/3 + 1/2) = −5/6; descent: 5 + 6·(−5/6) = 0.
    CHECK(ir.components[0].E_squared == Rat(-5, 6));
    CHECK(ir.components[0].D_dot_E == 5);
    CHECK(ir.components[0].descent == 0);
    CHECK(ir.components[0].descent_holds);

    DegreeReport dr = verify_degree_zero(g, "inf", rec);
    CHECK(dr.all_zero);
    for (const auto& c : dr.components) CHECK(c.degree == 0);
}

TEST_CASE("verification detects the unbalanced component") {
    DualMapGraph g = fixtures::fiber_star({2, 3}, {4});  // 4 != 2 + 3
    SmoothingRecipe rec = recipe(g, "inf");
    IntersectionReport ir = verify_intersections(g, "inf", rec);
    CHECK(ir.all_pullback);  // pullback never depends on the balance
    REQUIRE(ir.components.size() == 1);
    CHECK_FALSE(ir.components[0].descent_holds);
    CHECK(ir.components[0].descent == Rat(-1));  // 4 + 6·(−5/6)
    CHECK_FALSE(ir.all_descent);

    DegreeReport dr = verify_degree_zero(g, "inf", rec);
    CHECK_FALSE(dr.all_zero);
    // The defect shows on the contracted component and only there.
    for (const auto& c : dr.components) {
        if (c.vertex == 0) CHECK(c.degree != 0);
        else CHECK(c.degree == 0);
    }
}

TEST_CASE("multipliers deepen singularities without moving the divisor") {
    DualMapGraph g = fixtures::fiber_star({2, 3}, {5});
    SmoothingRecipe rec = recipe(g, "inf", {{1, 2}});  // r = 2 on the e = 3 edge
    REQUIRE(rec.components.size() == 1);
    const SmoothingComponent& comp = rec.components[0];
    CHECK(comp.a == 12);
    CHECK(comp.nodes[0].r == 1);
    CHECK(comp.nodes[1].r == 2);
    CHECK(comp.nodes[0].m == 6);
    CHECK(comp.nodes[1].m == 4);
    // The prescribed multiplier divides its own node's order.
    CHECK(comp.nodes[1].m % comp.nodes[1].r == 0);

    // Every identity still holds, with the same expected pullback values.
    IntersectionReport ir = verify_intersections(g, "inf", rec);
    CHECK(ir.all_pullback);
    CHECK(ir.all_descent);
    CHECK(ir.nodes[0].expected == 2);
    CHECK(ir.nodes[1].expected == 3);
    CHECK(ir.components[0].E_squared == Rat(-1, 6) + Rat(-1, 4));
    CHECK(verify_degree_zero(g, "inf", rec).all_zero);

    SimpleExtension ext = simple_extension(g, rec);
    REQUIRE(ext.phi() == std::vector<Int>{6, 4});
    for (const auto& [id, m] : ext.mark_multipliers) CHECK(m == 1);
}

TEST_CASE("divisibility targets are resolved on their own edge") {
    DualMapGraph g = fixtures::fiber_star({2, 3}, {5});

    SECTION("already satisfied targets change nothing") {
        MultiplierMap r = resolve_multiples(g, "inf", {{1, 2}});  // m there is already 2
        CHECK(r.empty());  // only multipliers > 1 are recorded
        CHECK(recipe(g, "inf", r).components[0].a == recipe(g, "inf").components[0].a);
    }
    SECTION("a target not yet dividing bumps the multiplier minimally") {
        MultiplierMap r = resolve_multiples(g, "inf", {{1, 5}});
        CHECK(r.at(1) == 5);
        SmoothingRecipe rec = recipe(g, "inf", r);
        CHECK(rec.components[0].a == 30);
        CHECK(rec.components[0].nodes[0].m == 15);
        CHECK(rec.components[0].nodes[1].m == 10);
        CHECK(rec.components[0].nodes[1].m % 5 == 0);
        CHECK(verify_intersections(g, "inf", rec).all_descent);
    }
    SECTION("single-edge components resolve on the only edge") {
        DualMapGraph comb = fixtures::comb(3);
        MultiplierMap r = resolve_multiples(comb, "inf", {{0, 4}});
        CHECK(r.at(0) == 4);
        SmoothingRecipe rec = recipe(comb, "inf", r);
        CHECK(rec.components[0].nodes[0].m == 4);
        CHECK(verify_intersections(comb, "inf", rec).all_descent);
    }
}

TEST_CASE("resolved targets always divide the final orders") {
    std::mt19937_64 rng(600613);
    for (int trial = 0; trial < 300; ++trial) {
        auto cfg = testgen::random_fiber_config(rng, true);
        std::map<int, long long> targets;
        for (const auto& e : cfg.graph.edges)
            if (rng() % 2) targets[e.id] = 1 + static_cast<long long>(rng() % 8);
        if (targets.empty()) continue;
        MultiplierMap r = resolve_multiples(cfg.graph, cfg.point, targets);
        SmoothingRecipe rec = recipe(cfg.graph, cfg.point, r);
        for (const auto& comp : rec.components)
            for (const auto& node : comp.nodes) {
                auto t = targets.find(node.edge);
                if (t != targets.end()) REQUIRE(node.m % t->second == 0);
                REQUIRE(node.m % node.r == 0);
                REQUIRE(comp.a == node.m * node.e);
            }
        // Multipliers never break the verification of a balanced graph.
        REQUIRE(verify_intersections(cfg.graph, cfg.point, rec).all_descent);
        REQUIRE(verify_degree_zero(cfg.graph, cfg.point, rec).all_zero);
    }
}

TEST_CASE("identity suite over random balanced and unbalanced configurations") {
    std::mt19937_64 rng(271828);
    int balanced_components = 0, unbalanced_components = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        auto cfg = testgen::random_fiber_config(rng, trial % 2 == 0);
        SmoothingRecipe rec = recipe(cfg.graph, cfg.point);
        IntersectionReport ir = verify_intersections(cfg.graph, cfg.point, rec);
        DegreeReport dr = verify_degree_zero(cfg.graph, cfg.point, rec);

        REQUIRE(ir.cross_terms_zero);
        for (const auto& ni : ir.nodes) REQUIRE(ni.pullback_holds);  // always

        for (const auto& ci : ir.components) {
            const bool balanced = cfg.balanced.at(ci.vertex);
            REQUIRE(ci.descent_holds == balanced);
            (balanced ? balanced_components : unbalanced_components) += 1;
        }
        // Componentwise degrees vanish exactly on the balanced components.
        for (const auto& cd : dr.components) {
            auto it = cfg.balanced.find(cd.vertex);
            const bool expected_zero = (it == cfg.balanced.end()) ? true : it->second;
            if (cd.zero != expected_zero) {
                INFO("vertex " << cd.vertex << " degree " << cd.degree.str());
                REQUIRE(cd.zero == expected_zero);
            }
        }
    }
    CHECK(balanced_components > 500);
    CHECK(unbalanced_components > 500);
}

TEST_CASE("reported denominators divide the lcm of the node orders") {
    std::mt19937_64 rng(1618);
    for (int trial = 0; trial < 200; ++trial) {
        auto cfg = testgen::random_fiber_config(rng, trial % 2 == 0);
        SmoothingRecipe rec = recipe(cfg.graph, cfg.point);
        IntersectionReport ir = verify_intersections(cfg.graph, cfg.point, rec);
        Int all_orders = 1;
        for (const auto& comp : rec.components)
            for (const auto& node : comp.nodes) all_orders = lcm(all_orders, node.m);
        for (const auto& ni : ir.nodes)
            REQUIRE(all_orders % denominator(ni.E_dot_C) == 0);
        for (const auto& ci : ir.components) {
            REQUIRE(all_orders % denominator(ci.E_squared) == 0);
            REQUIRE(all_orders % denominator(ci.descent) == 0);
        }
    }
}

TEST_CASE("recipe preconditions") {
    SECTION("graphs must be reduced over the point") {
        DualMapGraph chain = fixtures::contracted_chain();
        CHECK_THROWS_AS(recipe(chain, "inf"), input_error);
        // After reduction the same graph is accepted.
        DualMapGraph reduced = reduce_contracted(chain);
        SmoothingRecipe rec = recipe(reduced, "inf");
        CHECK(rec.components.size() == 1);
        CHECK(rec.components[0].a == 4);  // edges e = 2, 2
        CHECK(verify_intersections(reduced, "inf", rec).all_descent);
    }
    SECTION("multipliers must be positive") {
        DualMapGraph g = fixtures::fiber_star({2, 3}, {5});
        CHECK_THROWS_AS(recipe(g, "inf", {{0, 0}}), input_error);
        CHECK_THROWS_AS(recipe(g, "inf", {{0, -3}}), input_error);
    }
    SECTION("a point with no contracted components yields an empty recipe") {
        DualMapGraph g = fixtures::single_vertex({2, 3});
        SmoothingRecipe rec = recipe(g, "inf");
        CHECK(rec.components.empty());
        IntersectionReport ir = verify_intersections(g, "inf", rec);
        CHECK(ir.all_pullback);
        CHECK(ir.all_descent);
        // Degree check: tangencies match the fiber degree on the vertex.
        CHECK(verify_degree_zero(g, "inf", rec).all_zero);
    }
}

TEST_CASE("extension multipliers cover every edge and mark") {
    DualMapGraph g = fixtures::contracted_chain();
    DualMapGraph reduced = reduce_contracted(g);
    SmoothingRecipe rec = recipe(reduced, "inf");
    SimpleExtension ext = simple_extension(reduced, rec);
    CHECK(ext.edge_multipliers.size() == reduced.edges.size());
    CHECK(ext.mark_multipliers.size() == reduced.marks.size());
    for (const auto& comp : rec.components)
        for (const auto& node : comp.nodes)
            CHECK(ext.edge_multipliers.at(node.edge) == node.m);
}
