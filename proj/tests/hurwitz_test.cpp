#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "relmaps/hurwitz.hpp"
#include "support/fixtures.hpp"
#include "support/hurwitz_oracle.hpp"

using namespace relmaps;

TEST_CASE("partition enumeration") {
    const int expected[] = {1, 1, 2, 3, 5, 7, 11, 15, 22};
    for (int n = 0; n <= 8; ++n) {
        auto parts = partitions_of(n);
        CHECK(parts.size() == static_cast<std::size_t>(expected[n]));
        for (const auto& p : parts) CHECK(partition_sum(p) == n);
        // Descending lexicographic, no duplicates.
        for (std::size_t i = 1; i < parts.size(); ++i) CHECK(parts[i - 1] > parts[i]);
    }
    CHECK(partitions_of(4) == std::vector<Partition>{
              {4}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}});
}

TEST_CASE("conjugacy class sizes") {
    CHECK(hdetail::class_size(4, {4}) == 6);
    CHECK(hdetail::class_size(4, {3, 1}) == 8);
    CHECK(hdetail::class_size(4, {2, 2}) == 3);
    CHECK(hdetail::class_size(4, {2, 1, 1}) == 6);
    CHECK(hdetail::class_size(4, {1, 1, 1, 1}) == 1);
    for (int d = 1; d <= 6; ++d) {
        Int total = 0;
        for (const auto& type : partitions_of(d)) total += hdetail::class_size(d, type);
        CHECK(total == factorial(d));
    }
    // Cross-check against explicit enumeration.
    for (int d = 2; d <= 4; ++d)
        for (const auto& type : partitions_of(d))
            CHECK(hdetail::class_size(d, type) ==
                  Int(oracle::class_of(d, type).size()));
}

TEST_CASE("permutation helpers") {
    using hdetail::compose;
    using hdetail::cycle_type;
    using hdetail::inverse;
    using hdetail::rep_of_type;

    for (const auto& type : partitions_of(5)) {
        auto rep = rep_of_type(type);
        CHECK(cycle_type(rep) == type);
        CHECK(compose(rep, inverse(rep)) == hdetail::identity_perm(5));
        CHECK(compose(inverse(rep), rep) == hdetail::identity_perm(5));
        CHECK(hdetail::transposition_distance(type) ==
              5 - static_cast<int>(type.size()));
    }
    // compose applies the right factor first.
    hdetail::Perm a{1, 0, 2};  // (0 1)
    hdetail::Perm b{0, 2, 1};  // (1 2)
    CHECK(compose(a, b) == hdetail::Perm{1, 2, 0});  // 2 -> 1 -> 0 etc.
}

TEST_CASE("class-algebra counts agree with exhaustive enumeration") {
    struct Case {
        int d;
        std::vector<Partition> profile;
    };
    std::vector<Case> cases;
    // Every pair and triple of classes for d = 2, 3.
    for (int d = 2; d <= 3; ++d) {
        auto types = partitions_of(d);
        for (const auto& a : types)
            for (const auto& b : types) {
                cases.push_back({d, {a, b}});
                for (const auto& c : types) cases.push_back({d, {a, b, c}});
            }
    }
    // A representative selection for d = 4.
    cases.push_back({4, {{4}, {4}}});
    cases.push_back({4, {{2, 2}, {2, 2}}});
    cases.push_back({4, {{4}, {2, 2}, {2, 1, 1}}});
    cases.push_back({4, {{3, 1}, {3, 1}, {3, 1}}});
    cases.push_back({4, {{2, 1, 1}, {2, 1, 1}, {2, 1, 1}, {2, 1, 1}}});
    cases.push_back({4, {{4}, {3, 1}, {2, 1, 1}}});

    for (const auto& c : cases) {
        auto expected = oracle::oracle_count(c.d, c.profile);
        INFO("degree " << c.d << ", " << c.profile.size() << " classes");
        CHECK(hdetail::count_product_identity(c.d, c.profile) ==
              Int(expected.all_tuples));
        CHECK(hdetail::count_transitive(c.d, c.profile) == Int(expected.tuples));
        auto covers = hdetail::count_covers(c.d, c.profile, 8'000'000);
        REQUIRE(covers.has_value());
        CHECK(*covers == Int(expected.covers));
    }
}

TEST_CASE("disconnected-only profiles are rejected by transitivity") {
    // (2,2) squared multiplies to the identity but never acts transitively
    // with a single orbit structure of that shape alone... it splits 4 points
    // into two 2-orbits.
    CHECK(hdetail::count_product_identity(4, {{2, 2}, {2, 2}}) > 0);
    CHECK(hdetail::count_transitive(4, {{2, 2}, {2, 2}}) == 0);
}

TEST_CASE("full-prescription counting") {
    RealizabilityOptions opts;

    SECTION("two points of total ramification in degree 3") {
        std::vector<PointProfile> profiles{{TargetPointId::relative("z"), {3}},
                                           {fixtures::inf_point(), {3}}};
        CompletionCount c = count_full(3, profiles, opts);
        CHECK(c.extra_transpositions == 0);
        CHECK(c.exists);
        CHECK(c.tuples == 2);
        CHECK(c.weighted == Rat(1, 3));
        REQUIRE(c.covers.has_value());
        CHECK(*c.covers == 1);
    }
    SECTION("odd transposition count violates parity") {
        std::vector<PointProfile> profiles{{TargetPointId::relative("z"), {2}},
                                           {TargetPointId::relative("w"), {2}},
                                           {fixtures::inf_point(), {2}}};
        CompletionCount c = count_full(2, profiles, opts);
        CHECK(c.extra_transpositions == -1);
        CHECK_FALSE(c.exists);
        REQUIRE(c.covers.has_value());
        CHECK(*c.covers == 0);
    }
    SECTION("prescription order does not change the counts") {
        std::vector<PointProfile> a{{TargetPointId::relative("z"), {2, 1}},
                                    {fixtures::inf_point(), {3}}};
        std::vector<PointProfile> b{{fixtures::inf_point(), {3}},
                                    {TargetPointId::relative("z"), {2, 1}}};
        CompletionCount ca = count_full(3, a, opts);
        CompletionCount cb = count_full(3, b, opts);
        CHECK(ca.tuples == cb.tuples);
        CHECK(ca.weighted == cb.weighted);
        CHECK(ca.covers == cb.covers);
        CHECK(ca.extra_transpositions == cb.extra_transpositions);
    }
    SECTION("a tiny search budget yields an unknown cover count") {
        std::vector<PointProfile> profiles{{TargetPointId::relative("z"), {3}},
                                           {fixtures::inf_point(), {3}}};
        RealizabilityOptions tight = opts;
        tight.cover_budget = 1;
        CompletionCount c = count_full(3, profiles, tight);
        CHECK(c.exists);  // tuple counts never depend on the budget
        CHECK_FALSE(c.covers.has_value());
    }
}

TEST_CASE("partial prescriptions complete across every padding") {
    RamificationProblem p;
    p.degree = 4;
    p.prescribed.push_back({fixtures::inf_point(), {2}});
    auto completions = complete_profiles(p);
    REQUIRE(completions.size() == 2);
    CHECK(completions[0].prescribed[0].parts == Partition{2, 2});
    CHECK(completions[1].prescribed[0].parts == Partition{2, 1, 1});

    RealizabilityReport report = realizable(p);
    CHECK(report.partial);
    CHECK(report.completions.size() == 2);
    CHECK(report.exists);
    Int tuples = 0;
    Rat weighted = 0;
    for (const auto& c : report.completions) {
        tuples += c.tuples;
        weighted += c.weighted;
    }
    CHECK(report.tuples_total == tuples);
    CHECK(report.weighted_total == weighted);

    // The completion cap is enforced.
    RealizabilityOptions tight;
    tight.completion_cap = 1;
    CHECK_THROWS_AS(realizable(p, tight), capacity_error);
}

TEST_CASE("problem validation and capacity") {
    RamificationProblem bad;
    bad.degree = 3;
    bad.prescribed.push_back({fixtures::inf_point(), {4}});
    CHECK_THROWS_AS(validate_problem(bad), input_error);

    bad.prescribed[0].parts = {2, 2};  // sums past the degree
    CHECK_THROWS_AS(validate_problem(bad), input_error);

    bad.prescribed[0].parts = {0};
    CHECK_THROWS_AS(validate_problem(bad), input_error);

    RamificationProblem dup;
    dup.degree = 3;
    dup.prescribed.push_back({fixtures::inf_point(), {2}});
    dup.prescribed.push_back({fixtures::inf_point(), {3}});
    CHECK_THROWS_AS(validate_problem(dup), input_error);

    RamificationProblem big;
    big.degree = kDefaultDegreeCap + 1;
    CHECK_THROWS_AS(realizable(big), capacity_error);
    RealizabilityOptions loose;
    loose.degree_cap = big.degree;
    loose.with_covers = false;
    CHECK_NOTHROW(realizable(big, loose));
}

TEST_CASE("ramification problems read off a vertex") {
    SECTION("comb vertex sees one totally ramified point") {
        DualMapGraph g = fixtures::comb(3);
        RamificationProblem p = vertex_problem(g, 0);
        CHECK(p.degree == 3);
        REQUIRE(p.prescribed.size() == 1);
        CHECK(p.prescribed[0].point == fixtures::inf_point());
        CHECK(p.prescribed[0].parts == Partition{3});
        CHECK(vertex_realizable(g, 0));
    }
    SECTION("marks and subtree edges at the same point merge") {
        DualMapGraph g = fixtures::ramified_mark_graph();
        RamificationProblem p = vertex_problem(g, 0);
        CHECK(p.degree == 3);
        REQUIRE(p.prescribed.size() == 1);
        CHECK(p.prescribed[0].parts == Partition{2, 1});
        CHECK(vertex_realizable(g, 0));
    }
    SECTION("only active vertices have covering problems") {
        DualMapGraph g = fixtures::comb(3);
        CHECK_THROWS_AS(vertex_problem(g, 1), input_error);
        CHECK_THROWS_AS(vertex_problem(g, 99), input_error);
    }
}
