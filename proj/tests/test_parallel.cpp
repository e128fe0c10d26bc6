#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "orderlab/entropy.hpp"
#include "orderlab/folner.hpp"
#include "orderlab/order.hpp"
#include "orderlab/pairs.hpp"
#include "orderlab/shift.hpp"

using namespace orderlab;

// Every parallel kernel has a serial twin; these checks pin the contract that
// both produce identical results, including identical witness ordering.

TEST_CASE("axiom scan: serial and parallel agree, clean and corrupted") {
    for (GroupId group : {GroupId::lattice(2), GroupId::heisenberg()}) {
        OrderedGroupContext ctx = OrderedGroupContext::standard(group);
        PastAxiomReport ser = verify_past_axioms(ctx, 2, Parallelism::Serial);
        PastAxiomReport par = verify_past_axioms(ctx, 2, Parallelism::Parallel);
        CHECK(ser.passed());
        CHECK(ser.disjointness_violations == par.disjointness_violations);
        CHECK(ser.covering_violations == par.covering_violations);
        CHECK(ser.closure_violations == par.closure_violations);
    }

    // corrupt the past so the violation lists are nonempty
    OrderedGroupContext bad = OrderedGroupContext::standard(GroupId::lattice(2));
    bad.past_membership = [](const GroupElement& g) {
        return g.coords[0] < 0 || (g.coords[0] == 0 && g.coords[1] < -1);
    };
    PastAxiomReport ser = verify_past_axioms(bad, 2, Parallelism::Serial);
    PastAxiomReport par = verify_past_axioms(bad, 2, Parallelism::Parallel);
    CHECK_FALSE(ser.passed());
    CHECK(ser.covering_violations == par.covering_violations);
    CHECK(ser.closure_violations == par.closure_violations);
    CHECK(ser.disjointness_violations == par.disjointness_violations);
}

TEST_CASE("admissibility scan: serial and parallel agree") {
    for (GroupId group :
         {GroupId::lattice(2), GroupId::heisenberg(), GroupId::unipotent(3)}) {
        std::int64_t radius = group.kind == GroupKind::Unipotent ? 1 : 2;
        OrderedGroupContext ctx = OrderedGroupContext::standard(group);
        AdmissibilityReport ser =
            verify_admissibility(ctx, 3, radius, Parallelism::Serial);
        AdmissibilityReport par =
            verify_admissibility(ctx, 3, radius, Parallelism::Parallel);
        CHECK(ser.passed());
        CHECK(par.passed());
        CHECK(ser.closure_violations == par.closure_violations);
        CHECK(ser.containment_violations == par.containment_violations);
        CHECK(ser.counts_below == par.counts_below);
        CHECK(ser.bound_values == par.bound_values);
        CHECK(ser.generator_check == par.generator_check);
    }
}

TEST_CASE("defect series: serial and parallel agree exactly") {
    GroupId h = GroupId::heisenberg();
    GroupElement t2 = make_element(h, {0, 1, 0});
    FolnerDefectSeries ser = defect_trend(h, t2, 2, 8, Rational(1, 5),
                                          Parallelism::Serial);
    FolnerDefectSeries par = defect_trend(h, t2, 2, 8, Rational(1, 5),
                                          Parallelism::Parallel);
    REQUIRE(ser.defects.size() == par.defects.size());
    for (std::size_t i = 0; i < ser.defects.size(); ++i) {
        CHECK(ser.defects[i].first == par.defects[i].first);
        CHECK(ser.defects[i].second == par.defects[i].second);
    }
    CHECK(ser.trend_pass == par.trend_pass);
}

TEST_CASE("planar pattern count: serial and parallel agree") {
    GroupId z2 = GroupId::lattice(2);
    ShiftSystem hard;
    hard.group = z2;
    hard.alphabet.size = 2;
    hard.forbidden = {ForbiddenPattern{{{{0, 0}, 1}, {{1, 0}, 1}}},
                      ForbiddenPattern{{{{0, 0}, 1}, {{0, 1}, 1}}}};
    FiniteWindow F = folner_box(z2, 9); // 10 x 10
    BigInt ser = pattern_count(hard, F, Parallelism::Serial);
    BigInt par = pattern_count(hard, F, Parallelism::Parallel);
    CHECK(ser == par);

    EntropyEstimate es = top_entropy_estimate(hard, 7, Parallelism::Serial);
    EntropyEstimate ep = top_entropy_estimate(hard, 7, Parallelism::Parallel);
    CHECK(es.count == ep.count);
    CHECK(es.estimate == ep.estimate);
}

TEST_CASE("pair violation scan: serial and parallel agree") {
    GroupId z2 = GroupId::lattice(2);
    OrderedGroupContext ctx = OrderedGroupContext::standard(z2);
    std::vector<GroupElement> diff;
    for (std::int64_t a = -3; a <= 3; ++a)
        for (std::int64_t b = -3; b <= 3; ++b)
            if ((a + b) % 2 == 0) diff.push_back(make_element(z2, {a, b}));
    auto [x, y] = make_finite_difference_pair(z2, diff, 16, 2, 99);
    AsymptoticCheckReport ser =
        is_asymptotic_truncated(x, y, ctx, 8, 9, Parallelism::Serial);
    AsymptoticCheckReport par =
        is_asymptotic_truncated(x, y, ctx, 8, 9, Parallelism::Parallel);
    CHECK(ser.violations == par.violations);
    CHECK(ser.max_violation_radius == par.max_violation_radius);
    CHECK(ser.verdict == par.verdict);
    CHECK(!ser.violations.empty());
}
