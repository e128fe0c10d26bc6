#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "orderlab/serialize.hpp"

using namespace orderlab;
using nlohmann::json;

TEST_CASE("group elements render with group name and coordinates") {
    GroupId z2 = GroupId::lattice(2);
    json j = json_of(make_element(z2, {-2, 1}));
    CHECK(j["group"] == "z2");
    CHECK(j["coords"] == json::array({-2, 1}));
    json h = json_of(make_element(GroupId::heisenberg(), {1, 2, 3}));
    CHECK(h["group"] == "heisenberg");
    CHECK(h["coords"].size() == 3);
}

TEST_CASE("past axiom reports round trip through JSON") {
    GroupId z2 = GroupId::lattice(2);
    OrderedGroupContext ctx = OrderedGroupContext::standard(z2);
    PastAxiomReport rep = verify_past_axioms(ctx, 2);
    json j = json_of(rep);
    CHECK(j["kind"] == "past_axioms");
    CHECK(j["group"] == "z2");
    CHECK(j["box_radius"] == 2);
    CHECK(j["passed"] == true);
    CHECK(j["disjointness_violations"].empty());

    // corrupt the past so violations get rendered
    OrderedGroupContext bad = ctx;
    bad.past_membership = [](const GroupElement& g) {
        return !g.coords.empty() && g.coords[0] <= 0 &&
               !(g.coords[0] == 0 && g.coords[1] == 0);
    };
    PastAxiomReport brep = verify_past_axioms(bad, 1);
    json bj = json_of(brep);
    CHECK(bj["passed"] == false);
    CHECK(!bj["disjointness_violations"].empty());
    CHECK(bj["disjointness_violations"][0]["group"] == "z2");
}

TEST_CASE("admissibility reports merge counts with their bounds") {
    OrderedGroupContext ctx = OrderedGroupContext::standard(GroupId::heisenberg());
    AdmissibilityReport rep = verify_admissibility(ctx, 2, 1);
    json j = json_of(rep);
    CHECK(j["kind"] == "admissibility");
    CHECK(j["passed"] == true);
    CHECK(j["generator_check"] == true);
    REQUIRE(j["counts_below"].size() == 2);
    CHECK(j["counts_below"][0]["n"] == 1);
    CHECK(j["counts_below"][0].contains("bound"));
    CHECK(j["counts_below"][0]["count"].get<std::int64_t>() <=
          j["counts_below"][0]["bound"].get<std::int64_t>());

    // parse back from the rendered text
    std::string text = render_report(j);
    json back = json::parse(text);
    CHECK(back["schema_version"] == "1");
    CHECK(back["counts_within_bounds"] == true);
}

TEST_CASE("defect series render as JSON and CSV") {
    GroupId z2 = GroupId::lattice(2);
    FolnerDefectSeries series =
        defect_trend(z2, make_element(z2, {1, 0}), 2, 5);
    json j = json_of(series);
    CHECK(j["kind"] == "folner_defects");
    CHECK(j["translator"]["coords"] == json::array({1, 0}));
    CHECK(j["threshold"] == "1/5");
    REQUIRE(j["defects"].size() == 4);
    CHECK(j["defects"][0]["n"] == 2);
    CHECK(j["defects"][0]["defect"] == "2/3");
    CHECK(j["defects"][1]["defect"] == "1/2");
    CHECK(j["defects"][3]["defect"] == "1/3");
    CHECK(j["defects"][1]["value"].get<double>() == 0.5);

    std::string csv = to_csv(series);
    CHECK(csv == "n,numerator,denominator,value\n"
                 "2,2,3,0.66666666666666663\n"
                 "3,1,2,0.5\n"
                 "4,2,5,0.40000000000000002\n"
                 "5,1,3,0.33333333333333331\n");
}

TEST_CASE("entropy estimates carry exact counts as decimal strings") {
    GroupId z1 = GroupId::lattice(1);
    EntropyEstimate est = top_entropy_estimate(ShiftSystem::full_shift(z1, 2), 3);
    json j = json_of(est);
    CHECK(j["kind"] == "entropy_estimate");
    CHECK(j["n"] == 3);
    CHECK(j["window_size"] == 4); // averaging window [0, 3]
    CHECK(j["count"] == "16");
    CHECK(j["estimate"].get<double>() == std::log(2.0));
}

TEST_CASE("pinsker reports render the full split") {
    GroupId z1 = GroupId::lattice(1);
    OrderedGroupContext ctx = OrderedGroupContext::standard(z1);
    ShiftMeasure mu = ShiftMeasure::bernoulli(z1, {Rational(1, 2), Rational(1, 2)});
    PinskerCheckReport rep =
        pinsker_check(mu, ctx, identity(z1), make_element(z1, {1}), 2);
    json j = json_of(rep);
    CHECK(j["kind"] == "pinsker_check");
    CHECK(j["radius"] == 2);
    CHECK(j["gap"].get<double>() == 0.0);
    CHECK(j["lhs"].get<double>() == std::log(2.0));
    CHECK(j["a"]["coords"] == json::array({0}));
}

TEST_CASE("asymptotic reports name their verdict") {
    GroupId z2 = GroupId::lattice(2);
    OrderedGroupContext ctx = OrderedGroupContext::standard(z2);
    auto [x, y] =
        make_finite_difference_pair(z2, {make_element(z2, {-2, 1})}, 12, 2, 7);
    json ok = json_of(is_asymptotic_truncated(x, y, ctx, 4, 6));
    CHECK(ok["kind"] == "asymptotic_check");
    CHECK(ok["verdict"] == "asymptotic_within_horizon");
    CHECK(ok["difference"].size() == 1);

    auto [u, v] =
        make_finite_difference_pair(z2, {make_element(z2, {0, 0})}, 2, 2, 5);
    json bad = json_of(is_asymptotic_truncated(u, v, ctx, 0, 6));
    CHECK(bad["verdict"] == "refuted");
    CHECK(bad["max_violation_radius"] == 0);
}

TEST_CASE("Li-Yorke reports and chaotic samples render their witnesses") {
    GroupId z1 = GroupId::lattice(1);
    LiYorkePair p = li_yorke_witness(z1, 0.5, 3, 4, 2, 7);
    json j = json_of(p.report);
    CHECK(j["kind"] == "li_yorke");
    CHECK(j["levels"] == json::array({3, 4, 5, 6, 7}));
    REQUIRE(j["proximal"].size() == 4);
    CHECK(j["proximal"][0]["index"] == 15);
    CHECK(j["proximal"][0]["distance"].get<double>() == std::ldexp(1.0, -15));
    CHECK(j["proximal"][0]["s"]["coords"] == json::array({-24}));
    CHECK(j["witnessed"] == true);

    ChaoticSample sample = chaotic_set_sample(z1, 3, 0.5, 2, 2, 2, 5);
    json cj = json_of(sample);
    CHECK(cj["kind"] == "chaotic_sample");
    CHECK(cj["config_count"] == 3);
    CHECK(cj["config_cells"] == 513);
    REQUIRE(cj["pairs"].size() == 3);
    CHECK(cj["pairs"][2]["first"] == 1);
    CHECK(cj["pairs"][2]["second"] == 2);
    CHECK(cj["pairs"][2]["report"]["kind"] == "li_yorke");
}

TEST_CASE("rendering is deterministic and versioned") {
    GroupId z1 = GroupId::lattice(1);
    std::string one = render_report(json_of(li_yorke_witness(z1, 0.5, 3, 4, 2, 7).report));
    std::string two = render_report(json_of(li_yorke_witness(z1, 0.5, 3, 4, 2, 7).report));
    CHECK(one == two);
    CHECK(one.back() == '\n');
    json parsed = json::parse(one);
    CHECK(parsed["schema_version"] == "1");
    CHECK(parsed["kind"] == "li_yorke");

    CHECK_THROWS_AS(render_report(json::array()), std::invalid_argument);
    CHECK_THROWS_AS(render_report(json("plain")), std::invalid_argument);
}
