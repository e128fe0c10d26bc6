#include "orderlab/serialize.hpp"

#include <cstdio>
#include <stdexcept>

namespace orderlab {

namespace {

using nlohmann::json;

std::string rational_text(const Rational& r) { return r.str(); }

json element_pairs(const std::vector<std::pair<GroupElement, GroupElement>>& v) {
    json out = json::array();
    for (const auto& [a, b] : v) out.push_back({{"a", json_of(a)}, {"b", json_of(b)}});
    return out;
}

json element_list(const std::vector<GroupElement>& v) {
    json out = json::array();
    for (const auto& g : v) out.push_back(json_of(g));
    return out;
}

json witness_list(const std::vector<PairWitness>& v) {
    json out = json::array();
    for (const auto& w : v) out.push_back(json_of(w));
    return out;
}

} // namespace

json json_of(const GroupId& group) { return group.name(); }

json json_of(const GroupElement& g) {
    return {{"group", g.group.name()}, {"coords", g.coords}};
}

json json_of(const ConjugationViolation& v) {
    return {{"n", v.n},
            {"g", json_of(v.g)},
            {"g_in_past", v.g_in_past},
            {"conjugate_in_past", v.conjugate_in_past}};
}

json json_of(const PastAxiomReport& rep) {
    return {{"kind", "past_axioms"},
            {"group", json_of(rep.group)},
            {"box_radius", rep.box_radius},
            {"disjointness_violations", element_list(rep.disjointness_violations)},
            {"covering_violations", element_list(rep.covering_violations)},
            {"closure_violations", element_pairs(rep.closure_violations)},
            {"passed", rep.passed()}};
}

json json_of(const AdmissibilityReport& rep) {
    json conj = json::array();
    for (const auto& v : rep.conjugation_violations) conj.push_back(json_of(v));
    json seq = json::array();
    for (const auto& v : rep.sequence_violations)
        seq.push_back({{"n", v.n}, {"what", v.what}});
    json counts = json::array();
    for (const auto& [n, c] : rep.counts_below) {
        json row = {{"n", n}, {"count", c}};
        auto it = rep.bound_values.find(n);
        if (it != rep.bound_values.end()) row["bound"] = it->second;
        counts.push_back(std::move(row));
    }
    return {{"kind", "admissibility"},
            {"group", json_of(rep.group)},
            {"box_radius", rep.box_radius},
            {"n_max", rep.n_max},
            {"closure_violations", element_pairs(rep.closure_violations)},
            {"containment_violations", element_list(rep.containment_violations)},
            {"conjugation_violations", conj},
            {"sequence_violations", seq},
            {"generator_check", rep.generator_check},
            {"counts_below", counts},
            {"counts_within_bounds", rep.counts_within_bounds()},
            {"passed", rep.passed()}};
}

json json_of(const FolnerDefectSeries& series) {
    json defects = json::array();
    for (const auto& [n, d] : series.defects)
        defects.push_back({{"n", n},
                           {"defect", rational_text(d)},
                           {"value", static_cast<double>(d)}});
    return {{"kind", "folner_defects"},
            {"group", json_of(series.group)},
            {"translator", json_of(series.translator)},
            {"n_lo", series.n_lo},
            {"n_hi", series.n_hi},
            {"threshold", rational_text(series.threshold)},
            {"defects", defects},
            {"trend_pass", series.trend_pass}};
}

json json_of(const EntropyEstimate& est) {
    return {{"kind", "entropy_estimate"},
            {"n", est.n},
            {"window_size", est.window_size},
            {"count", est.count.str()},
            {"estimate", est.estimate}};
}

json json_of(const PinskerCheckReport& rep) {
    return {{"kind", "pinsker_check"},
            {"group", json_of(rep.group)},
            {"radius", rep.radius},
            {"a", json_of(rep.a)},
            {"b", json_of(rep.b)},
            {"lhs", rep.lhs},
            {"rhs_beta", rep.rhs_beta},
            {"rhs_alpha", rep.rhs_alpha},
            {"gap", rep.gap}};
}

json json_of(const AsymptoticCheckReport& rep) {
    return {{"kind", "asymptotic_check"},
            {"group", json_of(rep.group)},
            {"horizon", rep.horizon},
            {"eps_exponent", rep.eps_exponent},
            {"difference", element_list(rep.difference)},
            {"violations", element_list(rep.violations)},
            {"max_violation_radius", rep.max_violation_radius},
            {"verdict", rep.verdict == PairVerdict::AsymptoticWithinHorizon
                            ? "asymptotic_within_horizon"
                            : "refuted"}};
}

json json_of(const PairWitness& w) {
    return {{"s", json_of(w.s)}, {"index", w.index}, {"distance", w.distance}};
}

json json_of(const LiYorkeReport& rep) {
    return {{"kind", "li_yorke"},
            {"group", json_of(rep.group)},
            {"delta", rep.delta},
            {"levels", rep.levels},
            {"metric_radius", rep.metric_radius},
            {"window_radius", rep.window_radius},
            {"distal", witness_list(rep.distal)},
            {"proximal", witness_list(rep.proximal)},
            {"witnessed", rep.witnessed}};
}

json json_of(const ChaoticSample& sample) {
    json pairs = json::array();
    for (const auto& e : sample.pairs)
        pairs.push_back({{"first", e.first},
                         {"second", e.second},
                         {"report", json_of(e.report)}});
    return {{"kind", "chaotic_sample"},
            {"config_count", sample.configs.size()},
            {"config_cells",
             sample.configs.empty() ? std::size_t(0) : sample.configs[0].cells.size()},
            {"pairs", pairs}};
}

std::string render_report(json body) {
    if (!body.is_object())
        throw std::invalid_argument("report body must be a JSON object");
    body["schema_version"] = "1";
    return body.dump(2) + "\n";
}

std::string to_csv(const FolnerDefectSeries& series) {
    std::string out = "n,numerator,denominator,value\n";
    for (const auto& [n, d] : series.defects) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(d));
        out += std::to_string(n);
        out += ',';
        out += boost::multiprecision::numerator(d).str();
        out += ',';
        out += boost::multiprecision::denominator(d).str();
        out += ',';
        out += buf;
        out += '\n';
    }
    return out;
}

} // namespace orderlab
