#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orderlab/serialize.hpp"

using namespace orderlab;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------- plumbing

std::vector<std::int64_t> parse_coords(const std::string& text) {
    std::vector<std::int64_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string part = text.substr(pos, comma == std::string::npos
                                                ? std::string::npos
                                                : comma - pos);
        out.push_back(std::stoll(part));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

GroupId resolve_group(const std::string& name, int d) {
    if (name == "zd") return GroupId::lattice(d);
    if (name == "heisenberg") return GroupId::heisenberg();
    if (name == "unipotent" || name == "ud") return GroupId::unipotent(d);
    return GroupId::parse(name); // direct names: z2, u4, ...
}

GroupElement parse_translator(const GroupId& group, const std::string& text) {
    if (group.kind == GroupKind::Heisenberg) {
        // normal-form generators: coords are (n3, n2, n1)
        if (text == "T3") return make_element(group, {1, 0, 0});
        if (text == "T2") return make_element(group, {0, 1, 0});
        if (text == "T1") return make_element(group, {0, 0, 1});
    }
    return make_element(group, parse_coords(text));
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
    std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("range must look like lo:hi");
    return {std::stoll(text.substr(0, colon)), std::stoll(text.substr(colon + 1))};
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + out_path);
    out << text;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string coords_text(const GroupElement& g) {
    std::string out;
    for (std::size_t i = 0; i < g.coords.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(g.coords[i]);
    }
    return out;
}

// ------------------------------------------------------------- subcommands

int run_verify(const GroupId& group, std::int64_t radius, std::int64_t nmax,
               const std::string& format, const std::string& out) {
    OrderedGroupContext ctx = OrderedGroupContext::standard(group);
    PastAxiomReport pa = verify_past_axioms(ctx, radius);
    AdmissibilityReport ad = verify_admissibility(ctx, nmax, radius);
    bool ok = pa.passed() && ad.passed();

    if (format == "text") {
        std::string t = "verification " + group.name() + " (box radius " +
                        std::to_string(radius) + ", n_max " + std::to_string(nmax) +
                        ")\n";
        t += "past axioms: " + std::string(pa.passed() ? "pass" : "FAIL") + "\n";
        t += "admissibility: " + std::string(ad.passed() ? "pass" : "FAIL") + "\n";
        emit(t, out);
    } else {
        json body = {{"kind", "verification"},
                     {"group", json_of(group)},
                     {"box_radius", radius},
                     {"n_max", nmax},
                     {"past_axioms", json_of(pa)},
                     {"admissibility", json_of(ad)},
                     {"passed", ok}};
        emit(render_report(body), out);
    }
    return ok ? 0 : 1;
}

int run_folner(const GroupId& group, const GroupElement& g, std::int64_t lo,
               std::int64_t hi, const Rational& threshold, std::int64_t interior,
               const std::string& format, const std::string& out) {
    FolnerDefectSeries series = defect_trend(group, g, lo, hi, threshold);

    if (format == "csv") {
        emit(to_csv(series), out);
    } else if (format == "text") {
        std::string t;
        for (const auto& [n, d] : series.defects)
            t += "n=" + std::to_string(n) + " defect " + d.str() + " ~ " +
                 fmt_double(static_cast<double>(d)) + "\n";
        t += "trend: " + std::string(series.trend_pass ? "pass" : "FAIL") +
             " (threshold " + threshold.str() + ")\n";
        emit(t, out);
    } else {
        json body = json_of(series);
        if (interior >= 0) {
            FiniteWindow K = enumerate_box(group, interior);
            json ratios = json::array();
            for (std::int64_t n = lo; n <= hi; ++n) {
                Rational r = interior_ratio(K, folner_box(group, n));
                ratios.push_back({{"n", n},
                                  {"ratio", r.str()},
                                  {"value", static_cast<double>(r)}});
            }
            body["interior_radius"] = interior;
            body["interior_ratios"] = ratios;
        }
        emit(render_report(body), out);
    }
    return series.trend_pass ? 0 : 1;
}

int run_entropy_counting(const ShiftSystem& sys, const std::string& system_name,
                         std::int64_t n, const std::string& format,
                         const std::string& out) {
    EntropyEstimate est = top_entropy_estimate(sys, n);
    if (format == "text") {
        emit("system " + system_name + " on " + sys.group.name() + ": n=" +
                 std::to_string(est.n) + " window " + std::to_string(est.window_size) +
                 " count " + est.count.str() + " estimate " + fmt_double(est.estimate) +
                 "\n",
             out);
    } else {
        json body = json_of(est);
        body["group"] = json_of(sys.group);
        body["alphabet"] = sys.alphabet.size;
        body["system"] = system_name;
        emit(render_report(body), out);
    }
    return 0;
}

int run_entropy_measure(const ShiftMeasure& mu, bool pinsker, std::int64_t radius,
                        const std::string& a_text, const std::string& b_text,
                        const std::string& format, const std::string& out) {
    std::string measure_name =
        mu.kind == ShiftMeasure::Kind::Bernoulli ? "bernoulli" : "markov";
    if (!pinsker) {
        double rate = measure_entropy(mu);
        if (format == "text") {
            emit(measure_name + " on " + mu.group.name() + ", alphabet " +
                     std::to_string(mu.alphabet_size) + ": entropy rate " +
                     fmt_double(rate) + "\n",
                 out);
        } else {
            json body = {{"kind", "measure_entropy"},
                         {"group", json_of(mu.group)},
                         {"alphabet", mu.alphabet_size},
                         {"measure", measure_name},
                         {"rate", rate}};
            emit(render_report(body), out);
        }
        return 0;
    }

    OrderedGroupContext ctx = OrderedGroupContext::standard(mu.group);
    GroupElement a = a_text.empty() ? identity(mu.group)
                                    : make_element(mu.group, parse_coords(a_text));
    GroupElement b = b_text.empty() ? ctx.f_seq(1)
                                    : make_element(mu.group, parse_coords(b_text));
    PinskerCheckReport rep = pinsker_check(mu, ctx, a, b, radius);
    if (format == "text") {
        std::string t = "pinsker split on " + mu.group.name() + " (radius " +
                        std::to_string(radius) + ", a=" + coords_text(rep.a) +
                        ", b=" + coords_text(rep.b) + ")\n";
        t += "lhs " + fmt_double(rep.lhs) + "  rhs_beta " + fmt_double(rep.rhs_beta) +
             "  rhs_alpha " + fmt_double(rep.rhs_alpha) + "  gap " +
             fmt_double(rep.gap) + "\n";
        emit(t, out);
    } else {
        emit(render_report(json_of(rep)), out);
    }
    return 0;
}

int run_liyorke(const GroupId& group, double delta, std::int64_t k0,
                std::int64_t depth, int alphabet, std::uint64_t seed,
                const std::string& format, const std::string& out) {
    LiYorkePair p = li_yorke_witness(group, delta, k0, depth, alphabet, seed);
    const LiYorkeReport& rep = p.report;
    if (format == "text") {
        std::string t = "li-yorke pair on " + group.name() + " (delta " +
                        fmt_double(delta) + ", levels " + std::to_string(k0) + ".." +
                        std::to_string(k0 + depth) + ", seed " + std::to_string(seed) +
                        ")\n";
        for (const auto& w : rep.distal)
            t += "distal   s=" + coords_text(w.s) + " index " +
                 std::to_string(w.index) + " distance " + fmt_double(w.distance) + "\n";
        for (const auto& w : rep.proximal)
            t += "proximal s=" + coords_text(w.s) + " index " +
                 std::to_string(w.index) + " distance " + fmt_double(w.distance) + "\n";
        t += std::string("witnessed: ") + (rep.witnessed ? "yes" : "NO") + "\n";
        emit(t, out);
    } else {
        json body = json_of(rep);
        body["seed"] = seed;
        emit(render_report(body), out);
    }
    return rep.witnessed ? 0 : 1;
}

int run_asymptotic(const GroupId& group, const std::vector<std::string>& diff_text,
                   std::int64_t horizon, std::int64_t eps_exp, std::int64_t window,
                   int alphabet, std::uint64_t seed, const std::string& format,
                   const std::string& out) {
    std::vector<GroupElement> diff;
    for (const auto& t : diff_text) {
        if (t == "none") continue;
        diff.push_back(make_element(group, parse_coords(t)));
    }

    if (window < 0) {
        // smallest window that can answer every scan question: the prefix box
        // dragged by box(horizon), and the difference cells themselves
        std::int64_t prefix_radius = 0;
        while (box_size(group, prefix_radius) < eps_exp) ++prefix_radius;
        window = horizon + prefix_radius;
        for (const auto& d : diff) window = std::max(window, box_radius(d));
    }

    auto [x, y] = make_finite_difference_pair(group, diff, window, alphabet, seed);
    OrderedGroupContext ctx = OrderedGroupContext::standard(group);
    AsymptoticCheckReport rep = is_asymptotic_truncated(x, y, ctx, horizon, eps_exp);
    bool ok = rep.verdict == PairVerdict::AsymptoticWithinHorizon;

    if (format == "text") {
        std::string t = "asymptotic check on " + group.name() + " (horizon " +
                        std::to_string(horizon) + ", eps 2^-" +
                        std::to_string(eps_exp) + ", window " + std::to_string(window) +
                        ", seed " + std::to_string(seed) + ")\n";
        t += "difference cells: " + std::to_string(rep.difference.size()) + "\n";
        t += "violations: " + std::to_string(rep.violations.size()) +
             " (max radius " + std::to_string(rep.max_violation_radius) + ")\n";
        t += std::string("verdict: ") +
             (ok ? "asymptotic within horizon" : "REFUTED") + "\n";
        emit(t, out);
    } else {
        json body = json_of(rep);
        body["window_radius"] = window;
        body["seed"] = seed;
        emit(render_report(body), out);
    }
    return ok ? 0 : 1;
}

int run_stable(const GroupId& group, std::size_t budget, std::int64_t window,
               std::int64_t horizon, std::int64_t eps_exp, int alphabet,
               std::uint64_t seed, const std::string& format, const std::string& out) {
    auto configs = stable_set_sample(group, budget, window, alphabet, seed);
    OrderedGroupContext ctx = OrderedGroupContext::standard(group);
    json checks = json::array();
    bool all_ok = true;
    for (std::size_t i = 0; i < configs.size(); ++i)
        for (std::size_t j = i + 1; j < configs.size(); ++j) {
            AsymptoticCheckReport rep =
                is_asymptotic_truncated(configs[i], configs[j], ctx, horizon, eps_exp);
            bool ok = rep.verdict == PairVerdict::AsymptoticWithinHorizon;
            all_ok = all_ok && ok;
            checks.push_back(
                {{"first", i}, {"second", j}, {"report", json_of(rep)}});
        }

    if (format == "text") {
        std::string t = "stable sample on " + group.name() + ": " +
                        std::to_string(budget) + " configurations, window " +
                        std::to_string(window) + "\n";
        t += "pairwise asymptotic within horizon " + std::to_string(horizon) + ": " +
             (all_ok ? "yes" : "NO") + "\n";
        emit(t, out);
    } else {
        json body = {{"kind", "stable_sample"},
                     {"group", json_of(group)},
                     {"count", budget},
                     {"window_radius", window},
                     {"horizon", horizon},
                     {"eps_exponent", eps_exp},
                     {"seed", seed},
                     {"all_asymptotic", all_ok},
                     {"checks", checks}};
        emit(render_report(body), out);
    }
    return all_ok ? 0 : 1;
}

int run_chaotic(const GroupId& group, std::size_t count, double delta,
                std::int64_t k0, std::int64_t depth, int alphabet,
                std::uint64_t seed, const std::string& format, const std::string& out) {
    ChaoticSample sample = chaotic_set_sample(group, count, delta, k0, depth,
                                              alphabet, seed);
    bool all_ok = true;
    for (const auto& e : sample.pairs) all_ok = all_ok && e.report.witnessed;

    if (format == "text") {
        std::string t = "chaotic sample on " + group.name() + ": " +
                        std::to_string(count) + " configurations, " +
                        std::to_string(sample.pairs.size()) + " pairs\n";
        t += std::string("all pairs li-yorke witnessed: ") + (all_ok ? "yes" : "NO") +
             "\n";
        emit(t, out);
    } else {
        json body = json_of(sample);
        body["seed"] = seed;
        emit(render_report(body), out);
    }
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ordered-group machinery: verification, Folner defects, shift "
                 "entropies, asymptotic and Li-Yorke pairs"};
    app.require_subcommand(1);

    std::string group_name = "zd";
    int dim = 2;
    std::string format = "json";
    std::string out_path;
    app.add_option("--group", group_name,
                   "group: zd, heisenberg, unipotent (or a direct name like z2, u4)")
        ->capture_default_str();
    app.add_option("--d", dim, "lattice rank / unipotent parameter")
        ->capture_default_str();
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    app.add_option("--out", out_path, "write the report to a file instead of stdout");

    // verify
    auto* verify = app.add_subcommand("verify", "axiom and admissibility scan");
    verify->fallthrough();
    std::int64_t radius = 2, nmax = 3;
    verify->add_option("--radius", radius, "box radius for exhaustive scans")
        ->capture_default_str();
    verify->add_option("--nmax", nmax, "escape sequence indices 1..nmax")
        ->capture_default_str();

    // folner
    auto* folner = app.add_subcommand("folner", "defect series of a translator");
    folner->fallthrough();
    std::string g_text = "1,0";
    std::string range_text = "2:10";
    std::string threshold_text = "1/5";
    std::int64_t interior = -1;
    folner->add_option("--g", g_text, "translator coords, or T1/T2/T3 for heisenberg")
        ->capture_default_str();
    folner->add_option("--range", range_text, "window indices lo:hi")
        ->capture_default_str();
    folner->add_option("--threshold", threshold_text, "trend threshold as p/q")
        ->capture_default_str();
    folner->add_option("--interior", interior,
                       "also report interior ratios for K = box(R)");

    // entropy
    auto* entropy = app.add_subcommand("entropy", "pattern counts and measure entropies");
    entropy->fallthrough();
    bool full = false;
    int alphabet = 2;
    std::int64_t n_windows = 5, pinsker_radius = 3;
    std::string sft_path, measure_path, a_text, b_text;
    bool pinsker = false;
    auto* opt_full = entropy->add_flag("--full", full, "full shift on the alphabet");
    auto* opt_sft =
        entropy->add_option("--sft", sft_path, "shift of finite type from a pattern file");
    auto* opt_measure =
        entropy->add_option("--measure", measure_path, "product/Markov measure from JSON");
    entropy->add_option("--alphabet", alphabet, "alphabet size for --full")
        ->capture_default_str();
    entropy->add_option("--n", n_windows, "largest averaging window index")
        ->capture_default_str();
    entropy->add_flag("--pinsker", pinsker, "conditional entropy split for --measure");
    entropy->add_option("--radius", pinsker_radius, "past truncation radius for --pinsker")
        ->capture_default_str();
    entropy->add_option("--a", a_text, "pinsker: coords of a (default identity)");
    entropy->add_option("--b", b_text, "pinsker: coords of b (default f_1)");
    opt_full->excludes(opt_sft)->excludes(opt_measure);
    opt_sft->excludes(opt_measure);

    // pairs
    auto* pairs = app.add_subcommand("pairs", "asymptotic and Li-Yorke constructions");
    pairs->fallthrough();
    pairs->require_subcommand(1);
    std::uint64_t seed = 0;
    int pair_alphabet = 2;
    pairs->add_option("--seed", seed, "PRNG seed (mt19937_64)")->capture_default_str();
    pairs->add_option("--alphabet", pair_alphabet, "alphabet size")
        ->capture_default_str();

    auto* liyorke = pairs->add_subcommand("liyorke", "verified Li-Yorke pair");
    liyorke->fallthrough();
    double delta = 0.5;
    std::int64_t k0 = 3, depth = 4;
    liyorke->add_option("--delta", delta, "distal separation in (0,1]")
        ->capture_default_str();
    liyorke->add_option("--k0", k0, "first difference level")->capture_default_str();
    liyorke->add_option("--depth", depth, "number of proximal witnesses")
        ->capture_default_str();

    auto* asympt = pairs->add_subcommand("asymptotic", "truncated asymptotic check");
    asympt->fallthrough();
    std::vector<std::string> diff_text;
    std::int64_t horizon = 10, eps_exp = 8, window = -1;
    asympt->add_option("--diff", diff_text,
                       "difference cell coords (repeatable), or none");
    asympt->add_option("--horizon", horizon, "semigroup box radius")
        ->capture_default_str();
    asympt->add_option("--eps-exp", eps_exp, "violation threshold 2^-m")
        ->capture_default_str();
    asympt->add_option("--window", window, "pair window radius (default: derived)");

    auto* stable = pairs->add_subcommand("stable", "pairwise-asymptotic sample");
    stable->fallthrough();
    std::size_t budget = 4;
    std::int64_t stable_window = 10, stable_horizon = 3, stable_eps = 6;
    stable->add_option("--budget", budget, "sample size")->capture_default_str();
    stable->add_option("--window", stable_window, "window radius")
        ->capture_default_str();
    stable->add_option("--horizon", stable_horizon, "semigroup box radius")
        ->capture_default_str();
    stable->add_option("--eps-exp", stable_eps, "violation threshold 2^-m")
        ->capture_default_str();

    auto* chaotic = pairs->add_subcommand("chaotic", "pairwise-Li-Yorke sample");
    chaotic->fallthrough();
    std::size_t chaotic_count = 3;
    double chaotic_delta = 0.5;
    std::int64_t chaotic_k0 = 2, chaotic_depth = 2;
    chaotic->add_option("--k", chaotic_count, "sample size")->capture_default_str();
    chaotic->add_option("--delta", chaotic_delta, "distal separation in (0,1]")
        ->capture_default_str();
    chaotic->add_option("--k0", chaotic_k0, "first difference level")
        ->capture_default_str();
    chaotic->add_option("--depth", chaotic_depth, "levels per member")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        GroupId group = resolve_group(group_name, dim);
        if (app.got_subcommand(verify))
            return run_verify(group, radius, nmax, format, out_path);
        if (app.got_subcommand(folner)) {
            auto [lo, hi] = parse_range(range_text);
            return run_folner(group, parse_translator(group, g_text), lo, hi,
                              Rational(threshold_text), interior, format, out_path);
        }
        if (app.got_subcommand(entropy)) {
            if (full)
                return run_entropy_counting(ShiftSystem::full_shift(group, alphabet),
                                            "full_shift", n_windows, format, out_path);
            if (!sft_path.empty())
                return run_entropy_counting(load_shift_system(sft_path), "sft",
                                            n_windows, format, out_path);
            if (!measure_path.empty())
                return run_entropy_measure(load_measure_json(measure_path), pinsker,
                                           pinsker_radius, a_text, b_text, format,
                                           out_path);
            std::fprintf(stderr, "error: one of --full, --sft, --measure is required\n");
            return 2;
        }
        if (pairs->got_subcommand(liyorke))
            return run_liyorke(group, delta, k0, depth, pair_alphabet, seed, format,
                               out_path);
        if (pairs->got_subcommand(asympt))
            return run_asymptotic(group, diff_text, horizon, eps_exp, window,
                                  pair_alphabet, seed, format, out_path);
        if (pairs->got_subcommand(stable))
            return run_stable(group, budget, stable_window, stable_horizon, stable_eps,
                              pair_alphabet, seed, format, out_path);
        if (pairs->got_subcommand(chaotic))
            return run_chaotic(group, chaotic_count, chaotic_delta, chaotic_k0,
                               chaotic_depth, pair_alphabet, seed, format, out_path);
        std::fprintf(stderr, "error: no subcommand\n");
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
