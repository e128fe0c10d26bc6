#include "orderlab/pairs.hpp"

#include <algorithm>
#include <cmath>

#include "orderlab/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace orderlab {

namespace {

void check_alphabet(int alphabet_size) {
    if (alphabet_size < 2)
        throw std::invalid_argument("pair machinery needs at least two symbols");
}

std::int64_t pow2(std::int64_t e) {
    if (e < 0 || e > 61) throw std::invalid_argument("power-of-two exponent out of range");
    return std::int64_t(1) << e;
}

// Desk-scale guard: windows are materialized cell by cell, so refuse sizes
// that would silently eat memory.
void check_window_budget(const GroupId& group, std::int64_t radius) {
    constexpr std::int64_t kMaxCells = 8000000;
    try {
        if (box_size(group, radius) > kMaxCells)
            throw std::invalid_argument("window exceeds the desk-scale cell budget");
    } catch (const std::overflow_error&) {
        throw std::invalid_argument("window exceeds the desk-scale cell budget");
    }
}

GroupElement diagonal_multiple(const GroupId& group, std::int64_t value) {
    return make_element(group,
                        std::vector<std::int64_t>(static_cast<std::size_t>(group.d), value));
}

double index_distance(std::int64_t index) {
    return std::ldexp(1.0, static_cast<int>(-std::min<std::int64_t>(index, 1100)));
}

// Literal measurement: translate both configurations and scan the metric box.
PairWitness measure_witness(const GroupElement& s, const Configuration& x,
                            const Configuration& y, std::int64_t metric_radius) {
    auto idx = first_disagreement_index(act(s, x), act(s, y), metric_radius);
    if (!idx)
        throw internal_consistency_error(
            "constructed witness shows no disagreement in the metric box");
    return PairWitness{s, *idx, index_distance(*idx)};
}

LiYorkeReport verify_sparse_pair(const Configuration& x, const Configuration& y,
                                 const GroupId& group, double delta,
                                 std::vector<std::int64_t> levels,
                                 std::int64_t metric_radius,
                                 std::int64_t window_radius) {
    LiYorkeReport rep;
    rep.group = group;
    rep.delta = delta;
    rep.levels = std::move(levels);
    rep.metric_radius = metric_radius;
    rep.window_radius = window_radius;

    for (std::int64_t e : rep.levels) {
        PairWitness w = measure_witness(diagonal_multiple(group, -pow2(e)), x, y,
                                        metric_radius);
        // the flipped cell 2^e diag lands on the identity, nothing is nearer
        if (w.index != 0)
            throw internal_consistency_error("distal witness missed the identity cell");
        rep.distal.push_back(std::move(w));
    }

    for (std::size_t t = 0; t + 1 < rep.levels.size(); ++t) {
        std::int64_t lo = pow2(rep.levels[t]), hi = pow2(rep.levels[t + 1]);
        // s = -(lo + hi) sends the cells lo diag, hi diag to -hi diag, -lo
        // diag; every other difference cell lands at radius >= hi - lo >= lo,
        // and the negative diagonal wins lex ties, so the first disagreement
        // of the translated pair is exactly -lo diag.
        GroupElement expected_cell = diagonal_multiple(group, -lo);
        std::int64_t expected_index = enumeration_index(expected_cell);
        PairWitness w =
            measure_witness(diagonal_multiple(group, -(lo + hi)), x, y, metric_radius);
        if (w.index != expected_index)
            throw internal_consistency_error(
                "proximal witness disagrees with the half-gap construction");
        rep.proximal.push_back(std::move(w));
    }

    bool distal_ok = !rep.distal.empty();
    for (const auto& w : rep.distal)
        if (w.distance < delta) distal_ok = false;
    bool proximal_ok = !rep.proximal.empty();
    for (std::size_t t = 0; t + 1 < rep.proximal.size(); ++t)
        if (rep.proximal[t + 1].index <= rep.proximal[t].index) proximal_ok = false;
    rep.witnessed = distal_ok && proximal_ok;
    return rep;
}

Configuration flipped_at(const Configuration& base,
                         const std::vector<GroupElement>& cells) {
    Configuration out = base;
    for (const auto& g : cells) {
        auto it = out.cells.find(g.coords);
        if (it == out.cells.end())
            throw std::invalid_argument("difference cell outside the window");
        it->second = (it->second + 1) % base.alphabet_size;
    }
    return out;
}

} // namespace

std::pair<Configuration, Configuration> make_finite_difference_pair(
    const GroupId& group, const std::vector<GroupElement>& diff,
    std::int64_t window_radius, int alphabet_size, std::uint64_t seed) {
    check_alphabet(alphabet_size);
    if (window_radius < 0) throw std::invalid_argument("window radius must be nonnegative");
    check_window_budget(group, window_radius);
    FiniteWindow unique_diff = normalize_window(group, diff);
    for (const auto& g : unique_diff.elements)
        if (!in_box(g, window_radius))
            throw std::invalid_argument("difference cell outside the window box");

    std::mt19937_64 rng(seed);
    Configuration x =
        random_configuration(group, enumerate_box(group, window_radius), alphabet_size, rng);
    Configuration y = flipped_at(x, unique_diff.elements);
    return {std::move(x), std::move(y)};
}

AsymptoticCheckReport is_asymptotic_truncated(const Configuration& x,
                                              const Configuration& y,
                                              const OrderedGroupContext& ctx,
                                              std::int64_t horizon,
                                              std::int64_t eps_exponent,
                                              Parallelism mode) {
    if (x.group != y.group || x.group != ctx.group)
        throw std::invalid_argument("pair and context groups must match");
    if (x.alphabet_size != y.alphabet_size)
        throw std::invalid_argument("pair alphabets must match");
    if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
    if (eps_exponent < 0) throw std::invalid_argument("eps exponent must be nonnegative");
    if (x.cells.size() != y.cells.size())
        throw std::invalid_argument("pair must share one window");

    AsymptoticCheckReport rep;
    rep.group = x.group;
    rep.horizon = horizon;
    rep.eps_exponent = eps_exponent;

    // one zipped walk checks the windows agree and collects the differences
    auto ix = x.cells.begin();
    auto iy = y.cells.begin();
    for (; ix != x.cells.end(); ++ix, ++iy) {
        if (ix->first != iy->first)
            throw std::invalid_argument("pair must share one window");
        if (ix->second != iy->second)
            rep.difference.push_back(make_element(x.group, ix->first));
    }

    // the first eps_exponent cells of the canonical enumeration
    if (eps_exponent > 4000000)
        throw std::invalid_argument("eps exponent exceeds the desk-scale budget");
    std::vector<GroupElement> prefix;
    if (eps_exponent > 0) {
        std::int64_t n = 0;
        while (box_size(x.group, n) < eps_exponent) ++n;
        FiniteWindow box = enumerate_box(x.group, n);
        prefix.assign(box.elements.begin(),
                      box.elements.begin() + static_cast<std::ptrdiff_t>(eps_exponent));
    }
    std::vector<std::vector<std::int64_t>> prefix_coords;
    prefix_coords.reserve(prefix.size());
    for (const auto& h : prefix) prefix_coords.push_back(h.coords);
    std::sort(prefix_coords.begin(), prefix_coords.end());

    check_window_budget(x.group, horizon);
    std::vector<GroupElement> members;
    for (const auto& g : enumerate_box(x.group, horizon).elements)
        if (in_semigroup(ctx, g)) members.push_back(g);

    // every metric question the scan can ask must be answerable up front
    for (const auto& s : members) {
        GroupElement s_inv = inverse(s);
        for (const auto& h : prefix)
            if (x.cells.find(multiply(s_inv, h).coords) == x.cells.end())
                throw insufficient_window_error(
                    "window cannot answer the truncated metric scan; enlarge the "
                    "pair window or shrink horizon/eps");
    }

    const bool par = use_parallel(mode);
    const int workers = par ? worker_count() : 1;
    std::vector<char> hit(members.size(), 0);

    #pragma omp parallel for schedule(dynamic, 16) num_threads(workers) if (par)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(members.size()); ++i) {
        const auto& s = members[static_cast<std::size_t>(i)];
        for (const auto& d : rep.difference) {
            GroupElement moved = multiply(s, d);
            if (std::binary_search(prefix_coords.begin(), prefix_coords.end(),
                                   moved.coords)) {
                hit[static_cast<std::size_t>(i)] = 1;
                break;
            }
        }
    }

    for (std::size_t i = 0; i < members.size(); ++i) {
        if (!hit[i]) continue;
        rep.violations.push_back(members[i]);
        rep.max_violation_radius =
            std::max(rep.max_violation_radius, box_radius(members[i]));
    }
    rep.verdict = (rep.violations.empty() || rep.max_violation_radius < horizon)
                      ? PairVerdict::AsymptoticWithinHorizon
                      : PairVerdict::Refuted;
    return rep;
}

std::vector<GroupElement> diagonal_powers(const GroupId& group,
                                          const std::vector<std::int64_t>& exponents) {
    if (group.kind != GroupKind::IntegerLattice)
        throw unsupported_operation_error(
            "diagonal difference sets are defined for lattices only");
    std::vector<GroupElement> out;
    out.reserve(exponents.size());
    for (std::int64_t e : exponents) out.push_back(diagonal_multiple(group, pow2(e)));
    return out;
}

LiYorkePair li_yorke_witness(const GroupId& group, double delta, std::int64_t k0,
                             std::int64_t depth, int alphabet_size,
                             std::uint64_t seed) {
    if (group.kind != GroupKind::IntegerLattice)
        throw unsupported_operation_error(
            "Li-Yorke witnesses are constructed over lattices only");
    check_alphabet(alphabet_size);
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("delta must lie in (0, 1]");
    if (k0 < 1) throw std::invalid_argument("k0 must be at least 1");
    if (depth < 0) throw std::invalid_argument("depth must be nonnegative");

    std::int64_t emax = k0 + depth;
    std::int64_t window_radius = pow2(emax + 1);
    std::int64_t metric_radius = pow2(emax - 1);
    check_window_budget(group, window_radius);

    std::vector<std::int64_t> levels;
    for (std::int64_t e = k0; e <= emax; ++e) levels.push_back(e);

    auto [x, y] = make_finite_difference_pair(group, diagonal_powers(group, levels),
                                              window_radius, alphabet_size, seed);
    LiYorkeReport rep = verify_sparse_pair(x, y, group, delta, std::move(levels),
                                           metric_radius, window_radius);
    return LiYorkePair{std::move(x), std::move(y), std::move(rep)};
}

std::vector<Configuration> stable_set_sample(const GroupId& group, std::size_t count,
                                             std::int64_t window_radius,
                                             int alphabet_size, std::uint64_t seed) {
    check_alphabet(alphabet_size);
    if (count == 0) throw std::invalid_argument("sample count must be positive");
    check_window_budget(group, window_radius);
    FiniteWindow box = enumerate_box(group, window_radius);
    if (count - 1 > box.size())
        throw std::invalid_argument("sample count exceeds the window size");

    std::mt19937_64 rng(seed);
    Configuration base = random_configuration(group, box, alphabet_size, rng);
    std::vector<Configuration> out;
    out.reserve(count);
    out.push_back(base);
    for (std::size_t i = 1; i < count; ++i)
        out.push_back(flipped_at(base, {box.elements[i - 1]}));
    return out;
}

ChaoticSample chaotic_set_sample(const GroupId& group, std::size_t count,
                                 double delta, std::int64_t k0, std::int64_t depth,
                                 int alphabet_size, std::uint64_t seed) {
    if (group.kind != GroupKind::IntegerLattice)
        throw unsupported_operation_error(
            "chaotic samples are constructed over lattices only");
    check_alphabet(alphabet_size);
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("delta must lie in (0, 1]");
    if (count < 2) throw std::invalid_argument("a chaotic sample needs at least 2 members");
    if (k0 < 1) throw std::invalid_argument("k0 must be at least 1");
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");

    // interleaved level classes: member i flips levels k0+i, k0+i+count, ...
    std::int64_t m = static_cast<std::int64_t>(count);
    std::int64_t emax = checked_sub(checked_add(k0, checked_mul(m, depth)), 1);
    std::int64_t window_radius = pow2(emax + 1);
    std::int64_t metric_radius = pow2(emax - 1);
    check_window_budget(group, window_radius);

    std::mt19937_64 rng(seed);
    Configuration base =
        random_configuration(group, enumerate_box(group, window_radius), alphabet_size, rng);

    ChaoticSample sample;
    std::vector<std::vector<std::int64_t>> levels(count);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::int64_t t = 0; t < depth; ++t)
            levels[i].push_back(k0 + static_cast<std::int64_t>(i) + m * t);
        sample.configs.push_back(
            flipped_at(base, diagonal_powers(group, levels[i])));
    }

    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i + 1; j < count; ++j) {
            std::vector<std::int64_t> joint = levels[i];
            joint.insert(joint.end(), levels[j].begin(), levels[j].end());
            std::sort(joint.begin(), joint.end());
            LiYorkeReport rep =
                verify_sparse_pair(sample.configs[i], sample.configs[j], group, delta,
                                   std::move(joint), metric_radius, window_radius);
            sample.pairs.push_back({i, j, std::move(rep)});
        }
    return sample;
}

} // namespace orderlab
