#include "orderlab/order.hpp"

#include <algorithm>

namespace orderlab {

namespace {

bool lattice_in_past(const GroupElement& g) {
    // Scan prefix sums from the full sum downward; the first nonzero one
    // decides. All zero means the identity (not in the past).
    std::int64_t d = static_cast<std::int64_t>(g.coords.size());
    std::int64_t sum = 0;
    std::vector<std::int64_t> prefix(d + 1, 0);
    for (std::int64_t i = 0; i < d; ++i) {
        sum = checked_add(sum, g.coords[i]);
        prefix[i + 1] = sum;
    }
    for (std::int64_t m = d; m >= 1; --m)
        if (prefix[m] != 0) return prefix[m] < 0;
    return false;
}

bool lex_below_zero(const GroupElement& g) {
    for (auto c : g.coords) {
        if (c != 0) return c < 0;
    }
    return false;
}

std::int64_t ipow(std::int64_t b, int k) {
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i) r = checked_mul(r, b);
    return r;
}

bool lattice_in_semigroup(const GroupElement& s) {
    for (auto c : s.coords)
        if (c < 0) return false;
    return true;
}

bool heisenberg_in_semigroup(const GroupElement& s) {
    std::int64_t n3 = s.coords[0], n2 = s.coords[1], n1 = s.coords[2];
    return n3 >= n2 && n2 >= 0 && checked_mul(n3, n3) >= n1 && n1 >= 0;
}

bool unipotent_in_semigroup(const GroupElement& s) {
    int d = s.group.d;
    std::int64_t b = s.coords[0]; // a_d^1, the leading canonical coordinate
    if (b < 0) return false;
    std::size_t pos = 0;
    for (int k = 1; k <= d; ++k) {
        std::int64_t cap = ipow(b, k);
        for (int i = 0; i < d - k + 1; ++i, ++pos) {
            if (s.coords[pos] < 0 || s.coords[pos] > cap) return false;
        }
    }
    return true;
}

GroupElement scaled_leading_generator(const GroupId& group, std::int64_t n) {
    GroupElement g = identity(group);
    switch (group.kind) {
        case GroupKind::IntegerLattice:
            for (auto& c : g.coords) c = n;
            break;
        case GroupKind::Heisenberg:
        case GroupKind::Unipotent:
            g.coords[0] = n; // T3^n resp. T_{d,d+1}^n
            break;
    }
    return g;
}

std::vector<GeneratorCertificate> standard_certificates(const GroupId& group) {
    std::vector<GeneratorCertificate> certs;
    switch (group.kind) {
        case GroupKind::IntegerLattice: {
            for (int i = 0; i < group.d; ++i) {
                GroupElement e_i = identity(group);
                e_i.coords[i] = 1;
                certs.push_back({e_i, {{e_i, +1}}});
            }
            break;
        }
        case GroupKind::Heisenberg:
        case GroupKind::Unipotent: {
            // T = the leading generator lies in S; every other elementary
            // generator E satisfies E = T^{-1} (T E) with T E in S as well.
            GroupElement T = scaled_leading_generator(group, 1);
            int n = group.matrix_size();
            for (int k = 1; k <= n - 1; ++k)
                for (int i = 1; i <= n - k; ++i) {
                    IntMatrix m(n, std::vector<std::int64_t>(n, 0));
                    for (int t = 0; t < n; ++t) m[t][t] = 1;
                    m[i - 1][i + k - 1] = 1;
                    GroupElement gen = from_matrix(group, m);
                    if (gen == T) {
                        certs.push_back({gen, {{T, +1}}});
                    } else {
                        certs.push_back({gen, {{T, -1}, {multiply(T, gen), +1}}});
                    }
                }
            break;
        }
    }
    return certs;
}

} // namespace

OrderedGroupContext OrderedGroupContext::standard(const GroupId& group) {
    OrderedGroupContext ctx;
    ctx.group = group;
    switch (group.kind) {
        case GroupKind::IntegerLattice:
            ctx.past_membership = lattice_in_past;
            ctx.semigroup_membership = lattice_in_semigroup;
            break;
        case GroupKind::Heisenberg:
            ctx.past_membership = lex_below_zero;
            ctx.semigroup_membership = heisenberg_in_semigroup;
            break;
        case GroupKind::Unipotent:
            ctx.past_membership = lex_below_zero;
            ctx.semigroup_membership = unipotent_in_semigroup;
            break;
    }
    ctx.f_seq = [group](std::int64_t n) { return scaled_leading_generator(group, n); };
    ctx.h_seq = [group](std::int64_t n) { return inverse(scaled_leading_generator(group, n)); };
    ctx.generator_certificates = standard_certificates(group);
    return ctx;
}

bool in_past(const OrderedGroupContext& ctx, const GroupElement& g) {
    if (!(g.group == ctx.group)) throw std::invalid_argument("element from wrong group");
    return ctx.past_membership(g);
}

bool in_semigroup(const OrderedGroupContext& ctx, const GroupElement& s) {
    if (!(s.group == ctx.group)) throw std::invalid_argument("element from wrong group");
    return ctx.semigroup_membership(s);
}

bool less_than(const OrderedGroupContext& ctx, const GroupElement& g1, const GroupElement& g2) {
    if (!(g1.group == ctx.group) || !(g2.group == ctx.group))
        throw std::invalid_argument("element from wrong group");
    return ctx.past_membership(multiply(inverse(g2), g1));
}

PastAxiomReport verify_past_axioms(const OrderedGroupContext& ctx, std::int64_t box_radius,
                                   Parallelism mode) {
    PastAxiomReport report;
    report.group = ctx.group;
    report.box_radius = box_radius;

    auto box = enumerate_box(ctx.group, box_radius);
    const std::int64_t n = static_cast<std::int64_t>(box.size());
    const bool par = use_parallel(mode);
    const int workers = worker_count();
    const GroupElement e = identity(ctx.group);

    std::vector<std::uint8_t> is_past(n, 0), bad_disjoint(n, 0), bad_cover(n, 0);
#pragma omp parallel for schedule(static) num_threads(workers) if (par)
    for (std::int64_t i = 0; i < n; ++i) {
        const GroupElement& g = box.elements[i];
        bool gp = ctx.past_membership(g);
        bool ip = ctx.past_membership(inverse(g));
        is_past[i] = gp ? 1 : 0;
        if (gp && ip) bad_disjoint[i] = 1;
        if (!gp && !ip && !(g == e)) bad_cover[i] = 1;
    }
    for (std::int64_t i = 0; i < n; ++i) {
        if (bad_disjoint[i]) report.disjointness_violations.push_back(box.elements[i]);
        if (bad_cover[i]) report.covering_violations.push_back(box.elements[i]);
    }

    std::vector<std::int64_t> past_idx;
    for (std::int64_t i = 0; i < n; ++i)
        if (is_past[i]) past_idx.push_back(i);
    const std::int64_t p = static_cast<std::int64_t>(past_idx.size());

    // Products may leave the box; the predicate is global, so closure is
    // evaluated wherever they land. Violations collect per outer index to
    // keep the report order independent of scheduling.
    std::vector<std::vector<std::pair<GroupElement, GroupElement>>> local(p);
#pragma omp parallel for schedule(dynamic, 8) num_threads(workers) if (par)
    for (std::int64_t a = 0; a < p; ++a) {
        const GroupElement& g = box.elements[past_idx[a]];
        for (std::int64_t b = 0; b < p; ++b) {
            const GroupElement& h = box.elements[past_idx[b]];
            if (!ctx.past_membership(multiply(g, h))) local[a].emplace_back(g, h);
        }
    }
    for (auto& v : local)
        report.closure_violations.insert(report.closure_violations.end(), v.begin(), v.end());
    return report;
}

std::vector<ConjugationViolation> verify_conjugation_invariance(const OrderedGroupContext& ctx,
                                                                std::int64_t n_max,
                                                                std::int64_t box_radius,
                                                                Parallelism mode) {
    auto box = enumerate_box(ctx.group, box_radius);
    const std::int64_t sz = static_cast<std::int64_t>(box.size());
    const bool par = use_parallel(mode);
    const int workers = worker_count();

    std::vector<ConjugationViolation> out;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        GroupElement f = ctx.f_seq(n);
        GroupElement f_inv = inverse(f);
        std::vector<std::uint8_t> bad(sz, 0), gp_flag(sz, 0), cp_flag(sz, 0);
#pragma omp parallel for schedule(static) num_threads(workers) if (par)
        for (std::int64_t i = 0; i < sz; ++i) {
            const GroupElement& g = box.elements[i];
            bool gp = ctx.past_membership(g);
            bool cp = ctx.past_membership(multiply(multiply(f, g), f_inv));
            if (gp != cp) {
                bad[i] = 1;
                gp_flag[i] = gp;
                cp_flag[i] = cp;
            }
        }
        for (std::int64_t i = 0; i < sz; ++i)
            if (bad[i]) out.push_back({n, box.elements[i], gp_flag[i] != 0, cp_flag[i] != 0});
    }
    return out;
}

namespace {

struct CoordRange {
    std::int64_t lo, hi, step; // step = enlargement per grading increment
};

// Termination box for {s in S : s below f_n} under the standard semigroup
// families. Derivations: lattice members below f_n have coordinate sums at
// most d*n and nonnegative entries; Heisenberg members have n3 <= n, n2 <= n3,
// n1 <= n3^2; Unipotent members have a_d^1 <= n and a_i^k <= (a_d^1)^k.
std::vector<CoordRange> count_box(const GroupId& group, std::int64_t n) {
    std::vector<CoordRange> ranges;
    switch (group.kind) {
        case GroupKind::IntegerLattice: {
            std::int64_t hi = checked_mul(static_cast<std::int64_t>(group.d), n);
            for (int i = 0; i < group.d; ++i) ranges.push_back({0, hi, 1});
            break;
        }
        case GroupKind::Heisenberg:
            ranges.push_back({0, n, 1});
            ranges.push_back({0, n, 1});
            ranges.push_back({0, checked_mul(n, n), checked_add(checked_mul(2, n), 1)});
            break;
        case GroupKind::Unipotent:
            for (int k = 1; k <= group.d; ++k) {
                std::int64_t cap = ipow(n, k);
                std::int64_t step = checked_sub(ipow(checked_add(n, 1), k), cap);
                for (int i = 0; i < group.d - k + 1; ++i) ranges.push_back({0, cap, step});
            }
            break;
    }
    return ranges;
}

std::int64_t count_in_ranges(const OrderedGroupContext& ctx, const GroupElement& f,
                             const std::vector<CoordRange>& ranges) {
    std::vector<std::int64_t> c(ranges.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = ranges[j].lo;
    std::int64_t count = 0;
    GroupElement probe = identity(ctx.group);
    while (true) {
        probe.coords = c;
        if (ctx.semigroup_membership(probe) && less_than(ctx, probe, f)) ++count;
        std::size_t j = c.size();
        bool advanced = false;
        while (j > 0) {
            --j;
            if (c[j] < ranges[j].hi) {
                ++c[j];
                for (std::size_t t = j + 1; t < c.size(); ++t) c[t] = ranges[t].lo;
                advanced = true;
                break;
            }
        }
        if (!advanced) return count;
    }
}

} // namespace

std::int64_t count_below(const OrderedGroupContext& ctx, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("count_below needs n >= 1");
    GroupElement f = ctx.f_seq(n);
    auto ranges = count_box(ctx.group, n);
    std::int64_t count = count_in_ranges(ctx, f, ranges);

    // Stability certification: one grading step outward in every direction,
    // lower bounds included, so a semigroup predicate leaking outside the
    // derived box is caught rather than silently undercounted.
    auto enlarged = ranges;
    for (auto& r : enlarged) {
        r.lo = checked_sub(r.lo, r.step);
        r.hi = checked_add(r.hi, r.step);
    }
    std::int64_t recount = count_in_ranges(ctx, f, enlarged);
    if (recount != count)
        throw internal_consistency_error(
            "count_below unstable under box enlargement: " + std::to_string(count) + " vs " +
            std::to_string(recount) + " (n=" + std::to_string(n) + ")");
    return count;
}

std::optional<std::int64_t> count_below_bound(const GroupId& group, std::int64_t n) {
    switch (group.kind) {
        case GroupKind::IntegerLattice: return std::nullopt;
        case GroupKind::Heisenberg: {
            std::int64_t m = checked_add(checked_mul(n, n), 1);
            return checked_mul(checked_mul(m, m), m);
        }
        case GroupKind::Unipotent: {
            std::int64_t prod = 1;
            for (int k = 1; k <= group.d; ++k)
                for (int i = 0; i < group.d - k + 1; ++i)
                    prod = checked_mul(prod, checked_add(ipow(n, k), 1));
            return prod;
        }
    }
    return std::nullopt;
}

AdmissibilityReport verify_admissibility(const OrderedGroupContext& ctx, std::int64_t n_max,
                                         std::int64_t box_radius, Parallelism mode) {
    AdmissibilityReport report;
    report.group = ctx.group;
    report.box_radius = box_radius;
    report.n_max = n_max;

    auto box = enumerate_box(ctx.group, box_radius);
    const bool par = use_parallel(mode);
    const int workers = worker_count();
    const GroupElement e = identity(ctx.group);

    std::vector<GroupElement> members;
    for (const auto& g : box.elements)
        if (ctx.semigroup_membership(g)) members.push_back(g);
    const std::int64_t m = static_cast<std::int64_t>(members.size());

    // S S subset of S; products evaluated wherever they land.
    std::vector<std::vector<std::pair<GroupElement, GroupElement>>> local(m);
#pragma omp parallel for schedule(dynamic, 8) num_threads(workers) if (par)
    for (std::int64_t a = 0; a < m; ++a) {
        for (std::int64_t b = 0; b < m; ++b) {
            if (!ctx.semigroup_membership(multiply(members[a], members[b])))
                local[a].emplace_back(members[a], members[b]);
        }
    }
    for (auto& v : local)
        report.closure_violations.insert(report.closure_violations.end(), v.begin(), v.end());

    // S \setminus {e} must sit inside Phi^{-1}.
    for (const auto& s : members)
        if (!(s == e) && !ctx.past_membership(inverse(s))) report.containment_violations.push_back(s);

    report.conjugation_violations = verify_conjugation_invariance(ctx, n_max, box_radius, mode);

    for (std::int64_t n = 1; n <= n_max; ++n) {
        GroupElement f = ctx.f_seq(n);
        GroupElement h = ctx.h_seq(n);
        if (ctx.past_membership(f))
            report.sequence_violations.push_back({n, "f_seq(n) lies in the past"});
        if (!less_than(ctx, f, ctx.f_seq(n + 1)))
            report.sequence_violations.push_back({n, "f_seq not increasing at n"});
        if (!ctx.semigroup_membership(inverse(h)))
            report.sequence_violations.push_back({n, "h_seq(n) not in S^{-1}"});
        if (!ctx.past_membership(h))
            report.sequence_violations.push_back({n, "h_seq(n) not below the identity"});
        if (!less_than(ctx, ctx.h_seq(n + 1), h))
            report.sequence_violations.push_back({n, "h_seq not decreasing at n"});

        try {
            report.counts_below[n] = count_below(ctx, n);
        } catch (const internal_consistency_error& err) {
            // A leaking semigroup is a finding, not a verifier failure.
            report.sequence_violations.push_back({n, err.what()});
        }
        if (auto bound = count_below_bound(ctx.group, n)) report.bound_values[n] = *bound;
    }

    report.generator_check = !ctx.generator_certificates.empty();
    for (const auto& cert : ctx.generator_certificates) {
        bool ok = true;
        GroupElement prod = e;
        for (const auto& [factor, exp] : cert.word) {
            if (!ctx.semigroup_membership(factor)) {
                ok = false;
                break;
            }
            prod = multiply(prod, exp >= 0 ? factor : inverse(factor));
        }
        if (!ok || !(prod == cert.target)) {
            report.generator_check = false;
            break;
        }
    }
    return report;
}

} // namespace orderlab
