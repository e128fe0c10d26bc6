// Timing table for the dual kernels: each parallel scan against its serial
// twin, with a result-equality column so a divergence is visible the moment
// it happens. Sizes are chosen to run in seconds on a desk machine.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "orderlab/entropy.hpp"
#include "orderlab/folner.hpp"
#include "orderlab/order.hpp"
#include "orderlab/pairs.hpp"
#include "orderlab/shift.hpp"

using namespace orderlab;

namespace {

template <typename F>
double time_run(F&& f, Parallelism mode) {
    auto t0 = std::chrono::steady_clock::now();
    f(mode);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

template <typename F, typename G>
void row(const char* name, F&& run, G&& equal) {
    double ts = time_run(run, Parallelism::Serial);
    double tp = time_run(run, Parallelism::Parallel);
    std::printf("%-28s %10.3fs %10.3fs %8.2fx   %s\n", name, ts, tp,
                tp > 0 ? ts / tp : 0.0, equal() ? "equal" : "DIVERGED");
}

} // namespace

int main() {
    std::printf("%-28s %11s %11s %9s   %s\n", "kernel", "serial", "parallel",
                "speedup", "results");
    std::printf("workers: %d (cap with ORDERLAB_THREADS)\n\n", worker_count());

    // 1. past axiom scan, pairwise closure dominates
    {
        OrderedGroupContext ctx = OrderedGroupContext::standard(GroupId::lattice(2));
        PastAxiomReport last_s, last_p;
        row("axiom scan z2 r=40",
            [&](Parallelism m) {
                auto rep = verify_past_axioms(ctx, 40, m);
                (m == Parallelism::Serial ? last_s : last_p) = rep;
            },
            [&] {
                return last_s.passed() == last_p.passed() &&
                       last_s.closure_violations == last_p.closure_violations;
            });
    }

    // 2. admissibility scan, Heisenberg
    {
        OrderedGroupContext ctx = OrderedGroupContext::standard(GroupId::heisenberg());
        AdmissibilityReport last_s, last_p;
        row("admissibility heis r=4",
            [&](Parallelism m) {
                auto rep = verify_admissibility(ctx, 4, 4, m);
                (m == Parallelism::Serial ? last_s : last_p) = rep;
            },
            [&] {
                return last_s.passed() == last_p.passed() &&
                       last_s.counts_below == last_p.counts_below;
            });
    }

    // 3. Folner defect series over growing Heisenberg boxes
    {
        GroupId h = GroupId::heisenberg();
        GroupElement t2 = make_element(h, {0, 1, 0});
        FolnerDefectSeries last_s, last_p;
        row("defect series heis 8..14",
            [&](Parallelism m) {
                auto rep = defect_trend(h, t2, 8, 14, Rational(1, 5), m);
                (m == Parallelism::Serial ? last_s : last_p) = rep;
            },
            [&] { return last_s.defects == last_p.defects; });
    }

    // 4. planar SFT transfer-matrix count
    {
        GroupId z2 = GroupId::lattice(2);
        ShiftSystem hard;
        hard.group = z2;
        hard.alphabet.size = 2;
        hard.forbidden = {ForbiddenPattern{{{{0, 0}, 1}, {{1, 0}, 1}}},
                          ForbiddenPattern{{{{0, 0}, 1}, {{0, 1}, 1}}}};
        FiniteWindow F = folner_box(z2, 10); // 11 x 11
        BigInt last_s, last_p;
        row("hard-square count 11x11",
            [&](Parallelism m) {
                auto c = pattern_count(hard, F, m);
                (m == Parallelism::Serial ? last_s : last_p) = c;
            },
            [&] { return last_s == last_p && last_s != 0; });
    }

    // 5. pair violation scan over a dense difference set
    {
        GroupId z2 = GroupId::lattice(2);
        OrderedGroupContext ctx = OrderedGroupContext::standard(z2);
        std::vector<GroupElement> diff;
        for (std::int64_t a = -6; a <= 6; ++a)
            for (std::int64_t b = -6; b <= 6; ++b)
                diff.push_back(make_element(z2, {a, b}));
        auto [x, y] = make_finite_difference_pair(z2, diff, 110, 2, 17);
        AsymptoticCheckReport last_s, last_p;
        row("pair scan horizon 100",
            [&](Parallelism m) {
                auto rep = is_asymptotic_truncated(x, y, ctx, 100, 100, m);
                (m == Parallelism::Serial ? last_s : last_p) = rep;
            },
            [&] {
                return last_s.violations == last_p.violations &&
                       last_s.verdict == last_p.verdict;
            });
    }

    return 0;
}
