#include "orderlab/folner.hpp"

#include <algorithm>

namespace orderlab {

namespace {

// Coordinate tuples in plain lexicographic order; enough for set arithmetic,
// cheaper than the graded window order.
std::vector<std::vector<std::int64_t>> sorted_coords(const FiniteWindow& F) {
    std::vector<std::vector<std::int64_t>> v;
    v.reserve(F.size());
    for (const auto& e : F.elements) v.push_back(e.coords);
    std::sort(v.begin(), v.end());
    return v;
}

std::size_t symmetric_difference_size(const std::vector<std::vector<std::int64_t>>& a,
                                      const std::vector<std::vector<std::int64_t>>& b) {
    std::size_t i = 0, j = 0, diff = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++diff;
            ++i;
        } else if (b[j] < a[i]) {
            ++diff;
            ++j;
        } else {
            ++i;
            ++j;
        }
    }
    return diff + (a.size() - i) + (b.size() - j);
}

} // namespace

Rational folner_defect(const GroupElement& g, const FiniteWindow& F) {
    if (!(g.group == F.group)) throw std::invalid_argument("translator from wrong group");
    if (F.size() == 0) throw std::invalid_argument("empty window");
    auto base = sorted_coords(F);
    std::vector<std::vector<std::int64_t>> shifted;
    shifted.reserve(F.size());
    for (const auto& h : F.elements) shifted.push_back(multiply(g, h).coords);
    std::sort(shifted.begin(), shifted.end());
    std::size_t diff = symmetric_difference_size(shifted, base);
    return Rational(diff, F.size());
}

Rational interior_ratio(const FiniteWindow& K, const FiniteWindow& F) {
    if (!(K.group == F.group)) throw std::invalid_argument("windows from different groups");
    if (F.size() == 0) throw std::invalid_argument("empty window");
    auto base = sorted_coords(F);
    auto inside = [&](const std::vector<std::int64_t>& c) {
        return std::binary_search(base.begin(), base.end(), c);
    };
    std::size_t good = 0;
    for (const auto& h : F.elements) {
        bool all_in = true;
        for (const auto& k : K.elements) {
            if (!inside(multiply(k, h).coords)) {
                all_in = false;
                break;
            }
        }
        if (all_in) ++good;
    }
    return Rational(good, F.size());
}

FiniteWindow folner_box(const GroupId& group, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("window parameter must be >= 0");
    if (group.kind != GroupKind::IntegerLattice) return enumerate_box(group, n);
    std::vector<GroupElement> elems;
    std::vector<std::int64_t> c(group.d, 0);
    while (true) {
        elems.push_back(GroupElement{group, c});
        std::size_t j = c.size();
        bool advanced = false;
        while (j > 0) {
            --j;
            if (c[j] < n) {
                ++c[j];
                for (std::size_t t = j + 1; t < c.size(); ++t) c[t] = 0;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
    return normalize_window(group, std::move(elems));
}

FolnerDefectSeries defect_trend(const GroupId& group, const GroupElement& g, std::int64_t n_lo,
                                std::int64_t n_hi, Rational threshold, Parallelism mode) {
    if (!(g.group == group)) throw std::invalid_argument("translator from wrong group");
    if (n_lo < 0 || n_hi < n_lo) throw std::invalid_argument("bad n range");

    FolnerDefectSeries series;
    series.group = group;
    series.translator = g;
    series.n_lo = n_lo;
    series.n_hi = n_hi;
    series.threshold = threshold;

    const std::int64_t count = n_hi - n_lo + 1;
    std::vector<Rational> values(count);
    const bool par = use_parallel(mode);
    const int workers = worker_count();
#pragma omp parallel for schedule(dynamic) num_threads(workers) if (par)
    for (std::int64_t i = 0; i < count; ++i) {
        values[i] = folner_defect(g, folner_box(group, n_lo + i));
    }
    for (std::int64_t i = 0; i < count; ++i) series.defects.emplace_back(n_lo + i, values[i]);

    series.trend_pass = !series.defects.empty() &&
                        series.defects.back().second <= series.defects.front().second &&
                        series.defects.back().second < threshold;
    return series;
}

} // namespace orderlab
