#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "orderlab/group.hpp"
#include "orderlab/parallel.hpp"

namespace orderlab {

using Rational = boost::multiprecision::cpp_rational;

/// |gF symmetric-difference F| / |F|, exact. Zero for the identity; values
/// always lie in [0, 2].
Rational folner_defect(const GroupElement& g, const FiniteWindow& F);

/// Fraction of h in F whose whole left K-translate K h stays inside F.
Rational interior_ratio(const FiniteWindow& K, const FiniteWindow& F);

/// Averaging windows: the orthant boxes [0,n]^d for lattices (translation
/// defect 2/(n+1) per axis step), the symmetric anisotropic boxes of
/// enumerate_box for the matrix groups.
FiniteWindow folner_box(const GroupId& group, std::int64_t n);

/// Defect of a fixed translator across the window family. `trend_pass` means
/// the defect did not grow from n_lo to n_hi and ended below the threshold;
/// it is evidence of decay on the computed range, not a limit claim.
struct FolnerDefectSeries {
    GroupId group;
    GroupElement translator;
    std::int64_t n_lo = 0;
    std::int64_t n_hi = 0;
    Rational threshold;
    std::vector<std::pair<std::int64_t, Rational>> defects;
    bool trend_pass = false;
};

FolnerDefectSeries defect_trend(const GroupId& group, const GroupElement& g, std::int64_t n_lo,
                                std::int64_t n_hi, Rational threshold = Rational(1, 5),
                                Parallelism mode = Parallelism::Auto);

} // namespace orderlab
