#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "orderlab/group.hpp"
#include "orderlab/parallel.hpp"

namespace orderlab {

using BigInt = boost::multiprecision::cpp_int;

/// Symbols are 0 .. size-1.
struct Alphabet {
    int size = 2;
};

/// A partial configuration: a symbol assignment on a finite set of group
/// elements. Full configurations never materialize; every computation works
/// on a window large enough for the question asked and throws
/// insufficient_window_error when the window runs out.
struct Configuration {
    GroupId group;
    int alphabet_size = 2;
    std::map<std::vector<std::int64_t>, int> cells;

    std::optional<int> value_at(const GroupElement& g) const;
    void set(const GroupElement& g, int symbol);
    FiniteWindow window() const;
};

/// Left shift action (g.x)(h) = x(g^{-1} h). The defined window translates
/// from W to g W; values ride along.
Configuration act(const GroupElement& g, const Configuration& x);

/// Canonical enumeration index (graded by box radius, lex within a shell) of
/// the first element of box(horizon) where x and y differ, or nullopt when
/// they agree on the whole box. Both configurations must cover every scanned
/// cell up to and including the first disagreement.
///
/// This index is the authoritative form of the metric: 2^-index underflows
/// double well inside ranges the pair machinery reaches, the index never does.
std::optional<std::int64_t> first_disagreement_index(const Configuration& x,
                                                     const Configuration& y,
                                                     std::int64_t horizon);

/// 2^-first_disagreement_index, 0.0 when there is none. Underflows to 0.0 for
/// indices beyond roughly 1074; callers comparing distances should prefer the
/// index form.
double shift_metric(const Configuration& x, const Configuration& y,
                    std::int64_t horizon);

/// A finite forbidden pattern: offsets (group elements, by coordinates) and
/// the symbol each must carry for the pattern to be present.
struct ForbiddenPattern {
    std::vector<std::pair<std::vector<std::int64_t>, int>> cells;
};

/// A full shift, or a shift of finite type over a lattice. Matrix groups only
/// get full shifts here: pattern counting for their SFTs has no small
/// transfer structure and is out of scope.
struct ShiftSystem {
    GroupId group;
    Alphabet alphabet;
    std::vector<ForbiddenPattern> forbidden;

    static ShiftSystem full_shift(GroupId group, int alphabet_size);
};

/// Number of locally admissible patterns on F: assignments F -> alphabet such
/// that no forbidden pattern sits fully inside F at any translate. Exact.
///
/// Full shifts count on any window of any supported group. SFTs count over
/// Z (any finite window, sliding-window transfer) and Z^2 (solid boxes only,
/// row transfer); anything else throws unsupported_operation_error.
BigInt pattern_count(const ShiftSystem& sys, const FiniteWindow& F,
                     Parallelism mode = Parallelism::Auto);

/// log(count)/|F| over F = folner_box(n). For a full shift the estimate is
/// log(alphabet) computed directly, exact for every n.
struct EntropyEstimate {
    std::int64_t n = 0;
    std::int64_t window_size = 0;
    BigInt count;
    double estimate = 0.0;
};

EntropyEstimate top_entropy_estimate(const ShiftSystem& sys, std::int64_t n,
                                     Parallelism mode = Parallelism::Auto);

/// Natural log of a positive big integer via its top 64 bits; relative error
/// is at the double rounding level regardless of magnitude.
double log_big(const BigInt& value);

/// Text format, one directive per line, '#' comments:
///   alphabet K
///   OFFSET:SYM OFFSET:SYM ...     one forbidden pattern per line
/// where OFFSET is a comma-separated coordinate tuple. The lattice dimension
/// is inferred from the first offset and must be consistent.
ShiftSystem parse_shift_system(std::istream& in);
ShiftSystem load_shift_system(const std::string& path);

/// Uniform symbols on the given window, cells drawn in canonical enumeration
/// order so a seed pins the configuration exactly.
Configuration random_configuration(const GroupId& group, const FiniteWindow& window,
                                   int alphabet_size, std::mt19937_64& rng);

} // namespace orderlab
