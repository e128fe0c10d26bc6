#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "orderlab/group.hpp"
#include "orderlab/order.hpp"
#include "orderlab/parallel.hpp"
#include "orderlab/shift.hpp"

namespace orderlab {

/// x uniform on box(window_radius); y equal to x except at the cells of
/// `diff` (all inside the box), where the symbol is advanced mod alphabet.
/// The two configurations share their window by construction.
std::pair<Configuration, Configuration> make_finite_difference_pair(
    const GroupId& group, const std::vector<GroupElement>& diff,
    std::int64_t window_radius, int alphabet_size, std::uint64_t seed);

enum class PairVerdict {
    /// Every violation of d(s.x, s.y) <= 2^-eps_exponent sits strictly inside
    /// box(horizon): truncated evidence that only finitely many s in S move
    /// the pair apart.
    AsymptoticWithinHorizon,
    /// A violation touches the boundary shell; the truncation proves nothing.
    Refuted,
};

struct AsymptoticCheckReport {
    GroupId group;
    std::int64_t horizon = 0;
    std::int64_t eps_exponent = 0;
    std::vector<GroupElement> difference;  // cells where x and y disagree
    std::vector<GroupElement> violations;  // s in S cap box(horizon) with d > eps
    std::int64_t max_violation_radius = -1;
    PairVerdict verdict = PairVerdict::AsymptoticWithinHorizon;
};

/// Scan of {s in S cap box(horizon) : d(s.x, s.y) > 2^-eps_exponent} for a
/// pair differing on a finite set D. Since (s.x)(h) = x(s^-1 h), the pair
/// s.x, s.y disagrees exactly on s D, so the distance exceeds 2^-m exactly
/// when s D meets the first m elements of the canonical enumeration; that
/// identity replaces per-element metric scans and the scan over S is the
/// parallel kernel here.
///
/// x and y must share a window, and the window must be able to answer every
/// metric question the scan would pose (s^-1 h defined for all scanned s, h);
/// too small a window throws insufficient_window_error up front.
AsymptoticCheckReport is_asymptotic_truncated(const Configuration& x,
                                              const Configuration& y,
                                              const OrderedGroupContext& ctx,
                                              std::int64_t horizon,
                                              std::int64_t eps_exponent,
                                              Parallelism mode = Parallelism::Auto);

/// Sparse diagonal difference sets: the elements 2^e (1, ..., 1) for the
/// given exponents, the engine behind the Li-Yorke witnesses.
std::vector<GroupElement> diagonal_powers(const GroupId& group,
                                          const std::vector<std::int64_t>& exponents);

/// One verified group element moving the pair: the measured first
/// disagreement index of (s.x, s.y) and the metric value 2^-index (which
/// underflows to 0.0 for indices past ~1074; the index is authoritative).
struct PairWitness {
    GroupElement s;
    std::int64_t index = 0;
    double distance = 0.0;
};

/// Li-Yorke evidence for a pair differing on a sparse diagonal set
/// {2^e diag : e in levels}:
///   distal:   s = -2^e diag lands a disagreement on the identity cell, so
///             d(s.x, s.y) = 1 >= delta, once per level;
///   proximal: s = -(2^e + 2^e') diag for consecutive levels e < e' puts the
///             nearest disagreement at 2^e diag on the negative side, and
///             the levels grow, so the distances decrease strictly toward 0.
/// Every witness is re-verified literally (act + metric scan); a mismatch
/// with the construction throws internal_consistency_error.
struct LiYorkeReport {
    GroupId group;
    double delta = 0.0;
    std::vector<std::int64_t> levels;     // exponents of the difference set
    std::int64_t metric_radius = 0;       // box scanned by the metric
    std::int64_t window_radius = 0;       // box carrying the configurations
    std::vector<PairWitness> distal;
    std::vector<PairWitness> proximal;
    bool witnessed = false;
};

struct LiYorkePair {
    Configuration x, y;
    LiYorkeReport report;
};

/// Construct and verify a Li-Yorke pair over a lattice with levels
/// k0, ..., k0 + depth. depth >= 1 gives `depth` proximal witnesses; with
/// depth = 0 there is no proximal sequence and the report is not witnessed.
LiYorkePair li_yorke_witness(const GroupId& group, double delta, std::int64_t k0,
                             std::int64_t depth, int alphabet_size,
                             std::uint64_t seed);

/// count configurations that pairwise differ in at most two cells: a shared
/// random base, then one distinct flipped cell each. Every pair is a
/// finite-difference pair, hence asymptotic.
std::vector<Configuration> stable_set_sample(const GroupId& group, std::size_t count,
                                             std::int64_t window_radius,
                                             int alphabet_size, std::uint64_t seed);

/// count configurations over a shared window whose pairwise difference sets
/// are sparse diagonal sets with interleaved level classes, so every pair of
/// the sample carries verified Li-Yorke witnesses.
struct ChaoticSample {
    std::vector<Configuration> configs;
    struct PairEntry {
        std::size_t first = 0, second = 0;
        LiYorkeReport report;
    };
    std::vector<PairEntry> pairs;
};

ChaoticSample chaotic_set_sample(const GroupId& group, std::size_t count,
                                 double delta, std::int64_t k0, std::int64_t depth,
                                 int alphabet_size, std::uint64_t seed);

} // namespace orderlab
