#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "orderlab/folner.hpp"
#include "orderlab/group.hpp"
#include "orderlab/order.hpp"
#include "orderlab/shift.hpp"

namespace orderlab {

/// Shift-invariant measures on full shifts with exact rational cylinder
/// probabilities: product (Bernoulli) measures over any supported group, and
/// stationary Markov chains over Z. Exactness is the point: entropy
/// identities checked downstream cancel to floating-point roundoff only when
/// the probabilities themselves carry no error.
struct ShiftMeasure {
    enum class Kind { Bernoulli, Markov };

    GroupId group;
    int alphabet_size = 2;
    Kind kind = Kind::Bernoulli;
    std::vector<Rational> weights;                 // Bernoulli: symbol weights
    std::vector<std::vector<Rational>> transition; // Markov: row-stochastic P
    std::vector<Rational> stationary;              // Markov: pi with pi P = pi

    static ShiftMeasure bernoulli(GroupId group, std::vector<Rational> weights);

    /// Stationary Markov measure on the full shift over Z. The stationary
    /// vector is solved exactly; a transition matrix without a unique,
    /// strictly positive stationary distribution is rejected.
    static ShiftMeasure markov(std::vector<std::vector<Rational>> transition);
};

/// H(p) = -sum p_i log p_i in nats; zero entries contribute zero.
double entropy_nats(const std::vector<Rational>& p);

/// Entropy rate of the measure: H(weights) for Bernoulli, the conditional
/// row entropy sum_a pi_a H(P_a.) for Markov.
double measure_entropy(const ShiftMeasure& mu);

/// Exact probability of the cylinder fixing the given cells.
Rational cylinder_probability(const ShiftMeasure& mu, const Configuration& cells);

/// Entropy of the joint distribution of the coordinates in C.
/// Bernoulli: |C| H(p). Markov: chain rule over sorted coordinates, the gap
/// conditionals taken from exact powers of P.
double joint_coordinate_entropy(const ShiftMeasure& mu, const FiniteWindow& C);

/// H(A | B) = H(A u B) - H(B) for coordinate sets. For Bernoulli measures
/// this is computed as |A \ B| H(p) directly, so identities that cancel
/// combinatorially cancel to exactly zero in floating point too.
double conditional_coordinate_entropy(const ShiftMeasure& mu, const FiniteWindow& A,
                                      const FiniteWindow& B);

/// H of the coordinate at the identity given the coordinates at the listed
/// past elements. Every element of `past` must lie in the algebraic past of
/// the supplied order context; anything else is rejected.
double conditional_entropy_finite_past(const ShiftMeasure& mu,
                                       const OrderedGroupContext& ctx,
                                       const FiniteWindow& past);

/// Truncated check of the entropy addition identity behind the Pinsker
/// factor argument. With single-coordinate partitions alpha at a, beta at b,
/// gamma at both, and P(n) = past elements inside box(n):
///   lhs       = H(gamma | union_{g in P(n)} g.gamma)
///   rhs_beta  = H(beta  | union_{g in P(n)} g.beta)
///   rhs_alpha = H(alpha | union_{g in box(n)} g.beta u union_{g in P(n)} g.alpha)
///   gap       = lhs - rhs_beta - rhs_alpha
/// where g.C translates a coordinate set on the left. For product measures
/// the gap is exactly zero; for Markov measures it sits at roundoff once the
/// box absorbs the memory of the chain.
struct PinskerCheckReport {
    GroupId group;
    std::int64_t radius = 0;
    GroupElement a, b;
    double lhs = 0.0;
    double rhs_beta = 0.0;
    double rhs_alpha = 0.0;
    double gap = 0.0;
};

PinskerCheckReport pinsker_check(const ShiftMeasure& mu, const OrderedGroupContext& ctx,
                                 const GroupElement& a, const GroupElement& b,
                                 std::int64_t radius);

/// JSON measure description:
///   {"type": "bernoulli", "group": "z2", "weights": ["1/2", "1/2"]}
///   {"type": "markov", "transition": [["9/10", "1/10"], ["1/2", "1/2"]]}
/// Entries are strings ("3", "1/3") taken exactly, or JSON numbers recovered
/// as the simplest rational within 1e-12 (denominator up to 1e9) and exactly
/// from the binary value past that.
ShiftMeasure parse_measure_json(const std::string& text);
ShiftMeasure load_measure_json(const std::string& path);

/// Simplest rational approximation helper used for JSON numbers (exposed for
/// testing): continued-fraction convergents with denominator <= 1e9, falling
/// back to the exact binary expansion of the double.
Rational rational_from_double(double x);

} // namespace orderlab
