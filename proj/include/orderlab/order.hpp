#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orderlab/group.hpp"
#include "orderlab/parallel.hpp"

namespace orderlab {

/// Certificate that a group generator is reachable from the semigroup: the
/// word multiplies out to `target`, left to right; exponent -1 uses the
/// inverse of the stored factor. Every factor must itself lie in S.
struct GeneratorCertificate {
    GroupElement target;
    std::vector<std::pair<GroupElement, int>> word;
};

/// A group together with an algebraic past Phi (a conjugation-stable positive
/// cone picking out the elements strictly below the identity), a compatible
/// semigroup S inside Phi^{-1} + identity, and escape sequences f_n / h_n.
///
/// The predicates are plain functions so tests can corrupt them; they must be
/// pure and thread-safe, since the verifiers scan boxes in parallel.
struct OrderedGroupContext {
    GroupId group;
    std::function<bool(const GroupElement&)> past_membership;
    std::function<bool(const GroupElement&)> semigroup_membership;
    std::function<GroupElement(std::int64_t)> f_seq; // increasing escape
    std::function<GroupElement(std::int64_t)> h_seq; // decreasing escape
    std::vector<GeneratorCertificate> generator_certificates;

    /// The built-in context for each supported group:
    ///   lattice:    Phi = last nonzero prefix sum (scanned from the full sum
    ///               down) is negative; S = nonnegative orthant;
    ///               f_n = (n,...,n), h_n = f_n^{-1}.
    ///   Heisenberg: Phi = coords (n3,n2,n1) lexicographically below zero;
    ///               S = {n3 >= n2 >= 0, n3^2 >= n1 >= 0}; f_n = T3^n.
    ///   Unipotent:  Phi = canonical coord tuple lexicographically below zero;
    ///               S = {0 <= a_i^k <= (a_d^1)^k}; f_n = T_{d,d+1}^n.
    static OrderedGroupContext standard(const GroupId& group);
};

bool in_past(const OrderedGroupContext& ctx, const GroupElement& g);
bool in_semigroup(const OrderedGroupContext& ctx, const GroupElement& s);

/// Strict left-invariant order: g1 below g2 iff g2^{-1} g1 lies in the past.
bool less_than(const OrderedGroupContext& ctx, const GroupElement& g1, const GroupElement& g2);

/// Exhaustive axiom scan over box(box_radius): disjointness (no g with g and
/// g^{-1} both in Phi), covering (every non-identity g has g or g^{-1} in
/// Phi), and closure (products of past elements stay in the past; products
/// may leave the box, membership is evaluated wherever they land).
struct PastAxiomReport {
    GroupId group;
    std::int64_t box_radius = 0;
    std::vector<GroupElement> disjointness_violations;
    std::vector<GroupElement> covering_violations;
    std::vector<std::pair<GroupElement, GroupElement>> closure_violations;
    bool passed() const {
        return disjointness_violations.empty() && covering_violations.empty() &&
               closure_violations.empty();
    }
};

PastAxiomReport verify_past_axioms(const OrderedGroupContext& ctx, std::int64_t box_radius,
                                   Parallelism mode = Parallelism::Auto);

/// g in Phi must be equivalent to f_n g f_n^{-1} in Phi.
struct ConjugationViolation {
    std::int64_t n = 0;
    GroupElement g;
    bool g_in_past = false;
    bool conjugate_in_past = false;
};

std::vector<ConjugationViolation> verify_conjugation_invariance(const OrderedGroupContext& ctx,
                                                                std::int64_t n_max,
                                                                std::int64_t box_radius,
                                                                Parallelism mode = Parallelism::Auto);

/// |{s in S : s strictly below f_n}| by exhaustive enumeration of a derived
/// termination box, certified by recounting in a box enlarged one grading
/// step in every coordinate direction. A count that changes under enlargement
/// throws internal_consistency_error.
std::int64_t count_below(const OrderedGroupContext& ctx, std::int64_t n);

/// Closed-form size bound for {s in S : s below f_n} where one is available
/// (Heisenberg: (n^2+1)^3; Unipotent: prod over entries of (n^k + 1)).
std::optional<std::int64_t> count_below_bound(const GroupId& group, std::int64_t n);

struct SequenceViolation {
    std::int64_t n = 0;
    std::string what;
};

/// Semigroup admissibility relative to the past, checked over box(box_radius)
/// and escape indices 1..n_max: S closure under products, S contained in
/// Phi^{-1} + identity, conjugation invariance of Phi under f_n, finiteness
/// counts with their bounds, f/h monotonicity, h_n in S^{-1}, and the stored
/// generator certificates.
struct AdmissibilityReport {
    GroupId group;
    std::int64_t box_radius = 0;
    std::int64_t n_max = 0;
    std::vector<std::pair<GroupElement, GroupElement>> closure_violations;
    std::vector<GroupElement> containment_violations;
    std::vector<ConjugationViolation> conjugation_violations;
    std::vector<SequenceViolation> sequence_violations;
    bool generator_check = false;
    std::map<std::int64_t, std::int64_t> counts_below;
    std::map<std::int64_t, std::int64_t> bound_values;

    bool counts_within_bounds() const {
        for (const auto& [n, bound] : bound_values) {
            auto it = counts_below.find(n);
            if (it == counts_below.end() || it->second > bound) return false;
        }
        return true;
    }
    bool passed() const {
        return closure_violations.empty() && containment_violations.empty() &&
               conjugation_violations.empty() && sequence_violations.empty() &&
               generator_check && counts_within_bounds();
    }
};

AdmissibilityReport verify_admissibility(const OrderedGroupContext& ctx, std::int64_t n_max,
                                         std::int64_t box_radius,
                                         Parallelism mode = Parallelism::Auto);

} // namespace orderlab
