#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "orderlab/errors.hpp"

namespace orderlab {

/// Supported groups. All are torsion-free, finitely generated and nilpotent:
///   IntegerLattice(d)  Z^d, d >= 1
///   Heisenberg         3x3 integer Heisenberg group H_3(Z)
///   Unipotent(d)       (d+1)x(d+1) upper unitriangular integer matrices, d >= 2
enum class GroupKind { IntegerLattice, Heisenberg, Unipotent };

struct GroupId {
    GroupKind kind = GroupKind::IntegerLattice;
    int d = 1; // lattice rank / unipotent parameter; fixed to 2 for Heisenberg

    static GroupId lattice(int d);
    static GroupId heisenberg();
    static GroupId unipotent(int d);

    /// Length of the canonical coordinate tuple (see GroupElement).
    int coord_count() const;
    /// Side of the integer matrix image under to_matrix().
    int matrix_size() const;

    /// Short, parseable name: "z2", "heisenberg", "u4" (= Unipotent(3) inside
    /// U_4(Z)). parse() accepts exactly these.
    std::string name() const;
    static GroupId parse(const std::string& text);

    bool operator==(const GroupId&) const = default;
};

/// Group element in canonical coordinates.
///
/// IntegerLattice(d): (n_1, ..., n_d).
///
/// Heisenberg: (n3, n2, n1), the exponents of the normal form
/// T3^n3 T2^n2 T1^n1 where T1 = I + E13 (central), T2 = I + E12, T3 = I + E23;
/// the matrix image is [[1, n2, n1], [0, 1, n3], [0, 0, 1]].
///
/// Unipotent(d): the superdiagonal entries a_i^k (k = distance above the main
/// diagonal, 1 <= k <= d; 1 <= i <= d-k+1; matrix entry (i, i+k)), flattened as
///   (a_d^1, a_{d-1}^1, ..., a_1^1,  a_{d-1}^2, ..., a_1^2,  ...,  a_1^d)
/// i.e. level by level, index i descending. This is exactly the tuple whose
/// lexicographic order defines the group's algebraic past, so the canonical
/// coordinates double as the order key.
///
/// Arithmetic on coordinates is checked 64-bit: any overflow throws
/// std::overflow_error rather than wrapping. Intended operating range is
/// desk scale, |coordinate| <= 10^6.
struct GroupElement {
    GroupId group;
    std::vector<std::int64_t> coords;

    bool operator==(const GroupElement&) const = default;
    /// Plain lexicographic coordinate order (group compared first only to keep
    /// the relation total); box grading is not part of this comparison.
    std::strong_ordering operator<=>(const GroupElement&) const;
};

GroupElement identity(const GroupId& group);
GroupElement make_element(const GroupId& group, std::vector<std::int64_t> coords);

GroupElement multiply(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& a);

/// Unipotent/Heisenberg entry accessor: a_i^k, the matrix entry (i, i+k),
/// 1-based. For lattices throws unsupported_operation_error.
std::int64_t superdiagonal_entry(const GroupElement& a, int k, int i);

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Unitriangular matrix image; defined for Heisenberg and Unipotent only
/// (lattices have no canonical matrix form here).
IntMatrix to_matrix(const GroupElement& a);
GroupElement from_matrix(const GroupId& group, const IntMatrix& m);

/// Finite ordered set of elements of one group, kept in canonical enumeration
/// order (graded by smallest containing box, ties lexicographic) with no
/// duplicates. Construct through the helpers below or normalize() explicitly.
struct FiniteWindow {
    GroupId group;
    std::vector<GroupElement> elements;

    std::size_t size() const { return elements.size(); }
    bool contains(const GroupElement& g) const;
};

/// Sort into canonical enumeration order and drop duplicates.
FiniteWindow normalize_window(GroupId group, std::vector<GroupElement> elements);

/// Per-coordinate box radii at grading parameter n. The box at n is
///   lattice:    |n_i| <= n
///   Heisenberg: |n3|, |n2| <= n, |n1| <= n^2
///   Unipotent:  |a_i^k| <= n^k
/// Boxes are nested and exhaust the group.
std::vector<std::int64_t> box_radii(const GroupId& group, std::int64_t n);

bool in_box(const GroupElement& g, std::int64_t n);

/// Smallest n with g in box(n).
std::int64_t box_radius(const GroupElement& g);

/// |box(n)| in closed form (checked arithmetic).
std::int64_t box_size(const GroupId& group, std::int64_t n);

/// All elements of box(n) in canonical enumeration order: graded by
/// box_radius, ties broken lexicographically on coords. Element 0 is the
/// identity; the result is a prefix of the enumeration of any larger box.
FiniteWindow enumerate_box(const GroupId& group, std::int64_t n);

/// Position of g in the canonical enumeration (identity -> 0).
std::int64_t enumeration_index(const GroupElement& g);

/// Checked arithmetic used for all coordinate math.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

} // namespace orderlab
