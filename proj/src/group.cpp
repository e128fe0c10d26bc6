#include "orderlab/group.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace orderlab {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in add");
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow in sub");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in mul");
    return r;
}

GroupId GroupId::lattice(int d) {
    if (d < 1) throw std::invalid_argument("IntegerLattice needs d >= 1");
    return GroupId{GroupKind::IntegerLattice, d};
}

GroupId GroupId::heisenberg() { return GroupId{GroupKind::Heisenberg, 2}; }

GroupId GroupId::unipotent(int d) {
    if (d < 2) throw std::invalid_argument("Unipotent needs d >= 2");
    return GroupId{GroupKind::Unipotent, d};
}

int GroupId::coord_count() const {
    switch (kind) {
        case GroupKind::IntegerLattice: return d;
        case GroupKind::Heisenberg: return 3;
        case GroupKind::Unipotent: return d * (d + 1) / 2;
    }
    throw std::logic_error("bad GroupKind");
}

int GroupId::matrix_size() const {
    switch (kind) {
        case GroupKind::IntegerLattice:
            throw unsupported_operation_error("lattice elements have no matrix form");
        case GroupKind::Heisenberg: return 3;
        case GroupKind::Unipotent: return d + 1;
    }
    throw std::logic_error("bad GroupKind");
}

std::string GroupId::name() const {
    switch (kind) {
        case GroupKind::IntegerLattice: return "z" + std::to_string(d);
        case GroupKind::Heisenberg: return "heisenberg";
        case GroupKind::Unipotent: return "u" + std::to_string(d + 1);
    }
    throw std::logic_error("bad GroupKind");
}

GroupId GroupId::parse(const std::string& text) {
    if (text == "heisenberg") return heisenberg();
    auto tail_int = [&](std::size_t off) {
        int v = 0;
        auto [p, ec] = std::from_chars(text.data() + off, text.data() + text.size(), v);
        if (ec != std::errc{} || p != text.data() + text.size())
            throw std::invalid_argument("unrecognized group name: " + text);
        return v;
    };
    if (text.size() > 1 && text[0] == 'z') return lattice(tail_int(1));
    if (text.size() > 1 && text[0] == 'u') return unipotent(tail_int(1) - 1);
    throw std::invalid_argument("unrecognized group name: " + text);
}

std::strong_ordering GroupElement::operator<=>(const GroupElement& o) const {
    if (group.kind != o.group.kind) return group.kind <=> o.group.kind;
    if (group.d != o.group.d) return group.d <=> o.group.d;
    return std::lexicographical_compare_three_way(
        coords.begin(), coords.end(), o.coords.begin(), o.coords.end());
}

GroupElement identity(const GroupId& group) {
    return GroupElement{group, std::vector<std::int64_t>(group.coord_count(), 0)};
}

GroupElement make_element(const GroupId& group, std::vector<std::int64_t> coords) {
    if (static_cast<int>(coords.size()) != group.coord_count())
        throw std::invalid_argument("coordinate count does not match group");
    return GroupElement{group, std::move(coords)};
}

namespace {

void require_same_group(const GroupElement& a, const GroupElement& b) {
    if (!(a.group == b.group)) throw std::invalid_argument("elements from different groups");
}

// Flattened position of a_i^k: level blocks k = 1..d, index i descending from
// d-k+1 to 1 inside each block.
int uni_pos(int d, int k, int i) {
    if (k < 1 || k > d || i < 1 || i > d - k + 1) throw std::out_of_range("superdiagonal entry out of range");
    int offset = 0;
    for (int j = 1; j < k; ++j) offset += d - j + 1;
    return offset + (d - k + 1 - i);
}

// Superdiagonal entries of the product of two unitriangular matrices:
//   c_i^k = a_i^k + sum_{j=1}^{k-1} a_i^{k-j} b_{i+k-j}^j + b_i^k.
std::vector<std::int64_t> uni_multiply(int d, const std::vector<std::int64_t>& a,
                                       const std::vector<std::int64_t>& b) {
    std::vector<std::int64_t> c(a.size(), 0);
    for (int k = 1; k <= d; ++k) {
        for (int i = 1; i <= d - k + 1; ++i) {
            std::int64_t v = checked_add(a[uni_pos(d, k, i)], b[uni_pos(d, k, i)]);
            for (int j = 1; j <= k - 1; ++j) {
                std::int64_t term = checked_mul(a[uni_pos(d, k - j, i)], b[uni_pos(d, j, i + k - j)]);
                v = checked_add(v, term);
            }
            c[uni_pos(d, k, i)] = v;
        }
    }
    return c;
}

// Solve a * b = e level by level: the level-k entry of b only depends on
// levels < k of b.
std::vector<std::int64_t> uni_inverse(int d, const std::vector<std::int64_t>& a) {
    std::vector<std::int64_t> b(a.size(), 0);
    for (int k = 1; k <= d; ++k) {
        for (int i = 1; i <= d - k + 1; ++i) {
            std::int64_t v = a[uni_pos(d, k, i)];
            for (int j = 1; j <= k - 1; ++j)
                v = checked_add(v, checked_mul(a[uni_pos(d, k - j, i)], b[uni_pos(d, j, i + k - j)]));
            b[uni_pos(d, k, i)] = checked_sub(0, v);
        }
    }
    return b;
}

} // namespace

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
    require_same_group(a, b);
    const GroupId& g = a.group;
    switch (g.kind) {
        case GroupKind::IntegerLattice: {
            std::vector<std::int64_t> c(a.coords.size());
            for (std::size_t i = 0; i < c.size(); ++i) c[i] = checked_add(a.coords[i], b.coords[i]);
            return GroupElement{g, std::move(c)};
        }
        case GroupKind::Heisenberg: {
            // (n3,n2,n1)*(m3,m2,m1) = (n3+m3, n2+m2, n1+m1+n2*m3), the normal
            // form product T3^. T2^. T1^. read off the matrix image.
            const auto& n = a.coords;
            const auto& m = b.coords;
            std::vector<std::int64_t> c(3);
            c[0] = checked_add(n[0], m[0]);
            c[1] = checked_add(n[1], m[1]);
            c[2] = checked_add(checked_add(n[2], m[2]), checked_mul(n[1], m[0]));
            return GroupElement{g, std::move(c)};
        }
        case GroupKind::Unipotent:
            return GroupElement{g, uni_multiply(g.d, a.coords, b.coords)};
    }
    throw std::logic_error("bad GroupKind");
}

GroupElement inverse(const GroupElement& a) {
    const GroupId& g = a.group;
    switch (g.kind) {
        case GroupKind::IntegerLattice: {
            std::vector<std::int64_t> c(a.coords.size());
            for (std::size_t i = 0; i < c.size(); ++i) c[i] = checked_sub(0, a.coords[i]);
            return GroupElement{g, std::move(c)};
        }
        case GroupKind::Heisenberg: {
            const auto& n = a.coords;
            std::vector<std::int64_t> c(3);
            c[0] = checked_sub(0, n[0]);
            c[1] = checked_sub(0, n[1]);
            c[2] = checked_sub(checked_mul(n[1], n[0]), n[2]);
            return GroupElement{g, std::move(c)};
        }
        case GroupKind::Unipotent:
            return GroupElement{g, uni_inverse(g.d, a.coords)};
    }
    throw std::logic_error("bad GroupKind");
}

std::int64_t superdiagonal_entry(const GroupElement& a, int k, int i) {
    switch (a.group.kind) {
        case GroupKind::IntegerLattice:
            throw unsupported_operation_error("lattice elements have no superdiagonal entries");
        case GroupKind::Heisenberg: {
            // Matrix image [[1,n2,n1],[0,1,n3],[0,0,1]].
            if (k == 1 && i == 1) return a.coords[1];
            if (k == 1 && i == 2) return a.coords[0];
            if (k == 2 && i == 1) return a.coords[2];
            throw std::out_of_range("superdiagonal entry out of range");
        }
        case GroupKind::Unipotent:
            return a.coords[uni_pos(a.group.d, k, i)];
    }
    throw std::logic_error("bad GroupKind");
}

IntMatrix to_matrix(const GroupElement& a) {
    int n = a.group.matrix_size();
    IntMatrix m(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    for (int k = 1; k <= n - 1; ++k)
        for (int i = 1; i <= n - k; ++i)
            m[i - 1][i + k - 1] = superdiagonal_entry(a, k, i);
    return m;
}

GroupElement from_matrix(const GroupId& group, const IntMatrix& m) {
    int n = group.matrix_size();
    if (static_cast<int>(m.size()) != n)
        throw std::invalid_argument("matrix size does not match group");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(m[i].size()) != n)
            throw std::invalid_argument("matrix is not square");
        if (m[i][i] != 1) throw std::invalid_argument("matrix is not unitriangular");
        for (int j = 0; j < i; ++j)
            if (m[i][j] != 0) throw std::invalid_argument("matrix is not upper triangular");
    }
    GroupElement a = identity(group);
    if (group.kind == GroupKind::Heisenberg) {
        a.coords[0] = m[1][2];
        a.coords[1] = m[0][1];
        a.coords[2] = m[0][2];
    } else {
        for (int k = 1; k <= group.d; ++k)
            for (int i = 1; i <= group.d - k + 1; ++i)
                a.coords[uni_pos(group.d, k, i)] = m[i - 1][i + k - 1];
    }
    return a;
}

namespace {

// n^k with overflow checking.
std::int64_t checked_pow(std::int64_t n, int k) {
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i) r = checked_mul(r, n);
    return r;
}

// Smallest t >= 0 with t^k >= v (v >= 0).
std::int64_t ceil_root(std::int64_t v, int k) {
    if (v <= 0) return 0;
    if (k == 1) return v;
    std::int64_t t = static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(v), 1.0 / k)));
    while (t > 0 && checked_pow(t - 1, k) >= v) --t;
    while (checked_pow(t, k) < v) ++t;
    return t;
}

// Grading comparator: by smallest containing box, then lexicographic.
bool enum_less(const GroupElement& x, std::int64_t gx, const GroupElement& y, std::int64_t gy) {
    if (gx != gy) return gx < gy;
    return x.coords < y.coords;
}

// Canonical enumeration order, in place.
void sort_graded(std::vector<GroupElement>& elems) {
    std::vector<std::pair<std::int64_t, GroupElement>> graded;
    graded.reserve(elems.size());
    for (auto& e : elems) graded.emplace_back(box_radius(e), std::move(e));
    std::sort(graded.begin(), graded.end(), [](const auto& x, const auto& y) {
        return enum_less(x.second, x.first, y.second, y.first);
    });
    elems.clear();
    for (auto& [r, e] : graded) elems.push_back(std::move(e));
}

// Lexicographic odometer over [-radii, radii]; returns false once exhausted.
bool odometer_advance(std::vector<std::int64_t>& c, const std::vector<std::int64_t>& radii) {
    std::size_t j = c.size();
    while (j > 0) {
        --j;
        if (c[j] < radii[j]) {
            ++c[j];
            for (std::size_t t = j + 1; t < c.size(); ++t) c[t] = -radii[t];
            return true;
        }
    }
    return false;
}

} // namespace

std::vector<std::int64_t> box_radii(const GroupId& group, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("box radius must be >= 0");
    std::vector<std::int64_t> r;
    switch (group.kind) {
        case GroupKind::IntegerLattice:
            r.assign(group.d, n);
            break;
        case GroupKind::Heisenberg:
            r = {n, n, checked_mul(n, n)};
            break;
        case GroupKind::Unipotent:
            for (int k = 1; k <= group.d; ++k) {
                std::int64_t rk = checked_pow(n, k);
                for (int i = 0; i < group.d - k + 1; ++i) r.push_back(rk);
            }
            break;
    }
    return r;
}

bool in_box(const GroupElement& g, std::int64_t n) {
    auto radii = box_radii(g.group, n);
    for (std::size_t j = 0; j < radii.size(); ++j) {
        std::int64_t c = g.coords[j];
        if (c > radii[j] || c < -radii[j]) return false;
    }
    return true;
}

std::int64_t box_radius(const GroupElement& g) {
    std::int64_t m = 0;
    switch (g.group.kind) {
        case GroupKind::IntegerLattice:
            for (auto c : g.coords) m = std::max(m, c < 0 ? -c : c);
            return m;
        case GroupKind::Heisenberg: {
            auto abs64 = [](std::int64_t v) { return v < 0 ? -v : v; };
            m = std::max(abs64(g.coords[0]), abs64(g.coords[1]));
            return std::max(m, ceil_root(abs64(g.coords[2]), 2));
        }
        case GroupKind::Unipotent: {
            int d = g.group.d;
            std::size_t pos = 0;
            for (int k = 1; k <= d; ++k)
                for (int i = 0; i < d - k + 1; ++i, ++pos) {
                    std::int64_t v = g.coords[pos];
                    m = std::max(m, ceil_root(v < 0 ? -v : v, k));
                }
            return m;
        }
    }
    throw std::logic_error("bad GroupKind");
}

std::int64_t box_size(const GroupId& group, std::int64_t n) {
    std::int64_t s = 1;
    for (auto r : box_radii(group, n)) s = checked_mul(s, checked_add(checked_mul(2, r), 1));
    return s;
}

FiniteWindow enumerate_box(const GroupId& group, std::int64_t n) {
    auto radii = box_radii(group, n);
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(box_size(group, n)));
    std::vector<std::int64_t> c(radii.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = -radii[j];
    // The odometer sweep emits plain lexicographic order; the graded sort
    // then yields the canonical enumeration.
    do {
        out.push_back(GroupElement{group, c});
    } while (odometer_advance(c, radii));
    sort_graded(out);
    return FiniteWindow{group, std::move(out)};
}

std::int64_t enumeration_index(const GroupElement& g) {
    std::int64_t m = box_radius(g);
    if (m == 0) return 0;
    std::int64_t idx = box_size(g.group, m - 1);
    // Rank of g within the shell box(m) \ box(m-1), streamed in lexicographic
    // order without materializing the shell.
    auto radii = box_radii(g.group, m);
    std::vector<std::int64_t> c(radii.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = -radii[j];
    do {
        if (c == g.coords) return idx;
        GroupElement h{g.group, c};
        if (box_radius(h) == m && c < g.coords) ++idx;
    } while (odometer_advance(c, radii));
    throw std::logic_error("element not found in its own box");
}

FiniteWindow normalize_window(GroupId group, std::vector<GroupElement> elements) {
    for (const auto& e : elements)
        if (!(e.group == group)) throw std::invalid_argument("window element from wrong group");
    sort_graded(elements);
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    return FiniteWindow{group, std::move(elements)};
}

bool FiniteWindow::contains(const GroupElement& g) const {
    std::int64_t r = box_radius(g);
    auto it = std::lower_bound(elements.begin(), elements.end(), g,
                               [r](const GroupElement& x, const GroupElement& y) {
                                   return enum_less(x, box_radius(x), y, r);
                               });
    return it != elements.end() && *it == g;
}

} // namespace orderlab
