#include "orderlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace orderlab {

namespace {

using RMat = std::vector<std::vector<Rational>>;

void check_distribution(const std::vector<Rational>& p, const char* what) {
    if (p.empty()) throw std::invalid_argument(std::string(what) + " is empty");
    Rational total = 0;
    for (const auto& v : p) {
        if (v < 0) throw std::invalid_argument(std::string(what) + " has a negative entry");
        total += v;
    }
    if (total != 1) throw std::invalid_argument(std::string(what) + " does not sum to 1");
}

RMat rmat_mul(const RMat& a, const RMat& b) {
    std::size_t n = a.size();
    RMat c(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

RMat rmat_pow(const RMat& p, std::int64_t e) {
    std::size_t n = p.size();
    RMat r(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
    RMat base = p;
    while (e > 0) {
        if (e & 1) r = rmat_mul(r, base);
        e >>= 1;
        if (e) base = rmat_mul(base, base);
    }
    return r;
}

// Exact unique solution of pi P = pi, sum pi = 1, by rational Gaussian
// elimination on the stacked system; rank below k means several stationary
// distributions and the chain is rejected.
std::vector<Rational> solve_stationary(const RMat& p) {
    std::size_t k = p.size();
    std::vector<std::vector<Rational>> m;
    for (std::size_t b = 0; b < k; ++b) {
        std::vector<Rational> row(k + 1, Rational(0));
        for (std::size_t a = 0; a < k; ++a) row[a] = p[a][b] - Rational(a == b ? 1 : 0);
        m.push_back(std::move(row));
    }
    std::vector<Rational> ones(k + 1, Rational(1));
    m.push_back(std::move(ones));

    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < k && rank < m.size(); ++col) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][col] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[rank], m[piv]);
        Rational lead = m[rank][col];
        for (auto& v : m[rank]) v /= lead;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rank || m[r][col] == 0) continue;
            Rational f = m[r][col];
            for (std::size_t c = col; c <= k; ++c) m[r][c] -= f * m[rank][c];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    if (rank < k)
        throw std::invalid_argument(
            "transition matrix has no unique stationary distribution");
    for (std::size_t r = rank; r < m.size(); ++r)
        if (m[r][k] != 0)
            throw std::invalid_argument("stationary system is inconsistent");

    std::vector<Rational> pi(k, Rational(0));
    for (std::size_t i = 0; i < rank; ++i) pi[pivot_col[i]] = m[i][k];
    return pi;
}

double entry_to_double(const Rational& v) { return v.convert_to<double>(); }

// Sorted Z coordinates of a window or cylinder, with their symbols when given.
std::vector<std::int64_t> line_coords(const FiniteWindow& C) {
    std::vector<std::int64_t> xs;
    xs.reserve(C.size());
    for (const auto& g : C.elements) xs.push_back(g.coords[0]);
    std::sort(xs.begin(), xs.end());
    return xs;
}

} // namespace

ShiftMeasure ShiftMeasure::bernoulli(GroupId group, std::vector<Rational> weights) {
    check_distribution(weights, "weight vector");
    ShiftMeasure mu;
    mu.group = group;
    mu.alphabet_size = static_cast<int>(weights.size());
    mu.kind = Kind::Bernoulli;
    mu.weights = std::move(weights);
    return mu;
}

ShiftMeasure ShiftMeasure::markov(std::vector<std::vector<Rational>> transition) {
    std::size_t k = transition.size();
    if (k == 0) throw std::invalid_argument("transition matrix is empty");
    for (const auto& row : transition) {
        if (row.size() != k) throw std::invalid_argument("transition matrix is not square");
        check_distribution(row, "transition row");
    }
    ShiftMeasure mu;
    mu.group = GroupId::lattice(1);
    mu.alphabet_size = static_cast<int>(k);
    mu.kind = Kind::Markov;
    mu.stationary = solve_stationary(transition);
    for (const auto& v : mu.stationary)
        if (v <= 0)
            throw std::invalid_argument(
                "stationary distribution must be strictly positive");
    mu.transition = std::move(transition);
    return mu;
}

double entropy_nats(const std::vector<Rational>& p) {
    double h = 0.0;
    for (const auto& v : p) {
        if (v < 0) throw std::invalid_argument("entropy of a negative weight");
        if (v == 0) continue;
        double x = entry_to_double(v);
        h -= x * std::log(x);
    }
    return h;
}

double measure_entropy(const ShiftMeasure& mu) {
    if (mu.kind == ShiftMeasure::Kind::Bernoulli) return entropy_nats(mu.weights);
    double h = 0.0;
    for (std::size_t a = 0; a < mu.transition.size(); ++a)
        h += entry_to_double(mu.stationary[a]) * entropy_nats(mu.transition[a]);
    return h;
}

Rational cylinder_probability(const ShiftMeasure& mu, const Configuration& cells) {
    if (cells.group != mu.group) throw std::invalid_argument("measure group mismatch");
    for (const auto& [coords, sym] : cells.cells)
        if (sym < 0 || sym >= mu.alphabet_size)
            throw std::invalid_argument("cylinder symbol outside the alphabet");

    if (mu.kind == ShiftMeasure::Kind::Bernoulli) {
        Rational prob = 1;
        for (const auto& [coords, sym] : cells.cells)
            prob *= mu.weights[static_cast<std::size_t>(sym)];
        return prob;
    }

    // Markov over Z: map keys are single coordinates in ascending order.
    Rational prob = 1;
    std::map<std::int64_t, RMat> powers;
    bool first = true;
    std::int64_t prev_coord = 0;
    int prev_sym = 0;
    for (const auto& [coords, sym] : cells.cells) {
        if (first) {
            prob *= mu.stationary[static_cast<std::size_t>(sym)];
            first = false;
        } else {
            std::int64_t gap = checked_sub(coords[0], prev_coord);
            auto it = powers.find(gap);
            if (it == powers.end())
                it = powers.emplace(gap, rmat_pow(mu.transition, gap)).first;
            prob *= it->second[static_cast<std::size_t>(prev_sym)]
                               [static_cast<std::size_t>(sym)];
        }
        prev_coord = coords[0];
        prev_sym = sym;
    }
    return prob;
}

double joint_coordinate_entropy(const ShiftMeasure& mu, const FiniteWindow& C) {
    if (C.group != mu.group) throw std::invalid_argument("measure group mismatch");
    if (C.elements.empty()) return 0.0;

    if (mu.kind == ShiftMeasure::Kind::Bernoulli)
        return static_cast<double>(C.size()) * entropy_nats(mu.weights);

    // Chain rule along the line: given the value at the previous coordinate,
    // the next one is distributed by the matching power of P.
    std::vector<std::int64_t> xs = line_coords(C);
    double h = entropy_nats(mu.stationary);
    std::map<std::int64_t, double> gap_term;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        std::int64_t gap = checked_sub(xs[i + 1], xs[i]);
        auto it = gap_term.find(gap);
        if (it == gap_term.end()) {
            RMat pw = rmat_pow(mu.transition, gap);
            double term = 0.0;
            for (std::size_t a = 0; a < pw.size(); ++a)
                term += entry_to_double(mu.stationary[a]) * entropy_nats(pw[a]);
            it = gap_term.emplace(gap, term).first;
        }
        h += it->second;
    }
    return h;
}

double conditional_coordinate_entropy(const ShiftMeasure& mu, const FiniteWindow& A,
                                      const FiniteWindow& B) {
    if (A.group != mu.group || B.group != mu.group)
        throw std::invalid_argument("measure group mismatch");

    if (mu.kind == ShiftMeasure::Kind::Bernoulli) {
        // |A \ B| H(p); keeps combinatorial cancellations exact in doubles
        std::size_t fresh = 0;
        for (const auto& g : A.elements)
            if (!B.contains(g)) ++fresh;
        return static_cast<double>(fresh) * entropy_nats(mu.weights);
    }

    std::vector<GroupElement> joined = B.elements;
    joined.insert(joined.end(), A.elements.begin(), A.elements.end());
    FiniteWindow U = normalize_window(mu.group, std::move(joined));
    if (U.size() == B.size()) return 0.0; // A subset of B
    return joint_coordinate_entropy(mu, U) - joint_coordinate_entropy(mu, B);
}

double conditional_entropy_finite_past(const ShiftMeasure& mu,
                                       const OrderedGroupContext& ctx,
                                       const FiniteWindow& past) {
    if (ctx.group != mu.group) throw std::invalid_argument("context group mismatch");
    if (past.group != mu.group) throw std::invalid_argument("past window group mismatch");
    for (const auto& g : past.elements)
        if (!in_past(ctx, g))
            throw std::invalid_argument(
                "conditioning window contains a non-past element");
    FiniteWindow alpha = normalize_window(mu.group, {identity(mu.group)});
    return conditional_coordinate_entropy(mu, alpha, past);
}

PinskerCheckReport pinsker_check(const ShiftMeasure& mu, const OrderedGroupContext& ctx,
                                 const GroupElement& a, const GroupElement& b,
                                 std::int64_t radius) {
    if (ctx.group != mu.group) throw std::invalid_argument("context group mismatch");
    if (a.group != mu.group || b.group != mu.group)
        throw std::invalid_argument("coordinate group mismatch");
    if (radius < 0) throw std::invalid_argument("radius must be nonnegative");

    FiniteWindow box = enumerate_box(mu.group, radius);
    std::vector<GroupElement> past;
    for (const auto& g : box.elements)
        if (in_past(ctx, g)) past.push_back(g);

    auto translates = [&](const std::vector<GroupElement>& shifts,
                          std::initializer_list<GroupElement> targets) {
        std::vector<GroupElement> out;
        for (const auto& g : shifts)
            for (const auto& t : targets) out.push_back(multiply(g, t));
        return out;
    };

    FiniteWindow gamma = normalize_window(mu.group, {a, b});
    FiniteWindow alpha = normalize_window(mu.group, {a});
    FiniteWindow beta = normalize_window(mu.group, {b});

    FiniteWindow t_gamma = normalize_window(mu.group, translates(past, {a, b}));
    FiniteWindow t_beta = normalize_window(mu.group, translates(past, {b}));

    std::vector<GroupElement> mixed = translates(box.elements, {b});
    auto t_alpha = translates(past, {a});
    mixed.insert(mixed.end(), t_alpha.begin(), t_alpha.end());
    FiniteWindow alpha_cond = normalize_window(mu.group, std::move(mixed));

    PinskerCheckReport rep;
    rep.group = mu.group;
    rep.radius = radius;
    rep.a = a;
    rep.b = b;
    rep.lhs = conditional_coordinate_entropy(mu, gamma, t_gamma);
    rep.rhs_beta = conditional_coordinate_entropy(mu, beta, t_beta);
    rep.rhs_alpha = conditional_coordinate_entropy(mu, alpha, alpha_cond);
    rep.gap = rep.lhs - rep.rhs_beta - rep.rhs_alpha;
    return rep;
}

namespace {

Rational rational_from_json(const nlohmann::json& v) {
    if (v.is_string()) {
        try {
            return Rational(v.get<std::string>());
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse rational '" +
                                        v.get<std::string>() + "'");
        }
    }
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number_unsigned()) return Rational(v.get<std::uint64_t>());
    if (v.is_number_float()) return rational_from_double(v.get<double>());
    throw std::invalid_argument("measure entries must be numbers or strings");
}

std::vector<Rational> rational_array(const nlohmann::json& v) {
    if (!v.is_array()) throw std::invalid_argument("expected an array of rationals");
    std::vector<Rational> out;
    for (const auto& e : v) out.push_back(rational_from_json(e));
    return out;
}

} // namespace

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("measure entries must be finite");
    if (x == 0.0) return Rational(0);
    bool neg = x < 0.0;
    double ax = std::abs(x);

    // Continued-fraction convergents h/k of ax; accept the first within 1e-12.
    std::int64_t h2 = 0, k2 = 1, h1 = 1, k1 = 0;
    double frac = ax;
    for (int iter = 0; iter < 64; ++iter) {
        double fl = std::floor(frac);
        if (fl > 4e18) break;
        std::int64_t ai = static_cast<std::int64_t>(fl);
        std::int64_t h = 0, k = 0;
        if (__builtin_mul_overflow(ai, h1, &h) || __builtin_add_overflow(h, h2, &h)) break;
        if (__builtin_mul_overflow(ai, k1, &k) || __builtin_add_overflow(k, k2, &k)) break;
        if (k > 1000000000) break;
        if (k > 0 && std::abs(ax - static_cast<double>(h) / static_cast<double>(k)) <= 1e-12) {
            Rational r(h, k);
            return neg ? -r : r;
        }
        h2 = h1; k2 = k1; h1 = h; k1 = k;
        double rem = frac - fl;
        if (rem < 1e-15) break;
        frac = 1.0 / rem;
    }

    // Exact binary value of the double.
    int exp = 0;
    double m = std::frexp(ax, &exp);
    auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    exp -= 53;
    Rational r(mant);
    if (exp >= 0)
        r *= Rational(boost::multiprecision::cpp_int(1) << exp);
    else
        r /= Rational(boost::multiprecision::cpp_int(1) << -exp);
    return neg ? -r : r;
}

namespace {

ShiftMeasure parse_measure_impl(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("measure JSON needs a 'type' field");
    std::string type = j.at("type").get<std::string>();
    if (type == "bernoulli") {
        if (!j.contains("group") || !j.contains("weights"))
            throw std::invalid_argument("bernoulli measure needs 'group' and 'weights'");
        GroupId group = GroupId::parse(j.at("group").get<std::string>());
        return ShiftMeasure::bernoulli(group, rational_array(j.at("weights")));
    }
    if (type == "markov") {
        if (!j.contains("transition"))
            throw std::invalid_argument("markov measure needs 'transition'");
        if (j.contains("group") && j.at("group").get<std::string>() != "z1")
            throw std::invalid_argument("markov measures live on the z1 full shift");
        const auto& rows = j.at("transition");
        if (!rows.is_array()) throw std::invalid_argument("'transition' must be an array");
        std::vector<std::vector<Rational>> p;
        for (const auto& row : rows) p.push_back(rational_array(row));
        return ShiftMeasure::markov(std::move(p));
    }
    throw std::invalid_argument("unknown measure type '" + type + "'");
}

} // namespace

ShiftMeasure parse_measure_json(const std::string& text) {
    try {
        return parse_measure_impl(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("measure JSON: ") + e.what());
    }
}

ShiftMeasure load_measure_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open measure file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_measure_json(buf.str());
}

} // namespace orderlab
