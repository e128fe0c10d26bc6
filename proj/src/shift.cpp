#include "orderlab/shift.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "orderlab/folner.hpp"
#include "orderlab/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace orderlab {

namespace {

void check_symbol(int symbol, int alphabet_size) {
    if (symbol < 0 || symbol >= alphabet_size)
        throw std::invalid_argument("symbol out of alphabet range");
}

void check_system(const ShiftSystem& sys) {
    if (sys.alphabet.size < 1)
        throw std::invalid_argument("alphabet needs at least one symbol");
    int coords = sys.group.coord_count();
    for (const auto& pat : sys.forbidden) {
        if (pat.cells.empty())
            throw std::invalid_argument("forbidden pattern with no cells");
        for (const auto& [offset, symbol] : pat.cells) {
            if (static_cast<int>(offset.size()) != coords)
                throw std::invalid_argument("pattern offset has wrong coordinate count");
            check_symbol(symbol, sys.alphabet.size);
        }
    }
}

BigInt power(std::int64_t base, std::size_t exp) {
    BigInt r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

// Forbidden pattern with duplicate offsets either collapses (same symbol) or
// can never occur (conflicting symbols). Returns nullopt in the latter case.
std::optional<std::vector<std::pair<std::vector<std::int64_t>, int>>>
dedup_pattern(const ForbiddenPattern& pat) {
    std::map<std::vector<std::int64_t>, int> seen;
    for (const auto& [offset, symbol] : pat.cells) {
        auto it = seen.find(offset);
        if (it == seen.end()) seen.emplace(offset, symbol);
        else if (it->second != symbol) return std::nullopt;
    }
    return std::vector<std::pair<std::vector<std::int64_t>, int>>(seen.begin(), seen.end());
}

// ---- Z: sliding-window transfer over an arbitrary finite window ----------
//
// Cells ascend; the DP state entering step t is the symbol tuple on the
// trailing cells within maxspan of cell t. Placements are enumerated by their
// rightmost cell, so each forbidden pattern is checked exactly once per
// position and only when it lies fully inside F.

struct LinePattern {
    std::vector<std::pair<std::int64_t, int>> cells; // offset (min 0) -> symbol
    std::int64_t span = 0;
};

// One precomputed containment check: state-slot index and required symbol.
using SlotCheck = std::vector<std::pair<std::size_t, int>>;

BigInt count_line(const ShiftSystem& sys, const std::vector<std::int64_t>& xs) {
    const int k = sys.alphabet.size;

    std::vector<LinePattern> pats;
    for (const auto& raw : sys.forbidden) {
        auto cells = dedup_pattern(raw);
        if (!cells) continue; // self-contradictory pattern never occurs
        LinePattern p;
        std::int64_t lo = cells->front().first[0];
        for (const auto& cell : *cells) lo = std::min(lo, cell.first[0]);
        for (const auto& cell : *cells)
            p.cells.emplace_back(checked_sub(cell.first[0], lo), cell.second);
        std::sort(p.cells.begin(), p.cells.end());
        p.span = p.cells.back().first;
        pats.push_back(std::move(p));
    }
    std::int64_t maxspan = 0;
    for (const auto& p : pats) maxspan = std::max(maxspan, p.span);

    const std::size_t m = xs.size();

    // keep[t]: indices j < t with xs[j] >= xs[t] - maxspan, ascending. The DP
    // state entering step t holds exactly their symbols.
    std::vector<std::vector<std::size_t>> keep(m);
    for (std::size_t t = 0; t < m; ++t) {
        std::size_t j = t;
        while (j > 0 && xs[j - 1] >= checked_sub(xs[t], maxspan)) --j;
        for (std::size_t i = j; i < t; ++i) keep[t].push_back(i);
    }

    // checks[t]: placements ending at xs[t] that lie fully inside F, as slot
    // comparisons against state ++ [current symbol].
    std::vector<std::vector<SlotCheck>> checks(m);
    for (std::size_t t = 0; t < m; ++t) {
        auto slot_of = [&](std::size_t j) -> std::size_t {
            if (j == t) return keep[t].size();
            auto it = std::lower_bound(keep[t].begin(), keep[t].end(), j);
            return static_cast<std::size_t>(it - keep[t].begin());
        };
        for (const auto& p : pats) {
            std::int64_t t0 = checked_sub(xs[t], p.span);
            SlotCheck sc;
            bool inside = true;
            for (const auto& [off, sym] : p.cells) {
                std::int64_t coord = checked_add(t0, off);
                auto it = std::lower_bound(xs.begin(), xs.end(), coord);
                if (it == xs.end() || *it != coord) { inside = false; break; }
                // span <= maxspan, so an F-cell of the placement is either the
                // current cell or lives in keep[t]
                sc.emplace_back(slot_of(static_cast<std::size_t>(it - xs.begin())), sym);
            }
            if (inside) checks[t].push_back(std::move(sc));
        }
    }

    // proj[t]: which slots of state ++ [current] survive into the next state.
    std::vector<std::vector<std::size_t>> proj(m);
    for (std::size_t t = 0; t + 1 < m; ++t) {
        for (std::size_t j : keep[t + 1]) {
            if (j == t) proj[t].push_back(keep[t].size());
            else {
                auto it = std::lower_bound(keep[t].begin(), keep[t].end(), j);
                proj[t].push_back(static_cast<std::size_t>(it - keep[t].begin()));
            }
        }
    }

    std::map<std::vector<int>, BigInt> cur;
    cur[{}] = 1;
    std::vector<int> full, next_state;
    for (std::size_t t = 0; t < m; ++t) {
        std::map<std::vector<int>, BigInt> next;
        for (const auto& [state, cnt] : cur) {
            full.assign(state.begin(), state.end());
            full.push_back(0);
            for (int s = 0; s < k; ++s) {
                full.back() = s;
                bool bad = false;
                for (const auto& sc : checks[t]) {
                    bool hit = true;
                    for (const auto& [slot, sym] : sc)
                        if (full[slot] != sym) { hit = false; break; }
                    if (hit) { bad = true; break; }
                }
                if (bad) continue;
                if (t + 1 < m) {
                    next_state.clear();
                    for (std::size_t slot : proj[t]) next_state.push_back(full[slot]);
                    next[next_state] += cnt;
                } else {
                    next[{}] += cnt;
                }
            }
        }
        cur = std::move(next);
    }
    BigInt total = 0;
    for (const auto& [state, cnt] : cur) total += cnt;
    return total;
}

// ---- Z^2: row transfer over a solid box window ----------------------------
//
// Rows run along the axis with the larger extent so the per-row state stays
// narrow. Rows are encoded as bit-packed symbol codes; the DP state is the
// concatenation of the trailing hmax-1 row codes. Strip validity is memoized
// per strip length, so each distinct (state, row) pair is checked once.

struct GridPattern {
    // (row offset, col offset, symbol), offsets normalized to min 0.
    std::vector<std::array<std::int64_t, 3>> cells;
    std::int64_t rowspan = 0;
    std::int64_t colspan = 0;
};

struct GridCounter {
    int k = 2;
    std::int64_t width = 0;       // columns per row
    std::int64_t rows = 0;
    int bits = 1;                 // bits per symbol in a row code
    std::int64_t state_rows = 0;  // hmax - 1
    std::vector<GridPattern> pats;
    std::vector<std::uint64_t> row_codes;

    int symbol_at(std::uint64_t code, std::int64_t col) const {
        return static_cast<int>((code >> (col * bits)) & ((1u << bits) - 1));
    }

    // Strip = trailing state rows plus the candidate, oldest first. A pattern
    // placement is anchored at its bottom row = the candidate row; top rows
    // that would reach above the window are skipped via the length check.
    bool strip_ok(const std::vector<std::uint64_t>& strip) const {
        std::int64_t len = static_cast<std::int64_t>(strip.size());
        for (const auto& p : pats) {
            std::int64_t top = len - 1 - p.rowspan;
            if (top < 0) continue;
            for (std::int64_t c = 0; c + p.colspan < width; ++c) {
                bool hit = true;
                for (const auto& cell : p.cells) {
                    if (symbol_at(strip[top + cell[0]], c + cell[1]) != cell[2]) {
                        hit = false;
                        break;
                    }
                }
                if (hit) return false;
            }
        }
        return true;
    }
};

struct TransitionMemo {
    // keyed by state_code << row_bits | row_code, one map per strip length
    std::vector<std::unordered_map<std::uint64_t, bool>> by_len;
};

BigInt count_grid(const ShiftSystem& sys, std::int64_t r0, std::int64_t r1,
                  std::int64_t c0, std::int64_t c1, Parallelism mode) {
    GridCounter gc;
    gc.k = sys.alphabet.size;

    std::int64_t ext0 = r1 - r0 + 1, ext1 = c1 - c0 + 1;
    bool transpose = ext1 > ext0;
    gc.rows = transpose ? ext1 : ext0;
    gc.width = transpose ? ext0 : ext1;

    for (const auto& raw : sys.forbidden) {
        auto cells = dedup_pattern(raw);
        if (!cells) continue;
        GridPattern p;
        std::int64_t lo_r = std::numeric_limits<std::int64_t>::max(), lo_c = lo_r;
        for (const auto& [offset, symbol] : *cells) {
            std::int64_t pr = transpose ? offset[1] : offset[0];
            std::int64_t pc = transpose ? offset[0] : offset[1];
            lo_r = std::min(lo_r, pr);
            lo_c = std::min(lo_c, pc);
            p.cells.push_back({pr, pc, symbol});
        }
        for (auto& cell : p.cells) {
            cell[0] = checked_sub(cell[0], lo_r);
            cell[1] = checked_sub(cell[1], lo_c);
            p.rowspan = std::max(p.rowspan, cell[0]);
            p.colspan = std::max(p.colspan, cell[1]);
        }
        // a pattern wider or taller than the window never fits inside it
        if (p.rowspan >= gc.rows || p.colspan >= gc.width) continue;
        gc.pats.push_back(std::move(p));
    }

    std::int64_t hmax = 1;
    for (const auto& p : gc.pats) hmax = std::max(hmax, p.rowspan + 1);
    gc.state_rows = hmax - 1;

    while ((std::int64_t(1) << gc.bits) < gc.k) ++gc.bits;
    std::int64_t row_bits = gc.width * gc.bits;
    std::int64_t state_bits = gc.state_rows * row_bits;
    double row_count_log = gc.width * std::log2(double(gc.k));
    if (state_bits + row_bits > 62 || row_count_log > 22.0)
        throw unsupported_operation_error(
            "window too wide for 2d pattern counting; log2(alphabet) * min side "
            "must stay within the packed transfer budget");

    std::int64_t row_total = 1;
    for (std::int64_t c = 0; c < gc.width; ++c) row_total = checked_mul(row_total, gc.k);
    gc.row_codes.reserve(static_cast<std::size_t>(row_total));
    for (std::int64_t v = 0; v < row_total; ++v) {
        std::uint64_t code = 0;
        std::int64_t rem = v;
        for (std::int64_t c = 0; c < gc.width; ++c) {
            code |= static_cast<std::uint64_t>(rem % gc.k) << (c * gc.bits);
            rem /= gc.k;
        }
        gc.row_codes.push_back(code);
    }

    const bool par = use_parallel(mode);
    const int workers = par ? worker_count() : 1;

    // States at one step all hold the same number of rows, so the packed code
    // alone is collision-free within a step.
    std::map<std::uint64_t, BigInt> cur;
    cur[0] = 1;
    std::vector<TransitionMemo> memo(static_cast<std::size_t>(std::max(workers, 1)));
    for (auto& mm : memo) mm.by_len.resize(static_cast<std::size_t>(hmax) + 1);

    for (std::int64_t r = 0; r < gc.rows; ++r) {
        std::int64_t held = std::min<std::int64_t>(r, gc.state_rows);
        std::size_t strip_len = static_cast<std::size_t>(held) + 1;

        std::vector<std::pair<std::uint64_t, BigInt>> states(cur.begin(), cur.end());
        std::vector<std::map<std::uint64_t, BigInt>> local(
            static_cast<std::size_t>(std::max(workers, 1)));

        #pragma omp parallel num_threads(workers) if (par)
        {
#ifdef _OPENMP
            const int tid = omp_get_thread_num();
#else
            const int tid = 0;
#endif
            auto& out = local[static_cast<std::size_t>(tid)];
            auto& mm = memo[static_cast<std::size_t>(tid)].by_len[strip_len];
            std::vector<std::uint64_t> strip(strip_len);

            #pragma omp for schedule(dynamic, 4)
            for (std::int64_t si = 0; si < static_cast<std::int64_t>(states.size()); ++si) {
                const auto& [code, cnt] = states[static_cast<std::size_t>(si)];
                for (std::int64_t i = 0; i < held; ++i)
                    strip[static_cast<std::size_t>(i)] =
                        (code >> (i * row_bits)) & ((std::uint64_t(1) << row_bits) - 1);
                for (std::uint64_t row : gc.row_codes) {
                    strip[strip_len - 1] = row;
                    std::uint64_t key = (code << row_bits) | row;
                    auto it = mm.find(key);
                    bool ok;
                    if (it != mm.end()) ok = it->second;
                    else {
                        ok = gc.strip_ok(strip);
                        mm.emplace(key, ok);
                    }
                    if (!ok) continue;
                    // next state = trailing state_rows rows of the strip
                    std::uint64_t next_code = 0;
                    std::int64_t take = std::min<std::int64_t>(held + 1, gc.state_rows);
                    for (std::int64_t i = 0; i < take; ++i)
                        next_code |= strip[strip_len - static_cast<std::size_t>(take - i)]
                                     << (i * row_bits);
                    out[next_code] += cnt;
                }
            }
        }

        std::map<std::uint64_t, BigInt> next;
        for (auto& part : local)
            for (auto& [code, cnt] : part) next[code] += cnt;
        cur = std::move(next);
        if (cur.empty()) return 0;
    }

    BigInt total = 0;
    for (const auto& [code, cnt] : cur) total += cnt;
    return total;
}

} // namespace

std::optional<int> Configuration::value_at(const GroupElement& g) const {
    if (g.group != group) throw std::invalid_argument("configuration group mismatch");
    auto it = cells.find(g.coords);
    if (it == cells.end()) return std::nullopt;
    return it->second;
}

void Configuration::set(const GroupElement& g, int symbol) {
    if (g.group != group) throw std::invalid_argument("configuration group mismatch");
    check_symbol(symbol, alphabet_size);
    cells[g.coords] = symbol;
}

FiniteWindow Configuration::window() const {
    std::vector<GroupElement> els;
    els.reserve(cells.size());
    for (const auto& [coords, symbol] : cells) els.push_back(make_element(group, coords));
    return normalize_window(group, std::move(els));
}

Configuration act(const GroupElement& g, const Configuration& x) {
    if (g.group != x.group) throw std::invalid_argument("configuration group mismatch");
    Configuration y;
    y.group = x.group;
    y.alphabet_size = x.alphabet_size;
    for (const auto& [coords, symbol] : x.cells) {
        GroupElement moved = multiply(g, make_element(x.group, coords));
        y.cells.emplace(std::move(moved.coords), symbol);
    }
    return y;
}

std::optional<std::int64_t> first_disagreement_index(const Configuration& x,
                                                     const Configuration& y,
                                                     std::int64_t horizon) {
    if (x.group != y.group) throw std::invalid_argument("configuration group mismatch");
    if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
    FiniteWindow box = enumerate_box(x.group, horizon);
    for (std::size_t i = 0; i < box.elements.size(); ++i) {
        auto vx = x.value_at(box.elements[i]);
        auto vy = y.value_at(box.elements[i]);
        if (!vx || !vy)
            throw insufficient_window_error(
                "configuration window does not cover the metric box");
        if (*vx != *vy) return static_cast<std::int64_t>(i);
    }
    return std::nullopt;
}

double shift_metric(const Configuration& x, const Configuration& y,
                    std::int64_t horizon) {
    auto idx = first_disagreement_index(x, y, horizon);
    if (!idx) return 0.0;
    return std::ldexp(1.0, static_cast<int>(-std::min<std::int64_t>(*idx, 1100)));
}

ShiftSystem ShiftSystem::full_shift(GroupId group, int alphabet_size) {
    ShiftSystem sys{group, Alphabet{alphabet_size}, {}};
    check_system(sys);
    return sys;
}

BigInt pattern_count(const ShiftSystem& sys, const FiniteWindow& F, Parallelism mode) {
    check_system(sys);
    if (F.group != sys.group) throw std::invalid_argument("window group mismatch");
    if (sys.forbidden.empty()) return power(sys.alphabet.size, F.size());
    if (sys.group.kind != GroupKind::IntegerLattice)
        throw unsupported_operation_error(
            "SFT pattern counting is implemented for lattices only");

    if (sys.group.d == 1) {
        std::vector<std::int64_t> xs;
        xs.reserve(F.size());
        for (const auto& g : F.elements) xs.push_back(g.coords[0]);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        return count_line(sys, xs);
    }

    if (sys.group.d == 2) {
        if (F.elements.empty()) return 1;
        std::int64_t r0 = F.elements[0].coords[0], r1 = r0;
        std::int64_t c0 = F.elements[0].coords[1], c1 = c0;
        for (const auto& g : F.elements) {
            r0 = std::min(r0, g.coords[0]);
            r1 = std::max(r1, g.coords[0]);
            c0 = std::min(c0, g.coords[1]);
            c1 = std::max(c1, g.coords[1]);
        }
        // windows are duplicate-free, so a size match means the box is solid
        std::int64_t area = checked_mul(r1 - r0 + 1, c1 - c0 + 1);
        if (static_cast<std::int64_t>(F.size()) != area)
            throw unsupported_operation_error(
                "2d SFT pattern counting needs a solid box window");
        return count_grid(sys, r0, r1, c0, c1, mode);
    }

    throw unsupported_operation_error(
        "SFT pattern counting is implemented for Z and Z^2 only");
}

double log_big(const BigInt& value) {
    if (value <= 0) throw std::invalid_argument("log_big needs a positive value");
    std::size_t bits = boost::multiprecision::msb(value);
    if (bits <= 62) return std::log(value.convert_to<double>());
    BigInt top = value >> (bits - 62);
    return std::log(top.convert_to<double>()) +
           static_cast<double>(bits - 62) * std::log(2.0);
}

EntropyEstimate top_entropy_estimate(const ShiftSystem& sys, std::int64_t n,
                                     Parallelism mode) {
    check_system(sys);
    FiniteWindow F = folner_box(sys.group, n);
    EntropyEstimate est;
    est.n = n;
    est.window_size = static_cast<std::int64_t>(F.size());
    if (sys.forbidden.empty()) {
        // exact: log(k^|F|)/|F| collapses to log k with no rounding detour
        est.count = power(sys.alphabet.size, F.size());
        est.estimate = std::log(static_cast<double>(sys.alphabet.size));
        return est;
    }
    est.count = pattern_count(sys, F, mode);
    est.estimate = est.count == 0
                       ? -std::numeric_limits<double>::infinity()
                       : log_big(est.count) / static_cast<double>(est.window_size);
    return est;
}

namespace {

std::string strip_line(std::string line) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto is_space = [](unsigned char c) { return std::isspace(c); };
    while (!line.empty() && is_space(line.back())) line.pop_back();
    std::size_t lead = 0;
    while (lead < line.size() && is_space(line[lead])) ++lead;
    return line.substr(lead);
}

std::vector<std::int64_t> parse_offset(const std::string& text, int line_no) {
    std::vector<std::int64_t> coords;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        std::size_t used = 0;
        coords.push_back(std::stoll(part, &used));
        if (used != part.size())
            throw std::invalid_argument("bad coordinate on line " + std::to_string(line_no));
    }
    if (coords.empty())
        throw std::invalid_argument("empty offset on line " + std::to_string(line_no));
    return coords;
}

} // namespace

ShiftSystem parse_shift_system(std::istream& in) {
    int alphabet = 0;
    int d = 0;
    std::vector<ForbiddenPattern> patterns;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_line(line);
        if (line.empty()) continue;
        std::stringstream ss(line);
        if (alphabet == 0) {
            std::string word;
            ss >> word;
            if (word != "alphabet" || !(ss >> alphabet) || alphabet < 1)
                throw std::invalid_argument(
                    "line " + std::to_string(line_no) +
                    ": expected header 'alphabet K' with K >= 1");
            continue;
        }
        ForbiddenPattern pat;
        std::string token;
        while (ss >> token) {
            auto colon = token.rfind(':');
            if (colon == std::string::npos || colon + 1 == token.size())
                throw std::invalid_argument("line " + std::to_string(line_no) +
                                            ": expected OFFSET:SYMBOL, got '" + token + "'");
            auto offset = parse_offset(token.substr(0, colon), line_no);
            std::size_t used = 0;
            std::string sym_text = token.substr(colon + 1);
            int symbol = std::stoi(sym_text, &used);
            if (used != sym_text.size())
                throw std::invalid_argument("bad symbol on line " + std::to_string(line_no));
            if (d == 0) d = static_cast<int>(offset.size());
            if (static_cast<int>(offset.size()) != d)
                throw std::invalid_argument("line " + std::to_string(line_no) +
                                            ": offset dimension mismatch");
            pat.cells.emplace_back(std::move(offset), symbol);
        }
        if (!pat.cells.empty()) patterns.push_back(std::move(pat));
    }
    if (alphabet == 0)
        throw std::invalid_argument("missing 'alphabet K' header");
    if (d == 0) d = 1;
    ShiftSystem sys{GroupId::lattice(d), Alphabet{alphabet}, std::move(patterns)};
    check_system(sys);
    return sys;
}

ShiftSystem load_shift_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open shift system file: " + path);
    return parse_shift_system(in);
}

Configuration random_configuration(const GroupId& group, const FiniteWindow& window,
                                   int alphabet_size, std::mt19937_64& rng) {
    if (window.group != group) throw std::invalid_argument("window group mismatch");
    if (alphabet_size < 1) throw std::invalid_argument("alphabet needs at least one symbol");
    Configuration x;
    x.group = group;
    x.alphabet_size = alphabet_size;
    for (const auto& g : window.elements)
        x.cells[g.coords] =
            static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(alphabet_size)));
    return x;
}

} // namespace orderlab
