#pragma once

// Dimension bounds: lattice ranks of value sweeps from below, relation
// ranks from above.

#include "fmzv/dshuffle.hpp"
#include "fmzv/evaluator.hpp"
#include "fmzv/lattice.hpp"
#include "fmzv/relgen.hpp"

#include <chrono>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fmzv {

/// Dimension table rows (index = weight).
inline std::optional<std::size_t> table_value(std::string_view row, int w) {
    static const std::vector<int> fmt{0, 1, 0, 1, 2, 3, 3, 6, 9, 15, 17, 32, 44, 76};
    static const std::vector<int> mt{1, 0, 1, 1, 2, 2, 4, 5, 9, 10, 19, 23, 42, 49};
    static const std::vector<int> famt{0, 2, 2, 6, 12, 20, 40, 76};
    static const std::vector<int> amt{0, 1, 2, 4, 7, 13, 24, 44, 81};
    static const std::vector<int> fes{0, 1, 1, 2, 3, 5, 8};  // generating sets through weight 6
    const std::vector<int>* r = row == "FMT" ? &fmt : row == "MT" ? &mt : row == "FAMT" ? &famt
                              : row == "AMT" ? &amt : row == "FES" ? &fes : nullptr;
    if (!r || w < 0 || w >= static_cast<int>(r->size())) return std::nullopt;
    return static_cast<std::size_t>((*r)[w]);
}

/// F_0 = F_1 = 1.
inline std::size_t fibonacci(int k) {
    std::size_t a = 1, b = 1;
    for (int i = 1; i < k; ++i) {
        std::size_t c = a + b;
        a = b;
        b = c;
    }
    return k <= 0 ? 1 : b;
}

// ---------------------------------------------------------------------------
// relation rank over T words of weight w, streamed modulo one prime

namespace detail {

/// Row echelon form with dense rows mod P; pivots normalized to 1.
class DenseEchelon {
public:
    DenseEchelon(u64 P, std::size_t cols) : P_(P), cols_(cols), piv_(cols) {}

    std::size_t rank() const { return rank_; }

    /// Returns true when the row was independent.
    bool insert(std::vector<u64> row) {
        for (std::size_t c = 0; c < cols_; ++c) {
            u64 x = row[c] % P_;
            if (!x) continue;
            if (piv_[c].empty()) {
                u64 inv = invmod(x, P_);
                for (std::size_t j = c; j < cols_; ++j) row[j] = mulmod(row[j] % P_, inv, P_);
                piv_[c] = std::move(row);
                ++rank_;
                return true;
            }
            const auto& pr = piv_[c];
            u64 f = P_ - x;
            for (std::size_t j = c; j < cols_; ++j)
                if (pr[j]) row[j] = (row[j] % P_ + mulmod(f, pr[j], P_)) % P_;
        }
        return false;
    }

private:
    u64 P_;
    std::size_t cols_;
    std::vector<std::vector<u64>> piv_;
    std::size_t rank_ = 0;
};

/// Sign-free word of length len, first letter at the high bit, e+ = 1.
struct BitWord {
    u32 bits = 0;
    int len = 0;
};

inline BitWord concat(BitWord a, BitWord b) { return {(a.bits << b.len) | b.bits, a.len + b.len}; }
inline BitWord block_word(int s) { return {1u, s}; }
inline int bit_depth(BitWord w) { return __builtin_popcount(w.bits); }

inline void shuffle_into(u32 xb, int xl, u32 yb, int yl, u32 prefix, long long coeff, std::vector<long long>& acc) {
    if (xl == 0 || yl == 0) {
        u32 word = xl ? (prefix << xl) | xb : (prefix << yl) | yb;
        acc[word >> 1] += coeff;
        return;
    }
    shuffle_into(xb & ((1u << (xl - 1)) - 1), xl - 1, yb, yl, (prefix << 1) | (xb >> (xl - 1)), coeff, acc);
    shuffle_into(xb, xl, yb & ((1u << (yl - 1)) - 1), yl - 1, (prefix << 1) | (yb >> (yl - 1)), coeff, acc);
}

inline std::vector<BitWord> bit_words(int weight) {
    if (weight == 0) return {BitWord{}};
    std::vector<BitWord> out;
    for (u32 b = 0; b < (1u << (weight - 1)); ++b) out.push_back({(b << 1) | 1u, weight});
    return out;
}

/// Parts of the composition with word index i (bit j of i = letter j from the right, after the final e+).
inline std::vector<int> index_parts(u32 idx, int w) {
    u32 word = (idx << 1) | 1u;
    std::vector<int> parts;
    int run = 0;
    for (int j = w - 1; j >= 0; --j) {
        ++run;
        if ((word >> j) & 1u) {
            parts.push_back(run);
            run = 0;
        }
    }
    return parts;
}

inline u32 parts_index(const std::vector<int>& parts) {
    u32 word = 0;
    for (int s : parts) word = (word << s) | 1u;
    return word >> 1;
}

}  // namespace detail

struct InventoryBound {
    std::size_t upper = 0;
    std::size_t relations_used = 0;
    std::size_t relations_total = 0;
    std::size_t relation_rank = 0;
    bool complete = true;
};

/// Upper bound for dim FMT_w from linear shuffles (sign-free), even-depth
/// reversals, sum formulas and depth 1/2 closed forms, modulo one word prime.
/// At most `max_relations` relations are used (0: all); any subset gives a
/// valid bound.
inline InventoryBound t_inventory_upper(int w, u64 P, std::size_t max_relations = 0) {
    if (w < 1 || w > 20) throw InvalidInput("t_inventory_upper: weight 1..20");
    const std::size_t nt = std::size_t{1} << (w - 1);
    const std::size_t beta_col = nt;  // beta_w (w odd), q2 (w = 1)
    const std::size_t cols = nt + 1;
    detail::DenseEchelon ech(P, cols);
    InventoryBound out;
    bool beta_used = false;
    auto smod = [P](long long v) { return v >= 0 ? static_cast<u64>(v) % P : P - static_cast<u64>(-v) % P; };
    auto qmod = [P](const mpq_class& q) { return detail::to_mod(q, P); };
    auto feed = [&](std::vector<u64> row) -> bool {
        ++out.relations_total;
        if (max_relations && out.relations_used >= max_relations) {
            out.complete = false;
            return false;
        }
        ++out.relations_used;
        bool nz = std::any_of(row.begin(), row.end(), [](u64 x) { return x != 0; });
        if (!nz) return true;
        if (row[beta_col]) beta_used = true;
        ech.insert(std::move(row));
        return true;
    };
    // closed forms
    {
        std::vector<u64> row(cols, 0);
        row[detail::parts_index({w})] = 1;
        if (w == 1) row[beta_col] = P - 1;
        else if (w % 2) row[beta_col] = qmod(mpq_class(1, 1) / (mpq_class(1) << (w - 1)) - 1);
        feed(std::move(row));
    }
    if (w % 2)
        for (int a = 1; a < w; ++a) {
            std::vector<u64> row(cols, 0);
            row[detail::parts_index({a, w - a})] = 1;
            auto e = depth2_closed_form(a, w - a);
            for (auto& [atom, c] : e.terms)
                if (!atom.comp) row[beta_col] = (row[beta_col] + P - qmod(c.a)) % P;
            feed(std::move(row));
        }
    // even-depth reversals
    for (u32 i = 0; i < nt; ++i) {
        auto parts = detail::index_parts(i, w);
        if (parts.size() % 2) continue;
        std::vector<int> rev(parts.rbegin(), parts.rend());
        u32 j = detail::parts_index(rev);
        if (j <= i) continue;
        std::vector<u64> row(cols, 0);
        row[j] = 1;
        row[i] = w % 2 ? 1 : P - 1;
        feed(std::move(row));
    }
    // sum formulas
    if (w >= 2)
        for (auto& c : enumerate_compositions(w - 1, Family::T))
            if (c.depth() % 2) {
                std::vector<u64> row(cols, 0);
                for (auto& [atom, k] : gen_sum_formula(c).expr.terms) {
                    auto& slot = row[detail::parts_index(atom.comp->parts)];
                    slot = (slot + qmod(k.a)) % P;
                }
                feed(std::move(row));
            }
    // linear shuffles (iii)
    std::vector<long long> acc(nt);
    for (int s = 1; s <= w; ++s)
        for (int a = 0; a + s <= w; ++a)
            for (auto u : detail::bit_words(a))
                for (auto v : detail::bit_words(w - s - a)) {
                    if ((detail::bit_depth(u) + detail::bit_depth(v)) % 2 == 0) continue;
                    std::fill(acc.begin(), acc.end(), 0);
                    auto blk = detail::block_word(s);
                    auto x = detail::concat(blk, u);
                    auto y = detail::concat(blk, v);
                    detail::shuffle_into(x.bits, x.len, v.bits, v.len, 0, 1, acc);
                    detail::shuffle_into(u.bits, u.len, y.bits, y.len, 0, s % 2 ? 1 : -1, acc);
                    std::vector<u64> row(cols, 0);
                    for (std::size_t i = 0; i < nt; ++i) row[i] = smod(acc[i]);
                    if (!feed(std::move(row))) goto done;
                }
done:
    out.relation_rank = ech.rank();
    out.upper = nt + (beta_used ? 1 : 0) - ech.rank();
    return out;
}

// ---------------------------------------------------------------------------
// finite Euler sum reduction shared across calls

namespace detail {

struct SharedReducer {
    std::mutex mu;
    std::vector<EsReducer> runs;

    static SharedReducer& get() {
        static SharedReducer s;
        return s;
    }

    /// Levels 1..w from each prime (runs sequentially on the caller's thread).
    std::vector<std::vector<EsLevel>> levels(int w) {
        std::lock_guard lk(mu);
        if (runs.empty())
            for (auto P : random_word_primes(2)) runs.emplace_back(P);
        std::vector<std::vector<EsLevel>> out;
        for (auto& r : runs) {
            r.run_to(w);
            out.push_back(std::vector<EsLevel>(r.levels().begin(), r.levels().begin() + w));
        }
        return out;
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// reports

struct DimsConfig {
    u32 prime_lo = 5;
    u32 prime_hi = 2000;
    int workers = 1;
    std::optional<std::filesystem::path> cache_dir;  // sweep cache; none: evaluate directly
    std::size_t inventory_relations = 0;             // cap for the inventory bound (0: all)
};

struct DimReport {
    Family family = Family::T;
    int weight = 0;
    std::optional<std::size_t> lower, upper;
    std::string upper_method;
    std::optional<std::size_t> paper;                // FMT / FAMT / FES row
    std::optional<std::size_t> paper_classical;      // MT / AMT row
    std::size_t symbols = 0;
    std::size_t symbols_used = 0;                    // lattice inventory (subset when primes are short)
    std::size_t primes = 0;
    std::optional<std::size_t> lower_at_75;          // rank on the first 75% of primes
    bool plateau = false;
    bool lattice_truncated = false;
    std::optional<std::size_t> upper_plus, upper_minus;  // class split for AT
    std::optional<InventoryBound> inventory;         // T inventory bound
    bool primes_agree = true;
    std::vector<std::string> basis;
    double seconds = 0;
    std::string note;

    bool inconclusive() const { return !plateau; }
    bool consistent() const { return !lower || !upper || *lower <= *upper; }
};

namespace detail {

inline std::vector<std::vector<u32>> sweep_values(Family f, int w, const std::vector<Composition>& symbols,
                                                  const std::vector<u32>& primes, const DimsConfig& cfg) {
    if (!cfg.cache_dir) return evaluate_table(symbols, primes, cfg.workers);
    SweepConfig sc;
    sc.prime_lo = cfg.prime_lo;
    sc.prime_hi = cfg.prime_hi;
    sc.family = f;
    sc.weight = w;
    sc.symbols = symbols;
    sc.cache_dir = *cfg.cache_dir;
    sc.workers = cfg.workers;
    auto res = sweep(sc);
    std::map<Composition, const ResidueVector*> byc;
    for (auto& rv : res.vectors) byc[parse_composition(rv.symbol)] = &rv;
    std::vector<std::vector<u32>> out;
    for (auto& s : symbols) {
        std::vector<u32> row;
        for (u32 p : primes) row.push_back(byc.at(s)->entries.at(p));
        out.push_back(std::move(row));
    }
    return out;
}

inline void lower_bound(DimReport& rep, Family f, int w, const DimsConfig& cfg) {
    auto symbols = sweep_inventory(f, w);
    rep.symbols = symbols.size();
    auto primes = admissible_primes(cfg.prime_lo, cfg.prime_hi, w);
    rep.primes = primes.size();
    std::size_t cap = primes.size() > 16 ? (primes.size() - 16) / 2 : 0;
    if (symbols.size() > cap) {
        std::mt19937 rng(static_cast<u32>(1000 * static_cast<int>(f) + w));
        std::shuffle(symbols.begin(), symbols.end(), rng);
        if (f == Family::ES)
            std::stable_partition(symbols.begin(), symbols.end(), [](const Composition& c) {
                if (c.signs[0] != -1 || c.parts[0] != 1) return false;
                for (std::size_t j = 1; j < c.parts.size(); ++j)
                    if (c.signs[j] != 1 || c.parts[j] > 2) return false;
                return true;
            });
        symbols.resize(cap);
        rep.note += "lattice over a seeded sample of " + std::to_string(cap) + " symbols; ";
    }
    rep.symbols_used = symbols.size();
    if (symbols.empty()) return;
    auto vals = sweep_values(f, w, symbols, primes, cfg);
    LatticeOptions opt;
    opt.stop_when_short = true;
    opt.per_vector_bits = std::max<std::size_t>(64, 8 * static_cast<std::size_t>(w));
    if (rep.upper) opt.stop_at_rank = *rep.upper;
    auto full = lattice_rank(vals, primes, opt);
    // plateau: the basis found stays independent on the first 75% of primes
    std::size_t n75 = primes.size() * 3 / 4;
    std::vector<u32> p75(primes.begin(), primes.begin() + static_cast<std::ptrdiff_t>(n75));
    std::vector<std::vector<u32>> v75;
    for (auto i : full.basis) v75.emplace_back(vals[i].begin(), vals[i].begin() + static_cast<std::ptrdiff_t>(n75));
    LatticeOptions opt75 = opt;
    opt75.stop_at_rank = 0;
    auto part = lattice_rank(v75, p75, opt75);
    rep.lower = full.rank;
    rep.lower_at_75 = part.rank;
    rep.lattice_truncated = full.truncated;
    rep.plateau = part.rank == full.rank && !full.truncated;
    for (auto i : full.basis) rep.basis.push_back(to_string(symbols[i]));
    if (opt.stop_at_rank && full.rank == opt.stop_at_rank && full.processed < symbols.size())
        rep.note += "lattice stopped at the upper bound after " + std::to_string(full.processed) + " symbols; ";
    if (full.truncated) rep.note += "lattice stopped at " + std::to_string(full.processed) + " symbols (prime budget); ";
}

}  // namespace detail

/// Lower bound from the lattice rank of the sweep (plateau: unchanged rank on
/// the first 75% of primes), upper bound from relations; compared with the table.
inline DimReport dims(Family family, int w, const DimsConfig& cfg = {}) {
    if (w < 0) throw InvalidInput("dims: weight must be >= 0");
    if (family == Family::S) throw InvalidInput("dims: family must be T, AT or ES");
    auto t0 = std::chrono::steady_clock::now();
    DimReport rep;
    rep.family = family;
    rep.weight = w;
    const char* row = family == Family::T ? "FMT" : family == Family::AT ? "FAMT" : "FES";
    rep.paper = table_value(row, w);
    if (family == Family::T) rep.paper_classical = table_value("MT", w);
    if (family == Family::AT) rep.paper_classical = table_value("AMT", w);
    if (w == 0) {
        rep.lower = rep.upper = 0;
        rep.plateau = true;
        rep.upper_method = "empty";
        return rep;
    }
    if (family == Family::T) {
        if (w <= 8) {
            auto lv = detail::SharedReducer::get().levels(w);
            rep.upper = lv[0][w - 1].fmt_rank;
            for (auto& l : lv) rep.primes_agree = rep.primes_agree && l[w - 1].fmt_rank == *rep.upper;
            rep.upper_method = "euler-sum double shuffle";
            if (w <= 9) rep.inventory = t_inventory_upper(w, random_word_primes(1)[0]);
        } else {
            auto P = random_word_primes(1)[0];
            rep.inventory = t_inventory_upper(w, P, cfg.inventory_relations);
            rep.upper = rep.inventory->upper;
            rep.upper_method = rep.inventory->complete ? "T relation inventory" : "T relation inventory (partial)";
        }
    } else if (family == Family::ES) {
        auto lv = detail::SharedReducer::get().levels(w);
        rep.upper = lv[0][w - 1].free_columns;
        for (auto& l : lv) rep.primes_agree = rep.primes_agree && l[w - 1].free_columns == *rep.upper;
        rep.upper_method = "euler-sum double shuffle";
    } else if (w <= 4) {
        auto syms = sweep_inventory(Family::AT, w);
        RelationSystem sys(syms);
        sys.add_all(inventory_linear_shuffle_T(w, true));
        sys.add_all(inventory_alt_reversal(w));
        std::vector<Atom> targets(syms.begin(), syms.end());
        rep.upper_plus = sys.span_dim(targets, 1);
        rep.upper_minus = sys.span_dim(targets, -1);
        rep.upper = *rep.upper_plus + *rep.upper_minus;
        rep.upper_method = "class split (t = +1, t = -1)";
    } else {
        rep.upper_method = "not computed";
    }
    detail::lower_bound(rep, family, w, cfg);
    if (!rep.plateau) rep.note += "plateau not reached: extend the prime range; ";
    if (!rep.primes_agree) rep.note += "reduction primes disagree; ";
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace fmzv
