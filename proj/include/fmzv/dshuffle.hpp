#pragma once

// Weight-graded reduction of finite Euler sums modulo a word-sized prime.
// Each weight is reduced with linear shuffles, reversal, depth-one vanishing
// and harmonic (stuffle) products against the reductions of lower weights.
// Surviving columns are new generators; T sums are then expressed through
// their parity expansion and the rank of their images bounds dim FMT_w.

#include "fmzv/composition.hpp"
#include "fmzv/exactla.hpp"
#include "fmzv/relgen.hpp"
#include "fmzv/word.hpp"

#include <map>
#include <thread>
#include <vector>

namespace fmzv {

using EsMono = std::vector<int>;          // sorted generator ids
using EsPoly = std::map<EsMono, u64>;     // mod P

struct EsLevel {
    int weight = 0;
    std::size_t symbols = 0;
    std::size_t relations = 0;
    std::size_t free_columns = 0;          // upper bound for dim FES_w
    std::vector<Composition> new_generators;
    std::size_t fmt_rank = 0;              // upper bound for dim FMT_w
};

namespace detail {

/// Harmonic product of ES compositions (parts add, signs multiply on merge).
inline void es_stuffle(const Composition& u, std::size_t i, const Composition& v, std::size_t j,
                       std::vector<std::pair<int, int>>& cur, std::map<Composition, long long>& out) {
    if (i == u.depth() && j == v.depth()) {
        Composition c;
        c.family = Family::ES;
        for (auto& [s, g] : cur) {
            c.parts.push_back(s);
            c.signs.push_back(g);
        }
        ++out[c];
        return;
    }
    if (i < u.depth()) {
        cur.emplace_back(u.parts[i], u.signs[i]);
        es_stuffle(u, i + 1, v, j, cur, out);
        cur.pop_back();
    }
    if (j < v.depth()) {
        cur.emplace_back(v.parts[j], v.signs[j]);
        es_stuffle(u, i, v, j + 1, cur, out);
        cur.pop_back();
    }
    if (i < u.depth() && j < v.depth()) {
        cur.emplace_back(u.parts[i] + v.parts[j], u.signs[i] * v.signs[j]);
        es_stuffle(u, i + 1, v, j + 1, cur, out);
        cur.pop_back();
    }
}

inline u64 to_mod(const mpq_class& q, u64 P) {
    mpz_class n = q.get_num() % P;
    if (n < 0) n += P;
    mpz_class d = q.get_den() % P;
    return mulmod(n.get_ui(), invmod(d.get_ui(), P), P);
}

}  // namespace detail

inline std::map<Composition, long long> es_stuffle(const Composition& u, const Composition& v) {
    std::map<Composition, long long> out;
    std::vector<std::pair<int, int>> cur;
    detail::es_stuffle(u, 0, v, 0, cur, out);
    return out;
}

/// T(s) = 2^{-d} sum_sigma prod_{j : d-j even} sigma_j zeta(s; sigma).
inline std::vector<std::pair<Composition, mpq_class>> t_parity_expansion(const Composition& c, Family fam = Family::T) {
    const std::size_t d = c.depth();
    std::vector<std::pair<Composition, mpq_class>> out;
    for (std::size_t mask = 0; mask < (std::size_t(1) << d); ++mask) {
        Composition e(Family::ES, c.parts);
        int f = 1;
        for (std::size_t j = 1; j <= d; ++j) {
            int sg = (mask >> (j - 1)) & 1 ? -1 : 1;
            e.signs[j - 1] = sg;
            bool odd_slot = (d - j) % 2 == 0;
            if (fam == Family::S) odd_slot = !odd_slot;
            if (odd_slot) f *= sg;
        }
        out.emplace_back(e, mpq_class(f, 1) / (mpz_class(1) << d));
    }
    return out;
}

class EsReducer {
public:
    explicit EsReducer(u64 prime) : P_(prime) {}

    u64 prime() const { return P_; }
    const std::vector<EsLevel>& levels() const { return levels_; }
    const std::vector<Composition>& generators() const { return gens_; }
    const EsPoly& reduction(const Composition& c) const { return red_.at(c); }

    /// Reduces weights 1..w (continuing from the last completed weight).
    void run_to(int w) {
        while (static_cast<int>(levels_.size()) < w) step(static_cast<int>(levels_.size()) + 1);
    }

    /// Poly of a T (or S) sum of the completed weight.
    EsPoly reduce_parity_sum(const Composition& c) const {
        EsPoly poly;
        for (auto& [e, q] : t_parity_expansion(c, c.family)) {
            u64 f = detail::to_mod(q, P_);
            for (auto& [m, y] : red_.at(e)) {
                u64& slot = poly[m];
                slot = (slot + mulmod(f, y, P_)) % P_;
            }
        }
        for (auto it = poly.begin(); it != poly.end();) it = it->second ? std::next(it) : poly.erase(it);
        return poly;
    }

private:
    u64 P_;
    std::vector<EsLevel> levels_;
    std::vector<Composition> gens_;
    std::map<Composition, EsPoly> red_;

    EsPoly mul(const EsPoly& a, const EsPoly& b) const {
        EsPoly r;
        for (auto& [m1, c1] : a)
            for (auto& [m2, c2] : b) {
                EsMono m;
                std::merge(m1.begin(), m1.end(), m2.begin(), m2.end(), std::back_inserter(m));
                u64& slot = r[m];
                slot = (slot + mulmod(c1, c2, P_)) % P_;
            }
        for (auto it = r.begin(); it != r.end();) it = it->second ? std::next(it) : r.erase(it);
        return r;
    }

    void step(int w) {
        EsLevel lv;
        lv.weight = w;
        auto syms = enumerate_compositions(w, Family::ES, true);
        // deepest first so deep symbols become pivots
        std::stable_sort(syms.begin(), syms.end(),
                         [](const Composition& a, const Composition& b) { return a.depth() > b.depth(); });
        lv.symbols = syms.size();
        std::map<Composition, std::size_t> col;
        for (std::size_t i = 0; i < syms.size(); ++i) col.emplace(syms[i], i);
        std::map<EsMono, std::size_t> mono_col;
        std::vector<EsMono> mono_of;
        auto mcol = [&](const EsMono& m) {
            auto [it, fresh] = mono_col.emplace(m, syms.size() + mono_of.size());
            if (fresh) mono_of.push_back(m);
            return it->second;
        };

        ModEchelon ech(P_);
        auto insert = [&](std::map<std::size_t, u64>& acc) {
            SparseRow row;
            for (auto& [c, x] : acc)
                if (x % P_) row.emplace_back(c, x % P_);
            if (row.empty()) return;
            ++lv.relations;
            ech.insert(std::move(row));
        };
        auto addc = [&](std::map<std::size_t, u64>& acc, std::size_t c, u64 x) {
            u64& slot = acc[c];
            slot = (slot + x) % P_;
        };
        auto smod = [&](long long x) -> u64 {
            long long m = static_cast<long long>(P_);
            long long r = x % m;
            return static_cast<u64>(r < 0 ? r + m : r);
        };

        // linear shuffles
        for (int s = 1; s <= w; ++s)
            for (int a = 0; a + s <= w; ++a)
                for (auto& u : admissible_words(a, false))
                    for (auto& v : admissible_words(w - s - a, true)) {
                        const Word blk = detail::block(s);
                        std::map<std::size_t, u64> acc;
                        for (auto& [x, c] : shuffle_int(blk + u, v))
                            addc(acc, col.at(word_to_comp(x, Family::ES)), smod(c));
                        const long long sg = s % 2 ? -1 : 1;
                        for (auto& [x, c] : shuffle_int(u, blk + v))
                            addc(acc, col.at(word_to_comp(x, Family::ES)), smod(-sg * c));
                        insert(acc);
                    }
        // reversal
        for (auto& c : syms) {
            std::map<std::size_t, u64> acc;
            addc(acc, col.at(c.reversed()), 1);
            addc(acc, col.at(c), smod(-((w % 2 ? -1 : 1) * c.sign_product())));
            insert(acc);
        }
        // depth one
        {
            std::map<std::size_t, u64> acc;
            addc(acc, col.at(Composition(Family::ES, {w})), 1);
            insert(acc);
            if (w % 2 == 0) {
                std::map<std::size_t, u64> acc2;
                addc(acc2, col.at(Composition(Family::ES, {w}, {-1})), 1);
                insert(acc2);
            }
        }
        // stuffle against lower weights
        for (int a = 1; 2 * a <= w; ++a) {
            auto us = enumerate_compositions(a, Family::ES, true);
            auto vs = enumerate_compositions(w - a, Family::ES, true);
            for (auto& u : us)
                for (auto& v : vs) {
                    std::map<std::size_t, u64> acc;
                    for (auto& [c, k] : es_stuffle(u, v)) addc(acc, col.at(c), smod(k));
                    for (auto& [m, x] : mul(red_.at(u), red_.at(v))) addc(acc, mcol(m), (P_ - x) % P_);
                    insert(acc);
                }
        }

        // back substitution: every pivot column in terms of free columns
        const std::size_t ncol = syms.size() + mono_of.size();
        std::vector<char> is_piv(ncol, 0);
        for (auto& [c, r] : ech.pivots()) is_piv[c] = 1;
        std::map<std::size_t, std::map<std::size_t, u64>> expr;
        for (auto it = ech.pivots().rbegin(); it != ech.pivots().rend(); ++it) {
            const std::size_t c = it->first;
            std::map<std::size_t, u64> e;
            for (auto& [k, x] : it->second) {
                if (k == c) continue;
                if (is_piv[k]) {
                    for (auto& [k2, x2] : expr.at(k)) addc(e, k2, (P_ - mulmod(x, x2, P_)) % P_);
                } else {
                    addc(e, k, (P_ - x) % P_);
                }
            }
            for (auto jt = e.begin(); jt != e.end();) jt = jt->second ? std::next(jt) : e.erase(jt);
            expr.emplace(c, std::move(e));
        }
        std::map<std::size_t, int> gen_of;
        for (std::size_t c = 0; c < ncol; ++c) {
            if (is_piv[c]) continue;
            ++lv.free_columns;
            if (c < syms.size()) {
                gen_of[c] = static_cast<int>(gens_.size());
                gens_.push_back(syms[c]);
                lv.new_generators.push_back(syms[c]);
            }
        }
        auto free_mono = [&](std::size_t c) -> EsMono {
            if (c < syms.size()) return {gen_of.at(c)};
            return mono_of[c - syms.size()];
        };
        for (std::size_t i = 0; i < syms.size(); ++i) {
            EsPoly poly;
            if (is_piv[i]) {
                for (auto& [fc, x] : expr.at(i)) {
                    u64& slot = poly[free_mono(fc)];
                    slot = (slot + x) % P_;
                }
                for (auto it = poly.begin(); it != poly.end();) it = it->second ? std::next(it) : poly.erase(it);
            } else {
                poly[free_mono(i)] = 1;
            }
            red_[syms[i]] = std::move(poly);
        }

        // T images
        std::map<EsMono, std::size_t> tix;
        ModEchelon tech(P_);
        for (auto& c : enumerate_compositions(w, Family::T)) {
            EsPoly poly = reduce_parity_sum(c);
            SparseRow row;
            for (auto& [m, x] : poly) {
                auto [it, fresh] = tix.emplace(m, tix.size());
                row.emplace_back(it->second, x);
            }
            std::sort(row.begin(), row.end());
            tech.insert(std::move(row));
        }
        lv.fmt_rank = tech.rank();
        levels_.push_back(std::move(lv));
    }
};

struct EsReduction {
    std::vector<EsLevel> levels;     // from the first prime
    std::vector<u64> primes;
    bool agree = true;               // free counts and FMT ranks equal across primes
};

/// Runs the reduction through weight w modulo two word-sized primes in parallel.
inline EsReduction es_reduce(int w, std::size_t nprimes = 2) {
    auto primes = random_word_primes(nprimes);
    std::vector<EsReducer> runs;
    for (auto P : primes) runs.emplace_back(P);
    std::vector<std::thread> pool;
    for (auto& r : runs) pool.emplace_back([&r, w] { r.run_to(w); });
    for (auto& t : pool) t.join();
    EsReduction out;
    out.primes = primes;
    out.levels = runs[0].levels();
    for (std::size_t k = 1; k < runs.size(); ++k)
        for (std::size_t i = 0; i < out.levels.size(); ++i) {
            auto& a = out.levels[i];
            auto& b = runs[k].levels()[i];
            if (a.free_columns != b.free_columns || a.fmt_rank != b.fmt_rank) out.agree = false;
        }
    return out;
}

}  // namespace fmzv
