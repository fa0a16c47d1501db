#pragma once

// Integer relations among residue vectors. Residues are combined by CRT and
// short relations are found with exact integral LLL; every candidate is then
// checked at every sampled prime. The resulting rank is a lower bound for the
// dimension of the span in the ring of sequences mod almost all primes.

#include "fmzv/modint.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <optional>
#include <string>
#include <vector>

namespace fmzv {

using IntMatrix = std::vector<std::vector<mpz_class>>;

/// Exact integral LLL with delta = 3/4 on linearly independent rows.
inline void lll_reduce(IntMatrix& b) {
    const std::size_t n = b.size();
    if (n < 2) return;
    auto dot = [](const std::vector<mpz_class>& x, const std::vector<mpz_class>& y) {
        mpz_class s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s;
    };
    // 1-based bookkeeping: d[0] = 1, lambda[k][j] for j < k
    std::vector<mpz_class> d(n + 1);
    std::vector<std::vector<mpz_class>> lam(n + 1, std::vector<mpz_class>(n + 1));
    auto B = [&](std::size_t i) -> std::vector<mpz_class>& { return b[i - 1]; };
    d[0] = 1;
    d[1] = dot(B(1), B(1));
    std::size_t k = 2, kmax = 1;

    auto redi = [&](std::size_t kk, std::size_t l) {
        mpz_class two = 2 * lam[kk][l];
        if (abs(two) <= d[l]) return;
        // q = round(lambda / d_l)
        mpz_class q;
        mpz_class num = 2 * lam[kk][l] + d[l], den = 2 * d[l];
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        auto& bk = B(kk);
        auto& bl = B(l);
        for (std::size_t i = 0; i < bk.size(); ++i) bk[i] -= q * bl[i];
        lam[kk][l] -= q * d[l];
        for (std::size_t i = 1; i < l; ++i) lam[kk][i] -= q * lam[l][i];
    };
    auto swapi = [&](std::size_t kk) {
        std::swap(B(kk), B(kk - 1));
        for (std::size_t j = 1; j + 1 < kk; ++j) std::swap(lam[kk][j], lam[kk - 1][j]);
        mpz_class l = lam[kk][kk - 1];
        mpz_class Bv = (d[kk - 2] * d[kk] + l * l) / d[kk - 1];
        for (std::size_t i = kk + 1; i <= kmax; ++i) {
            mpz_class t = lam[i][kk];
            lam[i][kk] = (d[kk] * lam[i][kk - 1] - l * t) / d[kk - 1];
            lam[i][kk - 1] = (Bv * t + l * lam[i][kk]) / d[kk];
        }
        d[kk - 1] = Bv;
    };

    while (k <= n) {
        if (k > kmax) {
            kmax = k;
            for (std::size_t j = 1; j <= k; ++j) {
                mpz_class u = dot(B(k), B(j));
                for (std::size_t i = 1; i < j; ++i) u = (d[i] * u - lam[k][i] * lam[j][i]) / d[i - 1];
                if (j < k) lam[k][j] = u;
                else {
                    if (u == 0) throw std::logic_error("lll_reduce: dependent input rows");
                    d[k] = u;
                }
            }
        }
        while (true) {
            redi(k, k - 1);
            if (4 * d[k] * d[k - 2] < 3 * d[k - 1] * d[k - 1] - 4 * lam[k][k - 1] * lam[k][k - 1]) {
                swapi(k);
                if (k > 2) --k;
            } else {
                for (std::size_t l = k - 1; l-- > 1;) redi(k, l);
                ++k;
                break;
            }
        }
    }
}

/// How the relation search samples primes.
struct LatticeOptions {
    std::size_t base_bits = 128;     // budget = k * (per_vector_bits + k/2) + base_bits
    std::size_t per_vector_bits = 64;
    int retries = 1;                 // doublings tried after a failed candidate
    bool stop_when_short = false;    // stop once the primes cannot cover the budget
    std::size_t stop_at_rank = 0;    // stop once the rank reaches this (0: never)
};

namespace detail {

inline std::size_t bit_budget(std::size_t k, const LatticeOptions& opt) {
    return k * (opt.per_vector_bits + k / 2) + opt.base_bits;
}

/// Coefficients c (primitive, last entry nonzero) with sum c_i v_i == 0 at
/// every prime, or nullopt. `inconclusive` is set when a candidate failed and
/// no primes were left for a larger budget.
inline std::optional<std::vector<mpz_class>> find_relation(const std::vector<const std::vector<u32>*>& vecs,
                                                           const std::vector<u32>& primes,
                                                           const LatticeOptions& opt,
                                                           bool* inconclusive = nullptr) {
    if (inconclusive) *inconclusive = false;
    const std::size_t k = vecs.size();
    std::size_t bits = bit_budget(k, opt);
    for (int attempt = 0; attempt <= opt.retries; ++attempt, bits *= 2) {
        // choose prime prefix with product >= 2^bits
        mpz_class M = 1;
        std::size_t used = 0;
        while (used < primes.size() && mpz_sizeinbase(M.get_mpz_t(), 2) < bits) M *= primes[used++];
        // CRT lifts
        std::vector<mpz_class> V(k, 0);
        {
            mpz_class mod = 1;
            for (std::size_t t = 0; t < used; ++t) {
                const u32 p = primes[t];
                mpz_class inv;
                mpz_class mp = mod % p;
                u64 mi = invmod(mp.get_ui(), p);
                for (std::size_t i = 0; i < k; ++i) {
                    // V_i += mod * ((r - V_i) * mod^{-1} mod p)
                    mpz_class cur = V[i] % p;
                    long long diff = static_cast<long long>((*vecs[i])[t]) - static_cast<long long>(cur.get_si());
                    u64 h = mulmod(reduce_signed(diff, p), mi, p);
                    V[i] += mod * h;
                }
                mod *= p;
            }
        }
        const std::size_t mbits = mpz_sizeinbase(M.get_mpz_t(), 2);
        mpz_class N = 1;
        mpz_mul_2exp(N.get_mpz_t(), N.get_mpz_t(), mbits / std::max<std::size_t>(k, 1) + k + 16);
        IntMatrix L(k + 1, std::vector<mpz_class>(k + 1, 0));
        for (std::size_t i = 0; i < k; ++i) {
            L[i][i] = 1;
            L[i][k] = N * V[i];
        }
        L[k][k] = N * M;
        lll_reduce(L);
        bool candidate_failed = false, suspicious = false;
        for (auto& row : L) {
            if (row[k] != 0 || row[k - 1] == 0) continue;
            std::vector<mpz_class> c(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k));
            // a genuine relation is far shorter than the generic M^{1/k}
            std::size_t height = 0;
            for (auto& x : c) height = std::max(height, mpz_sizeinbase(x.get_mpz_t(), 2));
            mpz_class g = 0;
            for (auto& x : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
            for (auto& x : c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
            bool ok = 2 * k * height <= mbits;
            const bool short_vector = ok;
            for (std::size_t t = 0; t < primes.size() && ok; ++t) {
                const u32 p = primes[t];
                u64 s = 0;
                for (std::size_t i = 0; i < k; ++i) {
                    mpz_class ci = c[i] % p;
                    if (ci < 0) ci += p;
                    s = (s + mulmod(ci.get_ui(), (*vecs[i])[t], p)) % p;
                }
                ok = s == 0;
            }
            if (ok) return c;
            candidate_failed = true;
            suspicious = suspicious || short_vector;
        }
        if (!candidate_failed) break;
        if (used == primes.size() || attempt == opt.retries) {
            if (inconclusive) *inconclusive = suspicious;
            break;
        }
    }
    return std::nullopt;
}

}  // namespace detail

struct LatticeRank {
    std::size_t rank = 0;
    std::vector<std::size_t> basis;  // indices of an independent subset
    std::vector<std::pair<std::size_t, std::vector<mpz_class>>> relations;  // dependent index -> coeffs on basis + self
    std::size_t processed = 0;       // rows decided
    bool truncated = false;          // stopped early under stop_when_short
};

/// Incremental search: a row joins the basis unless a verified primitive
/// integer relation ties it to the current basis.
inline LatticeRank lattice_rank(const std::vector<std::vector<u32>>& rows, const std::vector<u32>& primes,
                                const LatticeOptions& opt = {}) {
    LatticeRank out;
    double avail = 0;
    for (u32 p : primes) avail += std::log2(static_cast<double>(p));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != primes.size()) throw InvalidInput("lattice_rank: row length mismatch");
        if (opt.stop_when_short && static_cast<double>(detail::bit_budget(out.basis.size() + 1, opt)) > avail) {
            out.truncated = true;
            break;
        }
        out.processed = i + 1;
        bool zero = std::all_of(rows[i].begin(), rows[i].end(), [](u32 x) { return x == 0; });
        if (zero) {
            out.relations.push_back({i, {1}});
            continue;
        }
        std::vector<const std::vector<u32>*> vecs;
        for (auto j : out.basis) vecs.push_back(&rows[j]);
        vecs.push_back(&rows[i]);
        bool unsure = false;
        auto rel = detail::find_relation(vecs, primes, opt, &unsure);
        if (!rel && unsure && opt.stop_when_short) {
            out.processed = i;
            out.truncated = true;
            break;
        }
        if (rel) {
            out.relations.push_back({i, *rel});
        } else {
            out.basis.push_back(i);
            if (opt.stop_at_rank && out.basis.size() >= opt.stop_at_rank) break;
        }
    }
    out.rank = out.basis.size();
    return out;
}

/// Rows = symbols, columns = primes, entries = least nonnegative residues.
struct ValueMatrix {
    std::vector<std::string> symbols;
    std::vector<u32> primes;
    std::vector<std::vector<u32>> entries;

    void validate() const {
        if (entries.size() != symbols.size()) throw InvalidInput("ValueMatrix: row count mismatch");
        for (auto& r : entries) {
            if (r.size() != primes.size()) throw InvalidInput("ValueMatrix: column count mismatch");
            for (std::size_t j = 0; j < r.size(); ++j)
                if (r[j] >= primes[j]) throw InvalidInput("ValueMatrix: entry not reduced");
        }
    }
};

inline std::size_t required_columns(std::size_t symbols) { return 2 * symbols + 16; }

struct ValueRank {
    std::size_t rank = 0;
    std::vector<std::string> basis;
    std::vector<std::pair<std::string, std::vector<mpz_class>>> relations;
};

/// Lower bound for the dimension of the span; refuses when there are fewer
/// than `min_columns` primes (default 2 * symbols + 16).
inline ValueRank rank_value_matrix(const ValueMatrix& V, std::optional<std::size_t> min_columns = std::nullopt,
                                   const LatticeOptions& opt = {}) {
    V.validate();
    std::size_t need = min_columns.value_or(required_columns(V.symbols.size()));
    if (V.primes.size() < need)
        throw InvalidInput("rank_value_matrix: " + std::to_string(V.primes.size()) + " prime columns, need " +
                           std::to_string(need));
    auto lr = lattice_rank(V.entries, V.primes, opt);
    ValueRank out;
    out.rank = lr.rank;
    for (auto i : lr.basis) out.basis.push_back(V.symbols[i]);
    for (auto& [i, c] : lr.relations) out.relations.emplace_back(V.symbols[i], c);
    return out;
}

/// Header `symbol<TAB>p1<TAB>p2...`, then one row per symbol.
inline void write_value_matrix_tsv(std::ostream& out, const ValueMatrix& V) {
    out << "symbol";
    for (auto p : V.primes) out << '\t' << p;
    out << '\n';
    for (std::size_t i = 0; i < V.symbols.size(); ++i) {
        out << V.symbols[i];
        for (auto x : V.entries[i]) out << '\t' << x;
        out << '\n';
    }
}

inline ValueMatrix read_value_matrix_tsv(std::istream& in) {
    ValueMatrix V;
    std::string line, f;
    if (!std::getline(in, line)) throw InvalidInput("value matrix TSV: missing header");
    {
        std::stringstream ss(line);
        std::getline(ss, f, '\t');
        while (std::getline(ss, f, '\t')) V.primes.push_back(static_cast<u32>(std::stoul(f)));
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::getline(ss, f, '\t');
        V.symbols.push_back(f);
        std::vector<u32> row;
        while (std::getline(ss, f, '\t')) row.push_back(static_cast<u32>(std::stoul(f)));
        V.entries.push_back(std::move(row));
    }
    V.validate();
    return V;
}

}  // namespace fmzv
