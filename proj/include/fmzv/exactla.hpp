#pragma once

// Rank and kernel over Q for sparse rational matrices: elimination modulo
// random word-sized primes with agreement checks, exact fallbacks, and the
// class-split rank of matrices with coefficients in Q + Q*t.

#include "fmzv/modint.hpp"
#include "fmzv/monomial.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fmzv {

/// Sparse rational matrix; each row maps column -> nonzero entry.
struct QMatrix {
    std::size_t cols = 0;
    std::vector<std::map<std::size_t, mpq_class>> rows;

    QMatrix() = default;
    explicit QMatrix(std::size_t c) : cols(c) {}
    static QMatrix from_dense(const std::vector<std::vector<mpq_class>>& d) {
        QMatrix m(d.empty() ? 0 : d[0].size());
        for (auto& r : d) m.add_dense_row(r);
        return m;
    }

    void add_row(std::map<std::size_t, mpq_class> r) {
        for (auto it = r.begin(); it != r.end();) {
            if (it->first >= cols) throw InvalidInput("QMatrix: column out of range");
            it = it->second == 0 ? r.erase(it) : std::next(it);
        }
        rows.push_back(std::move(r));
    }
    void add_dense_row(const std::vector<mpq_class>& r) {
        if (r.size() != cols) throw InvalidInput("QMatrix: row length mismatch");
        std::map<std::size_t, mpq_class> m;
        for (std::size_t j = 0; j < r.size(); ++j)
            if (r[j] != 0) m.emplace(j, r[j]);
        rows.push_back(std::move(m));
    }
    std::vector<std::vector<mpq_class>> dense() const {
        std::vector<std::vector<mpq_class>> d(rows.size(), std::vector<mpq_class>(cols, 0));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (auto& [j, v] : rows[i]) d[i][j] = v;
        return d;
    }
};

// ---------------------------------------------------------------------------
// sparse elimination modulo a prime

using SparseRow = std::vector<std::pair<std::size_t, u64>>;  // sorted by column

/// Incremental row echelon form over F_P with pivot = leading column.
class ModEchelon {
public:
    explicit ModEchelon(u64 prime) : P_(prime) {}

    u64 prime() const { return P_; }
    std::size_t rank() const { return pivots_.size(); }
    const std::map<std::size_t, SparseRow>& pivots() const { return pivots_; }

    /// Reduces `row` against current pivots; keeps it if independent.
    bool insert(SparseRow row) {
        row = reduce(std::move(row));
        if (row.empty()) return false;
        u64 inv = invmod(row.front().second, P_);
        for (auto& [c, v] : row) v = mulmod(v, inv, P_);
        pivots_.emplace(row.front().first, std::move(row));
        return true;
    }

    SparseRow reduce(SparseRow row) const {
        SparseRow tmp;
        std::size_t start = 0;
        while (start < row.size()) {
            auto it = pivots_.find(row[start].first);
            if (it == pivots_.end()) {
                ++start;
                continue;
            }
            // row -= f * pivot, merged from position `start`
            const u64 f = row[start].second;
            const SparseRow& pr = it->second;
            tmp.clear();
            tmp.insert(tmp.end(), row.begin(), row.begin() + static_cast<std::ptrdiff_t>(start));
            std::size_t a = start, b = 0;
            while (a < row.size() || b < pr.size()) {
                if (b == pr.size() || (a < row.size() && row[a].first < pr[b].first)) {
                    tmp.push_back(row[a++]);
                } else {
                    u64 sub = mulmod(f, pr[b].second, P_);
                    if (a < row.size() && row[a].first == pr[b].first) {
                        u64 v = (row[a].second + P_ - sub) % P_;
                        if (v) tmp.emplace_back(row[a].first, v);
                        ++a;
                    } else {
                        tmp.emplace_back(pr[b].first, (P_ - sub) % P_);
                    }
                    ++b;
                }
            }
            row.swap(tmp);
        }
        return row;
    }

private:
    u64 P_;
    std::map<std::size_t, SparseRow> pivots_;
};

/// Word-sized primes drawn from a fixed-seed generator so runs are reproducible.
inline std::vector<u64> random_word_primes(std::size_t count, u64 seed = 0x5eed1234abcdULL) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u64> dist(u64(1) << 30, (u64(1) << 31) - 1);
    std::vector<u64> out;
    while (out.size() < count) {
        u64 c = dist(rng) | 1;
        if (is_prime(c) && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    return out;
}

/// Reduces a rational row modulo P; false if P divides a denominator.
inline bool reduce_row(const std::map<std::size_t, mpq_class>& r, u64 P, SparseRow& out) {
    out.clear();
    for (auto& [c, v] : r) {
        mpz_class den = v.get_den() % P;
        if (den == 0) return false;
        mpz_class num = v.get_num() % P;
        if (num < 0) num += P;
        u64 x = mulmod(num.get_ui(), invmod(den.get_ui(), P), P);
        if (x) out.emplace_back(c, x);
    }
    return true;
}

inline std::optional<std::size_t> rank_mod(const QMatrix& M, u64 P) {
    ModEchelon ech(P);
    SparseRow row;
    for (auto& r : M.rows) {
        if (!reduce_row(r, P, row)) return std::nullopt;
        ech.insert(row);
    }
    return ech.rank();
}

/// Exact rank by fraction-free (Bareiss) elimination on the dense matrix.
inline std::size_t rank_bareiss(const QMatrix& M) {
    auto d = M.dense();
    const std::size_t n = d.size(), m = M.cols;
    std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(m));
    for (std::size_t i = 0; i < n; ++i) {
        mpz_class l = 1;
        for (auto& v : d[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
        for (std::size_t j = 0; j < m; ++j) {
            mpq_class x = d[i][j] * l;
            a[i][j] = x.get_num();
        }
    }
    std::size_t r = 0;
    mpz_class prev = 1;
    for (std::size_t c = 0; c < m && r < n; ++c) {
        std::size_t piv = r;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) continue;
        std::swap(a[piv], a[r]);
        for (std::size_t i = r + 1; i < n; ++i) {
            for (std::size_t j = c + 1; j < m; ++j) {
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]);
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

struct RankReport {
    std::size_t rank = 0;
    std::vector<u64> primes;
    bool exact_fallback = false;
};

/// Rank over Q: two random primes must agree, otherwise exact elimination.
inline RankReport rank_q_report(const QMatrix& M) {
    RankReport rep;
    std::vector<std::size_t> ranks;
    u64 seed = 0x5eed1234abcdULL;
    while (ranks.size() < 2) {
        for (u64 P : random_word_primes(4, seed++)) {
            if (ranks.size() == 2) break;
            auto r = rank_mod(M, P);
            if (!r) continue;
            ranks.push_back(*r);
            rep.primes.push_back(P);
        }
    }
    if (ranks[0] == ranks[1]) {
        rep.rank = ranks[0];
        return rep;
    }
    rep.exact_fallback = true;
    rep.rank = rank_bareiss(M);
    return rep;
}

inline std::size_t rank_q(const QMatrix& M) { return rank_q_report(M).rank; }

/// Exact kernel basis {v : M v = 0} in reduced form; every vector is checked.
inline std::vector<std::vector<mpq_class>> kernel_q(const QMatrix& M) {
    auto a = M.dense();
    const std::size_t n = a.size(), m = M.cols;
    std::vector<std::size_t> pivcol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m && r < n; ++c) {
        std::size_t piv = r;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) continue;
        std::swap(a[piv], a[r]);
        mpq_class inv = 1 / a[r][c];
        for (std::size_t j = c; j < m; ++j) a[r][j] *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || a[i][c] == 0) continue;
            mpq_class f = a[i][c];
            for (std::size_t j = c; j < m; ++j) a[i][j] -= f * a[r][j];
        }
        pivcol.push_back(c);
        ++r;
    }
    std::vector<bool> is_piv(m, false);
    for (auto c : pivcol) is_piv[c] = true;
    std::vector<std::vector<mpq_class>> basis;
    for (std::size_t f = 0; f < m; ++f) {
        if (is_piv[f]) continue;
        std::vector<mpq_class> v(m, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < pivcol.size(); ++i) v[pivcol[i]] = -a[i][f];
        basis.push_back(std::move(v));
    }
    for (auto& v : basis)
        for (auto& row : M.rows) {
            mpq_class s = 0;
            for (auto& [j, x] : row) s += x * v[j];
            if (s != 0) throw std::logic_error("kernel_q: verification failed");
        }
    return basis;
}

// ---------------------------------------------------------------------------
// matrices over Q + Q*t

struct TwistedMatrix {
    std::size_t cols = 0;
    std::vector<std::map<std::size_t, TwistedCoeff>> rows;

    /// Specialization t = +1 or t = -1.
    QMatrix specialize(int t) const {
        QMatrix m(cols);
        for (auto& r : rows) {
            std::map<std::size_t, mpq_class> s;
            for (auto& [j, c] : r) {
                mpq_class v = c.at(t);
                if (v != 0) s.emplace(j, v);
            }
            m.add_row(std::move(s));
        }
        return m;
    }
};

struct TwistedRank {
    std::size_t plus = 0;   // rank on primes p == 1 (mod 4)
    std::size_t minus = 0;  // rank on primes p == 3 (mod 4)
    std::size_t effective() const { return plus + minus; }
    bool untwisted_equal() const { return plus == minus; }
};

inline TwistedRank rank_twisted(const TwistedMatrix& M) {
    return {rank_q(M.specialize(1)), rank_q(M.specialize(-1))};
}

// ---------------------------------------------------------------------------
// TSV import/export of rational matrices (dense, `num/den` fields)

inline mpq_class parse_rational(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw InvalidInput("bad rational '" + s + "'");
    q.canonicalize();
    return q;
}

inline void write_qmatrix_tsv(std::ostream& out, const QMatrix& M) {
    for (auto& row : M.dense()) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "\t" : "") << rational_string(row[j]);
        out << '\n';
    }
}

inline QMatrix read_qmatrix_tsv(std::istream& in) {
    std::vector<std::vector<mpq_class>> d;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<mpq_class> row;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, '\t')) row.push_back(parse_rational(f));
        if (!d.empty() && row.size() != d[0].size()) throw InvalidInput("ragged matrix TSV");
        d.push_back(std::move(row));
    }
    return QMatrix::from_dense(d);
}

}  // namespace fmzv
