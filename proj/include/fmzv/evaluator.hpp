#pragma once

// Evaluation of finite sums modulo a prime and prime sweeps with a TSV cache.

#include "fmzv/composition.hpp"
#include "fmzv/modint.hpp"
#include "fmzv/monomial.hpp"
#include "fmzv/word.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fmzv {

/// Per-prime tables: inverses and their powers.
class PrimeContext {
public:
    explicit PrimeContext(u32 p) : p_(p), inv_(inv_table(p)) { pow_.emplace_back(p, 1); }

    u32 prime() const { return p_; }
    const std::vector<u32>& inverses() const { return inv_; }

    /// n^{-k} for n = 0..p-1 (entry 0 unused).
    const std::vector<u32>& inv_pow(int k) {
        while (static_cast<int>(pow_.size()) <= k) {
            const auto& prev = pow_.back();
            std::vector<u32> next(p_);
            for (u32 n = 1; n < p_; ++n) next[n] = static_cast<u32>(mulmod(prev[n], inv_[n], p_));
            pow_.push_back(std::move(next));
        }
        return pow_[k];
    }

private:
    u32 p_;
    std::vector<u32> inv_;
    std::deque<std::vector<u32>> pow_;  // stable references
};

/// Sum over p > n_1 > ... > n_d > 0 with the family's parity and sign rule.
inline Residue eval_comp(PrimeContext& ctx, const Composition& c) {
    const u32 p = ctx.prime();
    c.validate();
    if (c.parts.empty()) return {1, p};
    const int d = static_cast<int>(c.depth());
    std::vector<const std::vector<u32>*> pw(d);
    for (int j = 0; j < d; ++j) pw[j] = &ctx.inv_pow(c.parts[j]);
    // acc[j] = sum over valid tails n_{j+1} > ... > n_d below the current n
    std::vector<u64> acc(d + 1, 0);
    acc[d] = 1;
    for (u32 n = 1; n < p; ++n) {
        for (int j = 0; j < d; ++j) {
            const u64 tail = acc[j + 1];
            if (tail == 0) continue;
            const int jj = j + 1;  // 1-based position
            u64 f = (*pw[j])[n];
            bool negate = false;
            switch (c.family) {
                case Family::ES:
                    negate = c.signs[j] < 0 && (n & 1);
                    break;
                case Family::T:
                    if ((n + d - jj + 1) % 2) continue;
                    break;
                case Family::S:
                    if ((n + d - jj) % 2) continue;
                    break;
                case Family::AT: {
                    if ((n + d - jj + 1) % 2) continue;
                    long long e = (static_cast<long long>(n) - d + jj - 1) / 2;
                    negate = c.signs[j] < 0 && (e & 1);
                    break;
                }
            }
            u64 term = mulmod(f, tail, p);
            if (negate && term) term = p - term;
            acc[j] += term;
            if (acc[j] >= p) acc[j] -= p;
        }
    }
    return {acc[0], p};
}

inline Residue eval_comp(u32 p, const Composition& c) {
    require_odd_prime(p);
    PrimeContext ctx(p);
    return eval_comp(ctx, c);
}

/// O(p^d) nested-loop oracle.
inline Residue eval_comp_bruteforce(u32 p, const Composition& c) {
    require_odd_prime(p);
    const int d = static_cast<int>(c.depth());
    auto inv = inv_table(p);
    u64 total = 0;
    std::vector<u32> n(d);
    auto factor = [&](int j, u32 m, u64& out) -> bool {
        const int jj = j + 1;
        if (c.family == Family::T || c.family == Family::AT)
            if ((m % 2) != static_cast<u32>((d - jj + 1) % 2)) return false;
        if (c.family == Family::S)
            if ((m % 2) != static_cast<u32>((d - jj) % 2)) return false;
        u64 v = powmod(inv[m], c.parts[j], p);
        int sign = 1;
        if (c.family == Family::ES && c.signs[j] < 0 && (m & 1)) sign = -1;
        if (c.family == Family::AT) {
            long long e = (static_cast<long long>(m) - d + jj - 1) / 2;
            if (c.signs[j] < 0 && (e & 1)) sign = -1;
        }
        out = sign < 0 ? (p - v) % p : v;
        return true;
    };
    auto rec = [&](auto&& self, int j, u32 upper, u64 prod) -> void {
        if (j == d) {
            total = (total + prod) % p;
            return;
        }
        for (u32 m = 1; m < upper; ++m) {
            u64 f;
            if (!factor(j, m, f)) continue;
            self(self, j + 1, m, mulmod(prod, f, p));
        }
    };
    rec(rec, 0, p, 1);
    return {total, p};
}

/// T_A(w) := value of q(w); the family decides how signs are read.
inline Residue eval_word(u32 p, const Word& w, Family family) {
    return eval_comp(p, word_to_comp(w, family));
}

/// Linear extension; nullopt when p divides a coefficient denominator.
inline std::optional<Residue> eval_lincomb(PrimeContext& ctx, const CompComb& L) {
    const u32 p = ctx.prime();
    Residue acc(0, p);
    for (auto& [c, q] : L.terms) {
        if (q.get_den() % p == 0) return std::nullopt;
        acc = acc + Residue(reduce_rational(q, p), p) * eval_comp(ctx, c);
    }
    return acc;
}

inline std::optional<Residue> eval_lincomb(u32 p, const CompComb& L) {
    require_odd_prime(p);
    PrimeContext ctx(p);
    return eval_lincomb(ctx, L);
}

/// Expression with constants and twists; nullopt when some coefficient or
/// constant is undefined at p.
inline std::optional<Residue> eval_expr(PrimeContext& ctx, const Expr& e) {
    const u32 p = ctx.prime();
    Residue acc(0, p);
    for (auto& [atom, coeff] : e.terms) {
        auto cv = coeff.eval(p);
        if (!cv) return std::nullopt;
        Residue v = *cv;
        if (!atom.mono.is_one()) {
            if (p < atom.mono.min_prime()) return std::nullopt;
            v = v * atom.mono.eval(p);
        }
        if (atom.comp) v = v * eval_comp(ctx, *atom.comp);
        acc = acc + v;
    }
    return acc;
}

inline std::optional<Residue> eval_expr(u32 p, const Expr& e) {
    require_odd_prime(p);
    PrimeContext ctx(p);
    return eval_expr(ctx, e);
}

// ---------------------------------------------------------------------------
// ResidueVector and sweeps

struct ResidueVector {
    std::string symbol;
    std::map<u32, u32> entries;  // prime -> residue

    std::vector<u32> primes() const {
        std::vector<u32> out;
        for (auto& [p, v] : entries) out.push_back(p);
        return out;
    }
};

/// Primes p in [lo, hi] with p > weight + 2.
inline std::vector<u32> admissible_primes(u32 lo, u32 hi, int weight) {
    std::vector<u32> out;
    for (u32 p : primes_in_range(std::max<u32>(lo, 3), hi))
        if (p > static_cast<u32>(weight) + 2) out.push_back(p);
    return out;
}

/// Runs f(prime_index) over a pool of `workers` threads.
template <class F>
void parallel_for(std::size_t count, int workers, F&& f) {
    workers = std::max(1, workers);
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            try {
                for (std::size_t i; (i = next.fetch_add(1)) < count;) f(i);
            } catch (...) {
                std::lock_guard lk(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

/// values[i][k] = residue of symbols[i] at primes[k].
inline std::vector<std::vector<u32>> evaluate_table(const std::vector<Composition>& symbols,
                                                    const std::vector<u32>& primes, int workers = 1) {
    std::vector<std::vector<u32>> out(symbols.size(), std::vector<u32>(primes.size()));
    parallel_for(primes.size(), workers, [&](std::size_t k) {
        PrimeContext ctx(primes[k]);
        for (std::size_t i = 0; i < symbols.size(); ++i) out[i][k] = eval_comp(ctx, symbols[i]).value;
    });
    return out;
}

struct SweepConfig {
    u32 prime_lo = 5;
    u32 prime_hi = 200;
    Family family = Family::T;
    int weight = 1;
    std::vector<Composition> symbols;  // empty: full inventory of the weight
    std::filesystem::path cache_dir = "fmzv-cache";
    int workers = 1;

    void validate() const {
        if (prime_lo < 3) throw InvalidInput("prime_lo must be >= 3");
        if (prime_hi < prime_lo) throw InvalidInput("prime_hi must be >= prime_lo");
        if (weight < 1) throw InvalidInput("weight must be >= 1");
    }
};

/// Symbols swept for a family: ES and AT include all sign patterns.
inline std::vector<Composition> sweep_inventory(Family family, int weight) {
    return enumerate_compositions(weight, family, family == Family::ES || family == Family::AT);
}

inline std::filesystem::path cache_file(const SweepConfig& cfg) {
    return cfg.cache_dir / (std::string(family_name(cfg.family)) + "_w" + std::to_string(cfg.weight) + ".tsv");
}

struct SweepResult {
    std::vector<ResidueVector> vectors;
    std::size_t computed = 0;  // newly evaluated (symbol, prime) pairs
    bool file_written = false;
    std::filesystem::path path;
};

namespace detail {

using CacheMap = std::map<Composition, std::map<u32, u32>>;

inline CacheMap read_cache(const std::filesystem::path& path) {
    CacheMap m;
    if (!std::filesystem::exists(path)) return m;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read cache file " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": malformed record");
        Composition c = parse_composition(line.substr(0, t1));
        u32 p = static_cast<u32>(std::stoul(line.substr(t1 + 1, t2 - t1 - 1)));
        u32 v = static_cast<u32>(std::stoul(line.substr(t2 + 1)));
        if (v >= p) throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": residue out of range");
        m[c][p] = v;
    }
    return m;
}

inline void write_cache(const std::filesystem::path& path, const CacheMap& m) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
        for (auto& [c, row] : m)
            for (auto& [p, v] : row) out << to_string(c) << '\t' << p << '\t' << v << '\n';
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace detail

/// Computes every missing (symbol, prime) residue and merges it into the cache
/// file. Leaves the file untouched when nothing is missing.
inline SweepResult sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepResult res;
    res.path = cache_file(cfg);
    auto symbols = cfg.symbols.empty() ? sweep_inventory(cfg.family, cfg.weight) : cfg.symbols;
    for (auto& s : symbols) {
        if (s.family != cfg.family) throw InvalidInput("sweep symbol " + to_string(s) + " has the wrong family");
        if (s.weight() != cfg.weight) throw InvalidInput("sweep symbol " + to_string(s) + " has the wrong weight");
    }
    auto primes = admissible_primes(cfg.prime_lo, cfg.prime_hi, cfg.weight);
    auto cache = detail::read_cache(res.path);

    std::vector<u32> todo_primes;
    for (u32 p : primes)
        for (auto& s : symbols)
            if (!cache.count(s) || !cache[s].count(p)) {
                todo_primes.push_back(p);
                break;
            }
    std::vector<std::vector<std::pair<std::size_t, u32>>> fresh(todo_primes.size());
    parallel_for(todo_primes.size(), cfg.workers, [&](std::size_t k) {
        const u32 p = todo_primes[k];
        PrimeContext ctx(p);
        for (std::size_t i = 0; i < symbols.size(); ++i) {
            auto it = cache.find(symbols[i]);
            if (it != cache.end() && it->second.count(p)) continue;
            fresh[k].emplace_back(i, eval_comp(ctx, symbols[i]).value);
        }
    });
    for (std::size_t k = 0; k < todo_primes.size(); ++k)
        for (auto& [i, v] : fresh[k]) {
            cache[symbols[i]][todo_primes[k]] = v;
            ++res.computed;
        }
    if (res.computed) {
        detail::write_cache(res.path, cache);
        res.file_written = true;
    }
    for (auto& s : symbols) {
        ResidueVector rv;
        rv.symbol = to_string(s);
        for (u32 p : primes) rv.entries[p] = cache[s][p];
        res.vectors.push_back(std::move(rv));
    }
    return res;
}

}  // namespace fmzv
