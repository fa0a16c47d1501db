#pragma once

// Arithmetic modulo machine-word primes and the special residues attached to
// each prime: inverse tables, Bernoulli and Euler numbers, Fermat quotients,
// and the finite analogues of zeta(w) and Catalan's constant.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmzv {

class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Largest prime for which the O(p^2) Bernoulli/Euler recurrences are run.
inline constexpr u32 kSpecialConstantPrimeCap = 2000;

// ---------------------------------------------------------------------------
// primes

inline std::vector<u32> sieve_primes(u32 limit) {
    std::vector<u32> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<u32>(i));
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

/// Odd primes p with lo <= p <= hi, ascending.
inline std::vector<u32> primes_in_range(u32 lo, u32 hi) {
    std::vector<u32> out;
    for (u32 p : sieve_primes(hi))
        if (p >= lo && p > 2) out.push_back(p);
    return out;
}

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline void require_odd_prime(u64 p) {
    if (p == 2 || !is_prime(p))
        throw InvalidInput("expected an odd prime, got " + std::to_string(p));
}

// ---------------------------------------------------------------------------
// scalar kernels

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

inline u64 invmod(u64 a, u64 m) {
    // extended Euclid on signed 128-bit to keep intermediates exact
    __int128 t = 0, nt = 1, r = m, nr = a % m;
    while (nr) {
        __int128 q = r / nr;
        __int128 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw InvalidInput("value not invertible modulo " + std::to_string(m));
    if (t < 0) t += m;
    return static_cast<u64>(t);
}

/// Least nonnegative representative of a signed integer modulo p.
inline u32 reduce_signed(long long x, u32 p) {
    long long r = x % static_cast<long long>(p);
    return static_cast<u32>(r < 0 ? r + p : r);
}

/// Reduces a rational modulo p; throws if p divides the denominator.
inline u32 reduce_rational(const mpq_class& q, u32 p) {
    mpz_class num = q.get_num() % p;
    mpz_class den = q.get_den() % p;
    if (num < 0) num += p;
    if (den == 0) throw InvalidInput("denominator divisible by " + std::to_string(p));
    u64 n = num.get_ui(), d = den.get_ui();
    return static_cast<u32>(mulmod(n, invmod(d, p), p));
}

// ---------------------------------------------------------------------------
// Residue

struct Residue {
    u32 value = 0;
    u32 prime = 0;

    Residue() = default;
    Residue(u64 v, u32 p) : value(static_cast<u32>(v % p)), prime(p) {}

    friend bool operator==(const Residue&, const Residue&) = default;

    Residue operator+(Residue o) const { return {static_cast<u64>(value) + o.value, prime}; }
    Residue operator-(Residue o) const { return {static_cast<u64>(value) + prime - o.value, prime}; }
    Residue operator*(Residue o) const { return {static_cast<u64>(value) * o.value, prime}; }
    Residue operator-() const { return {static_cast<u64>(prime - value), prime}; }
    Residue inverse() const { return {invmod(value, prime), prime}; }
    bool is_zero() const { return value == 0; }
};

/// result[n] * n == 1 (mod p) for 1 <= n < p; result[0] is unused and 0.
inline std::vector<u32> inv_table(u32 p) {
    require_odd_prime(p);
    std::vector<u32> inv(p, 0);
    inv[1] = 1;
    for (u32 n = 2; n < p; ++n)
        inv[n] = static_cast<u32>(p - mulmod(p / n, inv[p % n], p));
    return inv;
}

// ---------------------------------------------------------------------------
// Bernoulli and Euler numbers modulo p

namespace detail {

struct FactorialTable {
    std::vector<u32> fact, inv_fact;
    explicit FactorialTable(u32 p) : fact(p), inv_fact(p) {
        fact[0] = 1;
        for (u32 n = 1; n < p; ++n) fact[n] = static_cast<u32>(mulmod(fact[n - 1], n, p));
        inv_fact[p - 1] = static_cast<u32>(invmod(fact[p - 1], p));
        for (u32 n = p - 1; n > 0; --n) inv_fact[n - 1] = static_cast<u32>(mulmod(inv_fact[n], n, p));
    }
    u64 binom(u32 n, u32 k, u32 p) const {
        if (k > n) return 0;
        return mulmod(mulmod(fact[n], inv_fact[k], p), inv_fact[n - k], p);
    }
};

inline void check_cap(u32 p) {
    if (p > kSpecialConstantPrimeCap)
        throw InvalidInput("Bernoulli/Euler residues are only computed for p <= " +
                           std::to_string(kSpecialConstantPrimeCap));
}

}  // namespace detail

/// B_0..B_{p-3} modulo p from sum_{k=0}^{n} C(n+1,k) B_k = 0.
inline std::vector<u32> bernoulli_table(u32 p) {
    require_odd_prime(p);
    detail::check_cap(p);
    std::vector<u32> b;
    if (p < 3) return b;
    const u32 top = p - 3;
    b.assign(top + 1, 0);
    detail::FactorialTable ft(p);
    b[0] = 1;
    if (top >= 1) b[1] = static_cast<u32>(p - invmod(2, p));
    for (u32 n = 2; n <= top; n += 2) {
        u64 acc = 0;
        for (u32 k = 0; k < n; ++k) {
            if (b[k] == 0) continue;
            acc = (acc + mulmod(ft.binom(n + 1, k, p), b[k], p)) % p;
        }
        // (n+1) B_n = -acc; n+1 <= p-2 so the division is legal
        b[n] = static_cast<u32>(mulmod((p - acc) % p, invmod(n + 1, p), p));
    }
    return b;
}

/// E_0, E_2, ..., E_{p-3} (secant numbers, even indices) modulo p, indexed by n.
inline std::vector<u32> euler_table(u32 p) {
    require_odd_prime(p);
    detail::check_cap(p);
    const u32 top = p - 3;
    std::vector<u32> e(top + 1, 0);
    detail::FactorialTable ft(p);
    e[0] = 1;
    for (u32 m = 1; 2 * m <= top; ++m) {
        u64 acc = 0;
        for (u32 k = 0; k < m; ++k)
            acc = (acc + mulmod(ft.binom(2 * m, 2 * k, p), e[2 * k], p)) % p;
        e[2 * m] = static_cast<u32>((p - acc) % p);
    }
    return e;
}

namespace detail {

// Per-prime caches; built once, then read-only.
struct ConstantCache {
    std::mutex mu;
    std::map<u32, std::shared_ptr<const std::vector<u32>>> bernoulli, euler;

    template <class F>
    std::shared_ptr<const std::vector<u32>> get(std::map<u32, std::shared_ptr<const std::vector<u32>>>& m,
                                                u32 p, F build) {
        {
            std::lock_guard lk(mu);
            if (auto it = m.find(p); it != m.end()) return it->second;
        }
        auto v = std::make_shared<const std::vector<u32>>(build(p));
        std::lock_guard lk(mu);
        return m.emplace(p, std::move(v)).first->second;
    }
};

inline ConstantCache& constant_cache() {
    static ConstantCache c;
    return c;
}

}  // namespace detail

inline Residue bernoulli_mod(u32 p, u32 n) {
    require_odd_prime(p);
    if (n + 3 > p) throw InvalidInput("bernoulli_mod needs n <= p-3");
    auto& c = detail::constant_cache();
    auto t = c.get(c.bernoulli, p, bernoulli_table);
    return {(*t)[n], p};
}

inline Residue euler_number_mod(u32 p, u32 n) {
    require_odd_prime(p);
    if (n % 2) throw InvalidInput("euler_number_mod needs an even index");
    if (n + 3 > p) throw InvalidInput("euler_number_mod needs n <= p-3");
    auto& c = detail::constant_cache();
    auto t = c.get(c.euler, p, euler_table);
    return {(*t)[n], p};
}

/// beta_w(p) = B_{p-w} / w, defined when p >= w + 2.
inline Residue beta(u32 p, u32 w) {
    if (w < 2) throw InvalidInput("beta needs w >= 2");
    if (p < w + 2) throw InvalidInput("beta_" + std::to_string(w) + " undefined at p=" + std::to_string(p));
    require_odd_prime(p);
    if ((p - w) % 2 == 1) return {0, p};
    return bernoulli_mod(p, p - w) * Residue(invmod(w, p), p);
}

/// (2^{p-1} - 1)/p mod p by exact big-integer division.
inline Residue fermat_quotient(u32 p) {
    require_odd_prime(p);
    mpz_class x;
    mpz_ui_pow_ui(x.get_mpz_t(), 2, p - 1);
    x -= 1;
    mpz_class q = x / p;
    mpz_class r = q % p;
    return {r.get_ui(), p};
}

/// Same quotient via 2^{p-1} mod p^2.
inline Residue fermat_quotient_pow(u32 p) {
    require_odd_prime(p);
    u64 p2 = static_cast<u64>(p) * p;
    u64 x = powmod(2, p - 1, p2);
    return {(x + p2 - 1) % p2 / p, p};
}

/// G(p) = E_{p-3}/2, defined for p >= 5.
inline Residue finite_catalan(u32 p) {
    require_odd_prime(p);
    if (p < 5) throw InvalidInput("finite Catalan constant needs p >= 5");
    return euler_number_mod(p, p - 3) * Residue(invmod(2, p), p);
}

/// (-1)^{(p-1)/2} as a residue.
inline Residue quadratic_twist(u32 p) { return {p % 4 == 1 ? 1u : p - 1, p}; }

inline u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

/// Odd primes p <= limit, p == a (mod m), with vanishing Fermat quotient.
inline std::vector<u32> wieferich_scan(u32 limit, u32 m, u32 a) {
    if (m == 0) throw InvalidInput("modulus must be positive");
    if (gcd_u64(m, a % m) != 1 && m != 1) throw InvalidInput("gcd(m, a) must be 1");
    std::vector<u32> hits;
    for (u32 p : primes_in_range(3, limit)) {
        if (p % m != a % m) continue;
        if (fermat_quotient(p).is_zero()) hits.push_back(p);
    }
    return hits;
}

}  // namespace fmzv
