#include "fmzv/modint.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace fmzv;

namespace {

// Exact Bernoulli numbers by the Akiyama-Tanigawa algorithm (B_1 = +1/2).
std::vector<mpq_class> exact_bernoulli(int n) {
    std::vector<mpq_class> a(n + 1), out(n + 1);
    for (int m = 0; m <= n; ++m) {
        a[m] = mpq_class(1, m + 1);
        for (int j = m; j >= 1; --j) {
            a[j - 1] = j * (a[j - 1] - a[j]);
            a[j - 1].canonicalize();
        }
        out[m] = a[0];
    }
    return out;
}

// Exact Euler numbers from the Taylor series sech x = 1 / cosh x.
std::vector<mpz_class> exact_euler(int n) {
    std::vector<mpq_class> c(n + 1, 0), inv(n + 1, 0);
    mpz_class f = 1;
    for (int k = 0; k <= n; ++k) {
        if (k) f *= k;
        if (k % 2 == 0) c[k] = mpq_class(1) / mpq_class(f);
    }
    inv[0] = 1;
    for (int k = 1; k <= n; ++k) {
        mpq_class s = 0;
        for (int j = 1; j <= k; ++j) s += c[j] * inv[k - j];
        inv[k] = -s;
    }
    std::vector<mpz_class> e(n + 1);
    f = 1;
    for (int k = 0; k <= n; ++k) {
        if (k) f *= k;
        mpq_class v = inv[k] * f;
        e[k] = v.get_num();
    }
    return e;
}

u32 harmonic_alt(u32 p, u32 s) {
    u64 acc = 0;
    for (u32 n = 1; n < p; ++n) {
        u64 v = powmod(invmod(n, p), s, p);
        acc = (acc + ((n % 2) ? p - v : v)) % p;
    }
    return static_cast<u32>(acc % p);
}

}  // namespace

TEST(Modint, InverseTableExamples) {
    EXPECT_EQ(inv_table(7)[3], 5u);
    EXPECT_EQ(inv_table(5)[2], 3u);
    for (u32 p : {3u, 5u, 101u}) EXPECT_EQ(inv_table(p)[1], 1u);
}

TEST(Modint, InverseTableProperty) {
    for (u32 p : primes_in_range(3, 2000)) {
        auto t = inv_table(p);
        for (u32 n = 1; n < p; ++n) ASSERT_EQ(mulmod(t[n], n, p), 1u) << p << " " << n;
    }
}

TEST(Modint, RejectsNonPrimes) {
    EXPECT_THROW(inv_table(2), InvalidInput);
    EXPECT_THROW(inv_table(9), InvalidInput);
    EXPECT_THROW(fermat_quotient(15), InvalidInput);
}

TEST(Modint, BernoulliExamples) {
    EXPECT_EQ(bernoulli_mod(11, 0).value, 1u);
    EXPECT_EQ(bernoulli_mod(5, 2).value, 1u);
    EXPECT_EQ(bernoulli_mod(7, 4).value, 3u);
    EXPECT_THROW(bernoulli_mod(7, 5), InvalidInput);
}

TEST(Modint, BernoulliMatchesExactRationals) {
    auto exact = exact_bernoulli(60);
    for (u32 p : primes_in_range(5, 300)) {
        for (u32 n = 0; n + 3 <= p && n <= 60; ++n) {
            mpq_class b = exact[n];
            if (n == 1) b = -b;
            ASSERT_EQ(bernoulli_mod(p, n).value, reduce_rational(b, p)) << p << " " << n;
        }
    }
}

TEST(Modint, OddBernoulliVanish) {
    for (u32 p : primes_in_range(7, 400))
        for (u32 n = 3; n + 3 <= p; n += 2) ASSERT_TRUE(bernoulli_mod(p, n).is_zero());
}

TEST(Modint, BetaExamples) {
    EXPECT_EQ(beta(7, 3).value, 1u);
    EXPECT_EQ(beta(5, 3).value, 2u);
    for (u32 p : primes_in_range(7, 200)) EXPECT_TRUE(beta(p, 4).is_zero());
    EXPECT_THROW(beta(5, 5), InvalidInput);
}

TEST(Modint, BetaMatchesAlternatingHarmonicSums) {
    for (u32 p : primes_in_range(5, 300))
        for (u32 s = 3; s <= 9; s += 2) {
            if (p <= s + 2) continue;
            // (1/2) sum (-1)^n n^{-s} == (2^{1-s} - 1) beta_s
            Residue lhs = Residue(harmonic_alt(p, s), p) * Residue(invmod(2, p), p);
            Residue two_pow = Residue(invmod(powmod(2, s - 1, p), p), p);
            Residue rhs = (two_pow - Residue(1, p)) * beta(p, s);
            ASSERT_EQ(lhs, rhs) << p << " " << s;
        }
}

TEST(Modint, FermatQuotientExamples) {
    EXPECT_EQ(fermat_quotient(3).value, 1u);
    EXPECT_EQ(fermat_quotient(5).value, 3u);
    EXPECT_EQ(fermat_quotient(7).value, 2u);
}

TEST(Modint, FermatQuotientTwoPaths) {
    for (u32 p : primes_in_range(3, 10000)) ASSERT_EQ(fermat_quotient(p), fermat_quotient_pow(p)) << p;
}

TEST(Modint, EulerNumberExamples) {
    EXPECT_EQ(euler_number_mod(13, 0).value, 1u);
    EXPECT_EQ(euler_number_mod(7, 2).value, 6u);
    EXPECT_EQ(euler_number_mod(7, 4).value, 5u);
    EXPECT_THROW(euler_number_mod(11, 3), InvalidInput);
}

TEST(Modint, EulerNumbersMatchExactIntegers) {
    auto exact = exact_euler(20);
    EXPECT_EQ(exact[2], -1);
    EXPECT_EQ(exact[4], 5);
    EXPECT_EQ(exact[6], -61);
    for (u32 p : primes_in_range(5, 300))
        for (u32 m = 0; m <= 10 && 2 * m + 3 <= p; ++m) {
            mpz_class r = exact[2 * m] % p;
            if (r < 0) r += p;
            ASSERT_EQ(euler_number_mod(p, 2 * m).value, r.get_ui()) << p << " " << m;
        }
}

TEST(Modint, FiniteCatalan) {
    EXPECT_EQ(finite_catalan(7).value, 6u);
    // E_2 / 2 = -1/2 == 2 mod 5
    EXPECT_EQ(finite_catalan(5).value, 2u);
    EXPECT_THROW(finite_catalan(3), InvalidInput);
}

TEST(Modint, WieferichScan) {
    EXPECT_EQ(wieferich_scan(10000, 1, 1), (std::vector<u32>{1093, 3511}));
    EXPECT_TRUE(wieferich_scan(1000, 4, 1).empty());
    EXPECT_EQ(wieferich_scan(10000, 4, 3), (std::vector<u32>{3511}));
    EXPECT_EQ(wieferich_scan(10000, 4, 1), (std::vector<u32>{1093}));
    EXPECT_THROW(wieferich_scan(100, 4, 2), InvalidInput);
}

TEST(Modint, QuadraticTwist) {
    EXPECT_EQ(quadratic_twist(5).value, 1u);
    EXPECT_EQ(quadratic_twist(7).value, 6u);
}
