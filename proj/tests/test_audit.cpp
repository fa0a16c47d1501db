#include "fmzv/audit.hpp"

#include <gtest/gtest.h>

using namespace fmzv;

namespace {

// Nested-loop zeta(-1,2) mod p: sum over p > n1 > n2 > 0 of (-1)^n1 / (n1 n2^2).
u64 brute_es_m1_2(u32 p) {
    u64 s = 0;
    for (u32 n1 = 2; n1 < p; ++n1)
        for (u32 n2 = 1; n2 < n1; ++n2) {
            u64 d = mulmod(n1, mulmod(n2, n2, p), p);
            u64 x = invmod(d, p);
            s = (s + (n1 % 2 ? p - x : x)) % p;
        }
    return s;
}

}  // namespace

TEST(ParseExpr, TermsAndPowers) {
    auto e = parse_expr("3/16*beta3 - q2^2*T:1,2 + 2*ES:-1,2");
    EXPECT_EQ(e.terms.size(), 3u);
    EXPECT_EQ(pretty(e), pretty(parse_expr("2*ES:-1,2 + 3/16*beta3 - T:1,2*q2^2")));
    EXPECT_EQ(pretty(parse_expr("-2*q2")), "-2*q2");
    EXPECT_EQ(pretty(parse_expr("q2 - q2")), "0");
    EXPECT_EQ(pretty(parse_expr("t*G")), "t*G");
}

TEST(ParseExpr, ErrorsCarryPosition) {
    auto pos = [](const char* s) -> std::size_t {
        try {
            parse_expr(s);
        } catch (const ParseError& e) {
            return e.position;
        }
        return std::string::npos;
    };
    EXPECT_EQ(pos("3/0*q2"), 0u);
    EXPECT_EQ(pos("q2 + foo"), 5u);
    EXPECT_NE(pos("q2 +"), std::string::npos);
    EXPECT_NE(pos("T:1,,2"), std::string::npos);
}

TEST(Fit, RecoversKnownCoefficient) {
    auto r = fit_combination(parse_expr("T:1,1,1"), {parse_expr("beta3")}, 5, 300);
    ASSERT_TRUE(r.ok);
    EXPECT_EQ(r.coeffs[0], mpq_class(3, 16));
}

TEST(Fit, EulerSumAgainstNestedLoops) {
    for (u32 p : {7u, 11u, 13u, 29u}) {
        auto v = eval_expr(p, parse_expr("ES:-1,2"));
        ASSERT_TRUE(v);
        EXPECT_EQ(static_cast<u64>(v->value), brute_es_m1_2(p)) << p;
    }
    auto r = fit_combination(parse_expr("ES:-1,2"), {parse_expr("beta3"), parse_expr("q2^3")}, 5, 300);
    ASSERT_TRUE(r.ok);
    EXPECT_EQ(r.coeffs[0], mpq_class(3, 4));
    EXPECT_EQ(r.coeffs[1], 0);
}

TEST(Fit, ReportsMissingRelation) {
    auto r = fit_combination(parse_expr("ES:1,-3"), {parse_expr("q2*beta3")}, 5, 300);
    EXPECT_FALSE(r.ok);
}

TEST(Fit, NeedsEnoughPrimes) {
    EXPECT_THROW(fit_combination(parse_expr("T:1,1,1"), {parse_expr("beta3")}, 5, 20), InvalidInput);
}

TEST(AuditIdentity, VerifiedClaim) {
    Identity id;
    id.id = "T111";
    id.subject = term("T:1,1,1");
    id.basis = {term("beta3")};
    id.claimed = {mpq_class(3, 16)};
    id.floor = 3;
    auto r = audit_identity(id, 5, 300);
    EXPECT_EQ(r.status, Status::Verified);
    EXPECT_EQ(r.primes_checked, 60u);
    EXPECT_EQ(r.statement, "T:1,1,1 = 3/16*beta3");
}

TEST(AuditIdentity, WrongCoefficientIsFitted) {
    Identity id;
    id.id = "T111-wrong";
    id.subject = term("T:1,1,1");
    id.basis = {term("beta3")};
    id.claimed = {mpq_class(1, 16)};
    auto r = audit_identity(id, 5, 300);
    EXPECT_EQ(r.status, Status::SuspectedTypo);
    EXPECT_GE(r.failure_count, 3u);
    EXPECT_TRUE(r.fit_disjoint_ok);
    EXPECT_EQ(r.disjoint_primes, 50u);
    EXPECT_EQ(fit_text(r), "3/16*beta3");
}

TEST(AuditIdentity, ReadingWins) {
    Identity id;
    id.id = "misprint";
    id.subject = term("ES:-1,1");
    id.basis = {term("q2")};
    id.claimed = {mpq_class(-2)};
    Identity alt = id;
    alt.subject = term("ES:-1");
    id.readings = {alt};
    auto r = audit_identity(id, 5, 300);
    EXPECT_EQ(r.status, Status::SuspectedTypo);
    EXPECT_EQ(r.reading, "ES:-1 = -2*q2");
}

TEST(AuditIdentity, UnfittableClaimFails) {
    Identity id;
    id.id = "bad";
    id.subject = term("ES:1,-3");
    id.basis = {term("q2^4")};
    id.claimed = {mpq_class(1)};
    auto r = audit_identity(id, 5, 300);
    EXPECT_EQ(r.status, Status::Failed);
}

TEST(AuditIdentity, TwistedClaim) {
    Identity id;
    id.id = "T(-1)";
    id.subject = term("AT:-1");
    id.basis = {term("q2")};
    id.claimed = {TwistedCoeff::twist(mpq_class(1, 2))};
    EXPECT_EQ(audit_identity(id, 5, 300).status, Status::Verified);
}

TEST(AuditIdentity, Membership) {
    Identity id;
    id.id = "span";
    id.subject = term("ES:-1,1,1");
    id.basis = {term("q2^3"), term("beta3")};
    id.membership = true;
    auto r = audit_identity(id, 5, 300);
    EXPECT_EQ(r.status, Status::Verified);
    EXPECT_EQ(fit_text(r), "-1/3*q2^3 - 7/8*beta3");
}

TEST(DisjointPrimes, AboveRange) {
    auto dp = disjoint_primes(300, 50, 3);
    ASSERT_EQ(dp.size(), 50u);
    EXPECT_GT(dp.front(), 300u);
    EXPECT_TRUE(std::is_sorted(dp.begin(), dp.end()));
}
