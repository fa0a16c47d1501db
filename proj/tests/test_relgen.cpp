#include "fmzv/evaluator.hpp"
#include "fmzv/relgen.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace fmzv;

namespace {

Composition C(const char* s) { return parse_composition(s); }

// Checks r == 0 at every admissible prime in [lo, hi].
::testing::AssertionResult vanishes(const Relation& r, u32 lo = 5, u32 hi = 300) {
    u32 start = std::max(lo, r.expr.min_prime());
    for (u32 p : admissible_primes(start, hi, r.expr.max_weight())) {
        auto v = eval_expr(p, r.expr);
        if (!v) continue;
        if (!v->is_zero()) return ::testing::AssertionFailure() << to_string(r) << " fails at p=" << p;
    }
    return ::testing::AssertionSuccess();
}

// True when a and b agree up to a nonzero rational factor.
bool proportional(const Expr& a, const Expr& b) {
    if (a.terms.size() != b.terms.size() || a.empty()) return false;
    auto ia = a.terms.begin();
    auto ib = b.terms.find(ia->first);
    if (ib == b.terms.end() || ia->second.twisted() || ib->second.twisted()) return false;
    mpq_class f = ia->second.a / ib->second.a;
    return to_string(a) == to_string(b * TwistedCoeff(f));
}

Expr es(std::initializer_list<std::pair<const char*, int>> terms) {
    Expr e;
    for (auto& [s, c] : terms) e.add(Atom(C(s)), c);
    return e;
}

Word random_word(std::mt19937& rng, int weight, bool signed_) {
    if (weight == 0) return {};
    Word w;
    for (int i = 0; i + 1 < weight; ++i) w.push_back(rng() % 2 ? kE0 : (signed_ && rng() % 2 ? kEMinus : kEPlus));
    w.push_back(signed_ && rng() % 2 ? kEMinus : kEPlus);
    return w;
}

}  // namespace

TEST(Relgen, EulerSumShuffleExamples) {
    auto r1 = gen_linear_shuffle_ES(1, "", "--");
    EXPECT_TRUE(proportional(r1.expr, es({{"ES:1,-1,1", 2}, {"ES:-1,-1,-1", 1}, {"ES:-1,1,-1", 1}})));
    auto r2 = gen_linear_shuffle_ES(1, "", "0-+");
    EXPECT_TRUE(proportional(r2.expr, es({{"ES:1,-2,-1", 2}, {"ES:2,-1,-1", 1}, {"ES:-2,-1,1", 2}})));
    auto r3 = gen_linear_shuffle_ES(1, "", "0--");
    EXPECT_TRUE(proportional(r3.expr, es({{"ES:1,-2,1", 2}, {"ES:2,-1,1", 1}, {"ES:-2,-1,-1", 1}, {"ES:-2,1,-1", 1}})));
    auto r4 = gen_linear_shuffle_ES(1, "", "+0--");
    EXPECT_TRUE(proportional(r4.expr, es({{"ES:1,1,-2,1", 3}, {"ES:1,2,-1,1", 1}, {"ES:1,-2,-1,-1", 1}, {"ES:1,-2,1,-1", 1}})));
    auto r5 = gen_linear_shuffle_ES(1, "", "----");
    EXPECT_TRUE(proportional(r5.expr, es({{"ES:1,-1,1,1,1", 2},
                                          {"ES:-1,-1,-1,1,1", 1},
                                          {"ES:-1,1,-1,-1,1", 1},
                                          {"ES:-1,1,1,-1,-1", 1},
                                          {"ES:-1,1,1,1,-1", 1}})));
    for (auto* r : {&r1, &r2, &r3, &r4, &r5}) EXPECT_TRUE(vanishes(*r));
}

TEST(Relgen, EulerSumShuffleWithLongerBlock) {
    // (e0 e+) sh v = (e0 e+ v): the printed instances carry an extra 2*zeta(e0 e+ v)
    auto r = gen_linear_shuffle_ES(2, "", "-+");
    EXPECT_TRUE(proportional(r.expr, es({{"ES:-2,-1,1", 2}, {"ES:-1,-2,1", 2}, {"ES:-1,-1,2", 1}})));
    EXPECT_TRUE(vanishes(r));
    Relation printed = r;
    printed.expr.add(Atom(C("ES:2,-1,-1")), 2);
    EXPECT_FALSE(vanishes(printed, 11, 11));
    auto r2 = gen_linear_shuffle_ES(2, "", "+-");
    EXPECT_TRUE(proportional(
        r2.expr, es({{"ES:2,1,-1", 1}, {"ES:2,-1,-1", 1}, {"ES:1,-2,-1", 1}, {"ES:1,2,-1", 1}, {"ES:1,-1,-2", 1}})));
    EXPECT_TRUE(vanishes(r2));
}

TEST(Relgen, ReversalExamples) {
    auto r = gen_reversal(C("T:2,1"));
    EXPECT_EQ(to_string(r.expr), "1/1*T:1,2;1/1*T:2,1");
    EXPECT_EQ(eval_comp(5, C("T:2,1")).value, 2u);
    EXPECT_EQ(eval_comp(5, C("T:1,2")).value, 3u);
    auto odd = gen_reversal(C("T:1"));
    EXPECT_EQ(to_string(odd.expr), "1/1*T:1;1/1*S:1");
    EXPECT_TRUE(gen_reversal(C("T:1,2,2,1")).trivial());
    EXPECT_TRUE(vanishes(odd));
}

TEST(Relgen, AltReversal) {
    EXPECT_THROW(gen_alt_reversal(C("AT:1,-1,1")), InvalidInput);
    auto r = gen_alt_reversal(C("AT:1,-1"));
    EXPECT_TRUE(r.expr.twisted());
    EXPECT_TRUE(vanishes(r, 5, 13));
    for (auto& rr : inventory_alt_reversal(4)) EXPECT_TRUE(vanishes(rr, 5, 100));
    auto plain = gen_alt_reversal(C("AT:1,3"));
    EXPECT_FALSE(plain.expr.twisted());
}

TEST(Relgen, LinearShuffleTExamples) {
    // s=1, u empty, v=+++: 5 T(1,1,1,1) = 0
    auto r = gen_linear_shuffle_T(1, "", "+++");
    ASSERT_EQ(r.expr.terms.size(), 1u);
    EXPECT_EQ(to_string(r.expr), "5/1*T:1,1,1,1");
    EXPECT_THROW(gen_linear_shuffle_T(1, "+", "+"), InvalidInput);
    EXPECT_THROW(gen_linear_shuffle_T(1, "-", ""), InvalidInput);
    EXPECT_TRUE(vanishes(gen_linear_shuffle_T(1, "", "-0++"), 5, 200));
}

TEST(Relgen, RandomLinearShuffleT) {
    std::mt19937 rng(2024);
    int made = 0;
    while (made < 60) {
        int s = 1 + rng() % 3;
        int a = rng() % 3, b = rng() % 4;
        if (s + a + b > 7) continue;
        Word u = random_word(rng, a, false), v = random_word(rng, b, true);
        if ((word_depth(u) + word_depth(v)) % 2 == 0) continue;
        ASSERT_TRUE(vanishes(gen_linear_shuffle_T(s, u, v), 5, 150));
        ++made;
    }
}

TEST(Relgen, SumFormula) {
    EXPECT_EQ(to_string(gen_sum_formula(C("T:1")).expr), "3/1*T:1,1");
    EXPECT_THROW(gen_sum_formula(C("T:1,1")), InvalidInput);
    for (int w = 1; w <= 6; ++w)
        for (auto& c : enumerate_compositions(w, Family::T))
            if (c.depth() % 2) {
                EXPECT_TRUE(vanishes(gen_sum_formula(c), 5, 200));
            }
    // s = {1}^{2d-1} gives T({1}^{2d}) alone
    auto r = gen_sum_formula(C("T:1,1,1"));
    EXPECT_EQ(r.expr.terms.size(), 1u);
}

TEST(Relgen, HomogeneousClosedForm) {
    EXPECT_EQ(to_string(homogeneous_closed_form(1, 1)), "-2/1*q2");
    EXPECT_TRUE(homogeneous_closed_form(2, 4).empty());
    Expr six = homogeneous_closed_form(1, 6);
    Expr expect;
    expect.add(Atom(Monomial::q2(6)), TwistedCoeff(mpq_class(4, 45)));
    expect.add(Atom(Monomial::q2() * Monomial::beta(5)), TwistedCoeff(mpq_class(3, 4)));
    expect.add(Atom(Monomial::beta(3, 2)), TwistedCoeff(mpq_class(1, 8)));
    expect.add(Atom(Monomial::q2(3) * Monomial::beta(3)), TwistedCoeff(mpq_class(2, 3)));
    EXPECT_EQ(to_string(six), to_string(expect));
    for (int s = 1; s <= 3; ++s)
        for (int d = 1; d <= 6; ++d) EXPECT_TRUE(vanishes(gen_homogeneous(s, d))) << s << " " << d;
}

TEST(Relgen, DepthOneTwo) {
    EXPECT_EQ(to_string(gen_depth1(Family::T, 1).expr), "1/1*T:1;-1/1*q2");
    EXPECT_EQ(to_string(gen_depth1(Family::T, 3).expr), "1/1*T:3;-3/4*beta3");
    EXPECT_EQ(to_string(gen_depth2(Family::T, 1, 2).expr), "1/1*T:1,2;21/16*beta3");
    for (int w = 1; w <= 9; ++w)
        for (auto& r : gen_depth12(w)) EXPECT_TRUE(vanishes(r));
}

TEST(Relgen, StructuralInventoryVanishes) {
    for (int w = 1; w <= 6; ++w) {
        for (auto& r : inventory_T_structural(w)) ASSERT_TRUE(vanishes(r, 5, 120));
        for (auto& r : inventory_linear_shuffle_T(w, w <= 4)) ASSERT_TRUE(vanishes(r, 5, 60));
    }
    for (int w = 1; w <= 4; ++w) {
        for (auto& r : inventory_linear_shuffle_ES(w)) ASSERT_TRUE(vanishes(r, 5, 60));
        for (auto& c : enumerate_compositions(w, Family::ES, true)) ASSERT_TRUE(vanishes(gen_es_reversal(c), 5, 60));
    }
}

TEST(Relgen, VariantsAddNoRank) {
    for (int w = 2; w <= 6; ++w) {
        RelationSystem base(enumerate_compositions(w, Family::T));
        base.add_all(inventory_linear_shuffle_T(w, false));
        auto r0 = rank_q(base.matrix().specialize(1));
        RelationSystem more = base;
        for (int a = 1; a <= w; ++a)
            for (auto& u : admissible_words(a, false))
                for (auto& v : admissible_words(w - a, false))
                    if ((word_depth(u) + word_depth(v)) % 2 == 0) more.add(gen_linear_shuffle_T_i(u, v));
        for (int k = 1; k < w; ++k)
            for (int a = 0; k + a <= w; ++a)
                for (auto& x : admissible_words(k, false))
                    for (auto& u : admissible_words(a, false))
                        for (auto& v : admissible_words(w - k - a, false))
                            if ((word_depth(u) + word_depth(v) + word_depth(x)) % 2 == 0)
                                more.add(gen_linear_shuffle_T_ii(x, u, v));
        EXPECT_EQ(more.columns.size(), base.columns.size());
        EXPECT_EQ(rank_q(more.matrix().specialize(1)), r0) << "w=" << w;
    }
}

TEST(Relgen, VariantsVanish) {
    EXPECT_TRUE(vanishes(gen_linear_shuffle_T_i("+", "+"), 5, 100));
    EXPECT_TRUE(vanishes(gen_linear_shuffle_T_i("0+", "0+-+"), 5, 100));
    EXPECT_TRUE(vanishes(gen_linear_shuffle_T_ii("+", "0+", "++"), 5, 100));
    EXPECT_THROW(gen_linear_shuffle_T_i("+", "++"), InvalidInput);
}

TEST(Relgen, SystemAndExport) {
    RelationSystem sys(enumerate_compositions(3, Family::T));
    sys.add_all(gen_depth12(3));
    sys.add(gen_reversal(C("T:1,1,1")));
    EXPECT_EQ(sys.columns.size(), 4u + 4u + 1u);  // T, S symbols and beta3
    std::vector<Atom> targets;
    for (auto& c : enumerate_compositions(3, Family::T)) targets.push_back(Atom(c));
    EXPECT_EQ(sys.span_dim(targets, 1), 2u);  // beta3-multiples and T(1,1,1)
    std::ostringstream out;
    sys.write(out);
    EXPECT_NE(out.str().find("Depth1(T:3)\t1/1*T:3;-3/4*beta3\n"), std::string::npos);
}
