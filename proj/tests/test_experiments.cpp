#include "fmzv/experiments.hpp"

#include <gtest/gtest.h>

using namespace fmzv;

namespace {

const IdentityResult& item(const AuditReport& r, const std::string& id) {
    for (auto& i : r.items)
        if (i.id == id) return i;
    throw std::runtime_error("no item " + id);
}

}  // namespace

TEST(Suites, NamesAreUnique) {
    std::set<std::string> names;
    for (auto& s : audit_suites()) EXPECT_TRUE(names.insert(s.name).second) << s.name;
    EXPECT_EQ(names.size(), 14u);
    EXPECT_THROW(find_suite("nope"), InvalidInput);
}

TEST(Suites, ClosedFormsVerify) {
    for (const char* name : {"trip-fmtv", "t-ones", "alt-wt2", "wt3-fes", "dbl-fmstv", "depth1", "t121",
                             "homogeneous", "sum-formula", "reversal"}) {
        auto r = audit(name);
        EXPECT_EQ(r.count(Status::Verified), r.items.size()) << name;
    }
}

TEST(Suites, CustomRange) {
    auto r = audit("trip-fmtv", 5, 50);
    EXPECT_EQ(r.lo, 5u);
    EXPECT_EQ(r.hi, 50u);
    EXPECT_EQ(item(r, "T111").primes_checked, 13u);
    EXPECT_THROW(audit("trip-fmtv", 50, 10), InvalidInput);
}

TEST(Suites, HalvedQuotientIsATypo) {
    auto r = audit("alt-wt1");
    EXPECT_EQ(item(r, "S(-1)").status, Status::Verified);
    EXPECT_EQ(item(r, "T(-1)").status, Status::Verified);
    EXPECT_EQ(item(r, "S(-1)-halved-quotient").status, Status::SuspectedTypo);
    EXPECT_EQ(fit_text(item(r, "S(-1)-halved-quotient")), "-1/2*q2");
    EXPECT_EQ(fit_text(item(r, "T(-1)-halved-quotient")), "1/2*t*q2");
}

TEST(Suites, LinearShuffleSample) {
    auto r = audit("linear-shuffle");
    EXPECT_EQ(r.items.size(), 260u);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.count(Status::Verified), r.items.size());
}

TEST(Suites, EulerSumReductions) {
    auto r = audit("fes-basis");
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(item(r, "w1:Z(-1,1)").reading, "ES:-1 = -2*q2");
    EXPECT_EQ(fit_text(item(r, "w3:Z(1,-1,1)")), "2/3*q2^3 + 1/4*beta3");
    EXPECT_EQ(fit_text(item(r, "w4:Z(-1,2,1)")), "1/2*ES:1,-3 - 15/4*q2*beta3");
    EXPECT_EQ(item(r, "w4:Z(-1,1,2)").status, Status::Verified);
    EXPECT_EQ(item(r, "w5:Z(-1,2,1,1)").status, Status::Verified);
    EXPECT_EQ(item(r, "w5:Z(-1,1,1,1,1)").status, Status::SuspectedTypo);
    for (auto& i : r.items) {
        if (i.id.rfind("span-", 0) == 0) {
            EXPECT_EQ(i.status, Status::Verified) << i.id;
        }
    }
}

TEST(Suites, TEvaluations) {
    auto r = audit("fmt-eval");
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(item(r, "T(1,1,2)").status, Status::Verified);
    auto& t122 = item(r, "T(1,2,2)");
    EXPECT_EQ(t122.status, Status::SuspectedTypo);
    EXPECT_EQ(fit_text(t122), "3*ES:-1,1,1,2 + 27/8*q2^2*beta3 - 1605/256*beta5 + ES:-1,2,2");
    EXPECT_EQ(item(r, "span-w5:T:1,2,2").status, Status::SuspectedTypo);
    EXPECT_EQ(item(r, "span-w6:T:1,2,3").status, Status::Verified);
}

TEST(Table, Rows) {
    EXPECT_EQ(table_value("FMT", 8), 9u);
    EXPECT_EQ(table_value("MT", 13), 49u);
    EXPECT_EQ(table_value("FAMT", 4), 12u);
    EXPECT_FALSE(table_value("FAMT", 9));
    EXPECT_EQ(fibonacci(5), 8u);
}

TEST(Inventory, SmallWeights) {
    const std::size_t expect[] = {1, 0, 2, 4, 9, 19, 37, 75};
    for (int w = 1; w <= 8; ++w) {
        auto b = t_inventory_upper(w, random_word_primes(1)[0]);
        EXPECT_EQ(b.upper, expect[w - 1]) << w;
        EXPECT_TRUE(b.complete);
    }
    auto partial = t_inventory_upper(6, random_word_primes(1)[0], 5);
    EXPECT_FALSE(partial.complete);
    EXPECT_GE(partial.upper, 19u);
}

TEST(Dims, MultipleTValues) {
    auto d2 = dims(Family::T, 2);
    EXPECT_EQ(d2.lower, 0u);
    EXPECT_EQ(d2.upper, 0u);
    auto d3 = dims(Family::T, 3);
    EXPECT_EQ(d3.lower, 1u);
    EXPECT_EQ(d3.upper, 1u);
    EXPECT_EQ(d3.paper, 1u);
    EXPECT_TRUE(d3.consistent());
    auto d6 = dims(Family::T, 6);
    EXPECT_EQ(d6.lower, 3u);
    EXPECT_EQ(d6.upper, 3u);
    EXPECT_TRUE(d6.plateau);
    EXPECT_EQ(dims(Family::T, 0).upper, 0u);
    EXPECT_THROW(dims(Family::S, 2), InvalidInput);
}

TEST(Dims, AlternatingAndEuler) {
    auto a2 = dims(Family::AT, 2);
    EXPECT_EQ(a2.lower, 2u);
    EXPECT_GE(*a2.upper, 2u);
    auto e4 = dims(Family::ES, 4);
    EXPECT_EQ(e4.lower, 3u);
    EXPECT_EQ(e4.upper, 3u);
}

TEST(Monitors, Run) {
    for (auto& rep : {monitor_t21(5, 200), monitor_t_ones_odd(5, 200), monitor_s_ones_even(5, 200)}) {
        EXPECT_FALSE(rep.items.empty());
        for (auto& i : rep.items) EXPECT_TRUE(i.holds) << rep.name << " " << i.id << " " << i.detail;
    }
    auto fes = monitor_fes_dims(5);
    ASSERT_EQ(fes.items.size(), 5u);
    for (auto& i : fes.items) EXPECT_TRUE(i.holds) << i.id;
    std::vector<DimReport> computed;
    for (int w = 1; w <= 5; ++w) computed.push_back(dims(Family::T, w));
    auto rec = monitor_fmt_recurrence(computed);
    EXPECT_EQ(rec.items.size(), 6u);
    EXPECT_TRUE(rec.items[0].holds);
    EXPECT_TRUE(rec.items[1].holds);
}
