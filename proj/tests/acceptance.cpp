// Acceptance checks: one PASS/FAIL line per criterion.
// Exit status: 0 when every check ran (add --strict to fail on any FAIL line).

#include "fmzv/experiments.hpp"

#include <chrono>
#include <cstring>
#include <iostream>
#include <random>
#include <sstream>

using namespace fmzv;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Line {
    int id;
    std::string title;
    bool pass = false;
    std::string detail;
};

std::vector<Line> lines;
std::vector<std::string> info;

void report(int id, std::string title, bool pass, std::string detail) {
    std::cout << (pass ? "PASS" : "FAIL") << "  " << id << ". " << title << ": " << detail << std::endl;
    lines.push_back({id, std::move(title), pass, std::move(detail)});
}

void note(const std::string& s) { std::cout << "      " << s << std::endl; }

std::string secs(double s) {
    std::ostringstream o;
    o.precision(s < 10 ? 2 : 0);
    o << std::fixed << s << " s";
    return o.str();
}

// 1 ---------------------------------------------------------------------------
void oracle_equivalence() {
    auto t0 = Clock::now();
    std::size_t cases = 0, bad = 0;
    for (u32 p : primes_in_range(5, 31))
        for (int w = 1; w <= 4; ++w)
            for (Family f : {Family::ES, Family::T, Family::S, Family::AT})
                for (auto& c : enumerate_compositions(w, f, family_allows_signs(f))) {
                    ++cases;
                    if (eval_comp(p, c) != eval_comp_bruteforce(p, c)) ++bad;
                }
    double s = since(t0);
    report(1, "evaluator equals nested loops (weight <= 4, all families, 3 < p <= 31)", bad == 0 && s < 60,
           std::to_string(cases) + " cases, " + std::to_string(bad) + " mismatches, " + secs(s));
}

// audit helpers ---------------------------------------------------------------
std::string tally(const AuditReport& r) {
    return std::to_string(r.count(Status::Verified)) + " verified, " + std::to_string(r.count(Status::SuspectedTypo)) +
           " suspected-typo, " + std::to_string(r.count(Status::Failed)) + " failed (primes " + std::to_string(r.lo) +
           ".." + std::to_string(r.hi) + ")";
}

bool all_verified(const AuditReport& r) { return r.count(Status::Verified) == r.items.size(); }

const IdentityResult* find(const AuditReport& r, const std::string& id) {
    for (auto& i : r.items)
        if (i.id == id) return &i;
    return nullptr;
}

// 2 ---------------------------------------------------------------------------
void t_ones() {
    auto r = audit("t-ones", 3u, 500u);
    std::vector<std::string> raw;
    for (int d = 2; d <= 4; ++d) {
        u32 p = 2 * d + 1;
        if (!is_prime(p)) continue;
        auto v = eval_comp(p, parse_composition("T:" + ones(2 * d)));
        if (!v.is_zero()) raw.push_back("p=" + std::to_string(p) + " gives " + std::to_string(v.value));
    }
    report(2, "T({1}^2d) = 0 for d <= 4", all_verified(r), tally(r) + ", each symbol on its domain p > 2d+2");
    if (!raw.empty()) {
        std::string s = "outside the domain the raw sums T({1}^2d) at p = 2d+1 do not vanish:";
        for (auto& x : raw) s += " " + x;
        note(s);
    }
}

// 3 ---------------------------------------------------------------------------
void trip() {
    auto r = audit("trip-fmtv", 5u, 500u);
    auto spot = eval_comp(7, parse_composition("T:1,1,1"));
    const auto* t = find(r, "T111");
    bool ok = t && t->status == Status::Verified && spot.value == 5;
    report(3, "T(1,1,1) = 3/16 beta3 for 5 <= p <= 500", ok,
           (t ? std::to_string(t->primes_checked) : std::string("0")) + " primes, T_7(1,1,1) = " +
               std::to_string(spot.value));
}

// 4 ---------------------------------------------------------------------------
void depth2() {
    auto r = audit("dbl-fmstv", 5u, 300u);
    report(4, "depth-two T and S at odd w <= 9 (w+2 < p <= 300)", all_verified(r), tally(r));
}

// 5 ---------------------------------------------------------------------------
void linear_shuffle() {
    auto r = audit("linear-shuffle", 5u, 200u);
    std::size_t t_items = 0, t_ok = 0, es_ok = 0, es_items = 0;
    for (auto& i : r.items) {
        bool is_t = i.id.rfind("LinShuffleT", 0) == 0;
        (is_t ? t_items : es_items)++;
        if (i.status == Status::Verified) (is_t ? t_ok : es_ok)++;
    }
    report(5, "200 random linear shuffle instances, weight <= 8, 5 <= p <= 200", t_items == 200 && t_ok == 200,
           std::to_string(t_ok) + "/" + std::to_string(t_items) + " T instances verified (plus " +
               std::to_string(es_ok) + "/" + std::to_string(es_items) + " Euler-sum instances)");
}

// 6 ---------------------------------------------------------------------------
void sum_formula() {
    auto r = audit("sum-formula", 5u, 200u);
    report(6, "sum formula, odd depth, weight <= 7, p <= 200", all_verified(r) && !r.items.empty(), tally(r));
}

// 7 ---------------------------------------------------------------------------
void homogeneous() {
    auto r = audit("homogeneous", 5u, 300u);
    auto e = homogeneous_closed_form(1, 6);
    auto expect = parse_expr("4/45*q2^6 + 3/4*q2*beta5 + 1/8*beta3^2 + 2/3*q2^3*beta3");
    bool coeffs = to_string(e) == to_string(expect);
    report(7, "zeta({s-bar}^d) closed forms (d <= 6, p <= 300) and the d = 6 coefficients",
           all_verified(r) && coeffs, tally(r) + ", zeta({-1}^6) = " + pretty(e));
}

// 8 ---------------------------------------------------------------------------
void alternating() {
    auto r1 = audit("alt-wt1", 5u, 300u);
    auto r2 = audit("alt-wt2", 5u, 300u);
    bool ok = all_verified(r2);
    for (auto& i : r1.items) {
        bool variant = i.id.find("halved") != std::string::npos;
        ok = ok && (variant ? i.status == Status::SuspectedTypo : i.status == Status::Verified);
    }
    report(8, "weight-one and weight-two alternating identities (5..300)", ok,
           "weight one: " + tally(r1) + "; weight two: " + tally(r2) +
               "; divisor p confirmed, the /2 quotient variant is a suspected typo");
}

// 9, 10, 13 ---------------------------------------------------------------------
std::string opt(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "?"; }

std::vector<DimReport> t_dims;

void dims_t(bool quick) {
    auto t0 = Clock::now();
    bool exact = true;
    std::string row;
    for (int w = 0; w <= 8; ++w) {
        auto d = dims(Family::T, w);
        t_dims.push_back(d);
        bool ok = d.lower && d.upper && d.paper && *d.lower == *d.paper && *d.upper == *d.paper;
        exact = exact && ok;
        row += (w ? "," : "") + opt(d.lower) + (ok ? "" : "/" + opt(d.upper));
    }
    double s8 = since(t0);
    bool bounds = true;
    std::vector<std::string> high;
    int top = quick ? 10 : 13;
    for (int w = 9; w <= top; ++w) {
        auto d = dims(Family::T, w);
        t_dims.push_back(d);
        bool ok = d.lower && d.upper && d.paper && *d.lower <= *d.paper && *d.paper <= *d.upper;
        bounds = bounds && ok;
        high.push_back("w=" + std::to_string(w) + ": " + opt(d.lower) + " <= " + opt(d.paper) + " <= " + opt(d.upper) +
                       (d.plateau ? "" : " (lattice truncated)") + ", " + secs(d.seconds));
    }
    report(9, "dims(T, w): lower = upper = table for w <= 8 within 10 min; lower <= table <= upper for 9 <= w <= " +
                  std::to_string(top),
           exact && s8 <= 600 && bounds, "w=0..8: " + row + " in " + secs(s8));
    for (auto& h : high) note(h);
}

void dims_at(bool quick) {
    const std::size_t expect[] = {2, 2, 6, 12};
    bool ok = true;
    std::string row;
    for (int w = 1; w <= 4; ++w) {
        auto d = dims(Family::AT, w);
        ok = ok && d.lower && *d.lower == expect[w - 1];
        row += (w > 1 ? "," : "") + opt(d.lower);
    }
    report(10, "dims(AT, w) lower bounds (2,2,6,12) for w = 1..4", ok, "computed " + row);
    if (quick) return;
    for (int w = 5; w <= 7; ++w) {
        auto d = dims(Family::AT, w);
        note("report only, AT w=" + std::to_string(w) + ": lower " + opt(d.lower) + ", table " + opt(d.paper) +
             (d.plateau ? "" : " (lattice truncated at the prime budget)") + ", " + secs(d.seconds));
    }
}

// 11 ---------------------------------------------------------------------------
void fes_basis() {
    auto r = audit("fes-basis", 5u, 300u);
    std::vector<std::string> low_bad, w6_bad;
    std::size_t low = 0, w6 = 0;
    for (auto& i : r.items) {
        if (i.id.rfind("span-", 0) == 0) continue;
        int w = i.id[1] - '0';
        if (w <= 5) {
            ++low;
            if (i.status != Status::Verified) low_bad.push_back(i.id);
        } else {
            ++w6;
            bool ok = i.status == Status::Verified ||
                      (i.status == Status::SuspectedTypo && i.fit_disjoint_ok && i.disjoint_primes >= 50);
            if (!ok) w6_bad.push_back(i.id);
        }
    }
    std::string d = std::to_string(low - low_bad.size()) + "/" + std::to_string(low) +
                    " weight <= 5 entries verify as printed; " + std::to_string(w6 - w6_bad.size()) + "/" +
                    std::to_string(w6) + " weight-6 entries verified or corrected";
    report(11, "Euler sum reduction list (w <= 5 exact, w = 6 exact or fitted)", low_bad.empty() && w6_bad.empty(),
           d);
    for (auto& id : low_bad) {
        const auto* i = find(r, id);
        note(id + " as printed: " + i->statement);
        note("  " + std::string(status_name(i->status)) + ", " +
             (i->reading.empty() ? "fitted " + fit_text(*i) : "reading " + i->reading));
    }
    for (auto& i : r.items)
        if (i.id.rfind("w6", 0) == 0 && i.status == Status::SuspectedTypo)
            note(i.id + " corrected: " + fit_text(i) + " (" + std::to_string(i.disjoint_primes) + " disjoint primes)");
}

// 12 ---------------------------------------------------------------------------
Word random_word(std::mt19937& rng, int max_len, bool signed_, bool admissible) {
    std::uniform_int_distribution<int> len(0, max_len), letter(0, signed_ ? 2 : 1);
    const char alphabet[] = {kE0, kEPlus, kEMinus};
    Word w;
    for (int i = 0, n = len(rng); i < n; ++i) w.push_back(alphabet[letter(rng)]);
    if (admissible && !w.empty() && w.back() == kE0) w.back() = kEPlus;
    return w;
}

long long binom(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void word_algebra() {
    std::mt19937 rng(7321);
    std::size_t failures = 0;
    const int n = 1000;
    for (int it = 0; it < n; ++it) {
        Word u = random_word(rng, 5, true, false), v = random_word(rng, 5, true, false),
             w = random_word(rng, 4, true, false);
        auto uv = shuffle(u, v);
        if (!(uv == shuffle(v, u))) ++failures;
        if (!(shuffle(uv, WordComb(w)) == shuffle(WordComb(u), shuffle(v, w)))) ++failures;
        long long count = 0;
        for (auto& [x, c] : shuffle_int(u, v)) count += c;
        if (count != binom(static_cast<int>(u.size() + v.size()), static_cast<int>(u.size()))) ++failures;
        Word t = random_word(rng, 8, false, true);
        int s1 = 0, s2 = 0;
        if (tau(tau(t, s1), s2) != t || s1 * s2 != 1) ++failures;
        if (word_depth(tau(t, s1)) != word_depth(t) || word_weight(tau(t, s1)) != word_weight(t)) ++failures;
        Word a = random_word(rng, 8, true, true);
        if (!a.empty() && comp_to_word(word_to_comp(a)) != a) ++failures;
        if (!a.empty()) {
            auto c = word_to_comp(a);
            if (word_to_comp(comp_to_word(c)) != c) ++failures;
        }
    }
    report(12, "shuffle, tau and p/q properties on random words", failures == 0,
           std::to_string(n) + " cases, " + std::to_string(failures) + " failures");
}

// 13 ---------------------------------------------------------------------------
void monitors() {
    std::vector<MonitorReport> reps;
    try {
        reps.push_back(monitor_t21());
        reps.push_back(monitor_t_ones_odd());
        reps.push_back(monitor_s_ones_even());
        reps.push_back(monitor_fes_dims(7));
        reps.push_back(monitor_fmt_recurrence(t_dims));
    } catch (const std::exception& e) {
        report(13, "conjecture monitors run", false, std::string("threw: ") + e.what());
        return;
    }
    std::string d;
    for (auto& m : reps) {
        std::size_t h = 0;
        for (auto& i : m.items) h += i.holds;
        d += (d.empty() ? "" : ", ") + m.name + " " + std::to_string(h) + "/" + std::to_string(m.items.size());
    }
    report(13, "conjecture monitors run (report only)", true, d + " hold");
    for (auto& m : reps)
        for (auto& i : m.items)
            if (!i.holds) note(m.name + " " + i.id + ": " + i.statement + " (" + i.detail + ")");
}

}  // namespace

int main(int argc, char** argv) {
    bool strict = false, quick = false;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--strict")) strict = true;
        else if (!std::strcmp(argv[i], "--quick")) quick = true;
        else {
            std::cerr << "usage: fmzv_acceptance [--strict] [--quick]\n";
            return 2;
        }
    }
    auto t0 = Clock::now();
    try {
        oracle_equivalence();
        t_ones();
        trip();
        depth2();
        linear_shuffle();
        sum_formula();
        homogeneous();
        alternating();
        dims_t(quick);
        dims_at(quick);
        fes_basis();
        word_algebra();
        monitors();
    } catch (const std::exception& e) {
        std::cout << "ERROR " << e.what() << std::endl;
        return 1;
    }
    std::size_t passed = 0;
    for (auto& l : lines) passed += l.pass;
    std::cout << passed << "/" << lines.size() << " criteria passed in " << secs(since(t0)) << std::endl;
    if (lines.size() != 13) return 1;
    return strict && passed != lines.size() ? 1 : 0;
}
