#pragma once

// Identity audits: terms evaluated per prime, exact congruence checks, and
// rational fits through integer relations on CRT-combined residues.

#include "fmzv/evaluator.hpp"
#include "fmzv/lattice.hpp"
#include "fmzv/relgen.hpp"

#include <gmpxx.h>

#include <cctype>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fmzv {

// ---------------------------------------------------------------------------
// expression text: terms joined by + or -, factors joined by *, factors are
// rationals, q2[^e], beta<k>[^e], G[^e], t, or canonical symbols.

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view s) : s_(s) {}

    Expr parse() {
        Expr e;
        skip();
        int sign = 1;
        if (peek() == '-' || peek() == '+') {
            sign = get() == '-' ? -1 : 1;
            skip();
        }
        e += term() * TwistedCoeff(sign);
        while (skip(), i_ < s_.size()) {
            char c = get();
            if (c != '+' && c != '-') throw ParseError("expected '+' or '-'", i_ - 1);
            e += term() * TwistedCoeff(c == '-' ? -1 : 1);
        }
        return e;
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;

    char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
    char get() { return s_[i_++]; }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool digit() const { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }

    long long number() {
        std::size_t start = i_;
        if (!digit()) throw ParseError("expected a number", i_);
        long long v = 0;
        while (digit()) {
            v = v * 10 + (get() - '0');
            if (v > 1000000000000LL) throw ParseError("number too large", start);
        }
        return v;
    }

    int exponent() {
        if (peek() != '^') return 1;
        ++i_;
        long long e = number();
        if (e < 1 || e > 64) throw ParseError("bad exponent", i_);
        return static_cast<int>(e);
    }

    Expr term() {
        skip();
        TwistedCoeff coeff = 1;
        Monomial mono;
        std::optional<Composition> comp;
        while (true) {
            skip();
            std::size_t start = i_;
            if (digit()) {
                mpz_class num(static_cast<long>(number()));
                mpz_class den = 1;
                if (peek() == '/') {
                    ++i_;
                    den = static_cast<long>(number());
                    if (den == 0) throw ParseError("zero denominator", start);
                }
                mpq_class q(num, den);
                q.canonicalize();
                coeff = coeff * TwistedCoeff(q);
            } else if (std::isalpha(static_cast<unsigned char>(peek()))) {
                std::size_t j = i_;
                while (j < s_.size() && std::isalnum(static_cast<unsigned char>(s_[j]))) ++j;
                std::string word(s_.substr(i_, j - i_));
                if (j < s_.size() && s_[j] == ':') {
                    std::size_t k = j + 1;
                    while (k < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[k])) || s_[k] == ',' ||
                                             (s_[k] == '-' && (s_[k - 1] == ':' || s_[k - 1] == ',')))) ++k;
                    if (comp) throw ParseError("two symbols in one term", start);
                    try {
                        comp = parse_composition(s_.substr(i_, k - i_));
                    } catch (const ParseError& e) {
                        throw ParseError("bad symbol", start + e.position);
                    }
                    i_ = k;
                } else if (word == "t") {
                    i_ = j;
                    coeff = coeff * TwistedCoeff::twist(1);
                } else if (word == "q2") {
                    i_ = j;
                    mono = mono * Monomial::q2(exponent());
                } else if (word == "G") {
                    i_ = j;
                    mono = mono * Monomial::catalan(exponent());
                } else if (word.rfind("beta", 0) == 0 && word.size() > 4) {
                    i_ += 4;
                    long long k = number();
                    if (k < 3 || k % 2 == 0 || k > 999) throw ParseError("beta index must be odd and >= 3", start);
                    mono = mono * Monomial::beta(static_cast<int>(k), exponent());
                } else {
                    throw ParseError("unknown factor '" + word + "'", start);
                }
            } else {
                throw ParseError("expected a factor", start);
            }
            skip();
            if (peek() != '*') break;
            ++i_;
        }
        Atom a = comp ? Atom(mono, *comp) : Atom(mono);
        return Expr(a, coeff);
    }
};

}  // namespace detail

inline Expr parse_expr(std::string_view text) {
    if (text.find_first_not_of(" \t") == std::string_view::npos) throw ParseError("empty expression", 0);
    return detail::ExprParser(text).parse();
}

namespace detail {

/// "c1*x1 + c2*x2 - ...", unit coefficients dropped, twisted ones in parentheses.
inline std::string linear_text(const std::vector<std::pair<TwistedCoeff, std::string>>& terms) {
    std::string out;
    for (auto& [c, name] : terms) {
        if (c.is_zero()) continue;
        bool neg = c.b == 0 ? c.a < 0 : c.a == 0 && c.b < 0;
        std::string k;
        if (c.b == 0) {
            mpq_class a = abs(c.a);
            if (a != 1) k = a.get_str();
        } else if (c.a == 0) {
            mpq_class b = abs(c.b);
            k = b == 1 ? "t" : b.get_str() + "*t";
        } else {
            k = "(" + c.a.get_str() + (c.b < 0 ? "" : "+") + c.b.get_str() + "*t)";
        }
        std::string t = k.empty() ? name : k + "*" + name;
        if (out.empty()) out = neg ? "-" + t : t;
        else out += (neg ? " - " : " + ") + t;
    }
    return out.empty() ? "0" : out;
}

}  // namespace detail

/// Readable text of an expression.
inline std::string pretty(const Expr& e) {
    std::vector<std::pair<TwistedCoeff, std::string>> terms;
    for (auto& [a, c] : e.terms) terms.emplace_back(c, to_string(a));
    return detail::linear_text(terms);
}

// ---------------------------------------------------------------------------
// terms

struct Term {
    std::string name;
    std::function<std::optional<Residue>(PrimeContext&)> eval;
    u32 domain = 3;  // smallest prime where the value is defined
    int weight = 0;
};

/// Smallest prime where every constant of e is defined.
inline u32 constant_domain(const Expr& e) {
    u32 lo = 3;
    for (auto& [a, c] : e.terms) lo = std::max(lo, a.mono.min_prime());
    return lo;
}

inline Term term(const Expr& e, std::string name = {}) {
    Term t;
    t.name = name.empty() ? pretty(e) : std::move(name);
    t.eval = [e](PrimeContext& ctx) { return eval_expr(ctx, e); };
    t.domain = constant_domain(e);
    t.weight = e.max_weight();
    return t;
}

inline Term term(std::string_view text) { return term(parse_expr(text)); }

inline Term twisted(const Term& x) {
    Term t = x;
    t.name = "t*" + x.name;
    auto f = x.eval;
    t.eval = [f](PrimeContext& ctx) -> std::optional<Residue> {
        auto v = f(ctx);
        if (!v) return std::nullopt;
        return *v * quadratic_twist(ctx.prime());
    };
    return t;
}

/// values[i][k] of term i at primes[k]; nullopt where undefined.
inline std::vector<std::vector<std::optional<u32>>> term_values(const std::vector<Term>& terms,
                                                                const std::vector<u32>& primes, int workers = 1) {
    std::vector<std::vector<std::optional<u32>>> out(terms.size(), std::vector<std::optional<u32>>(primes.size()));
    parallel_for(primes.size(), workers, [&](std::size_t k) {
        PrimeContext ctx(primes[k]);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (primes[k] < terms[i].domain) continue;
            if (auto v = terms[i].eval(ctx)) out[i][k] = v->value;
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// fitting

struct FitResult {
    bool ok = false;
    std::vector<mpq_class> coeffs;      // target == sum coeffs[i] * basis[i]
    std::optional<u32> violating_prime;
    std::size_t primes_checked = 0;
};

/// Rational c with target == sum c_i basis_i at every listed prime.
inline FitResult fit_values(const std::vector<u32>& target, const std::vector<std::vector<u32>>& basis,
                            const std::vector<u32>& primes) {
    if (primes.size() < basis.size() + 8)
        throw InvalidInput("fit needs at least " + std::to_string(basis.size() + 8) + " primes, got " +
                           std::to_string(primes.size()));
    FitResult out;
    out.primes_checked = primes.size();
    out.coeffs.assign(basis.size(), 0);
    auto residual_fails = [&](const std::vector<mpq_class>& c) -> std::optional<u32> {
        for (std::size_t t = 0; t < primes.size(); ++t) {
            const u32 p = primes[t];
            bool defined = true;
            u64 s = target[t];
            for (std::size_t i = 0; i < basis.size() && defined; ++i) {
                if (c[i] == 0) continue;
                if (c[i].get_den() % p == 0) defined = false;
                else s = (s + p - mulmod(reduce_rational(c[i], p), basis[i][t], p)) % p;
            }
            if (!defined || s != 0) return p;
        }
        return std::nullopt;
    };
    std::vector<std::vector<u32>> rows = basis;
    rows.push_back(target);
    auto lr = lattice_rank(rows, primes);
    const std::size_t ti = basis.size();
    for (auto& [i, rel] : lr.relations) {
        if (i != ti) continue;
        // rel = coefficients on the basis indices in order, then the target
        if (rel.size() == 1) {
            out.ok = true;
            return out;
        }
        std::vector<std::size_t> idx;
        for (auto j : lr.basis)
            if (j < ti) idx.push_back(j);
        mpq_class last(rel.back());
        for (std::size_t m = 0; m < idx.size(); ++m) {
            mpq_class q(rel[m]);
            q = -q / last;
            q.canonicalize();
            out.coeffs[idx[m]] = q;
        }
        out.violating_prime = residual_fails(out.coeffs);
        out.ok = !out.violating_prime;
        return out;
    }
    // no relation at the full set: report where a prefix candidate breaks
    for (std::size_t n = basis.size() + 8; n < primes.size(); n *= 2) {
        std::vector<u32> sub(primes.begin(), primes.begin() + static_cast<std::ptrdiff_t>(n));
        std::vector<std::vector<u32>> r2;
        for (auto& r : rows) r2.emplace_back(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n));
        auto sub_fit = lattice_rank(r2, sub);
        for (auto& [i, rel] : sub_fit.relations) {
            if (i != ti || rel.size() == 1) continue;
            std::vector<std::size_t> idx;
            for (auto j : sub_fit.basis)
                if (j < ti) idx.push_back(j);
            std::vector<mpq_class> c(basis.size(), 0);
            mpq_class last(rel.back());
            for (std::size_t m = 0; m < idx.size(); ++m) {
                c[idx[m]] = -mpq_class(rel[m]) / last;
                c[idx[m]].canonicalize();
            }
            out.violating_prime = residual_fails(c);
            return out;
        }
    }
    return out;
}

/// Fit over the primes in [lo, hi] with p > weight + 2 where every term is defined.
inline FitResult fit_terms(const Term& target, const std::vector<Term>& basis, u32 lo, u32 hi, int workers = 1) {
    int w = target.weight;
    u32 dom = target.domain;
    for (auto& b : basis) {
        w = std::max(w, b.weight);
        dom = std::max(dom, b.domain);
    }
    std::vector<u32> primes;
    for (u32 p : admissible_primes(std::max(lo, dom), hi, w)) primes.push_back(p);
    std::vector<Term> all = basis;
    all.push_back(target);
    auto vals = term_values(all, primes, workers);
    std::vector<u32> keep;
    std::vector<std::vector<u32>> rows(all.size());
    for (std::size_t k = 0; k < primes.size(); ++k) {
        bool ok = true;
        for (auto& r : vals) ok = ok && r[k].has_value();
        if (!ok) continue;
        keep.push_back(primes[k]);
        for (std::size_t i = 0; i < all.size(); ++i) rows[i].push_back(*vals[i][k]);
    }
    std::vector<u32> tgt = rows.back();
    rows.pop_back();
    return fit_values(tgt, rows, keep);
}

inline FitResult fit_combination(const Expr& target, const std::vector<Expr>& basis, u32 lo, u32 hi,
                                 int workers = 1) {
    std::vector<Term> b;
    for (auto& e : basis) b.push_back(term(e));
    return fit_terms(term(target), b, lo, hi, workers);
}

/// First `count` primes above `above` that are at least `domain`.
inline std::vector<u32> disjoint_primes(u32 above, std::size_t count, u32 domain = 3) {
    std::vector<u32> out;
    for (u64 p = std::max<u64>(above + 1, domain); out.size() < count; ++p)
        if (is_prime(p)) out.push_back(static_cast<u32>(p));
    return out;
}

// ---------------------------------------------------------------------------
// identities and reports

/// subject == sum claimed[i] * basis[i]. A membership identity has no claim:
/// it holds when subject lies in the span of the basis.
struct Identity {
    std::string id;
    Term subject;
    std::vector<Term> basis;
    std::vector<TwistedCoeff> claimed;
    std::vector<Term> extra;         // further fit candidates
    bool membership = false;
    u32 floor = 0;                   // checked primes satisfy p > floor (0: weight + 2)
    std::vector<Identity> readings;  // alternative readings of a garbled statement
    std::string note;
};

enum class Status { Verified, Failed, SuspectedTypo };

inline std::string_view status_name(Status s) {
    switch (s) {
        case Status::Verified: return "verified";
        case Status::Failed: return "failed";
        case Status::SuspectedTypo: return "suspected-typo";
    }
    return "?";
}

struct IdentityResult {
    std::string id;
    std::string statement;
    Status status = Status::Failed;
    std::size_t primes_checked = 0;
    std::vector<u32> failures;            // first few violating primes
    std::size_t failure_count = 0;
    std::string reading;                  // statement that verified instead, if any
    std::vector<std::string> fit_basis;
    std::vector<mpq_class> fitted;
    bool fit_disjoint_ok = false;
    std::size_t disjoint_primes = 0;
    std::string note;
};

struct AuditReport {
    std::string suite;
    u32 lo = 0, hi = 0;
    std::vector<IdentityResult> items;

    std::size_t count(Status s) const {
        return static_cast<std::size_t>(
            std::count_if(items.begin(), items.end(), [s](const IdentityResult& r) { return r.status == s; }));
    }
    bool ok() const { return count(Status::Failed) == 0; }
};

namespace detail {

inline std::string statement(const Identity& id) {
    std::string rhs;
    if (id.membership) {
        rhs = "span{";
        for (std::size_t i = 0; i < id.basis.size(); ++i) rhs += (i ? ", " : "") + id.basis[i].name;
        return id.subject.name + " in " + rhs + "}";
    }
    std::vector<std::pair<TwistedCoeff, std::string>> terms;
    for (std::size_t i = 0; i < id.basis.size(); ++i) terms.emplace_back(id.claimed[i], id.basis[i].name);
    return id.subject.name + " = " + linear_text(terms);
}

inline int identity_weight(const Identity& id) {
    int w = id.subject.weight;
    for (auto& b : id.basis) w = std::max(w, b.weight);
    return w;
}

inline u32 identity_domain(const Identity& id) {
    u32 d = id.subject.domain;
    for (auto& b : id.basis) d = std::max(d, b.domain);
    return d;
}

inline std::vector<u32> identity_primes(const Identity& id, u32 lo, u32 hi) {
    u32 floor = id.floor ? id.floor : static_cast<u32>(identity_weight(id)) + 2;
    std::vector<u32> out;
    for (u32 p : primes_in_range(std::max({lo, identity_domain(id), 3u}), hi))
        if (p > floor) out.push_back(p);
    return out;
}

/// Violating primes of subject - sum claimed * basis.
inline std::vector<u32> violations(const Identity& id, const std::vector<u32>& primes, int workers,
                                   std::size_t* checked = nullptr) {
    std::vector<Term> all{id.subject};
    all.insert(all.end(), id.basis.begin(), id.basis.end());
    auto vals = term_values(all, primes, workers);
    std::vector<u32> bad;
    std::size_t n = 0;
    for (std::size_t k = 0; k < primes.size(); ++k) {
        const u32 p = primes[k];
        bool defined = vals[0][k].has_value();
        u64 s = defined ? *vals[0][k] : 0;
        for (std::size_t i = 0; i < id.basis.size() && defined; ++i) {
            auto c = id.claimed[i].eval(p);
            if (!c || !vals[i + 1][k]) {
                defined = false;
                break;
            }
            s = (s + p - mulmod(c->value, *vals[i + 1][k], p)) % p;
        }
        if (!defined) continue;
        ++n;
        if (s) bad.push_back(p);
    }
    if (checked) *checked = n;
    return bad;
}

inline std::vector<Term> fit_candidates(const Identity& id) {
    std::vector<Term> out;
    std::set<std::string> seen;
    auto put = [&](const Term& t) {
        if (seen.insert(t.name).second) out.push_back(t);
    };
    bool tw = std::any_of(id.claimed.begin(), id.claimed.end(), [](const TwistedCoeff& c) { return c.twisted(); });
    for (auto& b : id.basis) {
        put(b);
        if (tw) put(twisted(b));
    }
    for (auto& m : monomials_of_weight(identity_weight(id))) {
        put(term(expr_of(m)));
        if (tw) put(twisted(term(expr_of(m))));
    }
    for (auto& b : id.extra) put(b);
    return out;
}

}  // namespace detail

/// Checks one identity on [lo, hi]; on failure at three or more primes tries
/// the listed readings, then a fit whose result is confirmed on 50 primes
/// above hi.
inline IdentityResult audit_identity(const Identity& id, u32 lo, u32 hi, int workers = 1) {
    IdentityResult r;
    r.id = id.id;
    r.statement = detail::statement(id);
    r.note = id.note;
    auto primes = detail::identity_primes(id, lo, hi);
    if (id.membership) {
        auto fit = fit_terms(id.subject, id.basis, std::max(lo, id.floor + 1), hi, workers);
        r.primes_checked = fit.primes_checked;
        for (auto& b : id.basis) r.fit_basis.push_back(b.name);
        r.fitted = fit.coeffs;
        if (fit.ok) {
            Identity chk = id;
            chk.membership = false;
            chk.claimed.clear();
            for (auto& c : fit.coeffs) chk.claimed.emplace_back(c);
            auto dp = disjoint_primes(hi, 50, detail::identity_domain(id));
            r.disjoint_primes = dp.size();
            r.fit_disjoint_ok = detail::violations(chk, dp, workers).empty();
        }
        r.status = fit.ok && r.fit_disjoint_ok ? Status::Verified : Status::Failed;
        if (!fit.ok && fit.violating_prime) r.failures = {*fit.violating_prime};
        r.failure_count = r.failures.size();
        if (r.status == Status::Verified) return r;
        for (auto& alt : id.readings) {
            auto ar = audit_identity(alt, lo, hi, workers);
            if (ar.status != Status::Verified) continue;
            r.status = Status::SuspectedTypo;
            r.reading = ar.statement;
            r.fit_basis = ar.fit_basis;
            r.fitted = ar.fitted;
            r.fit_disjoint_ok = true;
            r.disjoint_primes = ar.disjoint_primes;
            if (!alt.note.empty()) r.note += (r.note.empty() ? "" : "; ") + alt.note;
            return r;
        }
        return r;
    }
    auto bad = detail::violations(id, primes, workers, &r.primes_checked);
    r.failure_count = bad.size();
    if (bad.size() > 5) bad.resize(5);
    r.failures = bad;
    if (r.failure_count == 0) {
        r.status = Status::Verified;
        return r;
    }
    if (r.failure_count < 3) return r;
    for (auto& alt : id.readings) {
        if (!detail::violations(alt, detail::identity_primes(alt, lo, hi), workers).empty()) continue;
        auto dp = disjoint_primes(hi, 50, detail::identity_domain(alt));
        if (!detail::violations(alt, dp, workers).empty()) continue;
        r.status = Status::SuspectedTypo;
        r.reading = detail::statement(alt);
        if (!alt.note.empty()) r.note += (r.note.empty() ? "" : "; ") + alt.note;
        r.fit_disjoint_ok = true;
        r.disjoint_primes = dp.size();
        return r;
    }
    auto cand = detail::fit_candidates(id);
    FitResult fit;
    try {
        fit = fit_terms(id.subject, cand, lo, hi, workers);
    } catch (const InvalidInput&) {
        return r;
    }
    for (auto& b : cand) r.fit_basis.push_back(b.name);
    r.fitted = fit.coeffs;
    if (!fit.ok) return r;
    Identity fixed = id;
    fixed.basis = cand;
    fixed.claimed.clear();
    for (auto& c : fit.coeffs) fixed.claimed.emplace_back(c);
    auto dp = disjoint_primes(hi, 50, detail::identity_domain(fixed));
    r.disjoint_primes = dp.size();
    r.fit_disjoint_ok = detail::violations(fixed, dp, workers).empty();
    if (r.fit_disjoint_ok) r.status = Status::SuspectedTypo;
    return r;
}

/// The fitted combination as text, empty when there is none.
inline std::string fit_text(const IdentityResult& r) {
    if (r.fitted.empty()) return {};
    std::vector<std::pair<TwistedCoeff, std::string>> terms;
    for (std::size_t i = 0; i < r.fitted.size() && i < r.fit_basis.size(); ++i)
        terms.emplace_back(TwistedCoeff(r.fitted[i]), r.fit_basis[i]);
    return detail::linear_text(terms);
}

}  // namespace fmzv
