#pragma once

// Exact linear relations among finite sums: reversal, linear shuffle, sum
// formula, homogeneous closed forms and the depth 1/2 evaluations, together
// with their assembly into (possibly twisted) matrices.

#include "fmzv/composition.hpp"
#include "fmzv/exactla.hpp"
#include "fmzv/monomial.hpp"
#include "fmzv/word.hpp"

#include <gmpxx.h>

#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace fmzv {

enum class Provenance {
    Reversal,
    AltReversal,
    ESReversal,
    LinShuffleES,
    LinShuffleT,
    LinShuffleTi,
    LinShuffleTii,
    SumFormula,
    Homogeneous,
    Depth1,
    Depth2,
    Stuffle,
};

inline std::string_view provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Reversal: return "Reversal";
        case Provenance::AltReversal: return "AltReversal";
        case Provenance::ESReversal: return "ESReversal";
        case Provenance::LinShuffleES: return "LinShuffleES";
        case Provenance::LinShuffleT: return "LinShuffleT";
        case Provenance::LinShuffleTi: return "LinShuffleTi";
        case Provenance::LinShuffleTii: return "LinShuffleTii";
        case Provenance::SumFormula: return "SumFormula";
        case Provenance::Homogeneous: return "Homogeneous";
        case Provenance::Depth1: return "Depth1";
        case Provenance::Depth2: return "Depth2";
        case Provenance::Stuffle: return "Stuffle";
    }
    return "?";
}

/// expr == 0 modulo almost every prime.
struct Relation {
    Provenance provenance{};
    std::string params;
    Expr expr;

    bool trivial() const { return expr.empty(); }
    std::string label() const { return std::string(provenance_name(provenance)) + "(" + params + ")"; }
};

inline std::string to_string(const Relation& r) { return r.label() + "\t" + to_string(r.expr); }

namespace detail {

inline Expr expr_from(const CompComb& L) {
    Expr e;
    for (auto& [c, q] : L.terms) e.add(Atom(c), TwistedCoeff(q));
    return e;
}

inline std::string word_param(const Word& w) { return w.empty() ? "1" : w; }

inline Word block(int s) { return Word(static_cast<std::size_t>(s - 1), kE0) + kEPlus; }

inline void require_sign_free(const Composition& c, const char* who) {
    if (!c.sign_free()) throw InvalidInput(std::string(who) + ": composition must be sign-free");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// closed forms

/// zeta(k-bar) for the depth-one finite Euler sum with sign -1.
inline Expr zeta_bar_closed_form(int k) {
    if (k < 1) throw InvalidInput("zeta_bar_closed_form: k >= 1");
    if (k == 1) return expr_of(Monomial::q2(), TwistedCoeff(-2));
    if (k % 2 == 0) return {};
    mpq_class c = 2 * (mpq_class(1, 1) / (mpz_class(1) << (k - 1)) - 1);
    return expr_of(Monomial::beta(k), TwistedCoeff(c));
}

/// T(s) = -zeta(s-bar)/2, S(s) = zeta(s-bar)/2.
inline Expr depth1_closed_form(Family f, int s) {
    if (f != Family::T && f != Family::S) throw InvalidInput("depth1_closed_form: family T or S");
    return zeta_bar_closed_form(s) * TwistedCoeff(mpq_class(f == Family::T ? -1 : 1, 2));
}

/// T(a,b) = S(a,b) = (-1)^a/2 (1 - 2^{-w}) C(w,a) beta_w for odd w = a + b.
inline Expr depth2_closed_form(int a, int b) {
    int w = a + b;
    if (a < 1 || b < 1 || w % 2 == 0) throw InvalidInput("depth2_closed_form: needs a,b >= 1 and odd a+b");
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(w), static_cast<unsigned long>(a));
    mpq_class c = mpq_class(a % 2 ? -1 : 1, 2) * (1 - mpq_class(1, 1) / (mpz_class(1) << w)) * binom;
    c.canonicalize();
    return expr_of(Monomial::beta(w), TwistedCoeff(c));
}

// ---------------------------------------------------------------------------
// generators

/// Even depth: X(rev s) - (-1)^|s| X(s); odd depth: T(rev s) - (-1)^|s| S(s)
/// (or the mirror when `c` is an S composition).
inline Relation gen_reversal(const Composition& c) {
    if (c.family != Family::T && c.family != Family::S) throw InvalidInput("gen_reversal: family T or S");
    detail::require_sign_free(c, "gen_reversal");
    const int sg = c.weight() % 2 ? -1 : 1;
    Composition other = c;
    if (c.depth() % 2) other.family = c.family == Family::T ? Family::S : Family::T;
    Relation r{Provenance::Reversal, to_string(c), {}};
    r.expr.add(Atom(c.reversed()), 1);
    r.expr.add(Atom(other), -sg);
    return r;
}

/// Even depth AT reversal; the coefficient is t * (-1)^{d/2} when the sign
/// product is -1.
inline Relation gen_alt_reversal(const Composition& c) {
    if (c.family != Family::AT && c.family != Family::T) throw InvalidInput("gen_alt_reversal: family AT");
    if (c.depth() % 2) throw InvalidInput("gen_alt_reversal: depth must be even");
    Composition a = c.with_family(Family::AT);
    TwistedCoeff k = c.weight() % 2 ? -1 : 1;
    if (a.sign_product() < 0) k = k * TwistedCoeff::twist((a.depth() / 2) % 2 ? -1 : 1);
    Relation r{Provenance::AltReversal, to_string(c), {}};
    r.expr.add(Atom(a.reversed()), 1);
    r.expr.add(Atom(a), -k);
    return r;
}

/// zeta(rev s; rev sigma) - (-1)^|s| prod(sigma) zeta(s; sigma).
inline Relation gen_es_reversal(const Composition& c) {
    if (c.family != Family::ES) throw InvalidInput("gen_es_reversal: family ES");
    Relation r{Provenance::ESReversal, to_string(c), {}};
    r.expr.add(Atom(c.reversed()), 1);
    r.expr.add(Atom(c), -((c.weight() % 2 ? -1 : 1) * c.sign_product()));
    return r;
}

/// (e0^{s-1}e+ u) sh v - (-1)^s u sh (e0^{s-1}e+ v) as a word combination.
inline WordComb linear_shuffle_words(int s, const Word& u, const Word& v) {
    if (s < 1) throw InvalidInput("linear shuffle: s >= 1");
    validate_word(u);
    validate_word(v);
    if (!word_sign_free(u)) throw InvalidInput("linear shuffle: u must be sign-free");
    if (!is_admissible(u) || !is_admissible(v)) throw InvalidInput("linear shuffle: words must be admissible");
    const Word a = detail::block(s);
    WordComb L = shuffle(a + u, v);
    WordComb R = shuffle(u, a + v);
    R *= mpq_class(s % 2 ? -1 : 1);
    L -= R;
    return L;
}

/// T((e0^{s-1}e+ u) sh v) = (-1)^s T(u sh (e0^{s-1}e+ v)) for dep(u)+dep(v) odd.
inline Relation gen_linear_shuffle_T(int s, const Word& u, const Word& v) {
    if ((word_depth(u) + word_depth(v)) % 2 == 0) throw InvalidInput("gen_linear_shuffle_T: dep(u)+dep(v) must be odd");
    Relation r{Provenance::LinShuffleT, std::to_string(s) + "," + detail::word_param(u) + "," + detail::word_param(v), {}};
    r.expr = detail::expr_from(words_to_comps(linear_shuffle_words(s, u, v), Family::AT));
    return r;
}

/// ES version, no parity condition.
inline Relation gen_linear_shuffle_ES(int s, const Word& u, const Word& v) {
    Relation r{Provenance::LinShuffleES, std::to_string(s) + "," + detail::word_param(u) + "," + detail::word_param(v), {}};
    r.expr = detail::expr_from(words_to_comps(linear_shuffle_words(s, u, v), Family::ES));
    return r;
}

/// T(u sh v) = T(tau(u) v) for dep(u)+dep(v) even.
inline Relation gen_linear_shuffle_T_i(const Word& u, const Word& v) {
    if ((word_depth(u) + word_depth(v)) % 2) throw InvalidInput("gen_linear_shuffle_T_i: dep(u)+dep(v) must be even");
    if (u.empty()) throw InvalidInput("gen_linear_shuffle_T_i: u nonempty");
    int sg = 1;
    Word tu = tau(u, sg);
    WordComb L = shuffle(u, v);
    L.add(tu + v, mpq_class(-sg));
    Relation r{Provenance::LinShuffleTi, u + "," + detail::word_param(v), {}};
    r.expr = detail::expr_from(words_to_comps(L, Family::AT));
    return r;
}

/// T((w u) sh v) = T(u sh tau(w) v) for dep(u)+dep(v)+dep(w) even.
inline Relation gen_linear_shuffle_T_ii(const Word& w, const Word& u, const Word& v) {
    if ((word_depth(u) + word_depth(v) + word_depth(w)) % 2)
        throw InvalidInput("gen_linear_shuffle_T_ii: dep(u)+dep(v)+dep(w) must be even");
    if (w.empty() || !word_sign_free(u)) throw InvalidInput("gen_linear_shuffle_T_ii: w nonempty, u sign-free");
    int sg = 1;
    Word tw = tau(w, sg);
    WordComb L = shuffle(w + u, v);
    WordComb R = shuffle(u, tw + v);
    R *= mpq_class(sg);
    L -= R;
    Relation r{Provenance::LinShuffleTii, w + "," + detail::word_param(u) + "," + detail::word_param(v), {}};
    r.expr = detail::expr_from(words_to_comps(L, Family::AT));
    return r;
}

/// T(1,s) + T(s,1) + sum_j sum_{a=1}^{s_j} T(s_1..a, s_j+1-a..s_d) for odd depth.
inline Relation gen_sum_formula(const Composition& c) {
    detail::require_sign_free(c, "gen_sum_formula");
    if (c.depth() % 2 == 0) throw InvalidInput("gen_sum_formula: depth must be odd");
    Relation r{Provenance::SumFormula, to_string(c), {}};
    auto put = [&](std::vector<int> parts) { r.expr.add(Atom(Composition(Family::T, std::move(parts))), 1); };
    std::vector<int> s = c.parts;
    std::vector<int> front{1};
    front.insert(front.end(), s.begin(), s.end());
    put(front);
    std::vector<int> back = s;
    back.push_back(1);
    put(back);
    for (std::size_t j = 0; j < s.size(); ++j)
        for (int a = 1; a <= s[j]; ++a) {
            std::vector<int> t(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(j));
            t.push_back(a);
            t.push_back(s[j] + 1 - a);
            t.insert(t.end(), s.begin() + static_cast<std::ptrdiff_t>(j) + 1, s.end());
            put(t);
        }
    return r;
}

/// Closed form of zeta({s-bar}^d) over set partitions of {1..d}:
/// (1/d!) sum (-1)^{d-l} prod (|P|-1)! prod zeta((s|P|)-bar).
inline Expr homogeneous_closed_form(int s, int d) {
    if (s < 1 || d < 1) throw InvalidInput("homogeneous_closed_form: s, d >= 1");
    // a block-size shape with multiplicities m_b covers d! / prod(m_b! b!^{m_b}) set partitions
    Expr out;
    std::vector<int> sizes;
    auto fact = [](int n) {
        mpz_class f = 1;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    auto rec = [&](auto&& self, int rem, int maxb) -> void {
        if (rem == 0) {
            std::map<int, int> mult;
            for (int b : sizes) ++mult[b];
            mpz_class denom = 1;
            for (auto& [b, m] : mult) {
                denom *= fact(m);
                for (int i = 0; i < m; ++i) denom *= fact(b);
            }
            mpq_class coef(1, denom);
            coef.canonicalize();
            if ((d - static_cast<int>(sizes.size())) % 2) coef = -coef;
            for (int b : sizes) coef *= mpq_class(fact(b - 1));
            Expr term = expr_of(Monomial::one(), TwistedCoeff(coef));
            for (int b : sizes) {
                Expr z = zeta_bar_closed_form(s * b);
                Expr prod;
                for (auto& [a1, c1] : term.terms)
                    for (auto& [a2, c2] : z.terms) prod.add(Atom(a1.mono * a2.mono), c1 * c2);
                term = prod;
            }
            out += term;
            return;
        }
        for (int b = std::min(rem, maxb); b >= 1; --b) {
            sizes.push_back(b);
            self(self, rem - b, b);
            sizes.pop_back();
        }
    };
    rec(rec, d, d);
    return out;
}

inline Relation gen_homogeneous(int s, int d) {
    Relation r{Provenance::Homogeneous, std::to_string(s) + "," + std::to_string(d), {}};
    r.expr = expr_of(Composition(Family::ES, std::vector<int>(d, s), std::vector<int>(d, -1)));
    r.expr -= homogeneous_closed_form(s, d);
    return r;
}

inline Relation gen_depth1(Family f, int s) {
    Relation r{Provenance::Depth1, std::string(family_name(f)) + ":" + std::to_string(s), {}};
    r.expr = expr_of(Composition(f, {s}));
    r.expr -= depth1_closed_form(f, s);
    return r;
}

inline Relation gen_depth2(Family f, int a, int b) {
    Relation r{Provenance::Depth2, std::string(family_name(f)) + ":" + std::to_string(a) + "," + std::to_string(b), {}};
    r.expr = expr_of(Composition(f, {a, b}));
    r.expr -= depth2_closed_form(a, b);
    return r;
}

/// Depth 1 and 2 closed forms of weight w for T and S.
inline std::vector<Relation> gen_depth12(int w) {
    std::vector<Relation> out;
    for (Family f : {Family::T, Family::S}) {
        out.push_back(gen_depth1(f, w));
        if (w % 2)
            for (int a = 1; a < w; ++a) out.push_back(gen_depth2(f, a, w - a));
    }
    return out;
}

// ---------------------------------------------------------------------------
// inventories

/// All (iii) instances of weight w; v ranges over signed words when `signed_v`.
inline std::vector<Relation> inventory_linear_shuffle_T(int w, bool signed_v) {
    std::vector<Relation> out;
    for (int s = 1; s <= w; ++s)
        for (int a = 0; a + s <= w; ++a) {
            int b = w - s - a;
            for (auto& u : admissible_words(a, false))
                for (auto& v : admissible_words(b, signed_v)) {
                    if ((word_depth(u) + word_depth(v)) % 2 == 0) continue;
                    auto r = gen_linear_shuffle_T(s, u, v);
                    if (!r.trivial()) out.push_back(std::move(r));
                }
        }
    return out;
}

inline std::vector<Relation> inventory_linear_shuffle_ES(int w) {
    std::vector<Relation> out;
    for (int s = 1; s <= w; ++s)
        for (int a = 0; a + s <= w; ++a)
            for (auto& u : admissible_words(a, false))
                for (auto& v : admissible_words(w - s - a, true)) {
                    auto r = gen_linear_shuffle_ES(s, u, v);
                    if (!r.trivial()) out.push_back(std::move(r));
                }
    return out;
}

/// T/S reversals, T sum formulas and depth 1/2 closed forms of weight w.
inline std::vector<Relation> inventory_T_structural(int w) {
    std::vector<Relation> out;
    for (auto& c : enumerate_compositions(w, Family::T)) {
        for (Family f : {Family::T, Family::S}) {
            auto r = gen_reversal(c.with_family(f));
            if (!r.trivial()) out.push_back(std::move(r));
        }
    }
    if (w >= 2)
        for (auto& c : enumerate_compositions(w - 1, Family::T))
            if (c.depth() % 2) out.push_back(gen_sum_formula(c));
    for (auto& r : gen_depth12(w)) out.push_back(std::move(r));
    return out;
}

/// Even-depth twisted reversals of all AT compositions of weight w.
inline std::vector<Relation> inventory_alt_reversal(int w) {
    std::vector<Relation> out;
    for (auto& c : enumerate_compositions(w, Family::AT, true))
        if (c.depth() % 2 == 0) {
            auto r = gen_alt_reversal(c);
            if (!r.trivial()) out.push_back(std::move(r));
        }
    return out;
}

// ---------------------------------------------------------------------------
// systems

/// Relations over a fixed column order; atoms outside `symbols` get columns
/// appended on first use.
struct RelationSystem {
    std::vector<Atom> columns;
    std::map<Atom, std::size_t> index;
    std::vector<Relation> relations;

    RelationSystem() = default;
    explicit RelationSystem(const std::vector<Composition>& symbols) {
        for (auto& c : symbols) column(Atom(c));
    }

    std::size_t column(const Atom& a) {
        auto [it, fresh] = index.emplace(a, columns.size());
        if (fresh) columns.push_back(a);
        return it->second;
    }
    void add(Relation r) {
        if (r.trivial()) return;
        for (auto& [a, c] : r.expr.terms) column(a);
        relations.push_back(std::move(r));
    }
    void add_all(std::vector<Relation> rs) {
        for (auto& r : rs) add(std::move(r));
    }

    TwistedMatrix matrix() const {
        TwistedMatrix M;
        M.cols = columns.size();
        for (auto& r : relations) {
            std::map<std::size_t, TwistedCoeff> row;
            for (auto& [a, c] : r.expr.terms) row.emplace(index.at(a), c);
            M.rows.push_back(std::move(row));
        }
        return M;
    }

    /// Dimension of span(targets) modulo the relations, on one twist class.
    std::size_t span_dim(const std::vector<Atom>& targets, int t) {
        for (auto& a : targets) column(a);
        QMatrix R = matrix().specialize(t);
        auto base = rank_q(R);
        for (auto& a : targets) R.add_row({{index.at(a), mpq_class(1)}});
        return rank_q(R) - base;
    }

    void write(std::ostream& out) const {
        for (auto& r : relations) out << to_string(r) << '\n';
    }
};

}  // namespace fmzv
