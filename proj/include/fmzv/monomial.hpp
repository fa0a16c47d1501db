#pragma once

// Products of the special constants q2, beta_k (odd k >= 3) and G, the
// coefficient ring Q + Q*t, and expressions combining them with finite sums.

#include "fmzv/composition.hpp"
#include "fmzv/modint.hpp"

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fmzv {

/// Constant generators: 1 = q2, k >= 3 odd = beta_k, 2 = G (finite Catalan).
/// Stored as a sorted multiset of generator ids.
struct Monomial {
    std::map<int, int> powers;  // id -> exponent

    static constexpr int kQ2 = 1;
    static constexpr int kCatalan = 2;

    static Monomial one() { return {}; }
    static Monomial q2(int e = 1) { return Monomial{}.times(kQ2, e); }
    static Monomial beta(int k, int e = 1) {
        if (k < 3 || k % 2 == 0) throw InvalidInput("beta_k needs odd k >= 3");
        return Monomial{}.times(k, e);
    }
    static Monomial catalan(int e = 1) { return Monomial{}.times(kCatalan, e); }

    Monomial times(int id, int e = 1) const {
        Monomial r = *this;
        if (e) r.powers[id] += e;
        return r;
    }
    Monomial operator*(const Monomial& o) const {
        Monomial r = *this;
        for (auto& [id, e] : o.powers) r.powers[id] += e;
        return r;
    }
    bool is_one() const { return powers.empty(); }

    /// q2 -> 1, beta_w -> w, G -> 2.
    int weight() const {
        int w = 0;
        for (auto& [id, e] : powers) w += id * e;
        return w;
    }

    /// Smallest prime at which every factor is defined.
    u32 min_prime() const {
        u32 lo = 3;
        for (auto& [id, e] : powers) {
            if (id == kCatalan) lo = std::max<u32>(lo, 5);
            else if (id >= 3) lo = std::max<u32>(lo, static_cast<u32>(id) + 2);
        }
        return lo;
    }

    Residue eval(u32 p) const {
        Residue r(1, p);
        for (auto& [id, e] : powers) {
            Residue base = id == kQ2 ? fermat_quotient(p) : id == kCatalan ? finite_catalan(p) : fmzv::beta(p, id);
            for (int i = 0; i < e; ++i) r = r * base;
        }
        return r;
    }

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

inline std::string to_string(const Monomial& m) {
    if (m.is_one()) return "1";
    std::string out;
    for (auto& [id, e] : m.powers) {
        if (!out.empty()) out += '*';
        out += id == Monomial::kQ2 ? "q2" : id == Monomial::kCatalan ? "G" : "beta" + std::to_string(id);
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}

/// All monomials in q2 and beta_k of exact weight w (no G).
inline std::vector<Monomial> monomials_of_weight(int w) {
    std::vector<int> gens{1};
    for (int k = 3; k <= w; k += 2) gens.push_back(k);
    std::vector<Monomial> out;
    auto rec = [&](auto&& self, std::size_t i, int rem, Monomial cur) -> void {
        if (rem == 0) {
            out.push_back(cur);
            return;
        }
        if (i == gens.size()) return;
        for (int e = 0; e * gens[i] <= rem; ++e) self(self, i + 1, rem - e * gens[i], cur.times(gens[i], e));
    };
    rec(rec, 0, w, Monomial{});
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// a + b*t with t(p) = (-1)^{(p-1)/2}

struct TwistedCoeff {
    mpq_class a = 0, b = 0;

    TwistedCoeff() = default;
    TwistedCoeff(mpq_class a_, mpq_class b_ = 0) : a(std::move(a_)), b(std::move(b_)) {}
    TwistedCoeff(long v) : a(v) {}
    TwistedCoeff(int v) : a(v) {}

    static TwistedCoeff twist(const mpq_class& b) { return {0, b}; }

    bool is_zero() const { return a == 0 && b == 0; }
    bool twisted() const { return b != 0; }

    TwistedCoeff operator+(const TwistedCoeff& o) const { return {a + o.a, b + o.b}; }
    TwistedCoeff operator-(const TwistedCoeff& o) const { return {a - o.a, b - o.b}; }
    TwistedCoeff operator-() const { return {-a, -b}; }
    TwistedCoeff operator*(const TwistedCoeff& o) const { return {a * o.a + b * o.b, a * o.b + b * o.a}; }
    friend bool operator==(const TwistedCoeff& x, const TwistedCoeff& y) { return x.a == y.a && x.b == y.b; }

    /// Specialization at t = +1 or t = -1.
    mpq_class at(int t) const { return t > 0 ? mpq_class(a + b) : mpq_class(a - b); }

    /// nullopt when p divides a denominator.
    std::optional<Residue> eval(u32 p) const {
        mpq_class v = at(p % 4 == 1 ? 1 : -1);
        if (v.get_den() % p == 0) return std::nullopt;
        return Residue(reduce_rational(v, p), p);
    }
};

inline std::string rational_string(const mpq_class& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// `num/den[+num/den*t]`.
inline std::string to_string(const TwistedCoeff& c) {
    std::string s = rational_string(c.a);
    if (c.b != 0) s += (c.b < 0 ? "" : "+") + rational_string(c.b) + "*t";
    return s;
}

// ---------------------------------------------------------------------------
// Atom = monomial * optional finite sum

struct Atom {
    Monomial mono;
    std::optional<Composition> comp;

    Atom() = default;
    Atom(Composition c) : comp(c.normalized()) {}
    Atom(Monomial m) : mono(std::move(m)) {}
    Atom(Monomial m, Composition c) : mono(std::move(m)), comp(c.normalized()) {}

    bool is_symbol() const { return comp.has_value() && mono.is_one(); }

    int weight() const { return mono.weight() + (comp ? comp->weight() : 0); }

    // finite sums first (in symbol order), then pure constants
    friend std::strong_ordering operator<=>(const Atom& x, const Atom& y) {
        if (x.comp.has_value() != y.comp.has_value()) return x.comp ? std::strong_ordering::less
                                                                     : std::strong_ordering::greater;
        if (x.comp)
            if (auto c = *x.comp <=> *y.comp; c != 0) return c;
        if (x.mono < y.mono) return std::strong_ordering::less;
        if (y.mono < x.mono) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const Atom& x, const Atom& y) { return x.comp == y.comp && x.mono == y.mono; }
};

inline std::string to_string(const Atom& a) {
    if (!a.comp) return to_string(a.mono);
    if (a.mono.is_one()) return to_string(*a.comp);
    return to_string(a.mono) + "*" + to_string(*a.comp);
}

/// Sum of TwistedCoeff * Atom; zero terms are never stored.
struct Expr {
    std::map<Atom, TwistedCoeff> terms;

    Expr() = default;
    Expr(const Atom& a, const TwistedCoeff& c = 1) { add(a, c); }

    Expr& add(const Atom& a, const TwistedCoeff& c) {
        if (c.is_zero()) return *this;
        auto [it, fresh] = terms.emplace(a, c);
        if (!fresh) {
            it->second = it->second + c;
            if (it->second.is_zero()) terms.erase(it);
        }
        return *this;
    }
    Expr& operator+=(const Expr& o) {
        for (auto& [k, c] : o.terms) add(k, c);
        return *this;
    }
    Expr& operator-=(const Expr& o) {
        for (auto& [k, c] : o.terms) add(k, -c);
        return *this;
    }
    Expr operator*(const TwistedCoeff& s) const {
        Expr r;
        for (auto& [k, c] : terms) r.add(k, c * s);
        return r;
    }
    friend Expr operator+(Expr a, const Expr& b) { return a += b; }
    friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
    bool empty() const { return terms.empty(); }
    bool twisted() const {
        for (auto& [k, c] : terms)
            if (c.twisted()) return true;
        return false;
    }
    int max_weight() const {
        int w = 0;
        for (auto& [k, c] : terms) w = std::max(w, k.weight());
        return w;
    }
    u32 min_prime() const {
        u32 lo = 3;
        for (auto& [k, c] : terms) {
            lo = std::max(lo, k.mono.min_prime());
            if (k.comp) lo = std::max<u32>(lo, static_cast<u32>(k.comp->weight()) + 3);
        }
        return lo;
    }
};

inline Expr expr_of(const Monomial& m, const TwistedCoeff& c = 1) { return Expr(Atom(m), c); }
inline Expr expr_of(const Composition& s, const TwistedCoeff& c = 1) { return Expr(Atom(s), c); }

inline std::string to_string(const Expr& e) {
    if (e.empty()) return "0";
    std::string out;
    for (auto& [k, c] : e.terms) {
        if (!out.empty()) out += ';';
        out += to_string(c) + "*" + to_string(k);
    }
    return out;
}

}  // namespace fmzv
