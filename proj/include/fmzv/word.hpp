#pragma once

// Words over {e0, e+, e-}, exact linear combinations, the shuffle product,
// the tau involution and the p/q conversions between index tuples and words.
// Letters are stored as the bytes '0', '+', '-'.

#include "fmzv/composition.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>

namespace fmzv {

using Word = std::string;

inline constexpr char kE0 = '0';
inline constexpr char kEPlus = '+';
inline constexpr char kEMinus = '-';

inline bool is_letter(char c) { return c == kE0 || c == kEPlus || c == kEMinus; }

inline void validate_word(const Word& w) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!is_letter(w[i])) throw ParseError("invalid letter in word", i);
}

/// Admissible: empty, or ends with e+ or e-.
inline bool is_admissible(const Word& w) { return w.empty() || w.back() != kE0; }

inline int word_depth(const Word& w) {
    return static_cast<int>(std::count_if(w.begin(), w.end(), [](char c) { return c != kE0; }));
}
inline int word_weight(const Word& w) { return static_cast<int>(w.size()); }
inline bool word_sign_free(const Word& w) { return w.find(kEMinus) == Word::npos; }

/// Human-readable form, e.g. "e0 e+ e-".
inline std::string word_display(const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += w[i] == kE0 ? "e0" : (w[i] == kEPlus ? "e+" : "e-");
    }
    return out;
}

// ---------------------------------------------------------------------------
// LinComb

template <class Key>
struct LinComb {
    std::map<Key, mpq_class> terms;

    LinComb() = default;
    LinComb(const Key& k, const mpq_class& c = 1) { add(k, c); }

    void add(const Key& k, const mpq_class& c) {
        if (c == 0) return;
        auto [it, fresh] = terms.emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }
    LinComb& operator+=(const LinComb& o) {
        for (auto& [k, c] : o.terms) add(k, c);
        return *this;
    }
    LinComb& operator-=(const LinComb& o) {
        for (auto& [k, c] : o.terms) add(k, -c);
        return *this;
    }
    LinComb& operator*=(const mpq_class& s) {
        if (s == 0) {
            terms.clear();
            return *this;
        }
        for (auto& [k, c] : terms) c *= s;
        return *this;
    }
    friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
    friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }
    friend LinComb operator*(LinComb a, const mpq_class& s) { return a *= s; }
    friend LinComb operator*(const mpq_class& s, LinComb a) { return a *= s; }
    friend bool operator==(const LinComb& a, const LinComb& b) { return a.terms == b.terms; }

    bool empty() const { return terms.empty(); }
    std::size_t size() const { return terms.size(); }
    mpq_class coefficient(const Key& k) const {
        auto it = terms.find(k);
        return it == terms.end() ? mpq_class(0) : it->second;
    }
};

using WordComb = LinComb<Word>;
using CompComb = LinComb<Composition>;

// ---------------------------------------------------------------------------
// shuffle

namespace detail {

using ShuffleTable = std::map<Word, long long>;

inline const ShuffleTable& shuffle_memo(const Word& u, const Word& v) {
    thread_local std::unordered_map<std::string, ShuffleTable> memo;
    std::string key = u;
    key += '|';
    key += v;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    ShuffleTable r;
    if (u.empty()) {
        r.emplace(v, 1);
    } else if (v.empty()) {
        r.emplace(u, 1);
    } else {
        for (auto& [w, c] : shuffle_memo(u.substr(1), v)) r[u[0] + w] += c;
        for (auto& [w, c] : shuffle_memo(u, v.substr(1))) r[v[0] + w] += c;
    }
    if (memo.size() > 200000) memo.clear();
    return memo.emplace(std::move(key), std::move(r)).first->second;
}

}  // namespace detail

/// Integer-coefficient shuffle product u ⧢ v.
inline std::map<Word, long long> shuffle_int(const Word& u, const Word& v) {
    validate_word(u);
    validate_word(v);
    return detail::shuffle_memo(u, v);
}

inline WordComb shuffle(const Word& u, const Word& v) {
    WordComb out;
    for (auto& [w, c] : shuffle_int(u, v)) out.add(w, mpq_class(static_cast<long>(c)));
    return out;
}

/// Bilinear extension to combinations.
inline WordComb shuffle(const WordComb& a, const WordComb& b) {
    WordComb out;
    for (auto& [u, cu] : a.terms)
        for (auto& [v, cv] : b.terms)
            for (auto& [w, c] : shuffle_int(u, v)) out.add(w, cu * cv * static_cast<long>(c));
    return out;
}

// ---------------------------------------------------------------------------
// tau, p and q

/// tau(w) = (-1)^{weight} * (w with its e0^{s-1}e+ blocks in reverse order);
/// `sign` receives the factor.
inline Word tau(const Word& w, int& sign) {
    validate_word(w);
    if (!word_sign_free(w)) throw InvalidInput("tau is defined on words over {e0, e+} only");
    if (!is_admissible(w)) throw InvalidInput("tau needs an admissible word");
    sign = (w.size() % 2) ? -1 : 1;
    if (w.empty()) return w;
    std::vector<std::string> blocks;
    std::string cur;
    for (char ch : w) {
        cur.push_back(ch);
        if (ch != kE0) {
            blocks.push_back(cur);
            cur.clear();
        }
    }
    Word r;
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) r += *it;
    return r;
}

inline WordComb tau(const WordComb& L) {
    WordComb out;
    for (auto& [w, c] : L.terms) {
        int sg = 1;
        Word r = tau(w, sg);
        out.add(r, c * sg);
    }
    return out;
}

/// The map p: e0^{s1-1} e_{eta1} ... with eta_j = sigma_1 ... sigma_j.
inline Word comp_to_word(const Composition& c) {
    if (!c.sign_free() && !family_allows_signs(c.family)) throw InvalidInput("comp_to_word: bad family");
    Word w;
    int eta = 1;
    for (std::size_t i = 0; i < c.depth(); ++i) {
        eta *= c.signs[i];
        w.append(static_cast<std::size_t>(c.parts[i] - 1), kE0);
        w.push_back(eta > 0 ? kEPlus : kEMinus);
    }
    return w;
}

/// The map q: reads (s_j, gamma_j), sigma_1 = gamma_1, sigma_j = gamma_j / gamma_{j-1}.
inline Composition word_to_comp(const Word& w, Family family = Family::AT) {
    validate_word(w);
    if (w.empty()) throw InvalidInput("word_to_comp: empty word");
    if (!is_admissible(w)) throw InvalidInput("word_to_comp: word ends with e0 (not admissible)");
    std::vector<int> parts, signs;
    int run = 1, prev = 1;
    for (char ch : w) {
        if (ch == kE0) {
            ++run;
            continue;
        }
        int g = ch == kEPlus ? 1 : -1;
        parts.push_back(run);
        signs.push_back(g * prev);
        prev = g;
        run = 1;
    }
    Composition c;
    c.family = family;
    c.parts = std::move(parts);
    c.signs = std::move(signs);
    if (!family_allows_signs(family) && !c.sign_free())
        throw InvalidInput("word_to_comp: signed word for sign-free family");
    c.validate();
    return c;
}

/// Pushes a word combination through q, normalizing AT keys.
inline CompComb words_to_comps(const WordComb& L, Family family) {
    CompComb out;
    for (auto& [w, c] : L.terms) out.add(word_to_comp(w, family).normalized(), c);
    return out;
}

/// All admissible words of given weight; sign-free ones only unless `signed_`.
inline std::vector<Word> admissible_words(int weight, bool signed_) {
    if (weight == 0) return {Word()};
    std::vector<Word> out;
    for (auto& c : enumerate_compositions(weight, signed_ ? Family::ES : Family::T, signed_))
        out.push_back(comp_to_word(c));
    return out;
}

}  // namespace fmzv
