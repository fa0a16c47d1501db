#pragma once

// Signed index tuples (s; sigma) tagged with the family of finite sums they
// index, and the canonical text encoding shared by every file and command.

#include "fmzv/modint.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

namespace fmzv {

enum class Family : std::uint8_t { ES, T, S, AT };

inline std::string_view family_name(Family f) {
    switch (f) {
        case Family::ES: return "ES";
        case Family::T: return "T";
        case Family::S: return "S";
        case Family::AT: return "AT";
    }
    return "?";
}

inline Family parse_family(std::string_view s) {
    std::string up(s);
    for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (up == "ES") return Family::ES;
    if (up == "T") return Family::T;
    if (up == "S") return Family::S;
    if (up == "AT") return Family::AT;
    throw InvalidInput("unknown family '" + std::string(s) + "'");
}

inline bool family_allows_signs(Family f) { return f == Family::ES || f == Family::AT; }

class ParseError : public InvalidInput {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : InvalidInput(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

struct Composition {
    std::vector<int> parts;
    std::vector<int> signs;  // +1 / -1, same length as parts
    Family family = Family::T;

    Composition() = default;
    Composition(Family f, std::vector<int> s, std::vector<int> sg = {})
        : parts(std::move(s)), signs(std::move(sg)), family(f) {
        if (signs.empty()) signs.assign(parts.size(), 1);
        validate();
    }

    std::size_t depth() const { return parts.size(); }
    int weight() const { return std::accumulate(parts.begin(), parts.end(), 0); }
    bool sign_free() const {
        return std::all_of(signs.begin(), signs.end(), [](int x) { return x == 1; });
    }
    int sign_product() const {
        int r = 1;
        for (int x : signs) r *= x;
        return r;
    }

    void validate() const {
        if (signs.size() != parts.size()) throw InvalidInput("composition: signs/parts length mismatch");
        for (int s : parts)
            if (s < 1) throw InvalidInput("composition: parts must be >= 1");
        for (int x : signs)
            if (x != 1 && x != -1) throw InvalidInput("composition: signs must be +1/-1");
        if (!family_allows_signs(family) && !sign_free())
            throw InvalidInput("composition: family " + std::string(family_name(family)) + " is sign-free");
    }

    Composition reversed() const {
        Composition r = *this;
        std::reverse(r.parts.begin(), r.parts.end());
        std::reverse(r.signs.begin(), r.signs.end());
        return r;
    }

    Composition with_family(Family f) const {
        Composition r = *this;
        r.family = f;
        r.validate();
        return r;
    }

    /// Identity used as a linear-algebra key: AT with all signs + is T.
    Composition normalized() const {
        if (family == Family::AT && sign_free()) return with_family(Family::T);
        return *this;
    }

    /// Lexicographic-by-depth: depth first, then parts, then signs (+ before -).
    friend std::strong_ordering operator<=>(const Composition& a, const Composition& b) {
        if (auto c = a.family <=> b.family; c != 0) return c;
        if (auto c = a.parts.size() <=> b.parts.size(); c != 0) return c;
        if (auto c = a.parts <=> b.parts; c != 0) return c;
        for (std::size_t i = 0; i < a.signs.size(); ++i)
            if (a.signs[i] != b.signs[i]) return a.signs[i] > b.signs[i] ? std::strong_ordering::less
                                                                         : std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const Composition&, const Composition&) = default;
};

/// `T:2,1`, `AT:2,-1`, `ES:-1,2,2`.
inline std::string to_string(const Composition& c) {
    std::string out(family_name(c.family));
    out += ':';
    for (std::size_t i = 0; i < c.parts.size(); ++i) {
        if (i) out += ',';
        if (c.signs[i] < 0) out += '-';
        out += std::to_string(c.parts[i]);
    }
    return out;
}

inline Composition parse_composition(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError("missing ':' after family", text.size());
    Family fam;
    try {
        fam = parse_family(text.substr(0, colon));
    } catch (const InvalidInput&) {
        throw ParseError("unknown family '" + std::string(text.substr(0, colon)) + "'", 0);
    }
    std::vector<int> parts, signs;
    std::size_t i = colon + 1;
    if (i >= text.size()) throw ParseError("empty part list", i);
    while (true) {
        std::size_t start = i;
        int sign = 1;
        if (i < text.size() && text[i] == '-') {
            sign = -1;
            ++i;
        }
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
            throw ParseError("expected a positive integer", start);
        long long v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            v = v * 10 + (text[i] - '0');
            if (v > 1000) throw ParseError("part too large", start);
            ++i;
        }
        if (v == 0) throw ParseError("parts must be >= 1", start);
        if (sign < 0 && !family_allows_signs(fam))
            throw ParseError("negative part in sign-free family", start);
        parts.push_back(static_cast<int>(v));
        signs.push_back(sign);
        if (i == text.size()) break;
        if (text[i] != ',') throw ParseError("unexpected character", i);
        ++i;
    }
    return Composition(fam, std::move(parts), std::move(signs));
}

/// All compositions of `weight`, ordered by depth, then parts, then signs.
/// Sign patterns are enumerated when `alternating` is set (or for AT).
inline std::vector<Composition> enumerate_compositions(int weight, Family family, bool alternating = false) {
    if (weight < 1) throw InvalidInput("enumerate_compositions needs weight >= 1");
    const bool signed_ = alternating || family == Family::AT;
    if (signed_ && !family_allows_signs(family)) throw InvalidInput("family is sign-free");
    std::vector<Composition> out;
    for (int d = 1; d <= weight; ++d) {
        // parts of length d summing to weight, lexicographic
        std::vector<int> cur(d, 1);
        cur[d - 1] = weight - (d - 1);
        std::vector<std::vector<int>> bucket;
        std::vector<int> acc;
        auto rec = [&](auto&& self, int remaining, int slots) -> void {
            if (slots == 1) {
                acc.push_back(remaining);
                bucket.push_back(acc);
                acc.pop_back();
                return;
            }
            for (int a = 1; a <= remaining - (slots - 1); ++a) {
                acc.push_back(a);
                self(self, remaining - a, slots - 1);
                acc.pop_back();
            }
        };
        rec(rec, weight, d);
        for (auto& parts : bucket) {
            if (!signed_) {
                out.emplace_back(family, parts);
                continue;
            }
            for (unsigned mask = 0; mask < (1u << d); ++mask) {
                std::vector<int> sg(d);
                for (int j = 0; j < d; ++j) sg[j] = (mask >> (d - 1 - j)) & 1 ? -1 : 1;
                out.emplace_back(family, parts, sg);
            }
        }
    }
    return out;
}

/// prod sigma_j over j with d-j == 0,1 (mod 4); converts to the older
/// alternating T-value convention.
inline int convention_sign(const Composition& c) {
    if (c.family != Family::AT) throw InvalidInput("convention_sign applies to AT compositions");
    const int d = static_cast<int>(c.depth());
    int r = 1;
    for (int j = 1; j <= d; ++j) {
        int m = (d - j) % 4;
        if (m == 0 || m == 1) r *= c.signs[j - 1];
    }
    return r;
}

}  // namespace fmzv
