#pragma once

// Words in the side-pairing generators of the genus-2 group.
// Letters are nonzero signed integers: +k is generator g_k (k = 1..4),
// -k its inverse. Serialized as a,b,c,d with uppercase for inverses.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "geolab/hyperbolic.hpp"

namespace geolab {

struct GroupWord {
    std::vector<int8_t> letters;

    bool empty() const { return letters.empty(); }
    size_t size() const { return letters.size(); }

    bool operator==(const GroupWord& o) const { return letters == o.letters; }
    bool operator<(const GroupWord& o) const { return letters < o.letters; }
};

/// Cancel adjacent letter/inverse pairs until none remain.
inline GroupWord free_reduce(const GroupWord& w) {
    std::vector<int8_t> out;
    out.reserve(w.letters.size());
    for (int8_t l : w.letters) {
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
    return {std::move(out)};
}

/// Freely reduce, then strip matching first/last inverse pairs.
inline GroupWord cyclic_reduce(const GroupWord& w) {
    GroupWord r = free_reduce(w);
    size_t lo = 0, hi = r.letters.size();
    while (hi - lo >= 2 && r.letters[lo] == -r.letters[hi - 1]) {
        ++lo;
        --hi;
    }
    return {{r.letters.begin() + lo, r.letters.begin() + hi}};
}

inline GroupWord concat(const GroupWord& u, const GroupWord& v) {
    GroupWord w = u;
    w.letters.insert(w.letters.end(), v.letters.begin(), v.letters.end());
    return free_reduce(w);
}

inline GroupWord word_inverse(const GroupWord& w) {
    GroupWord r;
    r.letters.reserve(w.letters.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        r.letters.push_back(static_cast<int8_t>(-*it));
    return r;
}

/// Lexicographically minimal cyclic rotation among the word and its inverse.
/// Canonical representative of the unoriented free-conjugacy class.
inline GroupWord canonical_cyclic(const GroupWord& w0) {
    GroupWord w = cyclic_reduce(w0);
    if (w.empty()) return w;
    GroupWord best = w;
    for (const GroupWord& base : {w, word_inverse(w)}) {
        size_t n = base.letters.size();
        for (size_t i = 0; i < n; ++i) {
            GroupWord rot;
            rot.letters.reserve(n);
            rot.letters.insert(rot.letters.end(), base.letters.begin() + i, base.letters.end());
            rot.letters.insert(rot.letters.end(), base.letters.begin(), base.letters.begin() + i);
            if (rot < best) best = rot;
        }
    }
    return best;
}

/// True when w is u^k for some strictly shorter u and k >= 2.
inline bool is_proper_power(const GroupWord& w) {
    size_t n = w.letters.size();
    for (size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool match = true;
        for (size_t i = d; i < n && match; ++i)
            if (w.letters[i] != w.letters[i % d]) match = false;
        if (match) return true;
    }
    return false;
}

/// Exponent-sum vector in H_1; conjugation invariant.
inline std::array<int, 4> abelianization(const GroupWord& w) {
    std::array<int, 4> e{0, 0, 0, 0};
    for (int8_t l : w.letters) {
        int k = std::abs(l) - 1;
        e[k] += (l > 0) ? 1 : -1;
    }
    return e;
}

inline std::string word_to_string(const GroupWord& w) {
    static const char lower[] = {'a', 'b', 'c', 'd'};
    static const char upper[] = {'A', 'B', 'C', 'D'};
    std::string s;
    s.reserve(w.letters.size());
    for (int8_t l : w.letters)
        s.push_back(l > 0 ? lower[l - 1] : upper[-l - 1]);
    return s;
}

inline GroupWord word_from_string(const std::string& s) {
    GroupWord w;
    w.letters.reserve(s.size());
    for (char ch : s) {
        if (ch >= 'a' && ch <= 'd')
            w.letters.push_back(static_cast<int8_t>(ch - 'a' + 1));
        else if (ch >= 'A' && ch <= 'D')
            w.letters.push_back(static_cast<int8_t>(-(ch - 'A' + 1)));
        else
            throw GeolabError(std::string("word_from_string: bad letter '") + ch + "'");
    }
    return w;
}

} // namespace geolab
