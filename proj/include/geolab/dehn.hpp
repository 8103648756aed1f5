#pragma once

// Dehn's algorithm for the genus-2 octagon relator. The relator has
// small-cancellation type C'(1/8) (all length-2 subwords of its cyclic
// shifts and their inverses are distinct), so conjugacy of cyclic words
// is decided by: shorten any subword sharing more than half a relator
// cyclic shift, then close under the length-preserving half-relator
// swaps, cyclic rotation and inversion, and compare lexicographic minima.

#include <deque>
#include <set>

#include "geolab/words.hpp"

namespace geolab {

class DehnReducer {
  public:
    explicit DehnReducer(const GroupWord& relator) {
        GroupWord r = cyclic_reduce(relator);
        n_ = r.size();
        for (const GroupWord& base : {r, word_inverse(r)}) {
            for (size_t i = 0; i < n_; ++i) {
                GroupWord rot;
                rot.letters.insert(rot.letters.end(), base.letters.begin() + i, base.letters.end());
                rot.letters.insert(rot.letters.end(), base.letters.begin(), base.letters.begin() + i);
                variants_.push_back(rot);
            }
        }
    }

    /// Shorten a cyclic word with relator replacements until no subword
    /// matches more than half of any relator variant.
    GroupWord shorten_cyclic(GroupWord w) const {
        w = cyclic_reduce(w);
        bool changed = true;
        while (changed && !w.empty()) {
            changed = false;
            size_t len = w.size();
            size_t max_m = std::min(n_, len);
            for (size_t m = max_m; m > n_ / 2 && !changed; --m) {
                for (size_t pos = 0; pos < len && !changed; ++pos) {
                    for (const auto& v : variants_) {
                        if (match_at(w, pos, v, m)) {
                            w = replace_cyclic(w, pos, m, tail_inverse(v, m));
                            w = cyclic_reduce(w);
                            changed = true;
                            break;
                        }
                    }
                }
            }
        }
        return w;
    }

    /// All words obtained from one half-relator swap (length preserved).
    std::vector<GroupWord> half_swaps(const GroupWord& w) const {
        std::vector<GroupWord> out;
        size_t len = w.size();
        size_t m = n_ / 2;
        if (len < m) return out;
        for (size_t pos = 0; pos < len; ++pos) {
            for (const auto& v : variants_) {
                if (match_at(w, pos, v, m)) {
                    GroupWord cand = cyclic_reduce(replace_cyclic(w, pos, m, tail_inverse(v, m)));
                    if (cand.size() == len) out.push_back(cand);
                }
            }
        }
        return out;
    }

    /// Canonical representative of the unoriented conjugacy class of w:
    /// lexicographic minimum over the orbit of the shortened word under
    /// rotation, inversion and half-relator swaps.
    GroupWord conjugacy_canonical(const GroupWord& w0) const {
        GroupWord w = shorten_cyclic(w0);
        while (true) {
            if (w.empty()) return w;
            std::set<GroupWord> seen;
            std::deque<GroupWord> queue;
            GroupWord best = canonical_cyclic(w);
            seen.insert(best);
            queue.push_back(best);
            bool restarted = false;
            while (!queue.empty()) {
                GroupWord cur = queue.front();
                queue.pop_front();
                // match_at indexes cyclically, so one pass per orientation
                for (const GroupWord& base : {cur, word_inverse(cur)}) {
                    for (GroupWord& sw : half_swaps(base)) {
                        GroupWord shorter = shorten_cyclic(sw);
                        if (shorter.size() < w.size()) {
                            w = shorter;
                            restarted = true;
                            break;
                        }
                        GroupWord key = canonical_cyclic(sw);
                        if (seen.insert(key).second) {
                            if (key < best) best = key;
                            queue.push_back(key);
                        }
                    }
                    if (restarted) break;
                }
                if (restarted) break;
            }
            if (!restarted) return best;
        }
    }

  private:
    static bool match_at(const GroupWord& w, size_t pos, const GroupWord& v, size_t m) {
        size_t len = w.size();
        if (m > len) return false;
        for (size_t j = 0; j < m; ++j)
            if (w.letters[(pos + j) % len] != v.letters[j]) return false;
        return true;
    }

    /// Inverse of the unmatched tail of variant v past position m.
    static GroupWord tail_inverse(const GroupWord& v, size_t m) {
        GroupWord tail{{v.letters.begin() + m, v.letters.end()}};
        return word_inverse(tail);
    }

    /// Replace the cyclic subword of length m starting at pos with rep.
    static GroupWord replace_cyclic(const GroupWord& w, size_t pos, size_t m,
                                    const GroupWord& rep) {
        size_t len = w.size();
        GroupWord out;
        out.letters = rep.letters;
        for (size_t j = 0; j < len - m; ++j)
            out.letters.push_back(w.letters[(pos + m + j) % len]);
        return free_reduce(out);
    }

    size_t n_ = 0;
    std::vector<GroupWord> variants_;
};

} // namespace geolab
