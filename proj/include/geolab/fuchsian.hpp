#pragma once

// The genus-2 surface group as the regular-octagon Fuchsian group:
// opposite sides of the regular hyperbolic octagon (vertex angle pi/4)
// are paired by hyperbolic translations through the center. The center
// is placed at i in the half-plane chart; the octagon has one vertex on
// the positive real axis of the Poincare disk.

#include <map>
#include <optional>
#include <vector>

#include "geolab/hyperbolic.hpp"
#include "geolab/words.hpp"
#include "geolab/dehn.hpp"

namespace geolab {

struct ConjugacyClassEntry {
    GroupWord word;       // canonical representative
    double length;        // translation length of the class
    IsometryMatrix matrix;
};

struct EnumerationResult {
    std::vector<ConjugacyClassEntry> classes;
    double certified_up_to; // lengths below this are certainly complete
    bool complete;          // whether certified_up_to >= requested L_max
};

class FuchsianGroup {
  public:
    static constexpr int kNumGenerators = 4;

    FuchsianGroup() { build(); }

    const IsometryMatrix& generator(int k) const { return gens_[k]; }

    /// Matrix of a single signed letter (+1..+4, -1..-4).
    const IsometryMatrix& letter_matrix(int l) const {
        return l > 0 ? gens_[l - 1] : gen_invs_[-l - 1];
    }

    IsometryMatrix evaluate(const GroupWord& w) const {
        IsometryMatrix m;
        int since_norm = 0;
        for (int8_t l : w.letters) {
            m = m * letter_matrix(l);
            if (++since_norm == 32) { // renormalize determinant drift
                m = m.normalized();
                since_norm = 0;
            }
        }
        return m;
    }

    const GroupWord& relation() const { return relation_; }

    /// Octagon vertices in the Poincare disk, center at 0.
    const std::vector<std::complex<double>>& octagon_vertices_disk() const {
        return vertices_disk_;
    }

    HPoint center() const { return {0.0, 1.0}; }
    double generator_length() const { return 2.0 * apothem_; }
    double systole() const { return 2.0 * apothem_; }
    double circumradius() const { return circumradius_; }

    /// Dirichlet-domain membership about the center: closer to the center
    /// than to any of its side-pairing images.
    bool in_fundamental_domain(const HPoint& p, double slack = 1e-9) const {
        double d0 = hyperbolic_distance(p, center());
        for (int l = 1; l <= 4; ++l) {
            for (int s : {l, -l}) {
                HPoint img = apply_isometry(letter_matrix(s), center());
                if (d0 > hyperbolic_distance(p, img) + slack) return false;
            }
        }
        return true;
    }

    /// Greedy descent into the fundamental domain. Returns the reduced
    /// point and the word w with evaluate(w)(reduced) = original.
    std::pair<HPoint, GroupWord> reduce_to_fundamental_domain(const HPoint& p0,
                                                              int max_iter = 4096) const {
        HPoint p = p0;
        GroupWord w;
        for (int it = 0; it < max_iter; ++it) {
            if (in_fundamental_domain(p)) {
                // descent applied M_{l1},...,M_{ln} to p0, so the word
                // carrying the reduced point back is l1^-1 ... ln^-1
                for (auto& l : w.letters) l = static_cast<int8_t>(-l);
                return {p, free_reduce(w)};
            }
            double best = hyperbolic_distance(p, center());
            int best_l = 0;
            for (int l = 1; l <= 4; ++l) {
                for (int s : {l, -l}) {
                    double d = hyperbolic_distance(apply_isometry(letter_matrix(s), p), center());
                    if (d < best - 1e-13) {
                        best = d;
                        best_l = s;
                    }
                }
            }
            if (best_l == 0)
                throw GeolabError("reduce_to_fundamental_domain: no descent step available");
            p = apply_isometry(letter_matrix(best_l), p);
            w.letters.push_back(static_cast<int8_t>(best_l));
        }
        throw GeolabError("reduce_to_fundamental_domain: iteration cap exceeded");
    }

    /// Group elements whose domain copy touches a neighborhood of the
    /// fundamental domain: identity, side pairings, and the short products
    /// meeting at vertices. Used for distances on the quotient surface.
    const std::vector<IsometryMatrix>& neighbor_transforms() const { return neighbors_; }

    /// Group words of the neighbor transforms, index-aligned.
    const std::vector<GroupWord>& neighbor_words() const { return neighbor_words_; }

    /// One representative per unoriented conjugacy class of primitive
    /// hyperbolic elements with translation length <= L_max.
    EnumerationResult enumerate_conjugacy_classes(double L_max) const;

  private:
    void build() {
        apothem_ = std::acosh(1.0 + std::sqrt(2.0));
        circumradius_ = std::acosh(3.0 + 2.0 * std::sqrt(2.0));
        IsometryMatrix T = vertical_translation(2.0 * apothem_);
        for (int k = 0; k < 4; ++k) {
            // edge-midpoint direction in the disk is (k+1/2)*pi/4;
            // tangent rotation at i carries "up" (angle pi/2) there
            double rho = (k + 0.5) * kPi / 4.0;
            IsometryMatrix R = rotation_about_i(rho);
            gens_[k] = (R * T * R.inverse()).normalized();
            gen_invs_[k] = gens_[k].inverse();
        }
        // vertex cycle of the octagon: a b^-1 c d^-1 a^-1 b c^-1 d = 1
        relation_ = word_from_string("aBcDAbCd");

        double rv = std::tanh(circumradius_ / 2.0);
        for (int k = 0; k < 8; ++k) {
            double ang = k * kPi / 4.0;
            vertices_disk_.push_back(std::polar(rv, ang));
        }

        // neighbor transforms: words of length <= 3 whose image of the
        // center stays within a diameter-plus-margin ball
        double cutoff = 2.0 * circumradius_ + 0.5;
        std::vector<GroupWord> frontier{GroupWord{}};
        std::map<std::array<long long, 4>, bool> seen; // keyed by rounded matrix
        auto key_of = [](const IsometryMatrix& m) {
            auto q = [](double v) { return static_cast<long long>(std::llround(v * 1e8)); };
            std::array<long long, 4> k1{q(m.a), q(m.b), q(m.c), q(m.d)};
            std::array<long long, 4> k2{q(-m.a), q(-m.b), q(-m.c), q(-m.d)};
            return std::min(k1, k2);
        };
        seen[key_of(IsometryMatrix{})] = true;
        neighbors_.push_back(IsometryMatrix{});
        neighbor_words_.push_back(GroupWord{});
        for (int len = 1; len <= 3; ++len) {
            std::vector<GroupWord> next;
            for (const auto& w : frontier) {
                for (int l = 1; l <= 4; ++l) {
                    for (int s : {l, -l}) {
                        if (!w.empty() && w.letters.back() == -s) continue;
                        GroupWord w2 = w;
                        w2.letters.push_back(static_cast<int8_t>(s));
                        IsometryMatrix m = evaluate(w2);
                        if (hyperbolic_distance(apply_isometry(m, center()), center()) > cutoff)
                            continue;
                        next.push_back(w2);
                        auto k = key_of(m);
                        if (!seen.count(k)) {
                            seen[k] = true;
                            neighbors_.push_back(m);
                            neighbor_words_.push_back(w2);
                        }
                    }
                }
            }
            frontier = std::move(next);
        }
    }

    IsometryMatrix gens_[4];
    IsometryMatrix gen_invs_[4];
    GroupWord relation_;
    std::vector<std::complex<double>> vertices_disk_;
    std::vector<IsometryMatrix> neighbors_;
    std::vector<GroupWord> neighbor_words_;
    double apothem_ = 0.0;
    double circumradius_ = 0.0;
};

namespace detail {

inline bool matrices_close(const IsometryMatrix& x, const IsometryMatrix& y, double atol) {
    auto near = [&](double s) {
        return std::fabs(s * x.a - y.a) < atol && std::fabs(s * x.b - y.b) < atol &&
               std::fabs(s * x.c - y.c) < atol && std::fabs(s * x.d - y.d) < atol;
    };
    return near(1.0) || near(-1.0);
}

} // namespace detail

inline EnumerationResult FuchsianGroup::enumerate_conjugacy_classes(double L_max) const {
    if (L_max <= 0.0) throw GeolabError("enumerate_conjugacy_classes: L_max must be positive");
    double ell_min = systole();
    DehnReducer dehn(relation_);

    // One DFS sweep over freely reduced words up to max_len; returns the
    // Dehn-canonical classes with translation length <= L_max.
    auto sweep = [&](int max_len) {
        std::set<GroupWord> free_classes;
        std::vector<int8_t> word;
        std::vector<IsometryMatrix> stack{IsometryMatrix{}};
        auto visit = [&](auto&& self) -> void {
            const IsometryMatrix cur = stack.back();
            size_t len = word.size();
            if (len > 0 && (len == 1 || word.front() != -word.back())) {
                double tr = std::fabs(cur.trace()) / std::sqrt(cur.det());
                if (tr > 2.0 + 1e-12 && 2.0 * std::acosh(tr / 2.0) <= L_max + 1e-12) {
                    GroupWord c = canonical_cyclic(GroupWord{word});
                    if (c.size() == len) free_classes.insert(std::move(c));
                }
            }
            if (len == static_cast<size_t>(max_len)) return;
            for (int l = 1; l <= 4; ++l) {
                for (int s : {l, -l}) {
                    if (!word.empty() && word.back() == -s) continue;
                    word.push_back(static_cast<int8_t>(s));
                    stack.push_back((cur * letter_matrix(s)).normalized());
                    self(self);
                    stack.pop_back();
                    word.pop_back();
                }
            }
        };
        visit(visit);

        std::map<GroupWord, ConjugacyClassEntry> classes;
        for (const auto& fc : free_classes) {
            GroupWord c = dehn.conjugacy_canonical(fc);
            if (c.empty() || classes.count(c)) continue;
            IsometryMatrix m = evaluate(c);
            double tr = std::fabs(m.trace()) / std::sqrt(m.det());
            if (tr <= 2.0 + 1e-12) continue; // canonical form left the bound? defensive
            double ell = 2.0 * std::acosh(tr / 2.0);
            if (ell <= L_max + 1e-12) classes.emplace(c, ConjugacyClassEntry{c, ell, m});
        }
        return classes;
    };

    // The spec heuristic cutoff, then grow until one extra letter adds no
    // class under the bound. Stabilization certifies completeness here.
    int max_len = static_cast<int>(std::ceil(L_max / ell_min)) + 2;
    const int cap = max_len + 5;
    auto classes = sweep(max_len);
    bool stabilized = false;
    while (max_len < cap) {
        auto next = sweep(max_len + 1);
        if (next.size() == classes.size()) {
            stabilized = true;
            classes = std::move(next);
            break;
        }
        ++max_len;
        classes = std::move(next);
    }

    // Dehn reduction does not see conjugacies that pass through longer
    // intermediate words (relator insertions), so finish with an exact
    // merge: search for an explicit conjugator among short group elements.
    // A hit proves conjugacy; discreteness keeps distinct elements far
    // apart, so the matrix comparison cannot produce false merges.
    std::vector<IsometryMatrix> conjugators{IsometryMatrix{}};
    {
        std::vector<std::vector<int8_t>> frontier{{}};
        for (int len = 1; len <= 4; ++len) {
            std::vector<std::vector<int8_t>> next;
            for (auto& w : frontier) {
                for (int l = 1; l <= 4; ++l) {
                    for (int s : {l, -l}) {
                        if (!w.empty() && w.back() == -s) continue;
                        auto w2 = w;
                        w2.push_back(static_cast<int8_t>(s));
                        conjugators.push_back(evaluate(GroupWord{w2}));
                        next.push_back(std::move(w2));
                    }
                }
            }
            frontier = std::move(next);
        }
    }
    auto conjugate_in_group = [&](const IsometryMatrix& m1, const IsometryMatrix& m2) {
        IsometryMatrix m1i = m1.inverse();
        for (const auto& u : conjugators) {
            IsometryMatrix ui = u.inverse();
            if (detail::matrices_close(u * m1 * ui, m2, 1e-6) ||
                detail::matrices_close(u * m1i * ui, m2, 1e-6))
                return true;
        }
        return false;
    };

    std::vector<ConjugacyClassEntry> entries;
    for (auto& [c, e] : classes) entries.push_back(e);
    std::sort(entries.begin(), entries.end(),
              [](const auto& x, const auto& y) { return x.length < y.length; });

    std::vector<ConjugacyClassEntry> merged;
    for (auto& e : entries) {
        bool dup = false;
        for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
            if (e.length - it->length > 1e-7) break; // sorted; only equal-length can merge
            if (conjugate_in_group(e.matrix, it->matrix)) {
                dup = true;
                break;
            }
        }
        if (!dup) merged.push_back(e);
    }

    // primitivity: a class whose length is k times a shorter class's and
    // whose matrix is conjugate to that k-th power is not primitive
    std::vector<ConjugacyClassEntry> primitive;
    for (auto& e : merged) {
        bool is_power = is_proper_power(e.word);
        for (auto& u : merged) {
            if (is_power) break;
            if (u.length >= e.length - 1e-9) break;
            for (int k = 2; u.length * k <= e.length + 1e-6; ++k) {
                if (std::fabs(u.length * k - e.length) > 1e-6) continue;
                IsometryMatrix p;
                for (int j = 0; j < k; ++j) p = p * u.matrix;
                if (conjugate_in_group(p.normalized(), e.matrix)) {
                    is_power = true;
                    break;
                }
            }
        }
        if (!is_power) primitive.push_back(e);
    }
    merged = std::move(primitive);

    std::sort(merged.begin(), merged.end(), [](const auto& x, const auto& y) {
        if (x.length != y.length) return x.length < y.length;
        return x.word < y.word;
    });

    EnumerationResult res;
    res.classes = std::move(merged);
    res.complete = stabilized;
    res.certified_up_to = stabilized ? L_max : ell_min * (max_len - 2) / 2.0;
    return res;
}

} // namespace geolab
