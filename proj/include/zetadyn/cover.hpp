#pragma once

// Markov covers and the signed inclusion-exclusion counting built on them:
// uniform arc covers for circle maps, cylinder covers for shift spaces, the
// coding maps theta (via shadowing) and Pi (exact interval pullback), the
// intersecting families I_r with their signed matrices A^(r)/B^(r), and the
// alternating trace formula
//     N_p = sum_{r=1}^{L} (-1)^{r-1} tr((B^(r))^p)
// together with the rational zeta assembly from the same determinants.
//
// All intersection geometry is exact rational endpoint arithmetic, with the
// circle wraparound 0 == 1 handled explicitly.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zetadyn/expmap.hpp"
#include "zetadyn/matrix.hpp"
#include "zetadyn/series.hpp"
#include "zetadyn/sft.hpp"
#include "zetadyn/shadow.hpp"

namespace zetadyn {

namespace detail {

// do the open arcs (a.lo, a.hi) and (b.lo, b.hi) overlap modulo 1?
inline bool arcs_open_overlap(const CircleArc& a, const CircleArc& b) {
    for (int s = -2; s <= 2; ++s) {
        Rat lo = std::max(a.lo, Rat(b.lo + s));
        Rat hi = std::min(a.hi, Rat(b.hi + s));
        if (hi > lo) return true;
    }
    return false;
}

// open containment modulo 1: (inner) subset of (outer)
inline bool arc_open_contains(const CircleArc& outer, const CircleArc& inner) {
    if (outer.length() >= 1) return true;  // covers the whole circle
    for (int s = -2; s <= 2; ++s)
        if (outer.lo <= inner.lo + s && inner.hi + s <= outer.hi) return true;
    return false;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// circle covers

struct CircleCover {
    int k = 2;  // degree of the map t -> kt
    std::vector<CircleArc> arcs;
    IntMatrix transition{1};

    const CircleArc& rect(int i) const { return arcs.at(i); }
    int size() const { return static_cast<int>(arcs.size()); }
};

// transition A_ij = 1 iff f(int R_i) meets int R_j, by exact image intervals
inline IntMatrix circle_cover_transition(int k, const std::vector<CircleArc>& arcs) {
    const int m = static_cast<int>(arcs.size());
    IntMatrix a(m);
    for (int i = 0; i < m; ++i) {
        CircleArc image{arcs[i].lo * k, arcs[i].hi * k};
        for (int j = 0; j < m; ++j) {
            bool meets = image.length() >= 1;
            if (!meets) {
                for (int s = -k - 1; s <= k + 1 && !meets; ++s) {
                    Rat lo = std::max(image.lo, Rat(arcs[j].lo + s));
                    Rat hi = std::min(image.hi, Rat(arcs[j].hi + s));
                    meets = hi > lo;
                }
            }
            if (meets) a.at(i, j) = 1;
        }
    }
    return a;
}

inline CircleCover circle_cover_from_arcs(int k, std::vector<CircleArc> arcs) {
    if (k < 2) throw std::invalid_argument("cover needs a circle map degree k >= 2");
    if (arcs.empty()) throw std::invalid_argument("cover needs at least one arc");
    CircleCover c;
    c.k = k;
    c.transition = circle_cover_transition(k, arcs);
    c.arcs = std::move(arcs);
    return c;
}

// uniform partition into m arcs [i/m, (i+1)/m]
inline CircleCover uniform_circle_cover(int k, int m) {
    std::vector<CircleArc> arcs;
    arcs.reserve(m);
    for (int i = 0; i < m; ++i) {
        // Rat(a, b) does not canonicalize; exact comparisons need reduced form
        Rat lo(i, m), hi(i + 1, m);
        lo.canonicalize();
        hi.canonicalize();
        arcs.push_back({std::move(lo), std::move(hi)});
    }
    return circle_cover_from_arcs(k, std::move(arcs));
}

// m = k * ceil(1/(k*mesh)), a multiple of k so arc images are exact arc unions
inline CircleCover build_cover(const CircleMap& map, const Rat& mesh) {
    const int k = map.degree();
    if (mesh <= 0) throw std::invalid_argument("mesh must be positive");
    if (mesh > Rat(1, 2 * k))
        throw std::invalid_argument("mesh violates the diameter bound min{eps, c/2}");
    Rat inv = 1 / (mesh * k);
    Int ceil_inv;
    mpz_cdiv_q(ceil_inv.get_mpz_t(), inv.get_num().get_mpz_t(), inv.get_den().get_mpz_t());
    long m = k * ceil_inv.get_si();
    return uniform_circle_cover(k, static_cast<int>(m));
}

struct CoverReport {
    bool diameter_ok = false;  // diam(R_i) <= min{eps, c/2} at the sharp constants
    bool closure_ok = false;   // each rectangle is the closure of its interior
    bool disjoint_ok = false;  // interiors pairwise disjoint
    bool markov_ok = false;    // f(int R_i) meets int R_j => contains it
    bool union_ok = false;     // rectangles cover the whole space
    std::string detail;

    bool bullets_pass() const { return diameter_ok && closure_ok && disjoint_ok && markov_ok; }
    bool all_pass() const { return bullets_pass() && union_ok; }
    // the structural facts the counting formulas actually rely on
    bool structural_pass() const { return closure_ok && disjoint_ok && markov_ok && union_ok; }
};

inline CoverReport verify_cover(const CircleCover& cover) {
    CoverReport rep;
    std::ostringstream detail;
    const int k = cover.k;
    const int m = cover.size();

    // sharp constants for t -> kt: preimage gap exactly 1/k, expansivity
    // constants up to 1/(k+1); the binding bound is c/2 = 1/(2k)
    Rat diam_bound = std::min(Rat(1, k + 1), Rat(1, 2 * k));
    rep.diameter_ok = true;
    for (const auto& a : cover.arcs)
        if (a.length() > diam_bound) {
            rep.diameter_ok = false;
            detail << "arc [" << a.lo << ", " << a.hi << "] has diameter " << a.length()
                   << " > " << diam_bound << "; ";
        }

    rep.closure_ok = true;
    for (const auto& a : cover.arcs)
        if (!(a.hi > a.lo) || a.length() > 1) {
            rep.closure_ok = false;
            detail << "arc [" << a.lo << ", " << a.hi << "] has empty or improper interior; ";
        }

    rep.disjoint_ok = true;
    for (int i = 0; i < m && rep.disjoint_ok; ++i)
        for (int j = i + 1; j < m; ++j)
            if (detail::arcs_open_overlap(cover.arcs[i], cover.arcs[j])) {
                rep.disjoint_ok = false;
                detail << "interiors of arcs " << i << " and " << j << " overlap; ";
                break;
            }

    rep.markov_ok = true;
    for (int i = 0; i < m; ++i) {
        CircleArc image{cover.arcs[i].lo * k, cover.arcs[i].hi * k};
        for (int j = 0; j < m; ++j)
            if (cover.transition.at(i, j) == 1 &&
                !detail::arc_open_contains(image, cover.arcs[j])) {
                rep.markov_ok = false;
                detail << "f(int R_" << i << ") meets int R_" << j
                       << " without containing it; ";
            }
    }

    // coverage sweep over [0, 1] after splitting wrapping arcs
    std::vector<std::pair<Rat, Rat>> segs;
    for (const auto& a : cover.arcs) {
        Rat lo = mod1(a.lo);
        Rat hi = lo + a.length();
        if (hi <= 1) {
            segs.emplace_back(lo, hi);
        } else {
            segs.emplace_back(lo, Rat(1));
            segs.emplace_back(Rat(0), hi - 1);
        }
    }
    std::sort(segs.begin(), segs.end());
    Rat covered{0};
    for (const auto& s : segs) {
        if (s.first > covered) break;
        covered = std::max(covered, s.second);
    }
    rep.union_ok = covered >= 1;
    if (!rep.union_ok) detail << "arcs cover only up to " << covered << "; ";

    rep.detail = detail.str();
    return rep;
}

// ---------------------------------------------------------------------------
// cylinder covers

struct CylinderCover {
    SubshiftOfFiniteType sft;
    int depth = 1;
    std::vector<std::vector<int>> words;  // admissible words of length depth
    IntMatrix transition{1};

    int size() const { return static_cast<int>(words.size()); }
};

inline CylinderCover cylinder_cover(const SubshiftOfFiniteType& sft, int depth) {
    if (depth < 1) throw std::invalid_argument("cylinder depth must be >= 1");
    CylinderCover c{sft, depth, {}, IntMatrix(1)};
    std::vector<int> word(depth, 0);
    const int k = sft.alphabet_size();
    while (true) {
        if (sft.is_admissible(word)) c.words.push_back(word);
        int pos = 0;
        while (pos < depth && ++word[pos] == k) word[pos++] = 0;
        if (pos == depth) break;
    }
    const int m = c.size();
    if (m == 0) throw std::invalid_argument("no admissible words at this depth");
    IntMatrix a(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            bool follows = true;
            for (int t = 0; t + 1 < depth && follows; ++t)
                follows = c.words[i][t + 1] == c.words[j][t];
            if (depth == 1) follows = sft.allowed(c.words[i][0], c.words[j][0]);
            if (follows) a.at(i, j) = 1;
        }
    c.transition = std::move(a);
    return c;
}

inline CylinderCover build_cover(const ShiftMap& map, const Rat& mesh) {
    if (mesh <= 0) throw std::invalid_argument("mesh must be positive");
    double depth_d = std::ceil(std::log2(1.0 / mesh.get_d()));
    int depth = std::max(1, static_cast<int>(depth_d));
    // cylinder diameter at depth d is 2^(1-d); the bound is c/2 = 1/4
    if (std::pow(2.0, 1.0 - depth) > 0.25)
        throw std::invalid_argument("mesh violates the diameter bound min{eps, c/2}");
    return cylinder_cover(map.sft(), depth);
}

inline CoverReport verify_cover(const CylinderCover& cover) {
    CoverReport rep;
    std::ostringstream detail;
    // diam of a depth-d cylinder is sum_{n>=d} 2^-n = 2^(1-d); bound min{eps, c/2} = 1/4
    double diam = std::pow(2.0, 1.0 - cover.depth);
    rep.diameter_ok = diam <= 0.25;
    if (!rep.diameter_ok)
        detail << "cylinder diameter " << diam << " exceeds 1/4 at depth " << cover.depth
               << "; ";
    rep.closure_ok = true;   // cylinders are clopen with dense interior
    rep.disjoint_ok = true;  // distinct equal-depth cylinders are disjoint
    rep.markov_ok = true;    // shift(cylinder) is exactly the shifted cylinder
    // union: every admissible word of length depth appears
    rep.union_ok = !cover.words.empty();
    rep.detail = detail.str();
    return rep;
}

// ---------------------------------------------------------------------------
// coding maps

// Pi for circle covers: F_n = intersection of f^{-i}(R_{a_i}), an exact arc.
// Indices are 0-based positions into cover.arcs.
inline CircleArc pi_code(const CircleCover& cover, const std::vector<int>& prefix) {
    if (prefix.empty()) throw std::invalid_argument("pi_code needs a nonempty prefix");
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i)
        if (cover.transition.at(prefix[i], prefix[i + 1]) != 1)
            throw std::invalid_argument("prefix not admissible for the cover transition");
    const int k = cover.k;
    CircleArc f = cover.rect(prefix.back());
    for (std::size_t step = prefix.size() - 1; step-- > 0;) {
        const CircleArc& r = cover.rect(prefix[step]);
        bool found = false;
        CircleArc next{};
        for (int j = 0; j < k && !found; ++j) {
            CircleArc pull{(f.lo + j) / k, (f.hi + j) / k};
            for (int s = -1; s <= 1 && !found; ++s) {
                Rat lo = std::max(r.lo, Rat(pull.lo + s));
                Rat hi = std::min(r.hi, Rat(pull.hi + s));
                if (hi > lo) {
                    next = CircleArc{lo, hi};
                    found = true;
                }
            }
        }
        if (!found) throw std::logic_error("admissible prefix produced an empty pullback");
        f = next;
    }
    return f;
}

// Pi for cylinder covers: the common refinement is itself a cylinder word
inline std::vector<int> pi_code(const CylinderCover& cover, const std::vector<int>& prefix) {
    if (prefix.empty()) throw std::invalid_argument("pi_code needs a nonempty prefix");
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i)
        if (cover.transition.at(prefix[i], prefix[i + 1]) != 1)
            throw std::invalid_argument("prefix not admissible for the cover transition");
    std::vector<int> word = cover.words.at(prefix[0]);
    for (std::size_t i = 1; i < prefix.size(); ++i)
        word.push_back(cover.words.at(prefix[i]).back());
    return word;
}

// theta: code a symbol sequence over gamma-dense anchor points into the point
// that beta-shadows the induced pseudo-orbit (Lemma-style semiconjugacy).
template <class Map>
typename Map::point_type theta_code(const Map& map,
                                    const std::vector<typename Map::point_type>& dense_points,
                                    const std::vector<int>& prefix, double alpha, double beta) {
    if (prefix.size() < 2) throw std::invalid_argument("theta needs a prefix of length >= 2");
    std::vector<typename Map::point_type> orbit;
    orbit.reserve(prefix.size());
    for (int a : prefix) orbit.push_back(dense_points.at(a));
    auto cert = shadow_finite(map, make_pseudo_orbit(map, std::move(orbit), alpha), beta);
    return cert.point;
}

// ---------------------------------------------------------------------------
// intersecting families and the signed counting formula

struct IntersectingFamilies {
    // families[r-1] lists the sorted index sets of I_r
    std::vector<std::vector<std::vector<int>>> families;
    std::vector<IntMatrix> a_mats;  // A^(r), indexed r-1
    std::vector<IntMatrix> b_mats;  // B^(r)
    int L = 0;
};

namespace detail {

// count the permutations mu with base(s_i, t_{mu(i)}) = 1, stopping at two;
// records the sign of the unique one
struct MatchCount {
    int count = 0;
    int sign = 1;
};

// Straightforward permutation walk with explicit sign tracking.
inline MatchCount count_matchings(const IntMatrix& base, const std::vector<int>& s,
                                  const std::vector<int>& t) {
    const std::size_t r = s.size();
    MatchCount out;
    std::vector<int> assign(r, -1);
    std::vector<char> used(r, 0);
    // iterative backtracking; sign computed from the finished permutation
    std::size_t level = 0;
    int next = 0;
    while (true) {
        if (level == r) {
            ++out.count;
            if (out.count >= 2) return out;
            int inv = 0;
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = i + 1; j < r; ++j)
                    if (assign[i] > assign[j]) ++inv;
            out.sign = (inv % 2 == 0) ? 1 : -1;
            // backtrack to look for a second matching
            --level;
            used[assign[level]] = 0;
            next = assign[level] + 1;
            assign[level] = -1;
            continue;
        }
        bool advanced = false;
        for (int j = next; j < static_cast<int>(r); ++j) {
            if (!used[j] && base.at(s[level], t[j]) == 1) {
                assign[level] = j;
                used[j] = 1;
                ++level;
                next = 0;
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            if (level == 0) return out;
            --level;
            used[assign[level]] = 0;
            next = assign[level] + 1;
            assign[level] = -1;
        }
    }
}

// generic I_r enumeration + signed matrix assembly
template <class CommonPoint>
IntersectingFamilies build_families(int m, const IntMatrix& base, CommonPoint&& common) {
    IntersectingFamilies fams;
    std::vector<std::vector<int>> current;
    for (int i = 0; i < m; ++i) current.push_back({i});
    int r = 1;
    while (!current.empty()) {
        if (r > 12) throw std::invalid_argument("intersecting families beyond r = 12");
        const int n = static_cast<int>(current.size());
        IntMatrix amat(n), bmat(n);
        for (int si = 0; si < n; ++si)
            for (int ti = 0; ti < n; ++ti) {
                MatchCount mc = count_matchings(base, current[si], current[ti]);
                if (mc.count == 1) {
                    amat.at(si, ti) = 1;
                    bmat.at(si, ti) = mc.sign;
                }
            }
        fams.families.push_back(current);
        fams.a_mats.push_back(std::move(amat));
        fams.b_mats.push_back(std::move(bmat));
        // extend to r+1 by appending a larger index with nonempty intersection
        std::vector<std::vector<int>> next;
        for (const auto& set : current)
            for (int t = set.back() + 1; t < m; ++t) {
                std::vector<int> cand = set;
                cand.push_back(t);
                if (common(cand)) next.push_back(cand);
            }
        current = std::move(next);
        ++r;
    }
    fams.L = static_cast<int>(fams.families.size());
    return fams;
}

}  // namespace detail

inline IntersectingFamilies intersecting_families(const CircleCover& cover) {
    CoverReport rep = verify_cover(cover);
    if (!rep.structural_pass())
        throw std::invalid_argument("cover failed verification: " + rep.detail);
    // a nonempty intersection of arcs with disjoint interiors contains an
    // arc endpoint, so endpoint membership decides everything
    std::vector<Rat> endpoints;
    for (const auto& a : cover.arcs) {
        endpoints.push_back(a.lo);
        endpoints.push_back(a.hi);
    }
    auto common = [&cover, &endpoints](const std::vector<int>& idx) {
        for (const Rat& e : endpoints) {
            bool in_all = true;
            for (int i : idx)
                if (!cover.rect(i).contains(e)) {
                    in_all = false;
                    break;
                }
            if (in_all) return true;
        }
        return false;
    };
    return detail::build_families(cover.size(), cover.transition, common);
}

inline IntersectingFamilies intersecting_families(const CylinderCover& cover) {
    CoverReport rep = verify_cover(cover);
    if (!rep.structural_pass())
        throw std::invalid_argument("cover failed verification: " + rep.detail);
    // distinct equal-depth cylinders are disjoint closed sets
    auto common = [&cover](const std::vector<int>& idx) {
        for (std::size_t i = 1; i < idx.size(); ++i)
            if (cover.words[idx[i]] != cover.words[idx[0]]) return false;
        return true;
    };
    return detail::build_families(cover.size(), cover.transition, common);
}

// N_p = sum_r (-1)^(r-1) tr((B^(r))^p); exact, may legitimately disagree with
// the true count when the cover is too coarse for the coding to be injective
inline Int count_periodic_via_cover(const IntersectingFamilies& fams, unsigned p) {
    if (fams.b_mats.empty()) throw std::invalid_argument("families not built");
    Int n{0};
    for (std::size_t r = 1; r <= fams.b_mats.size(); ++r) {
        Int t = mat_power_trace(fams.b_mats[r - 1], p);
        if (r % 2 == 1)
            n += t;
        else
            n -= t;
    }
    return n;
}

inline RationalFunction zeta_via_cover(const IntersectingFamilies& fams) {
    RationalFunction z = zeta_from_signed_family(fams.b_mats);
    // the expansion must reproduce the trace formula order by order
    std::size_t order = 0;
    for (const auto& b : fams.b_mats) order += static_cast<std::size_t>(b.dim());
    TruncatedSeries direct = series_expand(z, order);
    CountSequence counts(order);
    for (std::size_t p = 1; p <= order; ++p) counts[p - 1] = count_periodic_via_cover(fams, p);
    TruncatedSeries from_counts = zeta_series_from_counts(counts);
    for (std::size_t i = 0; i <= order; ++i)
        if (direct[i] != from_counts[i])
            throw std::logic_error("zeta expansion disagrees with the trace formula");
    return z;
}

}  // namespace zetadyn
