#pragma once

// Ruelle-expanding map instances over exact rational point spaces: the
// circle x -> kx mod 1, expanding toral endomorphisms, and the shared branch
// machinery (composed contractive branches, Bowen balls, preimage surveys).
//
// Point coordinates stay exact rationals end to end, so periodic-point
// identities can be asserted with equality rather than tolerance. Generic
// algorithms (shadowing, entropy tools) consume any map type exposing:
//   point_type, apply, dist, preimages, branch_eval, and the constants
//   r, lambda, c, preimage_gap, expansivity_eps.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zetadyn/matrix.hpp"

namespace zetadyn {

// fractional part in [0, 1); canonicalizes, so raw Rat(a, b) inputs are safe
inline Rat mod1(const Rat& t) {
    Rat u = t;
    u.canonicalize();
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), u.get_num().get_mpz_t(), u.get_den().get_mpz_t());
    return u - fl;
}

// representative of t in [-1/2, 1/2)
inline Rat centered_mod1(const Rat& t) {
    Rat m = mod1(t);
    if (m >= Rat(1, 2)) m -= 1;
    return m;
}

struct CirclePoint {
    Rat t;  // in [0, 1)
    CirclePoint() = default;
    explicit CirclePoint(Rat v) : t(mod1(std::move(v))) {}
    explicit CirclePoint(double v) : CirclePoint(Rat(v)) {}
    friend bool operator==(const CirclePoint& a, const CirclePoint& b) { return a.t == b.t; }
};

inline Rat circle_dist_exact(const CirclePoint& a, const CirclePoint& b) {
    Rat d = mod1(a.t - b.t);
    return d <= Rat(1, 2) ? d : 1 - d;
}

class CircleMap {
public:
    using point_type = CirclePoint;

    explicit CircleMap(int k) : k_(k) {
        if (k < 2) throw std::invalid_argument("circle map needs k >= 2");
        lambda = 1.0 / k;
        preimage_gap = 1.0 / k;
        c = preimage_gap - 1e-9;
        r = 0.5 / k - 1e-9;
        // branches t -> (t+j)/k stay single-valued for any lift within a half
        // turn of the anchor, so their true domain is much larger than r
        branch_domain = 0.5 - 1e-9;
        expansivity_eps = 0.99 * std::min(r, c / (1.0 + lambda));
    }

    int degree() const { return k_; }

    CirclePoint apply(const CirclePoint& p) const { return CirclePoint(p.t * k_); }

    CirclePoint iterate(CirclePoint p, unsigned n) const {
        for (unsigned i = 0; i < n; ++i) p = apply(p);
        return p;
    }

    double dist(const CirclePoint& a, const CirclePoint& b) const {
        return circle_dist_exact(a, b).get_d();
    }

    // preimages (t+j)/k in branch order j = 0..k-1, with t taken in [0,1)
    std::vector<CirclePoint> preimages(const CirclePoint& x) const {
        std::vector<CirclePoint> pre;
        pre.reserve(k_);
        for (int j = 0; j < k_; ++j) pre.emplace_back((x.t + j) / k_);
        return pre;
    }

    // branch j of f^{-1} anchored at x, evaluated at y in B_r(x)
    CirclePoint branch_eval(const CirclePoint& x, int j, const CirclePoint& y) const {
        if (j < 0 || j >= k_) throw std::out_of_range("branch index");
        Rat lifted = x.t + centered_mod1(y.t - x.t);
        return CirclePoint((lifted + j) / k_);
    }

    // exact periodic point nearest x: periodic points of period p are
    // j/(k^p - 1)
    std::optional<CirclePoint> snap_periodic(const CirclePoint& x, unsigned p) const {
        Int denom;
        mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(k_), p);
        denom -= 1;
        Rat scaled = x.t * denom;
        Rat half(1, 2);
        Int j;
        Rat shifted = scaled + half;
        mpz_fdiv_q(j.get_mpz_t(), shifted.get_num().get_mpz_t(), shifted.get_den().get_mpz_t());
        return CirclePoint(Rat(j) / denom);
    }

    // all k^p - 1 period-p points, exact
    std::vector<CirclePoint> periodic_points(unsigned p) const {
        Int denom;
        mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(k_), p);
        denom -= 1;
        std::vector<CirclePoint> pts;
        for (Int j{0}; j < denom; ++j) pts.emplace_back(Rat(j) / denom);
        return pts;
    }

    Int periodic_count(unsigned p) const {
        Int n;
        mpz_ui_pow_ui(n.get_mpz_t(), static_cast<unsigned long>(k_), p);
        return n - 1;
    }

    double r, branch_domain, lambda, c, preimage_gap, expansivity_eps;

private:
    int k_;
};

struct TorusPoint {
    Rat x, y;  // each in [0, 1)
    TorusPoint() = default;
    TorusPoint(Rat px, Rat py) : x(mod1(std::move(px))), y(mod1(std::move(py))) {}
    friend bool operator==(const TorusPoint& a, const TorusPoint& b) {
        return a.x == b.x && a.y == b.y;
    }
};

inline Rat torus_dist_exact(const TorusPoint& a, const TorusPoint& b) {
    auto coord = [](const Rat& u, const Rat& v) {
        Rat d = mod1(u - v);
        return d <= Rat(1, 2) ? d : 1 - d;
    };
    return std::max(coord(a.x, b.x), coord(a.y, b.y));
}

// 2x2 expanding toral endomorphism v -> Mv mod 1 with the max-metric.
class ToralMap {
public:
    using point_type = TorusPoint;

    explicit ToralMap(const IntMatrix& m) : m_(m) {
        if (m.dim() != 2) throw std::invalid_argument("toral map needs a 2x2 matrix");
        det_ = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
        if (det_ == 0) throw std::invalid_argument("singular toral matrix");
        check_eigenvalues_expanding();
        // M^{-1} = adj(M)/det, exact
        inv_ = {{Rat(m.at(1, 1)) / Rat(det_), Rat(-m.at(0, 1)) / Rat(det_)},
                {Rat(-m.at(1, 0)) / Rat(det_), Rat(m.at(0, 0)) / Rat(det_)}};
        double norm = operator_norm_inf(inv_);
        if (norm >= 1.0)
            throw std::invalid_argument(
                "not expanding in one step: |M^-1| >= 1 in the max-metric");
        lambda = norm;
        offsets_ = fundamental_offsets();
        preimage_gap = minimal_preimage_gap();
        c = preimage_gap * (1.0 - 1e-9);
        r = 0.25 * (1.0 - norm);  // conservative radius for the formal constant
        branch_domain = 0.5 - 1e-9;  // coordinate lifts stay unambiguous to a half turn
        expansivity_eps = 0.99 * std::min(r, c / (1.0 + lambda));
    }

    const IntMatrix& matrix() const { return m_; }
    const Int& det() const { return det_; }
    int branch_count() const { return static_cast<int>(offsets_.size()); }

    TorusPoint apply(const TorusPoint& p) const {
        return TorusPoint(Rat(m_.at(0, 0)) * p.x + Rat(m_.at(0, 1)) * p.y,
                          Rat(m_.at(1, 0)) * p.x + Rat(m_.at(1, 1)) * p.y);
    }

    double dist(const TorusPoint& a, const TorusPoint& b) const {
        return torus_dist_exact(a, b).get_d();
    }

    std::vector<TorusPoint> preimages(const TorusPoint& v) const {
        std::vector<TorusPoint> pre;
        pre.reserve(offsets_.size());
        for (const auto& w : offsets_) {
            Rat ux = v.x + w.first, uy = v.y + w.second;
            pre.emplace_back(inv_[0][0] * ux + inv_[0][1] * uy, inv_[1][0] * ux + inv_[1][1] * uy);
        }
        return pre;
    }

    TorusPoint branch_eval(const TorusPoint& x, int j, const TorusPoint& y) const {
        if (j < 0 || j >= branch_count()) throw std::out_of_range("branch index");
        Rat lx = x.x + centered_mod1(y.x - x.x);
        Rat ly = x.y + centered_mod1(y.y - x.y);
        Rat ux = lx + offsets_[j].first, uy = ly + offsets_[j].second;
        return TorusPoint(inv_[0][0] * ux + inv_[0][1] * uy, inv_[1][0] * ux + inv_[1][1] * uy);
    }

    std::optional<TorusPoint> snap_periodic(const TorusPoint& v, unsigned p) const {
        // solve (M^p - I) z = w over Z^2 for the integer vector w nearest
        // (M^p - I) v
        IntMatrix mp = m_.power(p);
        Int a = mp.at(0, 0) - 1, b = mp.at(0, 1), cc = mp.at(1, 0), d = mp.at(1, 1) - 1;
        Int det = a * d - b * cc;
        if (det == 0) return std::nullopt;
        auto nearest_int = [](const Rat& q) {
            Rat shifted = q + Rat(1, 2);
            Int fl;
            mpz_fdiv_q(fl.get_mpz_t(), shifted.get_num().get_mpz_t(),
                       shifted.get_den().get_mpz_t());
            return fl;
        };
        Rat wx_exact = Rat(a) * v.x + Rat(b) * v.y;
        Rat wy_exact = Rat(cc) * v.x + Rat(d) * v.y;
        Int wx = nearest_int(wx_exact), wy = nearest_int(wy_exact);
        Rat zx = (Rat(d) * wx - Rat(b) * wy) / Rat(det);
        Rat zy = (Rat(-cc) * wx + Rat(a) * wy) / Rat(det);
        return TorusPoint(std::move(zx), std::move(zy));
    }

    double r, branch_domain, lambda, c, preimage_gap, expansivity_eps;

private:
    using RatMat = std::vector<std::vector<Rat>>;

    void check_eigenvalues_expanding() const {
        double tr = Int(m_.at(0, 0) + m_.at(1, 1)).get_d();
        double de = det_.get_d();
        double disc = tr * tr - 4.0 * de;
        double min_mod;
        if (disc >= 0) {
            double s = std::sqrt(disc);
            min_mod = std::min(std::abs((tr + s) / 2.0), std::abs((tr - s) / 2.0));
        } else {
            min_mod = std::sqrt(std::abs(de));  // complex pair: |lambda|^2 = det
        }
        if (min_mod <= 1.0 + 1e-12)
            throw std::invalid_argument("toral matrix is not expanding (eigenvalue modulus <= 1)");
    }

    static double operator_norm_inf(const RatMat& m) {
        Rat r0 = abs(m[0][0]) + abs(m[0][1]);
        Rat r1 = abs(m[1][0]) + abs(m[1][1]);
        return std::max(r0, r1).get_d();
    }

    // one integer offset per coset of M Z^2 in Z^2; |det M| of them
    std::vector<std::pair<Int, Int>> offsets_;
    std::vector<std::pair<Int, Int>> fundamental_offsets() const {
        long need = std::abs(static_cast<long>(det_.get_si()));
        long bound = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                bound += std::abs(static_cast<long>(m_.at(i, j).get_si()));
        std::vector<std::pair<Int, Int>> out;
        std::vector<TorusPoint> seen;
        for (long w1 = -bound; w1 <= bound && static_cast<long>(out.size()) < need; ++w1)
            for (long w2 = -bound; w2 <= bound && static_cast<long>(out.size()) < need; ++w2) {
                TorusPoint cand(inv_[0][0] * w1 + inv_[0][1] * w2,
                                inv_[1][0] * w1 + inv_[1][1] * w2);
                bool dup = false;
                for (const auto& s : seen)
                    if (s == cand) {
                        dup = true;
                        break;
                    }
                if (!dup) {
                    seen.push_back(cand);
                    out.emplace_back(w1, w2);
                }
            }
        return out;
    }

    double minimal_preimage_gap() const {
        double best = 1.0;
        TorusPoint origin(Rat(0), Rat(0));
        auto pre = preimages(origin);
        for (std::size_t i = 0; i < pre.size(); ++i)
            for (std::size_t j = i + 1; j < pre.size(); ++j)
                best = std::min(best, dist(pre[i], pre[j]));
        return pre.size() > 1 ? best : 1.0;
    }

    IntMatrix m_;
    Int det_;
    RatMat inv_;
};

// |det(M^n - I)|, exact; valid whenever no eigenvalue of M lies on the unit
// circle (hyperbolic or expanding alike)
inline Int toral_count(const IntMatrix& m, unsigned n) {
    if (m.dim() != 2) throw std::invalid_argument("toral_count needs a 2x2 matrix");
    IntMatrix mp = m.power(n);
    Int d = (mp.at(0, 0) - 1) * (mp.at(1, 1) - 1) - mp.at(0, 1) * mp.at(1, 0);
    return abs(d);
}

// One inverse branch at an anchor point: evaluate with
// map.branch_eval(anchor, index, y).
template <class Map>
struct InverseBranch {
    typename Map::point_type anchor;
    typename Map::point_type preimage;
    int index;
};

template <class Map>
std::vector<InverseBranch<Map>> branches(const Map& map, const typename Map::point_type& x) {
    std::vector<InverseBranch<Map>> out;
    auto pre = map.preimages(x);
    for (std::size_t j = 0; j < pre.size(); ++j)
        out.push_back({x, pre[j], static_cast<int>(j)});
    return out;
}

// A composed contractive branch of f^{-n}: anchor x, a branch choice per
// level, contraction lambda^n.
template <class Map>
struct ComposedBranch {
    using P = typename Map::point_type;
    P anchor;
    P preimage;                // g(anchor)
    std::vector<int> choice;   // branch index per level
    std::vector<P> waypoints;  // anchor, then the successive level anchors

    P eval(const Map& map, const P& y) const {
        P cur = y;
        for (std::size_t level = 0; level < choice.size(); ++level)
            cur = map.branch_eval(waypoints[level], choice[level], cur);
        return cur;
    }
};

template <class Map>
ComposedBranch<Map> compose_branches(const Map& map, const typename Map::point_type& x,
                                     unsigned n, const std::vector<int>& choice) {
    if (choice.size() != n) throw std::invalid_argument("need one branch index per level");
    ComposedBranch<Map> g;
    g.anchor = x;
    g.choice = choice;
    typename Map::point_type cur = x;
    for (unsigned level = 0; level < n; ++level) {
        g.waypoints.push_back(cur);
        auto pre = map.preimages(cur);
        if (choice[level] < 0 || choice[level] >= static_cast<int>(pre.size()))
            throw std::out_of_range("branch choice exceeds branch count");
        cur = pre[choice[level]];
    }
    g.preimage = cur;
    return g;
}

// closed arc on the circle used as the Bowen-ball descriptor
struct CircleArc {
    Rat lo, hi;  // arc from lo to hi going counterclockwise; lo <= hi as reals
    Rat length() const { return hi - lo; }
    // membership modulo 1: shift t by integers into [lo, hi]
    bool contains(const Rat& t) const {
        Rat u = mod1(t) - 1;
        for (int s = 0; s <= 2; ++s, u += 1)
            if (u >= lo && u <= hi) return true;
        return false;
    }
};

// B(n, eps, x) for the circle map: the arc of radius eps/k^n around x
inline CircleArc dynamical_ball(const CircleMap& map, const CirclePoint& x, unsigned n,
                                const Rat& eps) {
    double e = eps.get_d();
    if (e <= 0 || e >= map.expansivity_eps / 0.99)
        throw std::invalid_argument("eps must lie in (0, min{r, c/(1+lambda)})");
    Int kn;
    mpz_ui_pow_ui(kn.get_mpz_t(), static_cast<unsigned long>(map.degree()), n);
    Rat radius = eps / Rat(kn);
    return CircleArc{x.t - radius, x.t + radius};
}

struct PreimageSurvey {
    int max_preimage_count = 0;
    double min_gap = std::numeric_limits<double>::infinity();  // +inf when all counts <= 1
};

template <class Map>
PreimageSurvey preimage_separation_bound(const Map& map,
                                         const std::vector<typename Map::point_type>& samples) {
    if (samples.empty()) throw std::invalid_argument("need at least one sample");
    PreimageSurvey s;
    for (const auto& x : samples) {
        auto pre = map.preimages(x);
        s.max_preimage_count = std::max<int>(s.max_preimage_count, static_cast<int>(pre.size()));
        for (std::size_t i = 0; i < pre.size(); ++i)
            for (std::size_t j = i + 1; j < pre.size(); ++j)
                s.min_gap = std::min(s.min_gap, map.dist(pre[i], pre[j]));
    }
    return s;
}

}  // namespace zetadyn
