#pragma once

// Subshifts of finite type over a binary transition matrix, plus the shift
// space viewed as a Ruelle-expanding map. Points are eventually periodic
// symbol sequences, so orbits and periodic-point checks stay exact.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zetadyn/expmap.hpp"
#include "zetadyn/matrix.hpp"
#include "zetadyn/series.hpp"

namespace zetadyn {

// Eventually periodic one-sided sequence: symbols[0..cycle_start) is the
// preperiodic prefix, symbols[cycle_start..] repeats forever.
struct ShiftPoint {
    std::vector<int> symbols;
    std::size_t cycle_start = 0;

    ShiftPoint() : symbols{0} {}
    ShiftPoint(std::vector<int> syms, std::size_t start) : symbols(std::move(syms)), cycle_start(start) {
        if (symbols.empty() || cycle_start >= symbols.size())
            throw std::invalid_argument("shift point needs a nonempty repeating tail");
    }

    static ShiftPoint periodic(std::vector<int> cycle) { return ShiftPoint(std::move(cycle), 0); }

    std::size_t cycle_length() const { return symbols.size() - cycle_start; }

    int at(std::size_t i) const {
        if (i < symbols.size()) return symbols[i];
        return symbols[cycle_start + (i - cycle_start) % cycle_length()];
    }

    ShiftPoint shifted() const {
        ShiftPoint p = *this;
        if (p.cycle_start > 0) {
            p.symbols.erase(p.symbols.begin());
            --p.cycle_start;
        } else {
            std::rotate(p.symbols.begin(), p.symbols.begin() + 1, p.symbols.end());
        }
        return p;
    }

    ShiftPoint prepended(int s) const {
        ShiftPoint p = *this;
        p.symbols.insert(p.symbols.begin(), s);
        ++p.cycle_start;
        return p;
    }

    // semantic equality of the sequences, not of the representations
    friend bool operator==(const ShiftPoint& a, const ShiftPoint& b) {
        std::size_t horizon = std::max(a.symbols.size(), b.symbols.size()) +
                              std::lcm(a.cycle_length(), b.cycle_length());
        for (std::size_t i = 0; i < horizon; ++i)
            if (a.at(i) != b.at(i)) return false;
        return true;
    }
};

// d(x, y) = sum_{n >= 0} delta(x_n, y_n) 2^{-n}, truncated far below double
// precision
inline double shift_dist(const ShiftPoint& a, const ShiftPoint& b) {
    double d = 0, w = 1.0;
    for (std::size_t i = 0; i < 80; ++i, w *= 0.5)
        if (a.at(i) != b.at(i)) d += w;
    return d;
}

class SubshiftOfFiniteType {
public:
    explicit SubshiftOfFiniteType(IntMatrix transition) : a_(std::move(transition)) {
        if (!a_.is_binary()) throw std::invalid_argument("transition matrix must be binary");
        if (a_.is_zero()) throw std::invalid_argument("transition matrix must be nonzero");
    }

    static SubshiftOfFiniteType full_shift(int k) {
        IntMatrix a(k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) a.at(i, j) = 1;
        return SubshiftOfFiniteType(std::move(a));
    }

    const IntMatrix& transition() const { return a_; }
    int alphabet_size() const { return a_.dim(); }

    bool allowed(int s, int t) const {
        if (s < 0 || t < 0 || s >= a_.dim() || t >= a_.dim())
            throw std::out_of_range("symbol out of alphabet");
        return a_.at(s, t) == 1;
    }

    bool is_admissible(const std::vector<int>& word) const {
        for (int s : word)
            if (s < 0 || s >= a_.dim()) throw std::out_of_range("symbol out of alphabet");
        for (std::size_t i = 0; i + 1 < word.size(); ++i)
            if (!allowed(word[i], word[i + 1])) return false;
        return true;
    }

    // membership of an eventually periodic point: prefix admissible and the
    // cycle closes up
    bool contains(const ShiftPoint& p) const {
        for (std::size_t i = 0; i + 1 < p.symbols.size(); ++i)
            if (!allowed(p.symbols[i], p.symbols[i + 1])) return false;
        return allowed(p.symbols.back(), p.symbols[p.cycle_start]);
    }

    // N_n = tr(A^n)
    Int count_periodic_trace(unsigned n) const { return mat_power_trace(a_, n); }

    // direct enumeration of admissible cyclic words; guarded against blowup
    Int count_periodic_bruteforce(unsigned n) const {
        if (n < 1) throw std::invalid_argument("period must be >= 1");
        double size = std::pow(static_cast<double>(a_.dim()), static_cast<double>(n));
        if (size > 1e7) throw std::invalid_argument("brute force would enumerate > 1e7 words");
        Int count{0};
        std::vector<int> word(n, 0);
        const int k = a_.dim();
        while (true) {
            bool ok = true;
            for (unsigned i = 0; i < n && ok; ++i) ok = allowed(word[i], word[(i + 1) % n]);
            if (ok) ++count;
            unsigned pos = 0;
            while (pos < n && ++word[pos] == k) word[pos++] = 0;
            if (pos == n) break;
        }
        return count;
    }

    std::vector<ShiftPoint> periodic_points(unsigned n) const {
        double size = std::pow(static_cast<double>(a_.dim()), static_cast<double>(n));
        if (size > 1e7) throw std::invalid_argument("enumeration would exceed 1e7 words");
        std::vector<ShiftPoint> pts;
        std::vector<int> word(n, 0);
        const int k = a_.dim();
        while (true) {
            bool ok = true;
            for (unsigned i = 0; i < n && ok; ++i) ok = allowed(word[i], word[(i + 1) % n]);
            if (ok) pts.push_back(ShiftPoint::periodic(word));
            unsigned pos = 0;
            while (pos < n && ++word[pos] == k) word[pos++] = 0;
            if (pos == n) break;
        }
        return pts;
    }

    // log of the Perron eigenvalue, bracketed exactly then rounded
    std::pair<double, double> entropy(const Rat& width = Rat(1, 1000000000)) const {
        auto b = perron_bounds_to_width(a_, width);
        if (b.first <= 0) return {0.0, 0.0};  // spectral radius <= 1 edge cases
        return {std::log(b.first.get_d()), std::log(b.second.get_d())};
    }

    RationalFunction zeta() const { return zeta_from_sft(a_); }

private:
    IntMatrix a_;
};

// The one-sided shift as a Ruelle-expanding map. Branches prepend a symbol s
// with A_{s, x_0} = 1; each branch contracts by exactly 1/2.
class ShiftMap {
public:
    using point_type = ShiftPoint;

    explicit ShiftMap(SubshiftOfFiniteType s) : sft_(std::move(s)) {
        r = 1.0;
        branch_domain = 1.0;  // every branch is defined on B_r(x) = B_1(x)
        lambda = 0.5;
        c = 0.5;
        preimage_gap = 1.0;  // distinct preimages differ in symbol 0
        expansivity_eps = 0.99 * std::min(r, c / (1.0 + lambda));
    }

    const SubshiftOfFiniteType& sft() const { return sft_; }

    ShiftPoint apply(const ShiftPoint& p) const { return p.shifted(); }

    ShiftPoint iterate(ShiftPoint p, unsigned n) const {
        for (unsigned i = 0; i < n; ++i) p = apply(p);
        return p;
    }

    double dist(const ShiftPoint& a, const ShiftPoint& b) const { return shift_dist(a, b); }

    std::vector<ShiftPoint> preimages(const ShiftPoint& x) const {
        std::vector<ShiftPoint> pre;
        for (int s = 0; s < sft_.alphabet_size(); ++s)
            if (sft_.allowed(s, x.at(0))) pre.push_back(x.prepended(s));
        return pre;
    }

    ShiftPoint branch_eval(const ShiftPoint& x, int j, const ShiftPoint& y) const {
        int count = -1, symbol = -1;
        for (int s = 0; s < sft_.alphabet_size(); ++s)
            if (sft_.allowed(s, x.at(0)) && ++count == j) {
                symbol = s;
                break;
            }
        if (symbol < 0) throw std::out_of_range("branch index");
        return y.prepended(symbol);
    }

    // close up the first p symbols of x into a purely periodic point
    std::optional<ShiftPoint> snap_periodic(const ShiftPoint& x, unsigned p) const {
        std::vector<int> cycle(p);
        for (unsigned i = 0; i < p; ++i) cycle[i] = x.at(i);
        ShiftPoint z = ShiftPoint::periodic(std::move(cycle));
        if (!sft_.contains(z)) return std::nullopt;
        return z;
    }

    double r, branch_domain, lambda, c, preimage_gap, expansivity_eps;

private:
    SubshiftOfFiniteType sft_;
};

// B(n, eps, x) for the shift with eps <= r: the cylinder fixing x_0..x_n
inline std::vector<int> dynamical_ball(const ShiftMap& map, const ShiftPoint& x, unsigned n,
                                       double eps) {
    if (eps <= 0 || eps > map.r) throw std::invalid_argument("eps must lie in (0, r]");
    std::vector<int> word(n + 1);
    for (unsigned i = 0; i <= n; ++i) word[i] = x.at(i);
    return word;
}

}  // namespace zetadyn
