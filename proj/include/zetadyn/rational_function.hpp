#pragma once

// Rational functions num/den with integer-coefficient polynomials, kept in a
// canonical reduced form, and the pole analysis used for radius of
// convergence and periodic entropy.

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zetadyn/polynomial.hpp"

namespace zetadyn {

class RationalFunction {
public:
    RationalFunction() : num_(IntPolynomial::one()), den_(IntPolynomial::one()) {}

    RationalFunction(IntPolynomial num, IntPolynomial den)
        : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw std::invalid_argument("zero denominator");
        reduce();
        if (den_.coeff(0) == 0)
            throw std::invalid_argument("denominator vanishes at z=0 after reduction");
    }

    const IntPolynomial& num() const { return num_; }
    const IntPolynomial& den() const { return den_; }

    bool is_one() const { return num_ == den_; }

    Rat eval(const Rat& z) const {
        Rat d = den_.eval(z);
        if (d == 0) throw std::domain_error("evaluation at a pole");
        return num_.eval(z) / d;
    }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }

    // "num: c0 c1 ... / den: c0 c1 ..."
    std::string str() const {
        std::ostringstream os;
        os << "num: " << num_.str() << " / den: " << den_.str();
        return os.str();
    }

    static RationalFunction parse(const std::string& text) {
        auto bar = text.find('/');
        auto numpos = text.find("num:");
        auto denpos = text.find("den:");
        if (bar == std::string::npos || numpos == std::string::npos ||
            denpos == std::string::npos || !(numpos < bar && bar < denpos))
            throw std::invalid_argument("bad rational function text");
        auto read = [](const std::string& s) {
            std::istringstream is(s);
            std::vector<Int> c;
            std::string tok;
            while (is >> tok) c.emplace_back(tok);
            return IntPolynomial(std::move(c));
        };
        return RationalFunction(read(text.substr(numpos + 4, bar - numpos - 4)),
                                read(text.substr(denpos + 4)));
    }

private:
    void reduce() {
        if (num_.is_zero()) {
            den_ = IntPolynomial::one();
            return;
        }
        IntPolynomial g = poly_gcd(num_, den_);
        if (g.degree() > 0) {
            // Gauss: the primitive gcd divides both primitive parts over Z
            Int cn = num_.content(), cd = den_.content();
            if (sgn(num_.leading()) < 0) cn = -cn;
            if (sgn(den_.leading()) < 0) cd = -cd;
            num_ = num_.primitive_part().divide_exact(g) * cn;
            den_ = den_.primitive_part().divide_exact(g) * cd;
        }
        Int shared;
        mpz_gcd(shared.get_mpz_t(), num_.content().get_mpz_t(), den_.content().get_mpz_t());
        if (shared > 1) {
            num_ = num_.divide_by_int(shared);
            den_ = den_.divide_by_int(shared);
        }
        if (sgn(den_.coeff(0)) < 0 || (den_.coeff(0) == 0 && sgn(den_.leading()) < 0)) {
            num_ = num_ * Int(-1);
            den_ = den_ * Int(-1);
        }
    }

    IntPolynomial num_, den_;
};

struct PoleAnalysis {
    bool has_poles = false;
    double rho = std::numeric_limits<double>::infinity();  // smallest pole modulus
    double periodic_entropy = 0.0;                         // -log rho (0 when no poles)
};

namespace detail {

// Durand-Kerner iteration; good enough to locate roots to ~1e-10 for the
// well-separated polynomials produced by zeta denominators.
inline std::vector<std::complex<double>> poly_roots(const IntPolynomial& p) {
    const int n = p.degree();
    std::vector<std::complex<double>> coeff(n + 1);
    double lead = p.leading().get_d();
    for (int i = 0; i <= n; ++i) coeff[i] = p.coeff(i).get_d() / lead;
    auto eval = [&](std::complex<double> z) {
        std::complex<double> acc = 0;
        for (int i = n; i >= 0; --i) acc = acc * z + coeff[i];
        return acc;
    };
    std::vector<std::complex<double>> roots(n);
    std::complex<double> seed(0.4, 0.9);
    std::complex<double> cur(1.0, 0.0);
    for (int i = 0; i < n; ++i) {
        cur *= seed;
        roots[i] = cur;
    }
    for (int iter = 0; iter < 500; ++iter) {
        double moved = 0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> d = 1;
            for (int j = 0; j < n; ++j)
                if (j != i) d *= roots[i] - roots[j];
            std::complex<double> delta = eval(roots[i]) / d;
            roots[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return roots;
}

// Exact bisection of a sign change of p on [lo, hi] down to the given width.
inline Rat bisect_root(const IntPolynomial& p, Rat lo, Rat hi, const Rat& width) {
    int slo = sgn(p.eval(lo));
    while (hi - lo > width) {
        Rat mid = (lo + hi) / 2;
        int smid = sgn(p.eval(mid));
        if (smid == 0) return mid;
        if (smid == slo)
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) / 2;
}

}  // namespace detail

// Smallest pole modulus of a reduced rational function and the periodic
// entropy -log(rho). Real candidate poles are certified by exact bisection to
// 1e-12; complex candidates keep their double-precision modulus.
inline PoleAnalysis radius_and_entropy(const RationalFunction& r) {
    PoleAnalysis out;
    const IntPolynomial& den = r.den();
    if (den.is_zero()) throw std::invalid_argument("zero denominator");
    if (den.degree() < 1) return out;  // no poles: rho = infinity, entropy 0
    IntPolynomial sq = square_free_part(den);
    auto roots = detail::poly_roots(sq);
    const Rat width(1, 1000000000000L);  // 1e-12
    double best = std::numeric_limits<double>::infinity();
    for (const auto& z : roots) {
        double modulus;
        if (std::abs(z.imag()) < 1e-7 * (1.0 + std::abs(z.real()))) {
            // refine the real root exactly around the approximate location
            Rat lo(z.real() - 1e-4), hi(z.real() + 1e-4);
            if (sgn(sq.eval(lo)) == sgn(sq.eval(hi)) && sgn(sq.eval(lo)) != 0) {
                modulus = std::abs(z);  // sign-change window missed; keep the estimate
            } else {
                Rat root = detail::bisect_root(sq, lo, hi, width);
                modulus = std::abs(root.get_d());
            }
        } else {
            modulus = std::abs(z);
        }
        best = std::min(best, modulus);
    }
    out.has_poles = true;
    out.rho = best;
    out.periodic_entropy = -std::log(best);
    return out;
}

}  // namespace zetadyn
