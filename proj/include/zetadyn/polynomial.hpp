#pragma once

// Exact integer polynomials in one variable z, coefficients stored in
// ascending degree order with no trailing zeros.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace zetadyn {

using Int = mpz_class;
using Rat = mpq_class;

class IntPolynomial {
public:
    IntPolynomial() = default;

    explicit IntPolynomial(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }

    IntPolynomial(std::initializer_list<long> coeffs) {
        c_.reserve(coeffs.size());
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }

    static IntPolynomial constant(Int v) { return IntPolynomial(std::vector<Int>{std::move(v)}); }
    static IntPolynomial one() { return constant(1); }

    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }

    // degree of the zero polynomial is -1 by convention
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    const Int& coeff(std::size_t i) const {
        static const Int zero{0};
        return i < c_.size() ? c_[i] : zero;
    }
    const std::vector<Int>& coeffs() const { return c_; }

    const Int& leading() const {
        if (c_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
        return c_.back();
    }

    Int eval(const Int& x) const {
        Int acc{0};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Rat eval(const Rat& x) const {
        Rat acc{0};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    IntPolynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Int> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
        return IntPolynomial(std::move(d));
    }

    friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
        std::vector<Int> r(std::max(a.c_.size(), b.c_.size()), Int{0});
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return IntPolynomial(std::move(r));
    }

    friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
        std::vector<Int> r(std::max(a.c_.size(), b.c_.size()), Int{0});
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
        return IntPolynomial(std::move(r));
    }

    friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Int> r(a.c_.size() + b.c_.size() - 1, Int{0});
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return IntPolynomial(std::move(r));
    }

    friend IntPolynomial operator*(const IntPolynomial& a, const Int& s) {
        std::vector<Int> r(a.c_);
        for (auto& v : r) v *= s;
        return IntPolynomial(std::move(r));
    }

    friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.c_ == b.c_; }

    // gcd of the absolute values of the coefficients; 0 for the zero polynomial
    Int content() const {
        Int g{0};
        for (const auto& v : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        return g;
    }

    IntPolynomial primitive_part() const {
        if (is_zero()) return {};
        Int g = content();
        if (sgn(leading()) < 0) g = -g;
        return divide_by_int(g);
    }

    IntPolynomial divide_by_int(const Int& d) const {
        std::vector<Int> r(c_);
        for (auto& v : r) {
            Int q, rem;
            mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t());
            if (rem != 0) throw std::logic_error("inexact integer division of polynomial");
            v = q;
        }
        return IntPolynomial(std::move(r));
    }

    // exact quotient; throws if b does not divide *this over the integers
    IntPolynomial divide_exact(const IntPolynomial& b) const {
        if (b.is_zero()) throw std::invalid_argument("polynomial division by zero");
        std::vector<Int> rem(c_);
        IntPolynomial r(std::move(rem));
        std::vector<Int> q(is_zero() ? 0 : std::max(0, degree() - b.degree() + 1), Int{0});
        while (!r.is_zero() && r.degree() >= b.degree()) {
            Int qc, remc;
            mpz_tdiv_qr(qc.get_mpz_t(), remc.get_mpz_t(), r.leading().get_mpz_t(),
                        b.leading().get_mpz_t());
            if (remc != 0) throw std::logic_error("inexact polynomial division");
            int shift = r.degree() - b.degree();
            q[shift] = qc;
            std::vector<Int> sub(shift + b.c_.size(), Int{0});
            for (std::size_t i = 0; i < b.c_.size(); ++i) sub[shift + i] = b.c_[i] * qc;
            r = r - IntPolynomial(std::move(sub));
        }
        if (!r.is_zero()) throw std::logic_error("inexact polynomial division");
        return IntPolynomial(std::move(q));
    }

    // multiply by z^n
    IntPolynomial shifted(int n) const {
        if (is_zero()) return {};
        std::vector<Int> r(c_.size() + n, Int{0});
        for (std::size_t i = 0; i < c_.size(); ++i) r[i + n] = c_[i];
        return IntPolynomial(std::move(r));
    }

    std::string str() const {
        std::ostringstream os;
        if (is_zero()) return "0";
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) os << ' ';
            os << c_[i];
        }
        return os.str();
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Int> c_;
};

// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a  mod b, computed over Z.
inline IntPolynomial pseudo_rem(const IntPolynomial& a, const IntPolynomial& b) {
    if (b.is_zero()) throw std::invalid_argument("pseudo_rem by zero");
    IntPolynomial r = a;
    int e = a.degree() - b.degree() + 1;
    const Int& lb = b.leading();
    while (!r.is_zero() && r.degree() >= b.degree()) {
        int shift = r.degree() - b.degree();
        Int lr = r.leading();
        std::vector<Int> sub(shift + b.coeffs().size(), Int{0});
        for (std::size_t i = 0; i < b.coeffs().size(); ++i) sub[shift + i] = b.coeffs()[i] * lr;
        r = r * lb - IntPolynomial(std::move(sub));
        --e;
    }
    if (e > 0) {
        Int f;
        mpz_pow_ui(f.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(e));
        r = r * f;
    }
    return r;
}

// Primitive gcd via the subresultant pseudo-remainder sequence.
inline IntPolynomial poly_gcd(IntPolynomial a, IntPolynomial b) {
    if (a.is_zero()) return b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    if (a.degree() < b.degree()) std::swap(a, b);
    a = a.primitive_part();
    b = b.primitive_part();
    Int g{1}, h{1};
    while (true) {
        int delta = a.degree() - b.degree();
        IntPolynomial r = pseudo_rem(a, b);
        if (r.is_zero()) break;
        if (r.degree() == 0) return IntPolynomial::one();
        a = b;
        Int divisor = g;
        for (int i = 0; i < delta; ++i) divisor *= h;
        b = r.divide_by_int(divisor);
        g = a.leading();
        if (delta >= 1) {
            // h = g^delta / h^(delta-1), exact
            Int num;
            mpz_pow_ui(num.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(delta));
            Int den{1};
            for (int i = 0; i < delta - 1; ++i) den *= h;
            Int q, rem;
            mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            if (rem != 0) throw std::logic_error("subresultant bookkeeping broke");
            h = q;
        }
    }
    return b.primitive_part();
}

// p with repeated factors collapsed to multiplicity one
inline IntPolynomial square_free_part(const IntPolynomial& p) {
    if (p.degree() <= 1) return p;
    IntPolynomial g = poly_gcd(p, p.derivative());
    if (g.degree() == 0) return p;
    return p.primitive_part().divide_exact(g);
}

}  // namespace zetadyn
