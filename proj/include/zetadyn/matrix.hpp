#pragma once

// Square matrices with arbitrary-precision integer entries, plus the exact
// spectral tools built on them: trace powers, det(I - zA) via the
// Faddeev-LeVerrier recurrence, strong connectivity, and Perron brackets.

#include <gmpxx.h>

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zetadyn/polynomial.hpp"

namespace zetadyn {

class IntMatrix {
public:
    explicit IntMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim, Int{0}) {
        if (dim < 1) throw std::invalid_argument("matrix dimension must be >= 1");
    }

    static IntMatrix identity(int dim) {
        IntMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1;
        return m;
    }

    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows) {
        IntMatrix m(static_cast<int>(rows.size()));
        for (int i = 0; i < m.dim_; ++i) {
            if (static_cast<int>(rows[i].size()) != m.dim_)
                throw std::invalid_argument("matrix rows must be square");
            for (int j = 0; j < m.dim_; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    int dim() const { return dim_; }

    Int& at(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    const Int& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }

    bool is_binary() const {
        for (const auto& v : a_)
            if (v != 0 && v != 1) return false;
        return true;
    }

    bool is_zero() const {
        for (const auto& v : a_)
            if (v != 0) return false;
        return true;
    }

    Int trace() const {
        Int t{0};
        for (int i = 0; i < dim_; ++i) t += at(i, i);
        return t;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.dim_ != b.dim_) throw std::invalid_argument("dimension mismatch");
        IntMatrix r(a.dim_);
        for (int i = 0; i < a.dim_; ++i)
            for (int k = 0; k < a.dim_; ++k) {
                const Int& aik = a.at(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < a.dim_; ++j) r.at(i, j) += aik * b.at(k, j);
            }
        return r;
    }

    friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
        if (a.dim_ != b.dim_) throw std::invalid_argument("dimension mismatch");
        IntMatrix r(a.dim_);
        for (std::size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] + b.a_[i];
        return r;
    }

    friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
        if (a.dim_ != b.dim_) throw std::invalid_argument("dimension mismatch");
        IntMatrix r(a.dim_);
        for (std::size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] - b.a_[i];
        return r;
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.dim_ == b.dim_ && a.a_ == b.a_;
    }

    IntMatrix power(unsigned long n) const {
        IntMatrix result = identity(dim_);
        IntMatrix base = *this;
        while (n > 0) {
            if (n & 1) result = result * base;
            base = base * base;
            n >>= 1;
        }
        return result;
    }

    // text format: first line dim, then dim rows of dim integers
    static IntMatrix parse(std::istream& in) {
        int dim = 0;
        if (!(in >> dim) || dim < 1) throw std::invalid_argument("bad matrix header");
        IntMatrix m(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                std::string tok;
                if (!(in >> tok)) throw std::invalid_argument("truncated matrix");
                m.at(i, j) = Int(tok);
            }
        return m;
    }

    static IntMatrix parse(const std::string& text) {
        std::istringstream is(text);
        return parse(is);
    }

    void print(std::ostream& os) const {
        os << dim_ << '\n';
        for (int i = 0; i < dim_; ++i) {
            for (int j = 0; j < dim_; ++j) os << (j ? " " : "") << at(i, j);
            os << '\n';
        }
    }

private:
    int dim_;
    std::vector<Int> a_;
};

// tr(A^n), exact
inline Int mat_power_trace(const IntMatrix& a, unsigned long n) {
    if (n < 1) throw std::invalid_argument("mat_power_trace needs n >= 1");
    return a.power(n).trace();
}

// det(I - zA) as an integer polynomial; the coefficients are produced by the
// Faddeev-LeVerrier recurrence for det(zI - A), whose c_i are exactly the
// ascending coefficients of det(I - zA). Every division below is exact.
inline IntPolynomial char_poly_det(const IntMatrix& a) {
    const int n = a.dim();
    std::vector<Int> c(n + 1);
    c[0] = 1;
    IntMatrix m = IntMatrix(n);  // M_0 = 0
    for (int k = 1; k <= n; ++k) {
        // M_k = A * (M_{k-1} + c_{k-1} I)
        IntMatrix step = m;
        for (int i = 0; i < n; ++i) step.at(i, i) += c[k - 1];
        m = a * step;
        Int t = m.trace();
        Int q, r;
        Int divisor{k};
        Int num = -t;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), divisor.get_mpz_t());
        if (r != 0) throw std::logic_error("Faddeev-LeVerrier division was not exact");
        c[k] = q;
    }
    return IntPolynomial(std::move(c));
}

// strong connectivity of the directed graph of a binary matrix
inline bool is_irreducible(const IntMatrix& a) {
    if (!a.is_binary()) throw std::invalid_argument("is_irreducible expects a binary matrix");
    const int n = a.dim();
    auto reach_all = [&](bool transpose) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v) {
                const Int& e = transpose ? a.at(v, u) : a.at(u, v);
                if (e != 0 && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        for (int i = 0; i < n; ++i)
            if (!seen[i]) return false;
        return true;
    };
    return reach_all(false) && reach_all(true);
}

// Collatz-Wielandt brackets for the Perron eigenvalue of an irreducible
// binary matrix. Iteration runs on A + I (primitive whenever A is
// irreducible, and with Perron root lambda + 1), starting from the all-ones
// vector; successive brackets are intersected, so they never widen.
inline std::pair<Rat, Rat> perron_bounds(const IntMatrix& a, int iterations) {
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (!a.is_binary()) throw std::invalid_argument("perron_bounds expects a binary matrix");
    if (a.is_zero() || !is_irreducible(a))
        throw std::invalid_argument("perron_bounds needs an irreducible nonzero matrix");
    const int n = a.dim();
    std::vector<Rat> x(n, Rat{1});
    Rat lo, hi;
    bool first = true;
    for (int it = 0; it < iterations; ++it) {
        std::vector<Rat> y(n, Rat{0});
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j)
                if (a.at(i, j) != 0) y[i] += x[j];
            y[i] += x[i];  // the +I shift
        }
        Rat cur_lo = y[0] / x[0], cur_hi = cur_lo;
        for (int i = 1; i < n; ++i) {
            Rat ratio = y[i] / x[i];
            if (ratio < cur_lo) cur_lo = ratio;
            if (ratio > cur_hi) cur_hi = ratio;
        }
        cur_lo -= 1;  // undo the shift
        cur_hi -= 1;
        if (first) {
            lo = cur_lo;
            hi = cur_hi;
            first = false;
        } else {
            if (cur_lo > lo) lo = cur_lo;
            if (cur_hi < hi) hi = cur_hi;
        }
        Rat mx = *std::max_element(y.begin(), y.end());
        for (auto& v : y) v /= mx;
        x = std::move(y);
    }
    return {lo, hi};
}

// iterate until the bracket is narrower than width (or the cap is hit)
inline std::pair<Rat, Rat> perron_bounds_to_width(const IntMatrix& a, const Rat& width,
                                                  int max_iterations = 2000) {
    int it = 32;
    std::pair<Rat, Rat> b = perron_bounds(a, it);
    while (b.second - b.first > width && it < max_iterations) {
        it *= 2;
        b = perron_bounds(a, it);
    }
    return b;
}

}  // namespace zetadyn
