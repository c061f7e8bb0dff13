#pragma once

// Formal zeta-function algebra: the exp(sum N_n z^n / n) series, counts from
// rational forms via the logarithmic derivative, primitive-orbit Moebius
// inversion, and the two-sided modulus bound check.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "zetadyn/matrix.hpp"
#include "zetadyn/rational_function.hpp"

namespace zetadyn {

// N_1..N_m as exact nonnegative integers
using CountSequence = std::vector<Int>;

// c_0..c_m exact rational series coefficients
using TruncatedSeries = std::vector<Rat>;

// exp(sum_{n<=m} N_n z^n / n) truncated at order m, via the logarithmic
// derivative recurrence c_n = (1/n) sum_{j=1}^{n} N_j c_{n-j}.
inline TruncatedSeries zeta_series_from_counts(const CountSequence& counts) {
    if (counts.empty()) throw std::invalid_argument("empty count sequence");
    const std::size_t m = counts.size();
    TruncatedSeries c(m + 1);
    c[0] = 1;
    for (std::size_t n = 1; n <= m; ++n) {
        Rat acc{0};
        for (std::size_t j = 1; j <= n; ++j) acc += Rat(counts[j - 1]) * c[n - j];
        c[n] = acc / static_cast<long>(n);
    }
    return c;
}

// series expansion of num/den to order m (den(0) != 0), exact rationals
inline TruncatedSeries series_expand(const IntPolynomial& num, const IntPolynomial& den,
                                     std::size_t m) {
    if (den.coeff(0) == 0) throw std::invalid_argument("series division needs den(0) != 0");
    TruncatedSeries c(m + 1);
    Rat d0{den.coeff(0)};
    for (std::size_t n = 0; n <= m; ++n) {
        Rat acc{num.coeff(n)};
        for (std::size_t j = 1; j <= n; ++j) acc -= Rat(den.coeff(j)) * c[n - j];
        c[n] = acc / d0;
    }
    return c;
}

inline TruncatedSeries series_expand(const RationalFunction& r, std::size_t m) {
    return series_expand(r.num(), r.den(), m);
}

// 1 / det(I - zA) for a binary transition matrix
inline RationalFunction zeta_from_sft(const IntMatrix& a) {
    if (!a.is_binary()) throw std::invalid_argument("zeta_from_sft expects a binary matrix");
    return RationalFunction(IntPolynomial::one(), char_poly_det(a));
}

// prod_{r even} det(I - zB^(r)) / prod_{r odd} det(I - zB^(r))
inline RationalFunction zeta_from_signed_family(const std::vector<IntMatrix>& b) {
    if (b.empty()) throw std::invalid_argument("empty signed family");
    IntPolynomial num = IntPolynomial::one();
    IntPolynomial den = IntPolynomial::one();
    for (std::size_t i = 0; i < b.size(); ++i) {
        IntPolynomial d = char_poly_det(b[i]);
        if ((i + 1) % 2 == 0)
            num = num * d;
        else
            den = den * d;
    }
    return RationalFunction(std::move(num), std::move(den));
}

// N_1..N_m from z R'(z)/R(z) = sum N_n z^n; rejects negative or fractional
// counts, which signal that R is not the zeta function of anything countable.
inline CountSequence counts_from_zeta(const RationalFunction& r, std::size_t m) {
    if (m < 1) throw std::invalid_argument("order must be >= 1");
    if (r.num().coeff(0) != r.den().coeff(0))
        throw std::invalid_argument("counts_from_zeta needs R(0) = 1");
    const IntPolynomial& n = r.num();
    const IntPolynomial& d = r.den();
    IntPolynomial p = (n.derivative() * d - n * d.derivative()).shifted(1);
    TruncatedSeries s = series_expand(p, n * d, m);
    CountSequence counts(m);
    for (std::size_t i = 1; i <= m; ++i) {
        const Rat& v = s[i];
        if (v.get_den() != 1) throw std::domain_error("non-integer periodic count");
        if (v < 0) throw std::domain_error("negative periodic count");
        counts[i - 1] = v.get_num();
    }
    return counts;
}

inline bool check_recurrence(const CountSequence& counts, const RationalFunction& r) {
    CountSequence expected = counts_from_zeta(r, counts.size());
    return expected == counts;
}

// P_n = (1/n) sum_{d|n} mu(n/d) N_d; the number of minimal-period-n orbits
inline std::vector<Int> primitive_orbit_counts(const CountSequence& counts) {
    const std::size_t m = counts.size();
    // Moebius function by sieve
    std::vector<int> mu(m + 1, 1);
    std::vector<char> composite_mark(m + 1, 0);
    std::vector<std::size_t> primes;
    for (std::size_t i = 2; i <= m; ++i) {
        if (!composite_mark[i]) {
            primes.push_back(i);
            mu[i] = -1;
        }
        for (std::size_t p : primes) {
            if (i * p > m) break;
            composite_mark[i * p] = 1;
            if (i % p == 0) {
                mu[i * p] = 0;
                break;
            }
            mu[i * p] = -mu[i];
        }
    }
    std::vector<Int> prim(m);
    for (std::size_t n = 1; n <= m; ++n) {
        Int acc{0};
        for (std::size_t d = 1; d <= n; ++d)
            if (n % d == 0) acc += counts[d - 1] * mu[n / d];
        Int q, rem;
        Int divisor{static_cast<long>(n)};
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), acc.get_mpz_t(), divisor.get_mpz_t());
        if (rem != 0) throw std::domain_error("primitive orbit count is not an integer");
        if (q < 0) throw std::domain_error("negative primitive orbit count");
        prim[n - 1] = q;
    }
    return prim;
}

namespace detail {

// solve the square system a x = b over the rationals; empty result if singular
inline std::vector<Rat> solve_rat(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return {};
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            Rat f = a[row][col] / a[col][col];
            for (std::size_t j = col; j < n; ++j) a[row][j] -= f * a[col][j];
            b[row] -= f * b[col];
        }
    }
    std::vector<Rat> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

inline std::vector<Int> clear_denominators(const std::vector<Rat>& coeffs) {
    Int lcm{1};
    for (const auto& c : coeffs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<Int> out;
    out.reserve(coeffs.size());
    for (const auto& c : coeffs) out.emplace_back(Rat(c * lcm).get_num());
    return out;
}

}  // namespace detail

// Pade-style fit: the lowest-degree rational function R with R(0)=1 whose
// logarithmic derivative reproduces every given count; throws when no fit of
// degree <= max_deg survives the exact check_recurrence gate.
inline RationalFunction fit_rational_from_counts(const CountSequence& counts, int max_deg = 6) {
    TruncatedSeries c = zeta_series_from_counts(counts);
    const int m = static_cast<int>(counts.size());
    for (int total = 0; total <= 2 * max_deg; ++total)
        for (int dden = 0; dden <= std::min(total, max_deg); ++dden) {
            int dnum = total - dden;
            if (dnum > max_deg || dnum + 2 * dden > m) continue;
            // unknowns d_1..d_dden with d_0 = 1: sum_j d_j c_{n-j} = 0 for
            // n = dnum+1 .. dnum+dden
            std::vector<Rat> den_coeffs{Rat(1)};
            if (dden > 0) {
                std::vector<std::vector<Rat>> a(dden, std::vector<Rat>(dden, Rat(0)));
                std::vector<Rat> b(dden, Rat(0));
                for (int row = 0; row < dden; ++row) {
                    int n = dnum + 1 + row;
                    for (int j = 1; j <= dden; ++j)
                        if (n - j >= 0) a[row][j - 1] = c[n - j];
                    b[row] = -c[n];
                }
                std::vector<Rat> d = detail::solve_rat(std::move(a), std::move(b));
                if (d.empty()) continue;
                den_coeffs.insert(den_coeffs.end(), d.begin(), d.end());
            }
            std::vector<Rat> num_coeffs(dnum + 1, Rat(0));
            for (int n = 0; n <= dnum; ++n)
                for (int j = 0; j <= dden && j <= n; ++j) num_coeffs[n] += den_coeffs[j] * c[n - j];
            // same scaling for both so R(0) stays 1
            std::vector<Rat> all = num_coeffs;
            all.insert(all.end(), den_coeffs.begin(), den_coeffs.end());
            std::vector<Int> joint = detail::clear_denominators(all);
            std::vector<Int> ni(joint.begin(), joint.begin() + dnum + 1);
            std::vector<Int> di(joint.begin() + dnum + 1, joint.end());
            IntPolynomial num(std::move(ni)), den(std::move(di));
            if (den.coeff(0) == 0) continue;
            try {
                RationalFunction r(std::move(num), std::move(den));
                if (check_recurrence(counts, r)) return r;
            } catch (const std::exception&) {
                continue;
            }
        }
    throw std::domain_error("no low-degree rational function matches the counts");
}

// Checks 1 - r|z| <= |zeta(z)| <= 1/(1 - r|z|) on each sample, with the
// geometric tail of the truncated series folded into the tolerance.
inline bool zeta_modulus_bounds_check(const CountSequence& counts, unsigned long r,
                                      const std::vector<std::complex<double>>& samples) {
    const std::size_t m = counts.size();
    for (std::size_t n = 1; n <= m; ++n) {
        Int cap;
        mpz_ui_pow_ui(cap.get_mpz_t(), r, n);
        if (counts[n - 1] > cap)
            throw std::invalid_argument("count sequence violates N_n <= r^n");
    }
    TruncatedSeries series = zeta_series_from_counts(counts);
    for (const auto& z : samples) {
        double az = std::abs(z);
        if (az * static_cast<double>(r) >= 1.0)
            throw std::invalid_argument("sample with |z| >= 1/r");
        std::complex<double> val = 0;
        for (std::size_t i = series.size(); i-- > 0;) val = val * z + series[i].get_d();
        double q = static_cast<double>(r) * az;
        // tail of sum_{n>m} (r|z|)^n / n, dominating both exp factors
        double tail = std::pow(q, static_cast<double>(m + 1)) /
                      (static_cast<double>(m + 1) * (1.0 - q));
        double tol = 2.0 * std::abs(val) * tail + 1e-12;
        double lo = 1.0 - q, hi = 1.0 / (1.0 - q);
        double mag = std::abs(val);
        if (mag < lo - tol || mag > hi + tol) return false;
    }
    return true;
}

}  // namespace zetadyn
