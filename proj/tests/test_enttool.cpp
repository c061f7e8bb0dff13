#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "zetadyn/entropy.hpp"

using namespace zetadyn;

TEST_CASE("greedy separated bounds sandwich and verify") {
    CircleMap map(2);
    for (int n : {1, 2, 3, 4, 5}) {
        for (double eps : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
            SeparatedSetResult r = greedy_separated(map, n, eps, 4096);
            CHECK(r.lower_s_n >= 1);
            CHECK(r.lower_s_n <= r.upper_s_n);
            CHECK(static_cast<long>(r.witness.size()) == r.lower_s_n);
            // independent pairwise re-check of the witness set
            for (std::size_t i = 0; i < r.witness.size(); ++i)
                for (std::size_t j = i + 1; j < r.witness.size(); ++j) {
                    double dn = 0;
                    CirclePoint a = r.witness[i], b = r.witness[j];
                    for (int t = 0; t < n; ++t) {
                        dn = std::max(dn, map.dist(a, b));
                        a = map.apply(a);
                        b = map.apply(b);
                    }
                    CHECK(dn >= eps);
                }
        }
    }
    CHECK_THROWS_AS(greedy_separated(map, 1, 1.0 / 16, 32), std::invalid_argument);
}

TEST_CASE("monotonicity of the separated lower bound") {
    CircleMap map(2);
    // non-increasing in eps at fixed n
    for (int n : {2, 4, 6}) {
        long prev = -1;
        for (double eps : {1.0 / 64, 1.0 / 32, 1.0 / 16}) {
            long s = greedy_separated(map, n, eps, 4096).lower_s_n;
            if (prev >= 0) CHECK(s <= prev);
            prev = s;
        }
    }
    // non-decreasing in n at fixed eps
    long prev = 0;
    for (int n = 1; n <= 6; ++n) {
        long s = greedy_separated(map, n, 1.0 / 32, 4096).lower_s_n;
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("exact full-shift separated counts") {
    for (int k : {2, 3}) {
        for (int n = 1; n <= 6; ++n) {
            Int kn, kn1;
            mpz_ui_pow_ui(kn.get_mpz_t(), static_cast<unsigned long>(k), n);
            mpz_ui_pow_ui(kn1.get_mpz_t(), static_cast<unsigned long>(k), n + 1);
            CHECK(exact_full_shift_separated(k, n, 1.0) == kn);
            CHECK(exact_full_shift_separated(k, n, 0.5) == kn1);
        }
    }
    CHECK_THROWS_AS(exact_full_shift_separated(2, 3, 0.3), std::invalid_argument);
}

TEST_CASE("periodic points are (n, eps)-separated") {
    CircleMap map(2);
    double eps0 = 0.9 * map.expansivity_eps;
    for (unsigned n = 1; n <= 8; ++n) {
        auto pts = map.periodic_points(n);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                double dn = 0;
                CirclePoint a = pts[i], b = pts[j];
                for (unsigned t = 0; t < n; ++t) {
                    dn = std::max(dn, map.dist(a, b));
                    a = map.apply(a);
                    b = map.apply(b);
                }
                CHECK(dn > eps0);
            }
    }
}

TEST_CASE("entropy estimate brackets log k") {
    CircleMap map(2);
    std::vector<int> ladder{2, 3, 4, 5, 6, 7, 8};
    EntropyEstimate est = entropy_estimate(map, ladder, {1.0 / 16, 1.0 / 32, 1.0 / 64});
    double target = std::log(2.0);
    CHECK(est.lower <= est.upper);
    // interval contains a point within 10% of log 2
    CHECK(est.lower <= target * 1.1);
    CHECK(est.upper >= target * 0.9);
    CHECK_THROWS_AS(entropy_estimate(map, ladder, {1.0 / 64, 1.0 / 16}),
                    std::invalid_argument);
    CHECK_THROWS_AS(entropy_estimate(map, {}, {0.5}), std::invalid_argument);
}

TEST_CASE("refinement cell counts") {
    CircleMap f2(2);
    std::vector<CircleArc> halves{{Rat(0), Rat(1, 2)}, {Rat(1, 2), Rat(1)}};
    CHECK(cover_count(f2, halves, 1) == 2);
    CHECK(cover_count(f2, halves, 3) == 8);
    CHECK(cover_count(f2, halves, 6) == 64);
    CircleMap f3(3);
    std::vector<CircleArc> thirds{{Rat(0), Rat(1, 3)}, {Rat(1, 3), Rat(2, 3)},
                                  {Rat(2, 3), Rat(1)}};
    CHECK(cover_count(f3, thirds, 1) == 3);
    CHECK(cover_count(f3, thirds, 2) == 9);
    CHECK_THROWS_AS(cover_count(f2, halves, 0), std::invalid_argument);
}

TEST_CASE("refinement growth sandwiches the separated bounds") {
    CircleMap map(2);
    std::vector<CircleArc> halves{{Rat(0), Rat(1, 2)}, {Rat(1, 2), Rat(1)}};
    for (int n = 2; n <= 8; ++n) {
        Int cells = cover_count(map, halves, n);
        // 2^n cells for the generating partition
        Int expect;
        mpz_ui_pow_ui(expect.get_mpz_t(), 2, n);
        CHECK(cells == expect);
        // a (n, 1/2-scale) separated set cannot exceed the cell count at
        // matched resolution: cells at level n dominate lower_s_n at eps=1/4
        long s = greedy_separated(map, n, 0.25, 4096).lower_s_n;
        CHECK(Int(s) <= cells * 2);
    }
}

TEST_CASE("preimage entropy bound oracles") {
    std::vector<CirclePoint> pts;
    for (int j = 0; j < 8; ++j) pts.emplace_back(Rat(j) / 8);
    CHECK(preimage_entropy_bound(CircleMap(2), pts) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(preimage_entropy_bound(CircleMap(3), pts) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-12));
    ToralMap d2(IntMatrix::from_rows({{2, 0}, {0, 2}}));
    std::vector<TorusPoint> tpts{TorusPoint(Rat(1, 3), Rat(1, 7))};
    CHECK(preimage_entropy_bound(d2, tpts) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("theorem-2 style report for the doubling map") {
    CircleMap map(2);
    CountSequence counts;
    for (int n = 1; n <= 12; ++n) counts.push_back(map.periodic_count(n));
    std::vector<int> ladder{2, 3, 4, 5, 6, 7, 8};
    EntropyEstimate est = entropy_estimate(map, ladder, {1.0 / 16, 1.0 / 32, 1.0 / 64});
    std::vector<long> lower_s(12, 0);
    for (const auto& row : est.table) lower_s[row.n - 1] = row.lower_s_n;
    Theorem2Report rep = verify_theorem2(counts, est, lower_s, 2);
    CHECK(rep.overlap_pass);
    CHECK(rep.sandwich_pass);
    CHECK(rep.submult_checked);
    CHECK(rep.submult_pass);
    CHECK(rep.pass());
    // slope of log(2^n - 1) over the tail is within 1% of log 2
    CHECK(std::fabs(rep.periodic_slope - std::log(2.0)) < 0.01 * std::log(2.0));
}

TEST_CASE("theorem-2 report flags a fake count sequence") {
    CircleMap map(2);
    std::vector<int> ladder{2, 3, 4, 5, 6, 7, 8};
    EntropyEstimate est = entropy_estimate(map, ladder, {1.0 / 16, 1.0 / 32, 1.0 / 64});
    CountSequence slow;  // N_n = n: entropy zero, nowhere near log 2
    for (long n = 1; n <= 12; ++n) slow.push_back(n);
    Theorem2Report rep = verify_theorem2(slow, est);
    CHECK_FALSE(rep.overlap_pass);
    CHECK_FALSE(rep.pass());
    CHECK_THROWS_AS(verify_theorem2(CountSequence{1, 2}, est), std::invalid_argument);
}
