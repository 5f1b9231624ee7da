#include <doctest.h>

#include "kac/errors.hpp"
#include "kac/hermite.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace kac;

TEST_CASE("hermite_eval matches high-precision values")
{
    struct Row {
        int n;
        double v, expected;
    };
    // mpmath at 40 digits from the Hermite polynomial definition
    const Row rows[] = {
        {0, 0.0, 0.63161877774606470129},    {1, 0.3, 0.18526981241272730689},
        {5, -2.7, 0.11966280947894603508},   {20, 7.5, -0.10406212884886989368},
        {100, 15.0, -0.21203034804366667201}, {200, -19.5, 0.08424968758627880384},
        {40, 1.25, -0.019807793537392444608},
    };
    for (const auto& r : rows) {
        CAPTURE(r.n);
        CHECK(hermite_eval(r.n, r.v) == doctest::Approx(r.expected).epsilon(1e-12));
    }
    CHECK(hermite_eval(0, 0.0) == doctest::Approx(std::pow(2.0 * std::numbers::pi, -0.25)).epsilon(1e-15));
    CHECK(hermite_eval(1, 0.0) == 0.0);
    CHECK_THROWS_AS(hermite_eval(-1, 0.0), std::invalid_argument);
}

TEST_CASE("hermite_eval_all agrees with single evaluations")
{
    const auto all = hermite_eval_all(60, 3.3);
    REQUIRE(all.size() == 61);
    for (int n = 0; n <= 60; ++n)
        CHECK(all[n] == hermite_eval(n, 3.3));
}

TEST_CASE("psi_n are orthonormal for n, m <= 40")
{
    // the trapezoid rule is spectrally accurate for these rapidly decaying integrands
    const double a = 40.0;
    const int M = 8000;
    const double h = 2 * a / M;
    std::vector<std::vector<double>> table;
    for (int i = 0; i <= M; ++i)
        table.push_back(hermite_eval_all(40, -a + h * i));
    double worst = 0.0;
    for (int n = 0; n <= 40; ++n)
        for (int m = n; m <= 40; ++m) {
            double sum = 0.0;
            for (int i = 0; i <= M; ++i)
                sum += table[i][n] * table[i][m];
            sum *= h;
            worst = std::max(worst, std::abs(sum - (n == m ? 1.0 : 0.0)));
        }
    CHECK(worst < 1e-10);
}

TEST_CASE("ladder actions on unit vectors")
{
    const auto e0 = HermiteCoeffs::unit(0);
    const auto e1 = HermiteCoeffs::unit(1);

    const auto r = apply_ladder(e0, Ladder::raise).coeffs;
    REQUIRE(r.size() == 2);
    CHECK(r[0] == complex(0.0));
    CHECK(r[1] == complex(1.0));

    const auto v = apply_ladder(e1, Ladder::mult_v).coeffs;
    REQUIRE(v.size() == 3);
    CHECK(v[0].real() == doctest::Approx(1.0));
    CHECK(v[1] == complex(0.0));
    CHECK(v[2].real() == doctest::Approx(std::sqrt(2.0)));

    const auto d = apply_ladder(e0, Ladder::deriv_v).coeffs;
    REQUIRE(d.size() == 2);
    CHECK(d[0] == complex(0.0));
    CHECK(d[1].real() == doctest::Approx(-0.5));

    const auto low = apply_ladder(e0, Ladder::lower).coeffs;
    for (const auto& c : low)
        CHECK(c == complex(0.0));
}

TEST_CASE("deriv_v agrees with a finite difference of the reconstruction")
{
    for (int n : {0, 3, 9}) {
        const auto d = apply_ladder(HermiteCoeffs::unit(n), Ladder::deriv_v).coeffs;
        for (double v : {-1.7, 0.4, 2.2}) {
            double spectral = 0.0;
            for (std::size_t m = 0; m < d.size(); ++m)
                spectral += d[m].real() * hermite_eval(static_cast<int>(m), v);
            const double h = 1e-5;
            const double fd = (hermite_eval(n, v + h) - hermite_eval(n, v - h)) / (2 * h);
            CHECK(spectral == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("monomial_derivative_norm closed forms")
{
    for (int n = 0; n <= 30; ++n) {
        CHECK(monomial_derivative_norm(1, 0, n) == doctest::Approx(std::sqrt(2.0 * n + 1.0)).epsilon(1e-14));
        CHECK(monomial_derivative_norm(0, 1, n) == doctest::Approx(0.5 * std::sqrt(2.0 * n + 1.0)).epsilon(1e-14));
    }
    CHECK(monomial_derivative_norm(0, 0, 7) == doctest::Approx(1.0));
}

TEST_CASE("truncation overflow is reported, never clipped")
{
    CHECK_THROWS_AS(monomial_derivative_norm(3, 3, 10, 12), TruncationError);
    CHECK_NOTHROW(monomial_derivative_norm(3, 3, 10, 16));
    CHECK_THROWS_AS(HermiteCoeffs(std::vector<complex>(6, 1.0), 4), TruncationError);
    auto f = HermiteCoeffs::unit(4, 4);
    CHECK_THROWS_AS(apply_ladder(f, Ladder::raise), TruncationError);
    CHECK_NOTHROW(apply_ladder(f, Ladder::lower));
}

TEST_CASE("ge3_bound values")
{
    CHECK(ge3_bound(1, 0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    for (int n : {0, 5, 100})
        CHECK(ge3_bound(0, 0, n) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ge3_bound(2, 3, 10) == doctest::Approx(4.0 * std::sqrt(360360.0)).epsilon(1e-12));
    CHECK(ge3_bound(2, 3, 10) == doctest::Approx(2401.199).epsilon(1e-6));
}

TEST_CASE("monomial norms never exceed the factorial bound")
{
    for (int k = 0; k <= 6; ++k)
        for (int l = 0; k + l <= 6; ++l)
            for (int n = 0; n <= 40; ++n)
                CHECK(monomial_derivative_norm(k, l, n) <= ge3_bound(k, l, n) * (1 + 1e-10));
}

TEST_CASE("log_ge5_bound dominates the exact norms on a spot check")
{
    for (double r : {0.5, 1.0, 2.0})
        for (double eps : {0.5, 1.0})
            for (int k = 0; k <= 3; ++k)
                for (int l = 0; l <= 3; ++l)
                    for (int n : {0, 1, 8, 30})
                        CHECK(std::log(monomial_derivative_norm(k, l, n)) <= log_ge5_bound(k, l, n, r, eps) + 1e-12);
}
