#include <doctest.h>

#include "kac/coefficients.hpp"
#include "kac/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace kac;

namespace {
const double two_pi = 2 * std::numbers::pi;

const CoeffTable& table16()
{
    static const CoeffTable t = build_tables(16, 0.5);
    return t;
}
} // namespace

TEST_CASE("coercivity ratio on single Hermite modes")
{
    const auto& t = table16();
    std::vector<complex> f(16, 0.0);
    f[0] = 1.0;
    CHECK(coercivity_ratio(f, t) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    f[0] = 0.0;
    f[1] = complex(0.0, 3.0);
    CHECK(coercivity_ratio(f, t) == doctest::Approx((t.lambda(1) + 1.0) / std::sqrt(1.5)).epsilon(1e-14));
    const auto c = coercivity_constants(t, 16, 30, 11);
    CHECK(c.ratios.size() == 30);
    CHECK(c.c_low > 0.0);
    CHECK(c.c_low <= c.c_high);
    CHECK(coercivity_constants(t, 16, 30, 11).ratios == c.ratios);
}

TEST_CASE("hypoelliptic ratio at N = 16 matches the high-precision reference")
{
    // 50-digit eigenvalues and a dense symmetric eigensolve
    const std::vector<double> ref{0.28571428571428575, 0.37595366526725604, 0.35221867922127753};
    const auto R = hypoelliptic_ratio({0.0, 1.0, 4.0}, 16, table16(), 0.5);
    REQUIRE(R.size() == 3);
    for (int i = 0; i < 3; ++i)
        CHECK(R[i] == doctest::Approx(ref[i]).epsilon(1e-7));
    CHECK_THROWS(hypoelliptic_ratio({0.0}, 8, table16(), 0.5));
}

TEST_CASE("linear fit")
{
    const auto f = linear_fit({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.slope_stderr < 1e-12);
    CHECK(f.count == 4);
    const auto g = linear_fit({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 0.0, 1.0});
    CHECK(g.r_squared == doctest::Approx(0.2));
    CHECK_THROWS_AS(linear_fit({0.0, 1.0}, {0.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(linear_fit({1.0, 1.0, 1.0}, {0.0, 1.0, 2.0}), std::domain_error);
}

TEST_CASE("Gevrey fit recovers an exact weighted decay")
{
    const double s = 0.5;
    for (double delta : {0.3, 1.0, 2.5}) {
        SpectralState st(12, 6, two_pi, 0.75);
        for (int n = 0; n < 12; ++n)
            for (int j = -6; j <= 6; ++j)
                st.at(n, j) = std::exp(-delta * std::pow(std::sqrt(n + 0.5) + st.bracket_xi(j), 0.5) + 0.1);
        const auto f = gevrey_fit(st, s);
        CHECK(f.slope == doctest::Approx(delta).epsilon(1e-10));
        CHECK(f.intercept == doctest::Approx(-0.1).epsilon(1e-8));
        CHECK(f.r_squared == doctest::Approx(1.0));
        CHECK(f.exponent_used == doctest::Approx(0.5));
        CHECK(f.t == 0.75);
        CHECK(f.count == 12 * 7);
    }
    SpectralState tiny(4, 1, two_pi);
    tiny.at(0, 0) = 1.0;
    CHECK_THROWS_AS(gevrey_fit(tiny, s), std::domain_error);
}

TEST_CASE("theorem probe on a single mode")
{
    const double s = 0.5, sigma = 2.0;
    SpectralState st(6, 2, two_pi, 1.0);
    st.at(0, 0) = 1.0;
    const auto p = theorem_bound_probe(st, 8, s, 1.0);
    REQUIRE(p.B.size() == 9);
    const double a = std::sqrt(0.5) + 1.0;
    double C = 0.0;
    for (int k = 0; k <= 8; ++k) {
        CHECK(p.B[k] == doctest::Approx(std::pow(a, k)).epsilon(1e-13));
        const double ck = std::exp((k * std::log(a) - sigma * std::lgamma(k + 1.0)) / (k + 1));
        CHECK(p.C_k[k] == doctest::Approx(ck).epsilon(1e-12));
        CHECK(p.ratio[k] <= 1.0 + 1e-12);
        C = std::max(C, ck);
    }
    CHECK(p.C == doctest::Approx(C).epsilon(1e-12));
    const auto half = theorem_bound_probe(st, 8, s, 2.0);
    CHECK(half.B[3] == doctest::Approx(p.B[3] / 2.0));
    st.set_time(0.0);
    CHECK_THROWS(theorem_bound_probe(st, 8, s, 1.0));
}

TEST_CASE("sup-norm probes")
{
    SpectralState st(4, 1, two_pi);
    st.at(0, 0) = 1.0;
    const double psi0 = std::pow(two_pi, -0.25);
    CHECK(supnorm_probe(st, 0, 0, 0) == doctest::Approx(psi0 / std::sqrt(two_pi)).epsilon(1e-13));
    CHECK(supnorm_probe(st, 0, 0, 1) < 1e-14);

    // 2 cos(x) psi_0(v) / sqrt(L): d_x peaks at x = pi/2 and 3 pi/2
    const auto wave = init_state(SingleMode{0, 1, 1.0}, 4, 1, two_pi);
    CHECK(supnorm_probe(wave, 0, 0, 1) == doctest::Approx(2.0 * psi0 / std::sqrt(two_pi)).epsilon(1e-13));

    const auto f = reconstruct_field(wave, 0, 0, 0);
    CHECK(f.x.size() == 8);
    CHECK(f.v.size() == 401);
    CHECK(f.values.size() == 8 * 401);

    const auto c = supnorm_constant(wave, 3, 0.5);
    CHECK(c.C > 0.0);
    CHECK(c.samples.size() == 20); // k + l + p <= 3
}

TEST_CASE("trilinear ratio")
{
    const auto& t = table16();
    const auto f = random_damped_state(16, 3, two_pi, 1, 0);
    const auto g = random_damped_state(16, 3, two_pi, 1, 1);
    const auto h = random_damped_state(16, 3, two_pi, 1, 2);
    const double r = trilinear_ratio_of(f, g, h, t);
    CHECK(r > 0.0);
    CHECK(trilinear_ratio_of(2.0 * f, 3.0 * g, 0.5 * h, t) == doctest::Approx(r).epsilon(1e-12));
    CHECK_THROWS(trilinear_ratio_of(f.zeros_like(), g, h, t));
    // smaller truncations are truncations of the same draw
    const auto small = random_damped_state(8, 2, two_pi, 1, 0);
    CHECK(small == f.resized(8, 2));
    CHECK(trilinear_ratio(t, 16, 3, 4, 1) >= r);
}

TEST_CASE("CSV writers")
{
    std::ostringstream os;
    write_hypo_csv(os, {0.0, 1.0}, {0.5, 0.25}, "# s = 0.5\n");
    CHECK(os.str() == "# kac-hypo v1\n# s = 0.5\nxi,R\n0,0.5\n1,0.25\n");
    std::ostringstream g;
    write_decay_fits_csv(g, {DecayFit{}}, "");
    CHECK(g.str().find("t,slope,intercept,r_squared,exponent_used,slope_stderr,count\n") != std::string::npos);
}
