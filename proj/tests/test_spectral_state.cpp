#include <doctest.h>

#include "kac/coefficients.hpp"
#include "kac/errors.hpp"
#include "kac/spectral_state.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace kac;

namespace {
const double two_pi = 2 * std::numbers::pi;
}

TEST_CASE("shape, wavenumbers and element access")
{
    SpectralState st(5, 3, two_pi);
    CHECK(st.modes() == 7);
    CHECK(st.xi(2) == doctest::Approx(2.0));
    CHECK(st.bracket_xi(-3) == doctest::Approx(std::sqrt(10.0)));
    SpectralState other(5, 3, 4.0);
    CHECK(other.xi(1) == doctest::Approx(two_pi / 4.0));
    CHECK_FALSE(st.same_shape(other));
    CHECK_THROWS(SpectralState(0, 3, 1.0));
    CHECK_THROWS(SpectralState(3, 3, 0.0));
    CHECK_THROWS(st += other);
}

TEST_CASE("norms on unit masses")
{
    SpectralState a(6, 2, two_pi);
    a.at(0, 0) = 1.0;
    CHECK(norm(a, NormKind::h10(), 0.5) == doctest::Approx(1.0));
    SpectralState b(6, 2, two_pi);
    b.at(3, 0) = 1.0;
    CHECK(norm(b, NormKind::hs2_weighted_10(), 0.5) == doctest::Approx(std::pow(3.5, 0.25)).epsilon(1e-14));
    CHECK(norm(b, NormKind::hs2_weighted_10(), 0.5) == doctest::Approx(1.3678).epsilon(1e-4));
    SpectralState c(6, 2, two_pi);
    c.at(1, 2) = complex(0.0, 2.0);
    CHECK(norm(c, NormKind::l2(), 0.5) == doctest::Approx(2.0));
    CHECK(norm(c, NormKind::h10(), 0.5) == doctest::Approx(2.0 * std::sqrt(5.0)));
    CHECK(inner_10(c, c).real() == doctest::Approx(20.0));
}

TEST_CASE("weights")
{
    SpectralState a(4, 2, two_pi);
    a.at(0, 0) = 1.0;
    a.at(2, 1) = complex(0.5, -0.25);
    CHECK(apply_weight(a, 0.0, 0.0, 0.5, WeightDirection::forward) == a);
    const auto w = apply_weight(a, 1.0, 0.0, 0.5, WeightDirection::forward);
    CHECK(w.at(0, 0).real() == doctest::Approx(std::exp(std::sqrt(std::sqrt(0.5) + 1.0))).epsilon(1e-14));
    CHECK(w.at(0, 0).real() == doctest::Approx(3.6934).epsilon(1e-4));
    CHECK(weight_exponent(0, 1.0, 1.0, 0.5) == doctest::Approx(1.30656).epsilon(1e-5));
    // saturating multiplier with delta1 = 1
    for (double t : {10.0, 100.0, 1000.0}) {
        const auto sat = apply_weight(a, t, 1.0, 0.5, WeightDirection::forward);
        CHECK(std::abs(sat.at(0, 0)) <= 1.0);
        CHECK(std::abs(sat.at(0, 0)) > 1.0 - 1e-3);
    }
    CHECK_THROWS_AS(apply_weight(a, 1000.0, 0.0, 0.5, WeightDirection::forward), WeightOverflowError);
    const auto back = apply_weight(w, 1.0, 0.0, 0.5, WeightDirection::inverse);
    CHECK(norm(back - a, NormKind::l2(), 0.5) < 1e-15);
    CHECK(norm(a, NormKind::gs_weighted(1.0, 0.0), 0.5) == doctest::Approx(norm(w, NormKind::h10(), 0.5)));
}

TEST_CASE("init_state")
{
    const auto single = init_state(SingleMode{0, 0, 2.5}, 4, 2, two_pi);
    CHECK(norm(single, NormKind::h10(), 0.5) == doctest::Approx(2.5));
    const auto mirrored = init_state(SingleMode{1, 2, complex(1.0, 1.0)}, 4, 3, two_pi);
    CHECK(mirrored.is_real());
    CHECK(mirrored.at(1, -2) == std::conj(mirrored.at(1, 2)));

    const auto r1 = init_state(RandomSmooth{7, 0.5}, 8, 6, two_pi, 1e-3);
    const auto r2 = init_state(RandomSmooth{7, 0.5}, 8, 6, two_pi, 1e-3);
    CHECK(r1 == r2);
    CHECK(r1.is_real());
    CHECK(norm(r1, NormKind::h10(), 0.5) == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK_FALSE(init_state(RandomSmooth{8, 0.5}, 8, 6, two_pi, 1e-3) == r1);

    const auto bump = init_state(GaussianBump{1.0, 0.4, {1.0, 0.0, -0.3}}, 6, 8, two_pi, 0.2);
    CHECK(bump.is_real());
    CHECK(norm(bump, NormKind::h10(), 0.5) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(bump.at(1, 3) == complex(0.0));

    const auto wp = init_state(WeightedPhase{3, 2.0, 0.5}, 6, 4, two_pi);
    CHECK(wp.is_real());
    CHECK(std::abs(wp.at(2, 3)) == doctest::Approx(std::exp(-2.0 * std::pow(std::sqrt(2.5) + std::sqrt(10.0), 0.5))));

    CHECK(norm(init_state(ZeroData{}, 4, 2, two_pi, 0.0), NormKind::l2(), 0.5) == 0.0);
    CHECK_THROWS_AS(init_state(ZeroData{}, 4, 2, two_pi, 1e-3), std::invalid_argument);
}

TEST_CASE("resized keeps overlapping coefficients")
{
    auto a = init_state(RandomSmooth{1, 0.2}, 6, 4, two_pi);
    const auto big = a.resized(9, 7);
    const auto small = a.resized(3, 2);
    for (int n = 0; n < 6; ++n)
        for (int j = -4; j <= 4; ++j)
            CHECK(big.at(n, j) == a.at(n, j));
    CHECK(big.at(8, 7) == complex(0.0));
    for (int n = 0; n < 3; ++n)
        for (int j = -2; j <= 2; ++j)
            CHECK(small.at(n, j) == a.at(n, j));
}

TEST_CASE("snapshot CSV round trip is bit exact")
{
    auto a = init_state(RandomSmooth{11, 0.3}, 5, 3, 3.7, 0.01);
    a.set_time(0.125);
    std::stringstream ss;
    write_snapshot(ss, a, 0.6, "# s = 0.6\n");
    CHECK(ss.str().rfind("# kac-state v1", 0) == 0);
    double s = 0.0;
    const auto b = read_snapshot(ss, &s);
    CHECK(b == a);
    CHECK(s == 0.6);
    std::istringstream bad("n,j,re,im\n");
    CHECK_THROWS(read_snapshot(bad));
}
