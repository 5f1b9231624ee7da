#include <doctest.h>

#include "kac/coefficients.hpp"
#include "kac/operators.hpp"
#include "kac/spectral_state.hpp"

#include <cmath>
#include <numbers>

using namespace kac;

namespace {
const double two_pi = 2 * std::numbers::pi;

const CoeffTable& table16()
{
    static const CoeffTable t = build_tables(16, 0.5);
    return t;
}

SpectralState unit(int N, int K, int n, int j, complex c = 1.0)
{
    SpectralState st(N, K, two_pi);
    st.at(n, j) = c;
    return st;
}
} // namespace

TEST_CASE("linearized operator: kernel spanned by psi_0 and psi_2")
{
    const auto& t = table16();
    for (int n : {0, 2}) {
        const auto out = apply_linearized(unit(16, 2, n, 1), t);
        CHECK(norm(out, NormKind::l2(), 0.5) < 1e-12);
    }
    const auto one = apply_linearized(unit(16, 2, 1, -1, complex(0.0, 2.0)), t);
    CHECK(one.at(1, -1).imag() == doctest::Approx(2.0 * t.lambda(1)));
    CHECK(t.lambda(1) > 0.0);
}

TEST_CASE("transport: v d_x couples n to n +- 1")
{
    const auto out = apply_transport(unit(6, 2, 1, 1));
    CHECK(std::abs(out.at(0, 1) - complex(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(out.at(2, 1) - complex(0.0, std::sqrt(2.0))) < 1e-15);
    CHECK(norm(out, NormKind::l2(), 0.5) == doctest::Approx(std::sqrt(3.0)));
    // j = 0 is annihilated, and the top mode has no partner above
    CHECK(norm(apply_transport(unit(6, 2, 3, 0)), NormKind::l2(), 0.5) == 0.0);
    const auto top = apply_transport(unit(6, 2, 5, -2));
    CHECK(std::abs(top.at(4, -2) - complex(0.0, -2.0 * std::sqrt(5.0))) < 1e-14);
    // skew-adjoint in L2
    const auto f = init_state(RandomSmooth{3, 0.3}, 6, 4, two_pi);
    const auto Tf = apply_transport(f);
    double re = 0.0;
    for (std::size_t i = 0; i < f.data().size(); ++i)
        re += (Tf.data()[i] * std::conj(f.data()[i])).real();
    CHECK(std::abs(re) < 1e-14);
}

TEST_CASE("gamma on unit masses")
{
    const auto& t = table16();
    const double sl = std::sqrt(two_pi);
    CHECK(t.alpha(2, 0) == doctest::Approx(5.82407).epsilon(1e-5));
    const auto a = apply_gamma(unit(16, 2, 2, 0), unit(16, 2, 0, 0), t);
    CHECK(a.at(2, 0).real() == doctest::Approx(t.alpha(2, 0) / sl).epsilon(1e-12));
    const auto b = apply_gamma(unit(16, 2, 0, 0), unit(16, 2, 2, 0), t);
    CHECK(b.at(2, 0).real() == doctest::Approx(t.alpha(0, 2) / sl).epsilon(1e-12));
    // odd first argument never contributes
    CHECK(norm(apply_gamma(unit(16, 2, 3, 0), unit(16, 2, 4, 0), t), NormKind::l2(), 0.5) < 1e-15);
    // Fourier modes add; the sum drops out of the truncation
    const auto c = apply_gamma(unit(16, 3, 2, 1), unit(16, 3, 1, 2), t);
    CHECK(c.at(3, 3).real() == doctest::Approx(t.alpha(2, 1) / sl).epsilon(1e-12));
    CHECK(norm(c, NormKind::l2(), 0.5) == doctest::Approx(std::abs(t.alpha(2, 1)) / sl).epsilon(1e-12));
    const auto d = apply_gamma(unit(16, 2, 2, 1), unit(16, 2, 1, 2), t);
    CHECK(norm(d, NormKind::l2(), 0.5) < 1e-15);
    CHECK(dealiased_grid_size(2) >= 8);
}

TEST_CASE("gamma is bilinear and keeps real fields real")
{
    const auto& t = table16();
    const auto f = init_state(RandomSmooth{5, 0.4}, 16, 5, two_pi);
    const auto g = init_state(RandomSmooth{6, 0.4}, 16, 5, two_pi);
    const auto h = init_state(RandomSmooth{9, 0.4}, 16, 5, two_pi);
    const auto lhs = apply_gamma(f, 2.0 * g + h, t);
    const auto rhs = 2.0 * apply_gamma(f, g, t) + apply_gamma(f, h, t);
    CHECK(norm(lhs - rhs, NormKind::l2(), 0.5) < 1e-12 * norm(lhs, NormKind::l2(), 0.5));
    CHECK(lhs.is_real(1e-12));
    GammaOptions opts;
    opts.alpha_threshold = 1e300;
    CHECK(norm(apply_gamma(f, g, t, opts), NormKind::l2(), 0.5) == 0.0);
}

TEST_CASE("transport block structure")
{
    const auto& t = table16();
    const auto b = transport_block(3.0, 5, t);
    REQUIRE(b.diag.size() == 5);
    REQUIRE(b.offdiag.size() == 4);
    const auto m = b.dense();
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) {
            const complex v = m[r * 5 + c];
            if (r == c)
                CHECK(v == complex(t.lambda(r), 0.0));
            else if (std::abs(r - c) == 1)
                CHECK(std::abs(v - complex(0.0, 3.0 * std::sqrt(std::max(r, c)))) < 1e-15);
            else
                CHECK(v == complex(0.0));
        }
}

TEST_CASE("weighted Hermite transform")
{
    CHECK(std::abs(weighted_hermite_transform(0, 0.0) - 1.0) < 1e-15);
    CHECK(std::abs(weighted_hermite_transform(1, 2.0) - complex(0.0, -2.0 * std::exp(-2.0))) < 1e-15);
    CHECK(std::abs(weighted_hermite_transform(3, 1.5) -
                   complex(0.0, std::pow(1.5, 3) * std::exp(-1.125) / std::sqrt(6.0))) < 1e-15);
}

TEST_CASE("Bobylev oracle")
{
    std::vector<double> xi{-3.0, -1.0, 0.5, 2.0, 4.0};
    for (int m : {0, 1, 2, 5}) {
        const auto z = gamma_bobylev_oracle(3, m, 0.5, xi);
        for (auto v : z)
            CHECK(std::abs(v) < 1e-14);
    }
    const auto& t = table16();
    const auto w = gamma_bobylev_oracle(2, 1, 0.5, xi);
    for (std::size_t q = 0; q < xi.size(); ++q) {
        const complex pred = t.alpha(2, 1) * weighted_hermite_transform(3, xi[q]);
        CHECK(std::abs(w[q] - pred) < 1e-9 * std::max(1.0, std::abs(pred)));
    }
}
