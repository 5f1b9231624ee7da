#include "kac/operators.hpp"

#include "kac/parallel.hpp"
#include "kac/quadrature.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kac {

SpectralState apply_linearized(const SpectralState& state, const CoeffTable& table)
{
    if (table.N() < state.N())
        throw std::invalid_argument("apply_linearized: table truncation " + std::to_string(table.N()) +
                                    " below state truncation " + std::to_string(state.N()));
    SpectralState out = state;
    for (int n = 0; n < state.N(); ++n) {
        const double lam = table.lambda(n);
        for (int j = -state.K(); j <= state.K(); ++j)
            out.at(n, j) *= lam;
    }
    return out;
}

SpectralState apply_transport(const SpectralState& state)
{
    SpectralState out = state.zeros_like();
    const int N = state.N();
    for (int j = -state.K(); j <= state.K(); ++j) {
        const complex ixi(0.0, state.xi(j));
        if (j == 0)
            continue;
        for (int n = 0; n < N; ++n) {
            complex v = 0.0;
            if (n + 1 < N)
                v += std::sqrt(n + 1.0) * state.at(n + 1, j);
            if (n > 0)
                v += std::sqrt(static_cast<double>(n)) * state.at(n - 1, j);
            out.at(n, j) = ixi * v;
        }
    }
    return out;
}

int dealiased_grid_size(int K)
{
    int m = std::max(2, 3 * K + 2);
    for (;; ++m) {
        int r = m;
        for (int p : {2, 3, 5})
            while (r % p == 0)
                r /= p;
        if (r == 1)
            return m;
    }
}

namespace {

// FFTW plans for one grid size; executed with the new-array interface, which is thread safe.
class FftPair {
public:
    explicit FftPair(int m) : m_(m)
    {
        std::vector<complex> a(static_cast<std::size_t>(m)), b(static_cast<std::size_t>(m));
        auto* in = reinterpret_cast<fftw_complex*>(a.data());
        auto* out = reinterpret_cast<fftw_complex*>(b.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        backward_ = fftw_plan_dft_1d(m, in, out, FFTW_BACKWARD, flags);
        forward_ = fftw_plan_dft_1d(m, in, out, FFTW_FORWARD, flags);
        if (!backward_ || !forward_)
            throw std::runtime_error("FFTW planning failed for size " + std::to_string(m));
    }
    ~FftPair()
    {
        fftw_destroy_plan(backward_);
        fftw_destroy_plan(forward_);
    }
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    int size() const { return m_; }
    // u(x_p) = sum_j c_j exp(2 pi i j p / M)
    void to_physical(const complex* in, complex* out) const { exec(backward_, in, out); }
    // C_j = sum_p u_p exp(-2 pi i j p / M)
    void to_spectral(const complex* in, complex* out) const { exec(forward_, in, out); }

private:
    static void exec(fftw_plan p, const complex* in, complex* out)
    {
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<complex*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }

    int m_;
    fftw_plan backward_ = nullptr;
    fftw_plan forward_ = nullptr;
};

const FftPair& fft_for(int m)
{
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<FftPair>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[m];
    if (!slot)
        slot = std::make_unique<FftPair>(m);
    return *slot;
}

bool row_is_zero(const SpectralState& st, int n)
{
    for (int j = -st.K(); j <= st.K(); ++j)
        if (st.at(n, j) != complex(0.0))
            return false;
    return true;
}

std::vector<complex> physical_row(const SpectralState& st, int n, const FftPair& fft)
{
    const int m = fft.size();
    std::vector<complex> spec(static_cast<std::size_t>(m), 0.0), phys(static_cast<std::size_t>(m));
    for (int j = -st.K(); j <= st.K(); ++j)
        spec[static_cast<std::size_t>((j + m) % m)] = st.at(n, j);
    fft.to_physical(spec.data(), phys.data());
    return phys;
}

} // namespace

SpectralState apply_gamma(const SpectralState& f, const SpectralState& g, const CoeffTable& table,
                          const GammaOptions& options)
{
    if (!f.same_shape(g))
        throw std::invalid_argument("apply_gamma: f and g must share (N, K, L)");
    if (table.N() < f.N())
        throw std::invalid_argument("apply_gamma: table truncation below state truncation");

    const int N = f.N(), K = f.K();
    const int m = dealiased_grid_size(K);
    const auto& fft = fft_for(m);

    std::vector<std::vector<complex>> f_phys(static_cast<std::size_t>(N)), g_phys(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        if (n % 2 == 0 && !row_is_zero(f, n))
            f_phys[n] = physical_row(f, n, fft);
        if (!row_is_zero(g, n))
            g_phys[n] = physical_row(g, n, fft);
    }

    SpectralState out = f.zeros_like();
    const double scale = 1.0 / (m * std::sqrt(f.L()));
    parallel_for(0, static_cast<std::size_t>(N), [&](std::size_t idx) {
        const int n = static_cast<int>(idx);
        std::vector<complex> prod;
        for (int k = 0; k <= n; k += 2) {
            const int l = n - k;
            if (f_phys[k].empty() || g_phys[l].empty())
                continue;
            const double a = table.alpha(k, l);
            if (a == 0.0 || std::abs(a) < options.alpha_threshold)
                continue;
            if (prod.empty())
                prod.assign(static_cast<std::size_t>(m), 0.0);
            const auto& fk = f_phys[k];
            const auto& gl = g_phys[l];
            for (int p = 0; p < m; ++p)
                prod[p] += a * fk[p] * gl[p];
        }
        if (prod.empty())
            return;
        std::vector<complex> spec(static_cast<std::size_t>(m));
        fft.to_spectral(prod.data(), spec.data());
        for (int j = -K; j <= K; ++j)
            out.at(n, j) = scale * spec[static_cast<std::size_t>((j + m) % m)];
    });
    return out;
}

std::vector<complex> TransportBlock::dense() const
{
    std::vector<complex> a(static_cast<std::size_t>(N) * N, 0.0);
    for (int n = 0; n < N; ++n)
        a[static_cast<std::size_t>(n) * N + n] = diag[n];
    for (int n = 0; n + 1 < N; ++n) {
        const complex c(0.0, xi * offdiag[n]);
        a[static_cast<std::size_t>(n) * N + n + 1] = c;
        a[static_cast<std::size_t>(n + 1) * N + n] = c;
    }
    return a;
}

TransportBlock transport_block(double xi, int N, const CoeffTable& table)
{
    if (N < 2)
        throw std::invalid_argument("transport_block: N must be >= 2");
    if (table.N() < N)
        throw std::invalid_argument("transport_block: table truncation below N");
    TransportBlock b;
    b.xi = xi;
    b.N = N;
    b.diag.resize(static_cast<std::size_t>(N));
    b.offdiag.resize(static_cast<std::size_t>(N - 1));
    for (int n = 0; n < N; ++n)
        b.diag[n] = table.lambda(n);
    for (int n = 0; n + 1 < N; ++n)
        b.offdiag[n] = std::sqrt(n + 1.0);
    return b;
}

namespace {

complex minus_i_power(int n)
{
    switch (n % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
    }
}

double int_power(double x, int n)
{
    double r = 1.0;
    for (int i = 0; i < n; ++i)
        r *= x;
    return r;
}

} // namespace

complex weighted_hermite_transform(int n, double xi)
{
    if (n < 0)
        throw std::invalid_argument("weighted_hermite_transform: negative degree");
    const double mag = int_power(xi, n) * std::exp(-0.5 * xi * xi - 0.5 * std::lgamma(n + 1.0));
    return minus_i_power(n) * mag;
}

std::vector<complex> gamma_bobylev_oracle(int k, int l, double s, const std::vector<double>& xi_grid, double tol)
{
    if (k < 0 || l < 0)
        throw std::invalid_argument("gamma_bobylev_oracle: negative index");
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("gamma_bobylev_oracle: s must lie in (0,1)");
    const std::size_t npts = xi_grid.size();
    std::vector<complex> out(npts, 0.0);
    if (npts == 0)
        return out;

    const double c_l_mag = std::exp(-0.5 * std::lgamma(l + 1.0));
    const complex c_l = minus_i_power(l) * c_l_mag;

    // Even part of g^(a) with g = mu^{1/2} psi_k; also g^(0).
    auto g_even = [k](double a) {
        return 0.5 * (weighted_hermite_transform(k, a) + weighted_hermite_transform(k, -a));
    };
    const complex g_at_zero = weighted_hermite_transform(k, 0.0);

    auto integrand = [&](double theta, std::span<double> values, std::span<double> mags) {
        const double half = std::sin(0.5 * theta);
        // beta split as c_half / half / half^{2s}, applied to the bracket so nothing overflows near 0
        const double c_half = std::cos(0.5 * theta);
        const double half_2s = std::pow(half, 2.0 * s);
        auto beta_times = [&](double x) { return c_half * (x / half / half_2s); };
        const double sin_t = std::sin(theta);
        for (std::size_t i = 0; i < npts; ++i) {
            const double xi = xi_grid[i];
            const double y = xi * std::cos(theta);
            const complex f_y = weighted_hermite_transform(l, y);
            complex bracket;
            double bracket_mag;
            if (k == 0) {
                // [g^(xi sin) - 1] f^(y) + [f^(y) - f^(xi)], each piece O(theta^2)
                const double a = xi * sin_t;
                const complex first = std::expm1(-0.5 * a * a) * f_y;
                const double delta = -2.0 * xi * half * half; // y - xi
                double power_diff = 0.0;                       // (y^l - xi^l) / delta
                for (int p = 0; p < l; ++p)
                    power_diff += int_power(y, p) * int_power(xi, l - 1 - p);
                const double second_real =
                    delta * power_diff * std::exp(-0.5 * y * y) +
                    int_power(xi, l) * std::exp(-0.5 * xi * xi) * std::expm1(-0.5 * delta * (y + xi));
                const complex second = c_l * second_real;
                bracket = first + second;
                bracket_mag = std::abs(first) + std::abs(second);
            } else {
                bracket = g_even(xi * sin_t) * f_y - g_at_zero * weighted_hermite_transform(l, xi);
                bracket_mag = std::abs(bracket);
            }
            values[2 * i] = beta_times(bracket.real());
            values[2 * i + 1] = beta_times(bracket.imag());
            mags[2 * i] = beta_times(bracket_mag);
            mags[2 * i + 1] = mags[2 * i];
        }
    };
    quad::Options opt;
    opt.rel_tol = tol;
    const std::string label = "gamma_bobylev_oracle(" + std::to_string(k) + "," + std::to_string(l) + ")";
    const auto vals = quad::integrate(integrand, 2 * npts, std::numbers::pi / 4.0, opt, label.c_str());
    for (std::size_t i = 0; i < npts; ++i)
        out[i] = 2.0 * complex(vals[2 * i], vals[2 * i + 1]);
    return out;
}

} // namespace kac
