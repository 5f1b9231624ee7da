#include "kac/diagnostics.hpp"

#include "kac/hermite.hpp"
#include "kac/operators.hpp"
#include "kac/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace kac {

namespace {

double gevrey_exponent(double s) { return 2.0 * s / (2.0 * s + 1.0); }
double factorial_power(double s) { return (2.0 * s + 1.0) / (2.0 * s); }

void write_header(std::ostream& os, const std::string& kind, const std::string& echo)
{
    os << "# kac-" << kind << " v1\n" << echo;
    if (!echo.empty() && echo.back() != '\n')
        os << '\n';
}

} // namespace

double coercivity_ratio(const std::vector<complex>& f, const CoeffTable& table)
{
    if (static_cast<int>(f.size()) > table.N())
        throw std::invalid_argument("coercivity_ratio: state longer than the coefficient table");
    const double s = table.s();
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) {
        const double a = std::norm(f[n]);
        num += (table.lambda(static_cast<int>(n)) + 1.0) * a;
        den += std::pow(n + 0.5, s) * a;
    }
    if (den == 0.0)
        throw std::invalid_argument("coercivity_ratio: zero state");
    return num / den;
}

CoercivityResult coercivity_constants(const CoeffTable& table, int N, int samples, std::uint64_t seed)
{
    if (N > table.N() || N < 1)
        throw std::invalid_argument("coercivity_constants: need 1 <= N <= table.N()");
    if (samples < 1)
        throw std::invalid_argument("coercivity_constants: need at least one sample");
    CoercivityResult out;
    out.seed = seed;
    out.ratios.resize(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        std::seed_seq seq{seed, static_cast<std::uint64_t>(i)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<complex> f(static_cast<std::size_t>(N));
        for (int n = 0; n < N; ++n) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            f[n] = complex(re, im) / (1.0 + n);
        }
        out.ratios[i] = coercivity_ratio(f, table);
    }
    out.c_low = *std::min_element(out.ratios.begin(), out.ratios.end());
    out.c_high = *std::max_element(out.ratios.begin(), out.ratios.end());
    return out;
}

std::vector<double> hypoelliptic_ratio(const std::vector<double>& xi_list, int N, const std::vector<double>& lambda,
                                       double s)
{
    if (N < 16)
        throw std::invalid_argument("hypoelliptic_ratio: need N >= 16");
    if (static_cast<int>(lambda.size()) < N)
        throw std::invalid_argument("hypoelliptic_ratio: fewer eigenvalues than N");
    std::vector<double> out(xi_list.size());
    parallel_for(0, xi_list.size(), [&](std::size_t q) {
        const double xi = xi_list[q];
        Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(N, N);
        for (int n = 0; n < N; ++n) {
            P(n, n) = lambda[n];
            if (n + 1 < N) {
                const complex off(0.0, xi * std::sqrt(n + 1.0));
                P(n, n + 1) = off;
                P(n + 1, n) = off;
            }
        }
        Eigen::MatrixXcd A = P.adjoint() * P;
        A.diagonal().array() += 1.0;
        const double x_weight = std::pow(1.0 + xi * xi, gevrey_exponent(s));
        Eigen::VectorXd scale(N);
        for (int n = 0; n < N; ++n)
            scale(n) = 1.0 / std::sqrt(std::pow(n + 0.5, 2.0 * s) + x_weight);
        Eigen::MatrixXcd M = scale.asDiagonal() * A * scale.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(M, Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success)
            throw std::runtime_error("hypoelliptic_ratio: eigen-solver failed at xi = " + format_double(xi));
        out[q] = eig.eigenvalues()(0);
    });
    return out;
}

std::vector<double> hypoelliptic_ratio(const std::vector<double>& xi_list, int N, const CoeffTable& table, double s)
{
    return hypoelliptic_ratio(xi_list, N, table.lambdas(), s);
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("linear_fit: size mismatch");
    const std::size_t n = x.size();
    if (n < 3)
        throw std::domain_error("linear_fit: need at least three points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw std::domain_error("linear_fit: all abscissae coincide");
    LinearFit f;
    f.count = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    const double ssr = std::max(0.0, syy - f.slope * sxy);
    f.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ssr / syy, 0.0, 1.0);
    f.slope_stderr = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    return f;
}

DecayFit gevrey_fit(const SpectralState& snapshot, double s, double floor)
{
    const double e = gevrey_exponent(s);
    std::vector<double> x, y;
    for (int n = 0; n < snapshot.N(); ++n)
        for (int j = 0; j <= snapshot.K(); ++j) {
            const double a = std::abs(snapshot.at(n, j));
            if (a > floor) {
                x.push_back(std::pow(std::sqrt(n + 0.5) + snapshot.bracket_xi(j), e));
                y.push_back(-std::log(a));
            }
        }
    if (x.size() < 3)
        throw std::domain_error("gevrey_fit: fewer than three coefficients above the noise floor at t = " +
                                format_double(snapshot.time()));
    const LinearFit lf = linear_fit(x, y);
    return {snapshot.time(), lf.slope, lf.intercept, lf.r_squared, e, lf.slope_stderr, lf.count};
}

std::vector<DecayFit> gevrey_fit(const std::vector<SpectralState>& snapshots, double s, double floor)
{
    std::vector<DecayFit> out;
    out.reserve(snapshots.size());
    for (const auto& snap : snapshots)
        out.push_back(gevrey_fit(snap, s, floor));
    return out;
}

TheoremProbe theorem_bound_probe(const SpectralState& state, int k_max, double s, double g0_norm)
{
    const double t = state.time();
    if (!(t > 0.0))
        throw std::invalid_argument("theorem_bound_probe: needs t > 0");
    if (k_max < 0 || k_max > 12)
        throw std::invalid_argument("theorem_bound_probe: k_max must lie in [0, 12]");
    if (!(g0_norm > 0.0))
        throw std::invalid_argument("theorem_bound_probe: g0_norm must be positive");
    const double sigma = factorial_power(s);
    TheoremProbe out;
    out.t = t;
    std::vector<double> logB(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
        double sum = 0.0;
        for (int n = 0; n < state.N(); ++n)
            for (int j = -state.K(); j <= state.K(); ++j) {
                const double b = state.bracket_xi(j);
                const double w = std::sqrt(n + 0.5) + b;
                sum += b * b * std::pow(w, 2.0 * k) * std::norm(state.at(n, j));
            }
        logB[k] = 0.5 * std::log(sum) - std::log(g0_norm);
        out.B.push_back(std::exp(logB[k]));
    }
    double logC = -std::numeric_limits<double>::infinity();
    std::vector<double> log_rhs_unit(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
        // log of (k!)^sigma / t^{sigma k}
        log_rhs_unit[k] = sigma * std::lgamma(k + 1.0) - sigma * k * std::log(t);
        const double lc = (logB[k] - log_rhs_unit[k]) / (k + 1.0);
        out.C_k.push_back(std::exp(lc));
        logC = std::max(logC, lc);
    }
    out.C = std::exp(logC);
    for (int k = 0; k <= k_max; ++k)
        out.ratio.push_back(std::exp(logB[k] - (k + 1.0) * logC - log_rhs_unit[k]));
    return out;
}

Field reconstruct_field(const SpectralState& state, int k, int l, int p, const FieldGrid& grid)
{
    if (k < 0 || l < 0 || p < 0)
        throw std::invalid_argument("reconstruct_field: orders must be non-negative");
    const int N = state.N(), K = state.K();
    const int top = N - 1 + k + l;
    const std::size_t cap = static_cast<std::size_t>(std::max(top, 512));
    const int nx = grid.nx > 0 ? grid.nx : 4 * K + 4;
    const int nv = grid.nv > 0 ? grid.nv : 401;
    if (nv % 2 == 0)
        throw std::invalid_argument("reconstruct_field: nv must be odd");
    const double v_max = grid.v_max > 0.0 ? grid.v_max : 2.0 * std::sqrt(top + 1.0) + 8.0;

    // d[n][j] of v^k d_v^l d_x^p g
    const int modes = 2 * K + 1;
    std::vector<complex> d(static_cast<std::size_t>(top + 1) * modes, 0.0);
    for (int j = -K; j <= K; ++j) {
        HermiteCoeffs h;
        h.capacity = cap;
        h.coeffs.resize(N);
        for (int n = 0; n < N; ++n)
            h.coeffs[n] = state.at(n, j);
        for (int i = 0; i < l; ++i)
            h = apply_ladder(h, Ladder::deriv_v);
        for (int i = 0; i < k; ++i)
            h = apply_ladder(h, Ladder::mult_v);
        const complex dx = std::pow(complex(0.0, state.xi(j)), p);
        for (std::size_t n = 0; n < h.coeffs.size(); ++n)
            d[n * modes + (j + K)] = h.coeffs[n] * dx;
    }

    Field f;
    f.x.resize(nx);
    f.v.resize(nv);
    for (int i = 0; i < nx; ++i)
        f.x[i] = state.L() * i / nx;
    const int half = nv / 2;
    for (int m = 0; m < nv; ++m)
        f.v[m] = v_max * (m - half) / half;
    f.values.assign(static_cast<std::size_t>(nx) * nv, 0.0);
    const double inv_sqrt_L = 1.0 / std::sqrt(state.L());
    std::vector<complex> phase(static_cast<std::size_t>(nx) * modes);
    for (int i = 0; i < nx; ++i)
        for (int j = -K; j <= K; ++j)
            phase[static_cast<std::size_t>(i) * modes + (j + K)] = std::polar(1.0, state.xi(j) * f.x[i]);

    parallel_for(0, static_cast<std::size_t>(nv), [&](std::size_t m) {
        const auto psi = hermite_eval_all(top, f.v[m]);
        std::vector<complex> col(modes, 0.0);
        for (int n = 0; n <= top; ++n)
            for (int q = 0; q < modes; ++q)
                col[q] += d[static_cast<std::size_t>(n) * modes + q] * psi[n];
        for (int i = 0; i < nx; ++i) {
            const complex* ph = &phase[static_cast<std::size_t>(i) * modes];
            complex acc = 0.0;
            for (int q = 0; q < modes; ++q)
                acc += col[q] * ph[q];
            f.values[static_cast<std::size_t>(i) * nv + m] = acc.real() * inv_sqrt_L;
        }
    });
    return f;
}

double supnorm_probe(const SpectralState& state, int k, int l, int p, const FieldGrid& grid)
{
    const Field f = reconstruct_field(state, k, l, p, grid);
    double m = 0.0;
    for (double v : f.values)
        m = std::max(m, std::abs(v));
    return m;
}

SupnormConstant supnorm_constant(const SpectralState& state, int max_order, double s, const FieldGrid& grid)
{
    if (max_order < 1)
        throw std::invalid_argument("supnorm_constant: max_order must be >= 1");
    const double sigma = factorial_power(s);
    SupnormConstant out;
    const double s0 = supnorm_probe(state, 0, 0, 0, grid);
    if (!(s0 > 0.0))
        throw std::invalid_argument("supnorm_constant: zero field");
    out.samples.push_back({0, 0, 0, s0});
    double logC = -std::numeric_limits<double>::infinity();
    for (int order = 1; order <= max_order; ++order)
        for (int k = 0; k <= order; ++k)
            for (int l = 0; k + l <= order; ++l) {
                const int p = order - k - l;
                const double v = supnorm_probe(state, k, l, p, grid);
                out.samples.push_back({k, l, p, v});
                if (v == 0.0)
                    continue;
                const double lf = std::lgamma(k + 1.0) + std::lgamma(l + 1.0) + std::lgamma(p + 1.0);
                logC = std::max(logC, (std::log(v / s0) - sigma * lf) / order);
            }
    out.C = std::exp(logC);
    return out;
}

SpectralState random_damped_state(int N, int K, double L, std::uint64_t seed, std::uint64_t stream)
{
    SpectralState st(N, K, L);
    for (int n = 0; n < N; ++n) {
        std::seed_seq seq{seed, stream, static_cast<std::uint64_t>(n)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int j = 0; j <= K; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            const double damp = 1.0 / ((1.0 + n) * (1.0 + j));
            if (j == 0) {
                st.at(n, 0) = damp * re;
            } else {
                st.at(n, j) = damp * complex(re, im);
                st.at(n, -j) = std::conj(st.at(n, j));
            }
        }
    }
    return st;
}

double trilinear_ratio_of(const SpectralState& f, const SpectralState& g, const SpectralState& h,
                          const CoeffTable& table)
{
    const double s = table.s();
    const double den = norm(f, NormKind::h10(), s) * norm(g, NormKind::hs2_weighted_10(), s) *
                       norm(h, NormKind::hs2_weighted_10(), s);
    if (den == 0.0)
        throw std::invalid_argument("trilinear_ratio: zero state");
    return std::abs(inner_10(apply_gamma(f, g, table), h)) / den;
}

double trilinear_ratio(const CoeffTable& table, int N, int K, int samples, std::uint64_t seed)
{
    if (N > table.N())
        throw std::invalid_argument("trilinear_ratio: N exceeds the coefficient table");
    if (samples < 1)
        throw std::invalid_argument("trilinear_ratio: need at least one sample");
    const double L = 2.0 * std::numbers::pi;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const std::uint64_t base = 3 * static_cast<std::uint64_t>(i);
        const auto f = random_damped_state(N, K, L, seed, base);
        const auto g = random_damped_state(N, K, L, seed, base + 1);
        const auto h = random_damped_state(N, K, L, seed, base + 2);
        worst = std::max(worst, trilinear_ratio_of(f, g, h, table));
    }
    return worst;
}

void write_decay_fits_csv(std::ostream& os, const std::vector<DecayFit>& fits, const std::string& echo)
{
    write_header(os, "gevrey", echo);
    os << "t,slope,intercept,r_squared,exponent_used,slope_stderr,count\n";
    for (const auto& f : fits)
        os << format_double(f.t) << ',' << format_double(f.slope) << ',' << format_double(f.intercept) << ','
           << format_double(f.r_squared) << ',' << format_double(f.exponent_used) << ','
           << format_double(f.slope_stderr) << ',' << f.count << '\n';
}

void write_theorem_probe_csv(std::ostream& os, const TheoremProbe& probe, const std::string& echo)
{
    write_header(os, "theorem-probe", echo);
    os << "# t = " << format_double(probe.t) << "\n# C = " << format_double(probe.C) << '\n';
    os << "k,B_k,C_k,ratio\n";
    for (std::size_t k = 0; k < probe.B.size(); ++k)
        os << k << ',' << format_double(probe.B[k]) << ',' << format_double(probe.C_k[k]) << ','
           << format_double(probe.ratio[k]) << '\n';
}

void write_supnorm_csv(std::ostream& os, const SupnormConstant& sup, const std::string& echo)
{
    write_header(os, "supnorm", echo);
    os << "# C = " << format_double(sup.C) << '\n';
    os << "k,l,p,sup\n";
    for (const auto& q : sup.samples)
        os << q.k << ',' << q.l << ',' << q.p << ',' << format_double(q.value) << '\n';
}

void write_hypo_csv(std::ostream& os, const std::vector<double>& xi, const std::vector<double>& ratio,
                    const std::string& echo)
{
    write_header(os, "hypo", echo);
    os << "xi,R\n";
    for (std::size_t i = 0; i < xi.size(); ++i)
        os << format_double(xi[i]) << ',' << format_double(ratio[i]) << '\n';
}

} // namespace kac
