#include "kac/coefficients.hpp"

#include "kac/errors.hpp"
#include "kac/parallel.hpp"
#include "kac/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kac {

namespace {

constexpr double quarter_pi = std::numbers::pi / 4.0;

void check_s(double s)
{
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("singularity exponent s must lie in (0,1), got " + format_double(s));
}

quad::Options options_for(double tol)
{
    quad::Options opt;
    opt.rel_tol = tol;
    return opt;
}

double log_binomial(int n, int k)
{
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log(cos theta) without cancellation near theta = 0.
double log_cos(double theta)
{
    const double half = std::sin(0.5 * theta);
    return std::log1p(-2.0 * half * half);
}

double beta_unchecked(double theta, double s)
{
    return std::cos(0.5 * theta) / std::pow(std::sin(0.5 * theta), 1.0 + 2.0 * s);
}

// beta(theta) * x without forming beta, which overflows for theta near 1e-137 when s > 1/2.
double beta_times(double theta, double s, double x)
{
    const double h = std::sin(0.5 * theta);
    return std::cos(0.5 * theta) * (x / h / std::pow(h, 2.0 * s));
}

} // namespace

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string& text)
{
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && (*end == ' ' || *end == '\r' || *end == '\t'))
        ++end;
    if (end == begin || (end && *end != '\0' && *end != ','))
        throw std::invalid_argument("parse_double: cannot parse '" + text + "'");
    return v;
}

CrossSection::CrossSection(double s_) : s(s_) { check_s(s); }

double CrossSection::operator()(double theta) const { return beta_kernel(theta, s); }

double beta_kernel(double theta, double s)
{
    check_s(s);
    const double a = std::abs(theta);
    if (a == 0.0)
        throw std::domain_error("beta_kernel: theta = 0 is the non-integrable singularity");
    if (a > quarter_pi * (1.0 + 1e-15))
        throw std::domain_error("beta_kernel: |theta| exceeds pi/4");
    return beta_unchecked(a, s);
}

std::vector<double> log_capital_lambda_row(int n, int m_max, double s, double tol)
{
    check_s(s);
    if (n < 1)
        throw std::invalid_argument("capital_lambda: n must be >= 1 (n = 0 is not integrable)");
    if (m_max < 0)
        throw std::invalid_argument("capital_lambda: negative m");
    const auto count = static_cast<std::size_t>(m_max) + 1;
    const double sing = 1.0 + 2.0 * s;
    auto log_integrand = [n, sing](double theta, std::span<double> out) {
        const double base = std::log(std::cos(0.5 * theta)) - sing * std::log(std::sin(0.5 * theta)) +
                            2.0 * n * std::log(std::sin(theta));
        const double lc = log_cos(theta);
        for (std::size_t m = 0; m < out.size(); ++m)
            out[m] = base + static_cast<double>(m) * lc;
    };
    std::string label = "capital_lambda(n=" + std::to_string(n) + ")";
    auto row = quad::integrate_log(log_integrand, count, quarter_pi, options_for(tol), label.c_str());
    for (auto& v : row)
        v += std::numbers::ln2; // even integrand on [-pi/4, pi/4]
    return row;
}

double log_capital_lambda(int n, int m, double s, double tol)
{
    if (m < 0)
        throw std::invalid_argument("capital_lambda: negative m");
    check_s(s);
    if (n < 1)
        throw std::invalid_argument("capital_lambda: n must be >= 1 (n = 0 is not integrable)");
    const double sing = 1.0 + 2.0 * s;
    auto log_integrand = [n, m, sing](double theta, std::span<double> out) {
        out[0] = std::log(std::cos(0.5 * theta)) - sing * std::log(std::sin(0.5 * theta)) +
                 2.0 * n * std::log(std::sin(theta)) + m * log_cos(theta);
    };
    std::string label = "capital_lambda(n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")";
    return std::numbers::ln2 + quad::integrate_log(log_integrand, 1, quarter_pi, options_for(tol), label.c_str())[0];
}

double capital_lambda(int n, int m, double s, double tol) { return std::exp(log_capital_lambda(n, m, s, tol)); }

std::vector<double> alpha_zero_row(int m_max, double s, double tol)
{
    check_s(s);
    std::vector<double> row(static_cast<std::size_t>(m_max) + 1, 0.0);
    if (m_max < 1)
        return row;
    auto integrand = [s](double theta, std::span<double> values, std::span<double> mags) {
        const double lc = log_cos(theta);
        for (std::size_t i = 0; i < values.size(); ++i) {
            values[i] = beta_times(theta, s, std::expm1(static_cast<double>(i + 1) * lc));
            mags[i] = std::abs(values[i]);
        }
    };
    auto vals = quad::integrate(integrand, static_cast<std::size_t>(m_max), quarter_pi, options_for(tol),
                                "alpha(0,m)");
    for (int m = 1; m <= m_max; ++m)
        row[m] = 2.0 * vals[m - 1];
    return row;
}

std::vector<double> alpha_even_row(int n, int m_max, double s, double tol)
{
    const auto log_row = log_capital_lambda_row(n, m_max, s, tol);
    std::vector<double> row(log_row.size());
    for (int m = 0; m <= m_max; ++m)
        row[m] = std::exp(0.5 * log_binomial(2 * n + m, 2 * n) + log_row[m]);
    return row;
}

double alpha(int k, int l, double s, double tol)
{
    check_s(s);
    if (k < 0 || l < 0)
        throw std::invalid_argument("alpha: negative index");
    if (k % 2 == 1 || (k == 0 && l == 0))
        return 0.0;
    if (k == 0) {
        auto integrand = [s, l](double theta, std::span<double> values, std::span<double> mags) {
            values[0] = beta_times(theta, s, std::expm1(l * log_cos(theta)));
            mags[0] = std::abs(values[0]);
        };
        std::string label = "alpha(0," + std::to_string(l) + ")";
        return 2.0 * quad::integrate(integrand, 1, quarter_pi, options_for(tol), label.c_str())[0];
    }
    const int n = k / 2;
    return std::exp(0.5 * log_binomial(k + l, k) + log_capital_lambda(n, l, s, tol));
}

namespace {

// lambda_k integrand: beta (1 - cos^k) for odd k, beta (1 - cos^k - sin^k) for even k.
void eigen_integrand(double theta, double s, int k, double& value, double& mag)
{
    const double one_minus_cos = -std::expm1(k * log_cos(theta));
    if (k % 2 == 1) {
        value = beta_times(theta, s, one_minus_cos);
        mag = std::abs(value);
    } else {
        const double b_sin_k = std::exp(k * std::log(std::sin(theta)) + std::log(std::cos(0.5 * theta)) -
                                        (1.0 + 2.0 * s) * std::log(std::sin(0.5 * theta)));
        const double b_one_minus_cos = beta_times(theta, s, one_minus_cos);
        value = b_one_minus_cos - b_sin_k;
        mag = std::abs(b_one_minus_cos) + b_sin_k;
    }
}

} // namespace

double eigenvalue(int k, double s, double tol)
{
    check_s(s);
    if (k < 0)
        throw std::invalid_argument("eigenvalue: negative index");
    if (k == 0)
        return 0.0;
    auto integrand = [s, k](double theta, std::span<double> values, std::span<double> mags) {
        eigen_integrand(theta, s, k, values[0], mags[0]);
    };
    std::string label = "eigenvalue(k=" + std::to_string(k) + ")";
    return 2.0 * quad::integrate(integrand, 1, quarter_pi, options_for(tol), label.c_str())[0];
}

std::vector<double> eigenvalues(int k_max, double s, double tol)
{
    check_s(s);
    std::vector<double> out(static_cast<std::size_t>(k_max) + 1, 0.0);
    if (k_max < 1)
        return out;
    auto integrand = [s](double theta, std::span<double> values, std::span<double> mags) {
        for (std::size_t i = 0; i < values.size(); ++i)
            eigen_integrand(theta, s, static_cast<int>(i) + 1, values[i], mags[i]);
    };
    auto vals = quad::integrate(integrand, static_cast<std::size_t>(k_max), quarter_pi, options_for(tol),
                                "eigenvalues");
    for (int k = 1; k <= k_max; ++k)
        out[k] = 2.0 * vals[k - 1];
    return out;
}

double eigenvalue_asymptote(int k, double s)
{
    check_s(s);
    if (k < 1)
        throw std::invalid_argument("eigenvalue_asymptote: k must be >= 1");
    return std::pow(2.0, 1.0 + s) / s * std::tgamma(1.0 - s) * std::pow(static_cast<double>(k), s);
}

double mu_tilde_envelope(int n, int m, double s)
{
    if (n < 1 || m < 0)
        throw std::invalid_argument("mu_tilde_envelope: requires n >= 1, m >= 0");
    const double dn = n, dm = m;
    return std::pow(1.0 + dm / dn, s) * std::pow(1.0 + dn / (dm + 1.0), 0.25) / std::pow(dn, 0.75);
}

double log_beta_function(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

double log_lambda_beta_bound(int n, int m, double s)
{
    return (1.5 + 2.0 * s) * std::numbers::ln2 + log_beta_function(n - s, m + 1.0);
}

// ---------------------------------------------------------------------------

std::size_t CoeffTable::alpha_index(int k, int l)
{
    const auto d = static_cast<std::size_t>(k + l);
    return d * (d + 1) / 2 + static_cast<std::size_t>(k);
}

std::size_t CoeffTable::lambda_index(int n, int m, int N)
{
    // rows n = 1..(N-1)/2, row n holds m = 0..N-1-2n
    std::size_t offset = 0;
    for (int r = 1; r < n; ++r)
        offset += static_cast<std::size_t>(N - 2 * r);
    return offset + static_cast<std::size_t>(m);
}

double CoeffTable::alpha(int k, int l) const
{
    if (k < 0 || l < 0 || k + l >= N_)
        throw std::out_of_range("CoeffTable::alpha: (" + std::to_string(k) + "," + std::to_string(l) +
                                ") outside k+l < " + std::to_string(N_));
    return alpha_[alpha_index(k, l)];
}

double CoeffTable::lambda(int k) const
{
    if (k < 0 || k >= N_)
        throw std::out_of_range("CoeffTable::lambda: index " + std::to_string(k));
    return lambda_[static_cast<std::size_t>(k)];
}

double CoeffTable::log_capital_lambda(int n, int m) const
{
    if (n < 1 || m < 0 || 2 * n + m >= N_)
        throw std::out_of_range("CoeffTable::log_capital_lambda: (" + std::to_string(n) + "," +
                                std::to_string(m) + ")");
    return log_lambda_[lambda_index(n, m, N_)];
}

CoeffTable build_tables(int N, double s, double tol)
{
    check_s(s);
    if (N < 4)
        throw std::invalid_argument("build_tables: N must be >= 4");
    if (!(tol >= 1e-12))
        throw std::invalid_argument("build_tables: tol must be >= 1e-12");

    CoeffTable t;
    t.N_ = N;
    t.s_ = s;
    t.tol_ = tol;
    t.lambda_ = eigenvalues(N - 1, s, tol);
    t.alpha_.assign(static_cast<std::size_t>(N) * (N + 1) / 2, 0.0);
    const int n_rows = (N - 1) / 2;
    t.log_lambda_.assign(CoeffTable::lambda_index(n_rows + 1, 0, N), 0.0);

    const auto zero_row = alpha_zero_row(N - 1, s, tol);
    for (int m = 1; m < N; ++m)
        t.alpha_[CoeffTable::alpha_index(0, m)] = zero_row[m];

    parallel_for(1, static_cast<std::size_t>(n_rows) + 1, [&](std::size_t row) {
        const int n = static_cast<int>(row);
        const int m_max = N - 1 - 2 * n;
        const auto log_row = log_capital_lambda_row(n, m_max, s, tol);
        for (int m = 0; m <= m_max; ++m) {
            t.log_lambda_[CoeffTable::lambda_index(n, m, N)] = log_row[m];
            t.alpha_[CoeffTable::alpha_index(2 * n, m)] =
                std::exp(0.5 * log_binomial(2 * n + m, 2 * n) + log_row[m]);
        }
    });

    // Invariants: lambda_2 = 0, lambda_k >= 0, lambda_m = -alpha_{0,m} - alpha_{m,0}.
    if (std::abs(t.lambda_[2]) > tol * std::max(1.0, t.lambda_[1]))
        throw QuadratureError("build_tables: lambda_2 = " + format_double(t.lambda_[2]) + " is not zero");
    for (int m = 1; m < N; ++m) {
        const double lam = t.lambda_[m];
        if (lam < -tol)
            throw QuadratureError("build_tables: negative eigenvalue at k = " + std::to_string(m));
        const double a0 = t.alpha_[CoeffTable::alpha_index(0, m)];
        const double am = t.alpha_[CoeffTable::alpha_index(m, 0)];
        const double scale = std::max({1.0, std::abs(a0), std::abs(am)});
        if (std::abs(lam + a0 + am) > 10.0 * tol * scale)
            throw QuadratureError("build_tables: lambda_m + alpha_{0,m} + alpha_{m,0} = " +
                                  format_double(lam + a0 + am) + " at m = " + std::to_string(m));
    }
    return t;
}

void CoeffTable::write_csv(std::ostream& os, const std::string& echo) const
{
    os << "# kac-coeffs v1, s=" << format_double(s_) << ", N=" << N_ << "\n";
    os << "# tol=" << format_double(tol_) << "\n";
    os << echo;
    os << "kind,k,l,value\n";
    for (int d = 0; d < N_; ++d)
        for (int k = 0; k <= d; ++k)
            os << "alpha," << k << ',' << d - k << ',' << format_double(alpha(k, d - k)) << '\n';
    for (int k = 0; k < N_; ++k)
        os << "lambda," << k << ",0," << format_double(lambda(k)) << '\n';
    for (int n = 1; 2 * n < N_; ++n)
        for (int m = 0; 2 * n + m < N_; ++m)
            os << "logLambda," << n << ',' << m << ',' << format_double(log_capital_lambda(n, m)) << '\n';
}

CoeffTable CoeffTable::read_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("# kac-coeffs v1", 0) != 0)
        throw std::runtime_error("CoeffTable::read_csv: missing '# kac-coeffs v1' header");
    CoeffTable t;
    {
        const auto s_pos = line.find("s=");
        const auto n_pos = line.find("N=");
        if (s_pos == std::string::npos || n_pos == std::string::npos)
            throw std::runtime_error("CoeffTable::read_csv: header lacks s= or N=");
        t.s_ = parse_double(line.substr(s_pos + 2));
        t.N_ = std::stoi(line.substr(n_pos + 2));
    }
    if (t.N_ < 1)
        throw std::runtime_error("CoeffTable::read_csv: invalid N");
    const int N = t.N_;
    t.alpha_.assign(static_cast<std::size_t>(N) * (N + 1) / 2, 0.0);
    t.lambda_.assign(static_cast<std::size_t>(N), 0.0);
    t.log_lambda_.assign(lambda_index((N - 1) / 2 + 1, 0, N), 0.0);

    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            if (line.rfind("# tol=", 0) == 0)
                t.tol_ = parse_double(line.substr(6));
            continue;
        }
        if (line.rfind("kind,", 0) == 0)
            continue;
        std::istringstream row(line);
        std::string kind, ks, ls, vs;
        if (!std::getline(row, kind, ',') || !std::getline(row, ks, ',') || !std::getline(row, ls, ',') ||
            !std::getline(row, vs))
            throw std::runtime_error("CoeffTable::read_csv: malformed row '" + line + "'");
        const int k = std::stoi(ks), l = std::stoi(ls);
        const double v = parse_double(vs);
        if (kind == "alpha" && k >= 0 && l >= 0 && k + l < N)
            t.alpha_[alpha_index(k, l)] = v;
        else if (kind == "lambda" && k >= 0 && k < N)
            t.lambda_[static_cast<std::size_t>(k)] = v;
        else if (kind == "logLambda" && k >= 1 && l >= 0 && 2 * k + l < N)
            t.log_lambda_[lambda_index(k, l, N)] = v;
        else
            throw std::runtime_error("CoeffTable::read_csv: unexpected row '" + line + "'");
    }
    return t;
}

} // namespace kac
