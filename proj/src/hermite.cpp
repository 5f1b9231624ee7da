#include "kac/hermite.hpp"

#include "kac/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kac {

HermiteCoeffs::HermiteCoeffs(std::vector<complex> c, std::size_t cap) : coeffs(std::move(c)), capacity(cap)
{
    if (!coeffs.empty() && coeffs.size() - 1 > capacity)
        throw TruncationError("HermiteCoeffs: degree " + std::to_string(coeffs.size() - 1) +
                              " exceeds capacity " + std::to_string(capacity));
}

HermiteCoeffs HermiteCoeffs::unit(std::size_t n, std::size_t cap)
{
    std::vector<complex> c(n + 1, 0.0);
    c[n] = 1.0;
    return HermiteCoeffs(std::move(c), cap);
}

double HermiteCoeffs::l2_norm() const
{
    double sum = 0.0;
    for (const auto& x : coeffs)
        sum += std::norm(x);
    return std::sqrt(sum);
}

double hermite_eval(int n, double v)
{
    if (n < 0)
        throw std::invalid_argument("hermite_eval: negative degree " + std::to_string(n));
    return hermite_eval_all(n, v)[static_cast<std::size_t>(n)];
}

std::vector<double> hermite_eval_all(int n_max, double v)
{
    if (n_max < 0)
        throw std::invalid_argument("hermite_eval_all: negative degree " + std::to_string(n_max));
    std::vector<double> psi(static_cast<std::size_t>(n_max) + 1);
    psi[0] = std::pow(2.0 * std::numbers::pi, -0.25) * std::exp(-0.25 * v * v);
    if (n_max >= 1)
        psi[1] = v * psi[0];
    for (int n = 1; n < n_max; ++n)
        psi[n + 1] = (v * psi[n] - std::sqrt(static_cast<double>(n)) * psi[n - 1]) / std::sqrt(n + 1.0);
    return psi;
}

namespace {

std::vector<complex> raised(const std::vector<complex>& c)
{
    std::vector<complex> out(c.size() + 1, 0.0);
    for (std::size_t n = 0; n < c.size(); ++n)
        out[n + 1] = std::sqrt(n + 1.0) * c[n];
    return out;
}

std::vector<complex> lowered(const std::vector<complex>& c)
{
    std::vector<complex> out(c.size(), 0.0);
    for (std::size_t n = 1; n < c.size(); ++n)
        out[n - 1] = std::sqrt(static_cast<double>(n)) * c[n];
    return out;
}

} // namespace

HermiteCoeffs apply_ladder(const HermiteCoeffs& f, Ladder op)
{
    const bool grows = op != Ladder::lower;
    if (grows && f.coeffs.size() > f.capacity)
        throw TruncationError("apply_ladder: degree " + std::to_string(f.coeffs.size()) +
                              " would exceed capacity " + std::to_string(f.capacity));

    switch (op) {
    case Ladder::raise:
        return HermiteCoeffs(raised(f.coeffs), f.capacity);
    case Ladder::lower:
        return HermiteCoeffs(lowered(f.coeffs), f.capacity);
    case Ladder::mult_v:
    case Ladder::deriv_v: {
        auto up = raised(f.coeffs);
        auto down = lowered(f.coeffs);
        const double sign = op == Ladder::mult_v ? 1.0 : -1.0;
        const double scale = op == Ladder::mult_v ? 1.0 : 0.5;
        for (std::size_t n = 0; n < down.size(); ++n)
            up[n] = scale * (down[n] + sign * up[n]);
        up.back() *= scale * sign;
        return HermiteCoeffs(std::move(up), f.capacity);
    }
    }
    throw std::invalid_argument("apply_ladder: invalid operation");
}

double monomial_derivative_norm(int k, int l, int n, std::size_t capacity)
{
    if (k < 0 || l < 0 || n < 0)
        throw std::invalid_argument("monomial_derivative_norm: negative index");
    if (static_cast<std::size_t>(k + l + n) > capacity)
        throw TruncationError("monomial_derivative_norm: k+l+n = " + std::to_string(k + l + n) +
                              " exceeds capacity " + std::to_string(capacity));
    auto f = HermiteCoeffs::unit(static_cast<std::size_t>(n), capacity);
    for (int i = 0; i < l; ++i)
        f = apply_ladder(f, Ladder::deriv_v);
    for (int i = 0; i < k; ++i)
        f = apply_ladder(f, Ladder::mult_v);
    return f.l2_norm();
}

double ge3_bound(int k, int l, int n)
{
    if (k < 0 || l < 0 || n < 0)
        throw std::invalid_argument("ge3_bound: negative index");
    const double log_value =
        k * std::numbers::ln2 + 0.5 * (std::lgamma(k + l + n + 1.0) - std::lgamma(n + 1.0));
    return std::exp(log_value);
}

double log_ge5_bound(int k, int l, int n, double r, double eps)
{
    if (r < 0.5 || eps <= 0.0)
        throw std::invalid_argument("log_ge5_bound: requires r >= 1/2 and eps > 0");
    const double prefactor = n == 0 ? 0.0 : eps * r * std::pow(static_cast<double>(n), 0.5 / r);
    const double base = (1.5 + r) * std::numbers::ln2 + r - std::log(std::min(std::pow(eps, r), 1.0));
    return 0.5 * std::numbers::ln2 + prefactor + (k + l) * base +
           r * (std::lgamma(k + 1.0) + std::lgamma(l + 1.0));
}

} // namespace kac
