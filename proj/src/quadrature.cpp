#include "kac/quadrature.hpp"

#include "kac/errors.hpp"

#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace kac::quad {

namespace {

struct Node {
    double theta;
    double weight;     // d theta / d t
    double log_weight;
};

Node make_node(double t, double b)
{
    const double u = 0.5 * std::numbers::pi * std::sinh(t);
    const double e = std::exp(-2.0 * u);
    const double phi = 1.0 / (1.0 + e);
    const double jac = b * std::numbers::pi * std::cosh(t);
    const double log1pe = std::log1p(e);
    const double log_phi = -log1pe;
    const double log_one_minus_phi = -2.0 * u - log1pe;
    Node node;
    node.theta = b * phi;
    node.weight = jac * e / ((1.0 + e) * (1.0 + e));
    node.log_weight = std::log(jac) + log_phi + log_one_minus_phi;
    return node;
}

// Calls visit(node) for every node new at `level` (all nodes at level 0, odd multiples of h after).
template <class Visit>
void for_each_new_node(int level, double b, double t_max, Visit&& visit)
{
    const double h = std::ldexp(1.0, -level);
    const long k_max = static_cast<long>(std::floor(t_max / h));
    const long stride = level == 0 ? 1 : 2;
    const long k_start = level == 0 ? -k_max : -(k_max % 2 == 0 ? k_max - 1 : k_max);
    for (long k = k_start; k <= k_max; k += stride) {
        const Node node = make_node(static_cast<double>(k) * h, b);
        if (node.theta <= 0.0 || node.weight <= 0.0)
            continue;
        visit(node);
    }
}

[[noreturn]] void fail(const char* label, std::size_t index, int level, double delta)
{
    throw QuadratureError(std::string(label) + ": no convergence for component " + std::to_string(index) +
                          " after level " + std::to_string(level) + " (last change " + std::to_string(delta) +
                          ")");
}

} // namespace

std::vector<double> integrate(const VectorIntegrand& f, std::size_t count, double b, const Options& opt,
                              const char* label)
{
    std::vector<double> sum(count, 0.0), mag_sum(count, 0.0), prev(count, 0.0), values(count), mags(count);
    std::vector<double> result(count, 0.0);
    std::size_t worst = 0;
    double worst_delta = 0.0;

    for (int level = 0; level <= opt.max_level; ++level) {
        for_each_new_node(level, b, opt.t_max, [&](const Node& node) {
            f(node.theta, values, mags);
            for (std::size_t i = 0; i < count; ++i) {
                sum[i] += values[i] * node.weight;
                mag_sum[i] += mags[i] * node.weight;
            }
        });
        const double h = std::ldexp(1.0, -level);
        bool converged = level >= opt.min_level;
        worst_delta = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            result[i] = h * sum[i];
            const double delta = std::abs(result[i] - prev[i]);
            const double allowed = opt.rel_tol * std::abs(result[i]) + 64.0 * DBL_EPSILON * h * mag_sum[i];
            if (!(delta <= allowed)) {
                converged = false;
                if (!(delta <= worst_delta)) {
                    worst_delta = delta;
                    worst = i;
                }
            }
            prev[i] = result[i];
        }
        if (converged)
            return result;
    }
    fail(label, worst, opt.max_level, worst_delta);
}

std::vector<double> integrate_log(const LogIntegrand& f, std::size_t count, double b, const Options& opt,
                                  const char* label)
{
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> shift(count, neg_inf), sum(count, 0.0), prev(count, neg_inf), values(count);
    std::vector<double> result(count, neg_inf);
    std::size_t worst = 0;
    double worst_delta = 0.0;

    for (int level = 0; level <= opt.max_level; ++level) {
        for_each_new_node(level, b, opt.t_max, [&](const Node& node) {
            f(node.theta, values);
            for (std::size_t i = 0; i < count; ++i) {
                const double a = values[i] + node.log_weight;
                if (!(a > neg_inf))
                    continue;
                if (a > shift[i]) {
                    sum[i] = sum[i] * std::exp(shift[i] - a) + 1.0;
                    shift[i] = a;
                } else {
                    sum[i] += std::exp(a - shift[i]);
                }
            }
        });
        const double log_h = -level * std::numbers::ln2;
        bool converged = level >= opt.min_level;
        worst_delta = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            result[i] = log_h + shift[i] + std::log(sum[i]);
            const double delta = std::abs(std::expm1(result[i] - prev[i]));
            if (!(delta <= opt.rel_tol)) {
                converged = false;
                if (!(delta <= worst_delta)) {
                    worst_delta = delta;
                    worst = i;
                }
            }
            prev[i] = result[i];
        }
        if (converged)
            return result;
    }
    fail(label, worst, opt.max_level, worst_delta);
}

} // namespace kac::quad
