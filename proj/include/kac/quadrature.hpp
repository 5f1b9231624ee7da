#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kac::quad {

// Double-exponential (tanh-sinh) rule on (0, b], refined by halving the step.
//
// The map theta(t) = b / (1 + exp(-pi sinh t)) clusters nodes at theta = 0, where
// the angular integrands carry algebraic singularities theta^{p}, p > -1. Nodes
// are generated in a fixed order, so every integral is bit-reproducible.
struct Options {
    double rel_tol = 1e-10;
    int min_level = 4;
    int max_level = 12;
    double t_max = 5.3; // keeps theta >= ~1e-137, above the range where theta^{2+2s} underflows
};

// Integrand for `count` simultaneous integrals: fill values[i] and magnitude[i]
// (the size of the terms that cancel inside values[i]; equal to |values[i]| when
// nothing cancels). The magnitude sets the rounding floor of the convergence test.
using VectorIntegrand =
    std::function<void(double theta, std::span<double> values, std::span<double> magnitude)>;

// Integrand in log form: fill log_values[i] = log f_i(theta) for positive f_i.
using LogIntegrand = std::function<void(double theta, std::span<double> log_values)>;

// Returns int_0^b f_i(theta) d theta for each i. Throws QuadratureError naming the
// first unconverged component (`label` prefixes the message).
std::vector<double> integrate(const VectorIntegrand& f, std::size_t count, double b, const Options& opt,
                              const char* label);

// Returns log int_0^b exp(log f_i(theta)) d theta, accumulated by a running
// log-sum-exp so that no term is exponentiated outside [0, 1] relative to the
// current maximum.
std::vector<double> integrate_log(const LogIntegrand& f, std::size_t count, double b, const Options& opt,
                                  const char* label);

} // namespace kac::quad
