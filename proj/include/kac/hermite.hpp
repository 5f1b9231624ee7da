#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace kac {

using complex = std::complex<double>;

// Coefficients of a velocity function in the orthonormal Hermite basis psi_n,
// psi_n(v) = 2^{-1/4} phi_n(v / sqrt 2), eigenfunctions of -d^2/dv^2 + v^2/4.
//
// `capacity` is the largest degree any ladder composition may reach; exceeding it
// raises TruncationError instead of silently dropping the top coefficient.
struct HermiteCoeffs {
    std::vector<complex> coeffs;
    std::size_t capacity = 512;

    HermiteCoeffs() = default;
    HermiteCoeffs(std::vector<complex> c, std::size_t cap);

    static HermiteCoeffs unit(std::size_t n, std::size_t cap = 512);

    // Highest representable degree of the current vector (size - 1).
    std::size_t degree_max() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    double l2_norm() const;
};

enum class Ladder { raise, lower, mult_v, deriv_v };

// psi_n(v) by the upward three-term recurrence v psi_n = sqrt(n+1) psi_{n+1} + sqrt(n) psi_{n-1}.
double hermite_eval(int n, double v);

// psi_0..psi_{n_max} at v in one recurrence sweep.
std::vector<double> hermite_eval_all(int n_max, double v);

// A+ f, A- f, v f or d/dv f = (A- - A+) f / 2, with A+- = v/2 -+ d/dv.
// raise, mult_v and deriv_v grow the vector by one degree.
HermiteCoeffs apply_ladder(const HermiteCoeffs& f, Ladder op);

// Exact || v^k d_v^l psi_n ||_{L^2} from the coefficient vector of the composition.
// Throws TruncationError when k + l + n exceeds `capacity`.
double monomial_derivative_norm(int k, int l, int n, std::size_t capacity = 512);

// 2^k sqrt((k+l+n)! / n!), evaluated through lgamma.
double ge3_bound(int k, int l, int n);

// sqrt(2) ((1 - delta_{n0}) exp(eps r n^{1/(2r)}) + delta_{n0})
//   * (2^{3/2+r} e^r / min(eps^r, 1))^{k+l} (k!)^r (l!)^r, in log form.
double log_ge5_bound(int k, int l, int n, double r, double eps);

} // namespace kac
