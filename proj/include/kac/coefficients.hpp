#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace kac {

// Non-cutoff cross section beta(theta) = |cos(theta/2)| / |sin(theta/2)|^{1+2s} on |theta| <= pi/4.
struct CrossSection {
    double s;
    static constexpr double theta_max = 0.78539816339744830962; // pi/4

    explicit CrossSection(double s_);
    double operator()(double theta) const;
};

double beta_kernel(double theta, double s);

constexpr double default_tol = 1e-10;

// Lambda_{n,m} = int_{-pi/4}^{pi/4} beta sin^{2n} cos^m, n >= 1.
double capital_lambda(int n, int m, double s, double tol = default_tol);
double log_capital_lambda(int n, int m, double s, double tol = default_tol);

// log Lambda_{n,m} for m = 0..m_max at fixed n, sharing one node set.
std::vector<double> log_capital_lambda_row(int n, int m_max, double s, double tol = default_tol);

// Collision coefficient alpha_{k,l} of Gamma(psi_k, psi_l) = alpha_{k,l} psi_{k+l}.
double alpha(int k, int l, double s, double tol = default_tol);

// alpha_{2n,m} for m = 0..m_max (n >= 1), and alpha_{0,m} for m = 0..m_max.
std::vector<double> alpha_even_row(int n, int m_max, double s, double tol = default_tol);
std::vector<double> alpha_zero_row(int m_max, double s, double tol = default_tol);

// Eigenvalue lambda_k of the linearized operator; lambda_0 = 0 by convention.
double eigenvalue(int k, double s, double tol = default_tol);
std::vector<double> eigenvalues(int k_max, double s, double tol = default_tol);

// (2^{1+s}/s) Gamma(1-s) k^s
double eigenvalue_asymptote(int k, double s);

// (1 + m/n)^s (1 + n/(m+1))^{1/4} / n^{3/4}
double mu_tilde_envelope(int n, int m, double s);

// log B(a, b) through lgamma.
double log_beta_function(double a, double b);

// Explicit-constant form of the Beta bound on Lambda_{n,2m}:
// Lambda_{n,2m} <= 2^{3/2+2s} B(n-s, m+1). Returns the log of the right side.
double log_lambda_beta_bound(int n, int m, double s);

// Immutable table of alpha_{k,l} (k+l < N), lambda_k (k < N) and
// log Lambda_{n,m} (n >= 1, 2n+m < N).
class CoeffTable {
public:
    CoeffTable() = default;

    int N() const { return N_; }
    double s() const { return s_; }
    double build_tolerance() const { return tol_; }

    double alpha(int k, int l) const;
    double lambda(int k) const;
    double log_capital_lambda(int n, int m) const;
    const std::vector<double>& lambdas() const { return lambda_; }

    // `# kac-coeffs v1, s=<s>, N=<N>`, the `echo` comment block, then kind,k,l,value rows.
    void write_csv(std::ostream& os, const std::string& echo = {}) const;
    static CoeffTable read_csv(std::istream& is);

    bool operator==(const CoeffTable&) const = default;

private:
    friend CoeffTable build_tables(int N, double s, double tol);
    static std::size_t alpha_index(int k, int l);
    static std::size_t lambda_index(int n, int m, int N);

    int N_ = 0;
    double s_ = 0.0;
    double tol_ = default_tol;
    std::vector<double> alpha_;      // triangular, k + l < N
    std::vector<double> lambda_;     // k < N
    std::vector<double> log_lambda_; // n >= 1, 2n + m < N
};

// Builds every entry and checks the table invariants (zero pattern, lambda_0 =
// lambda_2 = 0, lambda_m + alpha_{0,m} + alpha_{m,0} = 0). Throws QuadratureError
// on non-convergence or invariant failure.
CoeffTable build_tables(int N, double s, double tol = default_tol);

// 17 significant digits: decimal round trip is bit-exact.
std::string format_double(double x);
// strtod that accepts subnormals; throws std::invalid_argument on trailing garbage.
double parse_double(const std::string& text);

} // namespace kac
