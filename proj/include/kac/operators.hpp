#pragma once

#include "kac/coefficients.hpp"
#include "kac/spectral_state.hpp"

#include <vector>

namespace kac {

// c[n][j] -> lambda_n c[n][j]
SpectralState apply_linearized(const SpectralState& state, const CoeffTable& table);

// v d_x: out[n][j] = i xi_j (sqrt(n+1) c[n+1][j] + sqrt(n) c[n-1][j]), c[N][j] taken as 0.
SpectralState apply_transport(const SpectralState& state);

struct GammaOptions {
    // Skip pairs with |alpha_{k,l}| below this threshold (0 keeps every pair).
    double alpha_threshold = 0.0;
};

// Gamma(f, g)_n(x) = sum_{k+l=n, k even} alpha_{k,l} f_k(x) g_l(x).
// x-products are pseudospectral on a grid of M >= 3K + 2 points (2/3-rule dealiasing).
SpectralState apply_gamma(const SpectralState& f, const SpectralState& g, const CoeffTable& table,
                          const GammaOptions& options = {});

// Physical grid size used by apply_gamma for truncation K.
int dealiased_grid_size(int K);

// Per-Fourier-mode matrix of P = v d_x + K: i xi V + diag(lambda), V[n][n+1] = V[n+1][n] = sqrt(n+1).
struct TransportBlock {
    double xi = 0.0;
    int N = 0;
    std::vector<double> diag;    // lambda_n, n < N
    std::vector<double> offdiag; // sqrt(n+1), n < N-1

    // Dense row-major N x N complex matrix, for tests and the eigen-solver.
    std::vector<complex> dense() const;
};

TransportBlock transport_block(double xi, int N, const CoeffTable& table);

// Fourier transform of mu^{1/2} psi_n: (-i)^n xi^n exp(-xi^2/2) / sqrt(n!).
complex weighted_hermite_transform(int n, double xi);

// Fourier transform of mu^{1/2} Gamma(psi_k, psi_l) from the Bobylev representation
//   int_{|theta|<=pi/4} beta(theta) [ g_even^(xi sin theta) f^(xi cos theta) - g^(0) f^(xi) ] d theta,
// g = mu^{1/2} psi_k, f = mu^{1/2} psi_l, by angular quadrature independent of the alpha tables.
std::vector<complex> gamma_bobylev_oracle(int k, int l, double s, const std::vector<double>& xi_grid,
                                          double tol = 1e-11);

} // namespace kac
