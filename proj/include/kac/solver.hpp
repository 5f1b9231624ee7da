#pragma once

#include "kac/coefficients.hpp"
#include "kac/spectral_state.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kac {

enum class SolverMode { imex, picard };

struct SolverConfig {
    double s = 0.5;
    int N = 32;
    int K = 16;
    double L = 6.283185307179586; // 2 pi, so xi_j = j
    double dt = 1e-3;
    double T = 1.0;
    SolverMode mode = SolverMode::imex;
    double picard_tol = 1e-12;
    int picard_max_iters = 50;
    InitialData initial = RandomSmooth{};
    std::optional<double> initial_epsilon = 1e-3; // target ||g_0||_{(1,0)}
    int snapshot_every = 50;
    bool nonlinear = true;         // false drops Gamma(g, g)
    double table_tol = 1e-10;
    std::string out_dir;           // empty: keep results in memory only

    // dt <= T, dt > 0, picard_tol > 0, T an integer multiple of dt.
    void validate() const;
    long steps() const;
};

struct NormSample {
    double t;
    double norm_10;
    double norm_hs2_10;
};

struct RunSummary {
    std::vector<NormSample> norm_history;
    // Every ratio ||u^{m+1} - u^m|| / ||u^m - u^{m-1}|| above the rounding floor (picard mode).
    std::vector<double> contraction_factors;
    std::vector<SpectralState> snapshots; // step 0, every snapshot_every steps, and the final step
    SpectralState final_state;
    std::string final_state_path;
    SolverConfig config;
    long picard_iterations = 0;
    long picard_unconverged_steps = 0;

    double max_contraction() const;
    double sup_norm_10() const;
};

// Implicit-in-(v d_x + K) solve for one Fourier mode: (I + dt (i xi V + diag lambda)) x = rhs.
// The LU factors are computed once per (xi, dt) and reused for every right-hand side.
class TridiagonalFactor {
public:
    TridiagonalFactor(double xi, double dt, const std::vector<double>& lambda, int N);
    void solve(std::vector<complex>& rhs_inout) const;

private:
    int N_;
    std::vector<complex> off_;   // i dt xi sqrt(n+1)
    std::vector<complex> lower_; // L multipliers
    std::vector<complex> pivot_; // U diagonal
};

// Factorizations for every Fourier mode of a state shape.
class ImplicitPropagator {
public:
    ImplicitPropagator(const SpectralState& shape, double dt, const CoeffTable& table);
    // Solves (I + dt P) x = rhs mode by mode.
    SpectralState solve(const SpectralState& rhs) const;

private:
    int N_, K_;
    std::vector<TridiagonalFactor> modes_;
};

// One first-order IMEX step: (I + dt P) c_new = c_old + dt Gamma(g, g)(c_old).
SpectralState step_imex(const SpectralState& state, double dt, const CoeffTable& table, bool nonlinear = true);

// Advances config.initial to config.T. `table` must cover config.N and config.s; when
// absent, one is built. Throws PicardDivergenceError when Picard ratios stay >= 1.
RunSummary run(const SolverConfig& config, const CoeffTable* table = nullptr);

// Largest Picard contraction ratio over a full run (config.mode is forced to picard).
double contraction_probe(const SolverConfig& config, const CoeffTable* table = nullptr);

} // namespace kac
