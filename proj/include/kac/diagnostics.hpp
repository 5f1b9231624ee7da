#pragma once

#include "kac/coefficients.hpp"
#include "kac/spectral_state.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kac {

// (<K f, f> + ||f||^2) / ||H^{s/2} f||^2 for a velocity-only coefficient vector.
double coercivity_ratio(const std::vector<complex>& f, const CoeffTable& table);

struct CoercivityResult {
    double c_low = 0.0;
    double c_high = 0.0;
    std::vector<double> ratios; // one per sample, in sample order
    std::uint64_t seed = 0;
};

// Random velocity-only states with coefficients N(0,1) (1+n)^{-1}, n < N.
CoercivityResult coercivity_constants(const CoeffTable& table, int N, int samples, std::uint64_t seed);

// Smallest eigenvalue of B^{-1/2} (P^* P + I) B^{-1/2}, P = i xi V + diag(lambda),
// B = diag((n+1/2)^{2s} + <xi>^{4s/(2s+1)}), for each xi. lambda must hold at least N values.
std::vector<double> hypoelliptic_ratio(const std::vector<double>& xi_list, int N, const std::vector<double>& lambda,
                                       double s);
std::vector<double> hypoelliptic_ratio(const std::vector<double>& xi_list, int N, const CoeffTable& table, double s);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double slope_stderr = 0.0;
    std::size_t count = 0;
};

// Ordinary least squares y = slope x + intercept; needs three points and two distinct x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct DecayFit {
    double t = 0.0;
    double slope = 0.0; // fitted decay rate delta(t)
    double intercept = 0.0;
    double r_squared = 0.0;
    double exponent_used = 0.0; // 2s/(2s+1)
    double slope_stderr = 0.0;
    std::size_t count = 0;
};

// -log|c[n][j]| against (sqrt(n+1/2) + <xi_j>)^{2s/(2s+1)} over coefficients with j >= 0 and
// |c| > floor. Throws std::domain_error when fewer than three coefficients survive.
DecayFit gevrey_fit(const SpectralState& snapshot, double s, double floor = 1e-14);
std::vector<DecayFit> gevrey_fit(const std::vector<SpectralState>& snapshots, double s, double floor = 1e-14);

struct TheoremProbe {
    double t = 0.0;
    double C = 0.0;
    std::vector<double> B;      // B_k = ||(sqrt(H) + <D_x>)^k g||_{(1,0)} / g0_norm
    std::vector<double> C_k;    // smallest C for the single k
    std::vector<double> ratio;  // B_k / (C^{k+1} (k!)^{(2s+1)/2s} / t^{(2s+1)k/2s}), all <= 1
};

// Smallest C with B_k <= C^{k+1} (k!)^{(2s+1)/2s} t^{-(2s+1)k/2s} for k = 0..k_max.
// B_k is normalized by g0_norm (pass 1 for raw values). Needs state.time() > 0 and k_max <= 12.
TheoremProbe theorem_bound_probe(const SpectralState& state, int k_max, double s, double g0_norm);

struct FieldGrid {
    int nx = 0;           // 0 picks 4K + 4 points
    int nv = 0;           // odd; 0 picks 401
    double v_max = 0.0;   // 0 picks 2 sqrt(top degree + 1) + 8
};

// v^k d_v^l d_x^p g on an nx x nv grid, x_i = i L / nx, v_m symmetric around 0.
// Row-major [x][v]; the real part of the (real-valued) field.
struct Field {
    std::vector<double> x, v;
    std::vector<double> values;
};
Field reconstruct_field(const SpectralState& state, int k, int l, int p, const FieldGrid& grid = {});

// max over the grid of |v^k d_v^l d_x^p g|.
double supnorm_probe(const SpectralState& state, int k, int l, int p, const FieldGrid& grid = {});

struct SupnormSample {
    int k, l, p;
    double value;
};

struct SupnormConstant {
    double C = 0.0;
    std::vector<SupnormSample> samples;
};

// Smallest C with S_{klp} <= S_000 C^{k+l+p} (k! l! p!)^{(2s+1)/2s} over k + l + p <= max_order.
SupnormConstant supnorm_constant(const SpectralState& state, int max_order, double s, const FieldGrid& grid = {});

// Random state with coefficients complex N(0,1) (1+n)^{-1} (1+|j|)^{-1}, conjugate mirrored.
// Every (seed, stream, n) owns its generator, so states at smaller N or K are truncations.
SpectralState random_damped_state(int N, int K, double L, std::uint64_t seed, std::uint64_t stream);

// max over samples of |<Gamma(f,g), h>_{(1,0)}| / (||f||_{(1,0)} ||H^{s/2} g||_{(1,0)} ||H^{s/2} h||_{(1,0)}).
double trilinear_ratio(const CoeffTable& table, int N, int K, int samples, std::uint64_t seed);
double trilinear_ratio_of(const SpectralState& f, const SpectralState& g, const SpectralState& h,
                          const CoeffTable& table);

// CSV writers; `echo` is a block of `# key = value` lines placed after the version header.
void write_decay_fits_csv(std::ostream& os, const std::vector<DecayFit>& fits, const std::string& echo);
void write_theorem_probe_csv(std::ostream& os, const TheoremProbe& probe, const std::string& echo);
void write_supnorm_csv(std::ostream& os, const SupnormConstant& sup, const std::string& echo);
void write_hypo_csv(std::ostream& os, const std::vector<double>& xi, const std::vector<double>& ratio,
                    const std::string& echo);

} // namespace kac
