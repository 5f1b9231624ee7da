#pragma once

#include "kac/hermite.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace kac {

// Hermite x Fourier coefficients of g(t, x, v) on the torus of length L:
//
//   g(x, v) = sum_{n < N} sum_{|j| <= K} c[n][j] psi_n(v) exp(i xi_j x) / sqrt(L),  xi_j = 2 pi j / L.
//
// The 1/sqrt(L) makes the basis orthonormal, so ||g||_{L^2}^2 = sum |c|^2 exactly.
class SpectralState {
public:
    SpectralState() = default;
    SpectralState(int N, int K, double L, double time = 0.0);

    int N() const { return N_; }
    int K() const { return K_; }
    int modes() const { return 2 * K_ + 1; }
    double L() const { return L_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    double xi(int j) const;
    // <xi_j> = sqrt(1 + xi_j^2)
    double bracket_xi(int j) const;

    complex& at(int n, int j) { return data_[index(n, j)]; }
    const complex& at(int n, int j) const { return data_[index(n, j)]; }

    std::vector<complex>& data() { return data_; }
    const std::vector<complex>& data() const { return data_; }

    bool same_shape(const SpectralState& other) const;
    // c[n][-j] == conj(c[n][j]) within `tol` (absolute).
    bool is_real(double tol = 1e-14) const;

    SpectralState& operator+=(const SpectralState& o);
    SpectralState& operator-=(const SpectralState& o);
    SpectralState& operator*=(double a);
    SpectralState& operator*=(complex a);
    friend SpectralState operator+(SpectralState a, const SpectralState& b) { return a += b; }
    friend SpectralState operator-(SpectralState a, const SpectralState& b) { return a -= b; }
    friend SpectralState operator*(double a, SpectralState b) { return b *= a; }

    // Same shape, zero coefficients, same time.
    SpectralState zeros_like() const;
    // Truncated or zero-padded copy at new (N, K), same L and time.
    SpectralState resized(int N, int K) const;

    bool operator==(const SpectralState&) const = default;

private:
    std::size_t index(int n, int j) const
    {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(2 * K_ + 1) +
               static_cast<std::size_t>(j + K_);
    }

    int N_ = 0;
    int K_ = 0;
    double L_ = 0.0;
    double time_ = 0.0;
    std::vector<complex> data_;
};

struct NormKind {
    enum class Tag { L2, H10, Hs2_weighted_10, GS_weighted };
    Tag tag = Tag::L2;
    double t = 0.0;
    double delta1 = 0.0;

    static NormKind l2() { return {Tag::L2}; }
    static NormKind h10() { return {Tag::H10}; }
    static NormKind hs2_weighted_10() { return {Tag::Hs2_weighted_10}; }
    static NormKind gs_weighted(double t, double delta1) { return {Tag::GS_weighted, t, delta1}; }
};

// L2 = sqrt(sum |c|^2); H10 = sqrt(sum <xi>^2 |c|^2);
// Hs2_weighted_10 = sqrt(sum (n+1/2)^s <xi>^2 |c|^2); GS_weighted = H10 of apply_weight(state, t, delta1).
double norm(const SpectralState& state, NormKind kind, double s);

// (a, b)_{(1,0)} = sum <xi_j>^2 a[n][j] conj(b[n][j])
complex inner_10(const SpectralState& a, const SpectralState& b);

enum class WeightDirection { forward, inverse };

// Exponent of the Gelfand-Shilov weight: t (sqrt(n + 1/2) + <xi_j>)^{2s/(2s+1)}.
double weight_exponent(int n, double bracket_xi, double t, double s);

// Multiplies c[n][j] by exp(E) / (1 + delta1 exp(E)), E = weight_exponent, or by the reciprocal.
// Throws WeightOverflowError when delta1 = 0 and E > 700 in the forward direction.
SpectralState apply_weight(const SpectralState& state, double t, double delta1, double s, WeightDirection dir);

// Initial data descriptors.
struct SingleMode {
    int n = 0;
    int j = 0;
    complex amplitude = 1.0;
};

struct GaussianBump {
    double x_center = 0.0;
    double x_width = 0.5;
    std::vector<double> hermite_profile{1.0};
};

struct RandomSmooth {
    std::uint64_t seed = 7;
    double decay = 0.5; // moduli i.i.d. Rayleigh, damped by exp(-decay (n + |j|))
};

// |c[n][j]| = exp(-rate (sqrt(n+1/2) + <xi_j>)^exponent) with uniformly random phases.
struct WeightedPhase {
    std::uint64_t seed = 7;
    double rate = 2.0;
    double exponent = 0.5;
};

struct ZeroData {};

using InitialData = std::variant<ZeroData, SingleMode, GaussianBump, RandomSmooth, WeightedPhase>;

// Builds a real-valued initial state (single modes with j != 0 are mirrored to -j).
// When `epsilon` is set, the state is rescaled so that ||g_0||_{(1,0)} = *epsilon;
// a nonzero target for an all-zero descriptor throws std::invalid_argument.
SpectralState init_state(const InitialData& spec, int N, int K, double L,
                         std::optional<double> epsilon = std::nullopt);

// `# kac-state v1, N=.., K=.., L=.., time=.., s=..`, the `echo` comment block, then n,j,re,im rows.
void write_snapshot(std::ostream& os, const SpectralState& state, double s, const std::string& echo = {});
SpectralState read_snapshot(std::istream& is, double* s_out = nullptr);

} // namespace kac
