#pragma once

#include <array>

// Constants measured once on the reference configurations and frozen.
// Regenerate with `kac_spectral verify --print-baselines`.
namespace kac::baseline {

// hypoelliptic ratio R(xi) at N = 256, s = 0.5
inline constexpr std::array<double, 7> hypo_xi{0, 1, 4, 16, 64, 256, 1024};
inline constexpr std::array<double, 7> hypo_R{0.28571428571428575, 0.37595366526725793, 0.35221867683991692,
                                              1.1851876257313894, 2.800427431476022, 4.3123096646143804,
                                              7.7382672188131387};
inline constexpr double hypo_rel_tol = 0.10;

// sup_t ||g(t)||_{(1,0)} / ||g_0||_{(1,0)} on the reference run
inline constexpr double c0 = 1.0;
// coercivity constant C* (200 states, seed 7, N = 64, s = 0.5)
inline constexpr double coercivity_C = 6.6530953871608585;
// theorem_bound_probe C at t = 1, k_max = 12
inline constexpr double theorem_C = 1.2875233710198941;
// supnorm growth constant at t = 1, orders k + l + p <= 4
inline constexpr double supnorm_C = 1.0351982940227851;
// trilinear ratio, 500 triples, N = 32, K = 8, seed 7
inline constexpr double trilinear_32 = 0.12065446290626039;
// relative tolerance for scalar regression baselines
inline constexpr double rel_tol = 0.02;

} // namespace kac::baseline
