#pragma once

#include "kac/coefficients.hpp"
#include "kac/solver.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace kac {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// `PASS name detail` or `FAIL name detail`
std::ostream& operator<<(std::ostream& os, const CheckResult& r);

struct BobylevRow {
    int k, l;
    double alpha;
    double rel_err; // max over the xi grid, relative to max |transform of psi_{k+l}| * max(1, |alpha|)
};

// apply_gamma on x-constant modes against gamma_bobylev_oracle for every k + l <= max_order.
std::vector<BobylevRow> bobylev_comparison(double s, int max_order);

// Reference run shared by the well-posedness and smoothing checks:
// s = 0.5, N = K = 64, ||g_0||_{(1,0)} = 1e-3, T = 1, dt = 1e-3, random_smooth seed 7.
SolverConfig canonical_config();

struct CanonicalRun {
    SolverConfig config;
    CoeffTable table;
    RunSummary imex;
    double seconds = 0.0; // wall time of the table build and the run
};

CanonicalRun canonical_run();

// Numbered acceptance checks. Tolerances are fixed inside each check.
CheckResult check_closed_forms();                             // 1
CheckResult check_coefficient_structure();                    // 2
CheckResult check_eigenvalue_asymptotics();                   // 3
CheckResult check_bobylev();                                  // 4
CheckResult check_hermite_bound();                            // 5
CheckResult check_coercivity();                               // 6
CheckResult check_hypoellipticity();                          // 7
CheckResult check_well_posedness(const CanonicalRun& run);    // 8
CheckResult check_smoothing(const CanonicalRun& run);         // 9

// Fast invariants of every module.
std::vector<CheckResult> module_invariant_checks();
// Slower invariants (solver refinement, trilinear scan, sup-norm growth).
std::vector<CheckResult> extended_invariant_checks(const CanonicalRun& run);

// Recomputes every frozen constant, formatted as the baselines header.
void print_baselines(std::ostream& os);

// quick: checks 1, 2, 5, 6 and module_invariant_checks; otherwise every check.
// `sink` sees each result as soon as it is available.
std::vector<CheckResult> verify_suite(bool quick, const std::function<void(const CheckResult&)>& sink = {});

} // namespace kac
