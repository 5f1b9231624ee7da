#include "kac/solver.hpp"

#include "kac/baselines.hpp"
#include "kac/config.hpp"
#include "kac/errors.hpp"
#include "kac/operators.hpp"
#include "kac/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kac {

void SolverConfig::validate() const
{
    if (!(s > 0.0 && s < 1.0))
        throw ConfigError("s must lie in (0,1)");
    if (N < 4 || K < 0)
        throw ConfigError("need N >= 4 and K >= 0");
    if (!(L > 0.0))
        throw ConfigError("L must be positive");
    if (!(dt > 0.0) || !(T > 0.0) || dt > T)
        throw ConfigError("need 0 < dt <= T");
    if (!(picard_tol > 0.0))
        throw ConfigError("picard_tol must be positive");
    if (picard_max_iters < 1)
        throw ConfigError("picard_max_iters must be >= 1");
    if (snapshot_every < 0)
        throw ConfigError("snapshot_every must be >= 0");
    const double ratio = T / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
        throw ConfigError("T must be an integer multiple of dt");
}

long SolverConfig::steps() const { return std::lround(T / dt); }

double RunSummary::max_contraction() const
{
    double m = 0.0;
    for (double r : contraction_factors)
        m = std::max(m, r);
    return m;
}

double RunSummary::sup_norm_10() const
{
    double m = 0.0;
    for (const auto& h : norm_history)
        m = std::max(m, h.norm_10);
    return m;
}

TridiagonalFactor::TridiagonalFactor(double xi, double dt, const std::vector<double>& lambda, int N)
    : N_(N), off_(static_cast<std::size_t>(std::max(N - 1, 0))), lower_(static_cast<std::size_t>(N)),
      pivot_(static_cast<std::size_t>(N))
{
    for (int n = 0; n + 1 < N; ++n)
        off_[n] = complex(0.0, dt * xi * std::sqrt(n + 1.0));
    pivot_[0] = 1.0 + dt * lambda[0];
    for (int n = 1; n < N; ++n) {
        lower_[n] = off_[n - 1] / pivot_[n - 1];
        pivot_[n] = 1.0 + dt * lambda[n] - lower_[n] * off_[n - 1];
    }
    for (int n = 0; n < N; ++n)
        if (!(std::abs(pivot_[n]) > 0.0))
            throw std::runtime_error("TridiagonalFactor: singular pivot at n = " + std::to_string(n));
}

void TridiagonalFactor::solve(std::vector<complex>& x) const
{
    for (int n = 1; n < N_; ++n)
        x[n] -= lower_[n] * x[n - 1];
    x[N_ - 1] /= pivot_[N_ - 1];
    for (int n = N_ - 2; n >= 0; --n)
        x[n] = (x[n] - off_[n] * x[n + 1]) / pivot_[n];
}

ImplicitPropagator::ImplicitPropagator(const SpectralState& shape, double dt, const CoeffTable& table)
    : N_(shape.N()), K_(shape.K())
{
    if (table.N() < N_)
        throw std::invalid_argument("ImplicitPropagator: table truncation below state truncation");
    modes_.reserve(static_cast<std::size_t>(2 * K_ + 1));
    for (int j = -K_; j <= K_; ++j)
        modes_.emplace_back(shape.xi(j), dt, table.lambdas(), N_);
}

SpectralState ImplicitPropagator::solve(const SpectralState& rhs) const
{
    if (rhs.N() != N_ || rhs.K() != K_)
        throw std::invalid_argument("ImplicitPropagator::solve: shape mismatch");
    SpectralState out = rhs;
    parallel_for(0, static_cast<std::size_t>(2 * K_ + 1), [&](std::size_t idx) {
        const int j = static_cast<int>(idx) - K_;
        std::vector<complex> col(static_cast<std::size_t>(N_));
        for (int n = 0; n < N_; ++n)
            col[n] = rhs.at(n, j);
        modes_[idx].solve(col);
        for (int n = 0; n < N_; ++n)
            out.at(n, j) = col[n];
    });
    return out;
}

namespace {

SpectralState imex_step(const SpectralState& state, double dt, const CoeffTable& table,
                        const ImplicitPropagator& prop, bool nonlinear)
{
    SpectralState rhs = state;
    if (nonlinear) {
        SpectralState gamma = apply_gamma(state, state, table);
        gamma *= dt;
        rhs += gamma;
    }
    SpectralState next = prop.solve(rhs);
    next.set_time(state.time() + dt);
    return next;
}

// Differences below this fraction of the iterate are rounding noise; their ratios carry no signal.
constexpr double ratio_floor = 1e-14;

struct PicardResult {
    SpectralState next;
    int iterations = 0;
    bool converged = false;
};

// Per-step Picard iteration: u^{m+1} solves (I + dt P) u = c_old + dt Gamma(u^m, u), the
// linear-in-u problem being itself solved by lagged sweeps on the second argument.
PicardResult picard_step(const SpectralState& old, const SolverConfig& cfg, const CoeffTable& table,
                         const ImplicitPropagator& prop, long step, std::vector<double>& ratios)
{
    const double dt = cfg.dt;
    auto frozen_solve = [&](const SpectralState& frozen, const SpectralState& start) {
        SpectralState w = start;
        for (int p = 0; p < cfg.picard_max_iters; ++p) {
            SpectralState rhs = old;
            if (cfg.nonlinear) {
                SpectralState gamma = apply_gamma(frozen, w, table);
                gamma *= dt;
                rhs += gamma;
            }
            SpectralState next = prop.solve(rhs);
            const double change = norm(next - w, NormKind::h10(), cfg.s);
            const double size = norm(next, NormKind::h10(), cfg.s);
            w = std::move(next);
            if (!cfg.nonlinear || change <= cfg.picard_tol * size)
                break;
        }
        return w;
    };

    PicardResult result;
    SpectralState u = old;
    double prev_diff = -1.0;
    int growing = 0;
    for (int m = 0; m < cfg.picard_max_iters; ++m) {
        SpectralState next = frozen_solve(u, u);
        const double diff = norm(next - u, NormKind::h10(), cfg.s);
        const double size = norm(next, NormKind::h10(), cfg.s);
        u = std::move(next);
        result.iterations = m + 1;
        if (!std::isfinite(diff) || !std::isfinite(size))
            throw PicardDivergenceError("Picard iteration overflowed at step " + std::to_string(step) +
                                            "; initial data too large for contraction",
                                        static_cast<int>(step), std::numeric_limits<double>::infinity());
        if (prev_diff > ratio_floor * size && diff > ratio_floor * size) {
            const double ratio = diff / prev_diff;
            ratios.push_back(ratio);
            growing = ratio >= 1.0 ? growing + 1 : 0;
            if (growing >= 3)
                throw PicardDivergenceError("Picard iteration diverged at step " + std::to_string(step) +
                                                " (ratio " + format_double(ratio) +
                                                "); initial data too large for contraction",
                                            static_cast<int>(step), ratio);
        }
        prev_diff = diff;
        if (diff <= cfg.picard_tol * size) {
            result.converged = true;
            break;
        }
    }
    u.set_time(old.time() + dt);
    result.next = std::move(u);
    return result;
}

void write_state_file(const std::filesystem::path& path, const SpectralState& st, const SolverConfig& cfg)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    std::ostringstream echo;
    write_config_echo(echo, cfg);
    write_snapshot(os, st, cfg.s, echo.str());
}

std::string snapshot_name(long step)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%06ld.csv", step);
    return buf;
}

} // namespace

SpectralState step_imex(const SpectralState& state, double dt, const CoeffTable& table, bool nonlinear)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("step_imex: dt must be positive");
    ImplicitPropagator prop(state, dt, table);
    return imex_step(state, dt, table, prop, nonlinear);
}

RunSummary run(const SolverConfig& cfg, const CoeffTable* table_in)
{
    cfg.validate();
    CoeffTable owned;
    const CoeffTable* table = table_in;
    if (!table) {
        owned = build_tables(std::max(cfg.N, 4), cfg.s, cfg.table_tol);
        table = &owned;
    }
    if (table->N() < cfg.N || table->s() != cfg.s)
        throw ConfigError("coefficient table does not match (N, s) of the run");

    RunSummary summary;
    summary.config = cfg;
    SpectralState state = init_state(cfg.initial, cfg.N, cfg.K, cfg.L, cfg.initial_epsilon);
    const ImplicitPropagator prop(state, cfg.dt, *table);
    const long steps = cfg.steps();

    std::filesystem::path dir;
    if (!cfg.out_dir.empty()) {
        dir = cfg.out_dir;
        std::filesystem::create_directories(dir);
    }

    auto record = [&](long step) {
        summary.norm_history.push_back({state.time(), norm(state, NormKind::h10(), cfg.s),
                                        norm(state, NormKind::hs2_weighted_10(), cfg.s)});
        const bool snap = step == steps || (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0);
        if (snap) {
            summary.snapshots.push_back(state);
            if (!dir.empty())
                write_state_file(dir / snapshot_name(step), state, cfg);
        }
    };

    record(0);
    for (long step = 1; step <= steps; ++step) {
        if (cfg.mode == SolverMode::imex) {
            state = imex_step(state, cfg.dt, *table, prop, cfg.nonlinear);
        } else {
            auto res = picard_step(state, cfg, *table, prop, step, summary.contraction_factors);
            summary.picard_iterations += res.iterations;
            if (!res.converged)
                ++summary.picard_unconverged_steps;
            state = std::move(res.next);
        }
        // time from the step count, not by accumulation
        state.set_time(static_cast<double>(step) * cfg.dt);
        record(step);
        if (!std::isfinite(summary.norm_history.back().norm_10))
            throw std::overflow_error("solution overflowed at step " + std::to_string(step) + " (t = " +
                                      format_double(state.time()) + ")");
    }
    summary.final_state = state;

    if (!dir.empty()) {
        summary.final_state_path = (dir / "final_state.csv").string();
        write_state_file(summary.final_state_path, state, cfg);

        std::ofstream norms(dir / "norms.csv");
        norms << "# kac-norms v1\n";
        write_config_echo(norms, cfg);
        norms << "t,norm_10,norm_hs2_10\n";
        for (const auto& h : summary.norm_history)
            norms << format_double(h.t) << ',' << format_double(h.norm_10) << ',' << format_double(h.norm_hs2_10)
                  << '\n';

        nlohmann::ordered_json doc;
        doc["format"] = "kac-run-summary v1";
        nlohmann::ordered_json echo;
        std::ostringstream echo_text;
        write_config_echo(echo_text, cfg);
        std::istringstream lines(echo_text.str());
        for (std::string line; std::getline(lines, line);) {
            const auto eq = line.find(" = ");
            if (line.size() > 2 && eq != std::string::npos)
                echo[line.substr(2, eq - 2)] = line.substr(eq + 3);
        }
        doc["config"] = echo;
        doc["steps"] = steps;
        doc["final_time"] = state.time();
        doc["norm_10_initial"] = summary.norm_history.front().norm_10;
        doc["norm_10_final"] = summary.norm_history.back().norm_10;
        doc["sup_norm_10"] = summary.sup_norm_10();
        doc["sup_over_initial"] = summary.norm_history.front().norm_10 > 0.0
                                      ? summary.sup_norm_10() / summary.norm_history.front().norm_10
                                      : 0.0;
        doc["picard_iterations"] = summary.picard_iterations;
        doc["picard_unconverged_steps"] = summary.picard_unconverged_steps;
        doc["max_contraction"] = summary.max_contraction();
        doc["final_state_path"] = summary.final_state_path;
        doc["baselines"] = {{"c0", baseline::c0},
                            {"coercivity_C", baseline::coercivity_C},
                            {"theorem_C", baseline::theorem_C},
                            {"supnorm_C", baseline::supnorm_C},
                            {"trilinear_32", baseline::trilinear_32},
                            {"hypo_xi", baseline::hypo_xi},
                            {"hypo_R", baseline::hypo_R}};
        std::ofstream js(dir / "summary.json");
        js << doc.dump(2) << '\n';
    }
    return summary;
}

double contraction_probe(const SolverConfig& config, const CoeffTable* table)
{
    SolverConfig cfg = config;
    cfg.mode = SolverMode::picard;
    cfg.out_dir.clear();
    return run(cfg, table).max_contraction();
}

} // namespace kac
