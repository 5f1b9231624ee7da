#include "kac/baselines.hpp"
#include "kac/coefficients.hpp"
#include "kac/config.hpp"
#include "kac/diagnostics.hpp"
#include "kac/errors.hpp"
#include "kac/solver.hpp"
#include "kac/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace kac;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_check_failure = 1;
constexpr int exit_usage = 2;

struct Options {
    std::string config_path;
    std::map<std::string, std::string> overrides;
};

void add_config_options(CLI::App& sub, Options& opt)
{
    sub.add_option("--config", opt.config_path, "key = value run configuration file");
    for (const auto& [key, meta] : RunConfigFile::schema()) {
        auto* o = sub.add_option_function<std::string>(
            "--" + key, [&opt, key = key](const std::string& v) { opt.overrides[key] = v; },
            meta.second + " (default " + meta.first + ")");
        o->type_name("VALUE");
    }
}

RunConfigFile load_config(const Options& opt)
{
    RunConfigFile cfg = opt.config_path.empty() ? RunConfigFile() : RunConfigFile::load(opt.config_path);
    for (const auto& [k, v] : opt.overrides)
        cfg.set(k, v);
    return cfg;
}

std::string echo_of(const RunConfigFile& cfg)
{
    std::ostringstream os;
    cfg.write_echo(os);
    return os.str();
}

std::ofstream open_out(const fs::path& path)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    return os;
}

int fail(const std::string& name, const std::string& detail)
{
    std::cout << "FAIL " << name << ' ' << detail << '\n';
    return exit_check_failure;
}

int cmd_coeffs(const RunConfigFile& cfg, const std::string& output, const std::string& eigen_output)
{
    const auto c = cfg.solver_config();
    const auto table = build_tables(c.N, c.s, c.table_tol);
    const auto echo = echo_of(cfg);
    if (output.empty() || output == "-") {
        table.write_csv(std::cout, echo);
    } else {
        auto os = open_out(output);
        table.write_csv(os, echo);
    }
    if (!eigen_output.empty()) {
        auto os = open_out(eigen_output);
        os << "# kac-eigenvalues v1\n" << echo << "k,lambda,asymptote\n";
        for (int k = 1; k < table.N(); ++k)
            os << k << ',' << format_double(table.lambda(k)) << ',' << format_double(eigenvalue_asymptote(k, c.s))
               << '\n';
    }
    return exit_pass;
}

int cmd_solve(const RunConfigFile& cfg)
{
    auto c = cfg.solver_config();
    if (c.out_dir.empty())
        throw ConfigError("solve needs a non-empty out_dir");
    fs::create_directories(c.out_dir);
    const auto summary = run(c);
    const double g0 = summary.norm_history.front().norm_10;
    std::cout << "solved steps=" << c.steps() << " final_time=" << format_double(summary.final_state.time())
              << " sup_over_initial=" << format_double(g0 > 0 ? summary.sup_norm_10() / g0 : 0.0)
              << " max_contraction=" << format_double(summary.max_contraction()) << " out_dir=" << c.out_dir
              << '\n';
    return exit_pass;
}

std::vector<SpectralState> read_snapshots(const fs::path& dir, double& s)
{
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (name.rfind("snap_", 0) == 0 && e.path().extension() == ".csv")
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<SpectralState> out;
    for (const auto& f : files) {
        std::ifstream is(f);
        out.push_back(read_snapshot(is, &s));
    }
    return out;
}

int cmd_diagnose(const RunConfigFile& cfg, const std::string& dir, int k_max, int sup_order)
{
    double s = cfg.get_double("s");
    const auto snaps = read_snapshots(dir, s);
    if (snaps.size() < 3)
        throw std::runtime_error("diagnose: need at least three snap_*.csv files in " + dir);
    const auto echo = echo_of(cfg);
    const double g0 = norm(snaps.front(), NormKind::h10(), s);

    std::vector<DecayFit> fits;
    for (const auto& snap : snaps) {
        try {
            fits.push_back(gevrey_fit(snap, s));
        } catch (const std::domain_error& e) {
            std::cout << "note " << e.what() << '\n';
        }
    }
    {
        auto os = open_out(fs::path(dir) / "gevrey.csv");
        write_decay_fits_csv(os, fits, echo);
    }
    const auto& last = snaps.back();
    const auto probe = theorem_bound_probe(last, k_max, s, g0 > 0 ? g0 : 1.0);
    {
        auto os = open_out(fs::path(dir) / "theorem_probe.csv");
        write_theorem_probe_csv(os, probe, echo);
    }
    const auto sup = supnorm_constant(last, sup_order, s);
    {
        auto os = open_out(fs::path(dir) / "supnorm.csv");
        write_supnorm_csv(os, sup, echo);
    }
    std::cout << "diagnosed snapshots=" << snaps.size() << " fits=" << fits.size()
              << " theorem_C=" << format_double(probe.C) << " supnorm_C=" << format_double(sup.C)
              << " t_final=" << format_double(last.time()) << '\n';
    return exit_pass;
}

int cmd_hypo(const RunConfigFile& cfg, std::vector<double> xi, const std::string& output)
{
    const double s = cfg.get_double("s");
    const int N = cfg.get_int("N");
    if (xi.empty())
        xi.assign(baseline::hypo_xi.begin(), baseline::hypo_xi.end());
    const auto R = hypoelliptic_ratio(xi, N, eigenvalues(N - 1, s, cfg.get_double("table_tol")), s);
    const auto echo = echo_of(cfg);
    if (output.empty() || output == "-") {
        write_hypo_csv(std::cout, xi, R, echo);
    } else {
        auto os = open_out(output);
        write_hypo_csv(os, xi, R, echo);
    }
    bool ok = true;
    for (std::size_t i = 0; i < R.size(); ++i)
        if (!(R[i] > 0.0))
            ok = false, fail("hypo_positive", "xi=" + format_double(xi[i]) + " R=" + format_double(R[i]));
    return ok ? exit_pass : exit_check_failure;
}

int cmd_verify(bool quick, bool print_baselines)
{
    if (print_baselines) {
        kac::print_baselines(std::cout);
        return exit_pass;
    }
    const auto results = verify_suite(quick, [](const CheckResult& r) { std::cout << r << std::endl; });
    const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
    std::cout << "summary checks=" << results.size() << " failed=" << failed << '\n';
    return failed == 0 ? exit_pass : exit_check_failure;
}

int cmd_bobylev(const RunConfigFile& cfg, int max_order, double tol)
{
    const double s = cfg.get_double("s");
    const auto rows = bobylev_comparison(s, max_order);
    std::cout << "k,l,alpha,rel_err\n";
    int failed = 0;
    for (const auto& r : rows)
        std::cout << r.k << ',' << r.l << ',' << format_double(r.alpha) << ',' << format_double(r.rel_err) << '\n';
    for (const auto& r : rows)
        if (!(r.rel_err <= tol)) {
            ++failed;
            fail("bobylev", "k=" + std::to_string(r.k) + " l=" + std::to_string(r.l) +
                                " rel_err=" + format_double(r.rel_err));
        }
    return failed == 0 ? exit_pass : exit_check_failure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hermite-Fourier spectral solver and diagnostics for the non-cutoff Kac equation"};
    app.require_subcommand(1);

    Options opt;

    auto* coeffs = app.add_subcommand("coeffs", "build the collision-coefficient table and write it as CSV");
    add_config_options(*coeffs, opt);
    std::string coeffs_out = "-", eigen_out;
    coeffs->add_option("--output", coeffs_out, "coefficient CSV path ('-' for standard output)");
    coeffs->add_option("--eigen-output", eigen_out, "optional k,lambda,asymptote CSV");

    auto* solve = app.add_subcommand("solve", "run the solver and write snapshots, norms.csv and summary.json");
    add_config_options(*solve, opt);

    auto* diagnose = app.add_subcommand("diagnose", "decay fits and bound probes on a snapshot directory");
    add_config_options(*diagnose, opt);
    std::string diag_dir;
    int k_max = 12, sup_order = 4;
    diagnose->add_option("--dir", diag_dir, "directory holding snap_*.csv")->required();
    diagnose->add_option("--k-max", k_max, "largest k of the theorem bound probe")->check(CLI::Range(0, 12));
    diagnose->add_option("--sup-order", sup_order, "largest k + l + p of the sup-norm probe")->check(CLI::Range(1, 8));

    auto* hypo = app.add_subcommand("hypo", "hypoelliptic ratio R(xi) at truncation N");
    add_config_options(*hypo, opt);
    std::vector<double> xi;
    std::string hypo_out = "-";
    hypo->add_option("--xi", xi, "wavenumbers (default 0 1 4 16 64 256 1024)");
    hypo->add_option("--output", hypo_out, "CSV path ('-' for standard output)");

    auto* verify = app.add_subcommand("verify", "run the invariant suite; exit 0 iff every check passes");
    bool quick = false, print_baselines = false;
    verify->add_flag("--quick", quick, "closed forms, coefficient structure, Hermite bound, coercivity, invariants");
    verify->add_flag("--print-baselines", print_baselines, "recompute the frozen regression constants");

    auto* bobylev = app.add_subcommand("bobylev", "compare apply_gamma with the Bobylev-formula oracle");
    add_config_options(*bobylev, opt);
    int max_order = 8;
    double bob_tol = 1e-7;
    bobylev->add_option("--max-order", max_order, "largest k + l")->check(CLI::Range(0, 12));
    bobylev->add_option("--tol", bob_tol, "relative tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_pass : exit_usage;
    }

    try {
        if (*verify)
            return cmd_verify(quick, print_baselines);
        const auto cfg = load_config(opt);
        if (*coeffs)
            return cmd_coeffs(cfg, coeffs_out, eigen_out);
        if (*solve)
            return cmd_solve(cfg);
        if (*diagnose)
            return cmd_diagnose(cfg, diag_dir, k_max, sup_order);
        if (*hypo)
            return cmd_hypo(cfg, xi, hypo_out);
        if (*bobylev)
            return cmd_bobylev(cfg, max_order, bob_tol);
    } catch (const ConfigError& e) {
        return fail("config", e.what());
    } catch (const PicardDivergenceError& e) {
        return fail("picard_divergence", std::string(e.what()) + " step=" + std::to_string(e.step()) +
                                             " ratio=" + format_double(e.ratio()));
    } catch (const std::exception& e) {
        return fail("error", e.what());
    }
    return exit_usage;
}
