#include <doctest.h>

#include "kac/coefficients.hpp"
#include "kac/errors.hpp"
#include "kac/operators.hpp"
#include "kac/solver.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace kac;
namespace fs = std::filesystem;

namespace {
SolverConfig small_config()
{
    SolverConfig c;
    c.N = 10;
    c.K = 4;
    c.dt = 0.01;
    c.T = 0.1;
    c.initial = RandomSmooth{2, 0.5};
    c.initial_epsilon = 1e-2;
    c.snapshot_every = 5;
    return c;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}
} // namespace

TEST_CASE("config validation")
{
    auto c = small_config();
    CHECK_NOTHROW(c.validate());
    CHECK(c.steps() == 10);
    c.T = 0.105;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.dt = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.s = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("linear IMEX step on xi = 0 is c / (1 + dt lambda)")
{
    const auto t = build_tables(8, 0.5);
    SpectralState st(8, 2, 2 * std::numbers::pi);
    for (int n = 0; n < 8; ++n)
        st.at(n, 0) = 1.0 + n;
    const auto out = step_imex(st, 0.1, t, false);
    for (int n = 0; n < 8; ++n)
        CHECK(out.at(n, 0).real() == doctest::Approx((1.0 + n) / (1.0 + 0.1 * t.lambda(n))).epsilon(1e-14));
    CHECK(out.time() == doctest::Approx(0.1));
}

TEST_CASE("tridiagonal factor solves the block system")
{
    const auto t = build_tables(8, 0.5);
    const TridiagonalFactor f(2.5, 0.05, t.lambdas(), 8);
    std::vector<complex> x{1.0, complex(0.0, 1.0), -2.0, 0.5, complex(3.0, -1.0), 0.0, 1.0, -1.0};
    auto rhs = x;
    f.solve(rhs);
    const auto m = transport_block(2.5, 8, t).dense();
    for (int r = 0; r < 8; ++r) {
        complex acc = rhs[r];
        for (int c = 0; c < 8; ++c)
            acc += 0.05 * m[r * 8 + c] * rhs[c];
        CHECK(std::abs(acc - x[r]) < 1e-13);
    }
}

TEST_CASE("zero data stays zero and runs are deterministic")
{
    auto c = small_config();
    c.initial = ZeroData{};
    c.initial_epsilon = std::nullopt;
    const auto z = run(c);
    CHECK(norm(z.final_state, NormKind::l2(), 0.5) == 0.0);

    const auto a = run(small_config());
    const auto b = run(small_config());
    CHECK(a.final_state == b.final_state);
    CHECK(a.snapshots.size() == 3);
    CHECK(a.norm_history.size() == 11);
    CHECK(a.final_state.time() == doctest::Approx(0.1));
    // the (1,0) norm of small data does not grow
    CHECK(a.sup_norm_10() <= a.norm_history.front().norm_10 * (1.0 + 1e-12));
}

TEST_CASE("IMEX is first order in dt")
{
    auto c = small_config();
    c.initial_epsilon = 0.5;
    c.dt = 0.1 / 64;
    const auto ref = run(c).final_state;
    double err[2];
    for (int i = 0; i < 2; ++i) {
        c.dt = i == 0 ? 0.01 : 0.005;
        err[i] = norm(run(c).final_state - ref, NormKind::h10(), 0.5);
    }
    CHECK(err[0] / err[1] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("Picard agrees with IMEX to first order and contracts for small data")
{
    auto c = small_config();
    const auto imex = run(c);
    c.mode = SolverMode::picard;
    const auto pic = run(c);
    CHECK(pic.max_contraction() < 1.0);
    CHECK(pic.picard_unconverged_steps == 0);
    CHECK(norm(pic.final_state - imex.final_state, NormKind::h10(), 0.5) <
          1e-2 * norm(imex.final_state, NormKind::h10(), 0.5));
    CHECK(contraction_probe(small_config()) == doctest::Approx(pic.max_contraction()));
}

TEST_CASE("Picard reports divergence for large data")
{
    auto c = small_config();
    c.mode = SolverMode::picard;
    for (double eps : {1e2, 1e4}) {
        c.initial_epsilon = eps;
        CHECK_THROWS_AS(run(c), PicardDivergenceError);
    }
    c.mode = SolverMode::imex;
    c.initial_epsilon = 1e4;
    c.T = 2.0;
    CHECK_THROWS_AS(run(c), std::overflow_error);
}

TEST_CASE("run directory outputs")
{
    const fs::path dir = fs::temp_directory_path() / "kac_test_solver_outputs";
    fs::remove_all(dir);
    auto c = small_config();
    c.out_dir = dir.string();
    const auto r = run(c);
    REQUIRE(fs::exists(dir / "norms.csv"));
    REQUIRE(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "snap_000000.csv"));
    CHECK(fs::exists(dir / "snap_000010.csv"));
    CHECK(fs::exists(dir / "final_state.csv"));

    const auto doc = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(doc["format"] == "kac-run-summary v1");
    CHECK(doc["steps"] == 10);
    CHECK(doc["config"]["N"] == "10");
    CHECK(doc["baselines"]["c0"] == 1.0);
    CHECK(doc["baselines"]["hypo_R"].size() == 7);

    std::istringstream norms(slurp(dir / "norms.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(norms, line))
        if (!line.empty() && line[0] != '#' && std::isdigit(static_cast<unsigned char>(line[0])))
            ++rows;
    CHECK(rows == 11);

    std::ifstream fin(dir / "final_state.csv");
    CHECK(read_snapshot(fin) == r.final_state);
    fs::remove_all(dir);
}
