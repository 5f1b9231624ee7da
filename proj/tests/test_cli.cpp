#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result cli(const std::string& args)
{
    const char* exe = std::getenv("KAC_CLI");
    REQUIRE_MESSAGE(exe != nullptr, "KAC_CLI must point at the kac_spectral binary");
    const std::string cmd = std::string("\"") + exe + "\" " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    Result r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p))
        r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("coeffs prints the table with lambda_2 = 0")
{
    const auto r = cli("coeffs --s 0.5 --N 8");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("# kac-coeffs v1", 0) == 0);
    CHECK(r.out.find("# N = 8") != std::string::npos);
    const auto pos = r.out.find("lambda,2,");
    REQUIRE(pos != std::string::npos);
    const auto eol = r.out.find('\n', pos);
    const auto row = r.out.substr(pos, eol - pos);
    const double v = std::strtod(row.substr(row.rfind(',') + 1).c_str(), nullptr);
    CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("verify --quick passes")
{
    const auto r = cli("verify --quick");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("summary checks=") != std::string::npos);
}

TEST_CASE("solve is reproducible and diagnose reads its output")
{
    const fs::path base = fs::temp_directory_path() / "kac_test_cli";
    fs::remove_all(base);
    const std::string common = " --N 12 --K 6 --dt 0.01 --T 0.2 --snapshot_every 5";
    const auto a = cli("solve" + common + " --out_dir " + (base / "a").string());
    const auto b = cli("solve" + common + " --out_dir " + (base / "b").string());
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out.rfind("solved steps=20", 0) == 0);
    const auto na = slurp(base / "a" / "norms.csv");
    const auto nb = slurp(base / "b" / "norms.csv");
    CHECK(!na.empty());
    // the echoed out_dir differs; everything else is byte identical
    auto strip = [](const std::string& s) {
        std::istringstream is(s);
        std::string out;
        for (std::string line; std::getline(is, line);)
            if (line.rfind("# out_dir", 0) != 0)
                out += line + '\n';
        return out;
    };
    CHECK(strip(na) == strip(nb));
    CHECK(slurp(base / "a" / "snap_000020.csv").size() > 0);

    const auto d = cli("diagnose --dir " + (base / "a").string());
    CHECK(d.code == 0);
    CHECK(fs::exists(base / "a" / "gevrey.csv"));
    CHECK(fs::exists(base / "a" / "theorem_probe.csv"));
    CHECK(fs::exists(base / "a" / "supnorm.csv"));
    fs::remove_all(base);
}

TEST_CASE("hypo and bobylev subcommands")
{
    const auto h = cli("hypo --N 16 --xi 0 1");
    CHECK(h.code == 0);
    CHECK(h.out.find("xi,R\n0,0.2857142857142") != std::string::npos);
    const auto b = cli("bobylev --max-order 3");
    CHECK(b.code == 0);
    CHECK(b.out.rfind("k,l,alpha,rel_err\n", 0) == 0);
}

TEST_CASE("errors: config failures exit 1, usage errors exit 2")
{
    const auto unknown = cli("coeffs --config /nonexistent/kac.cfg");
    CHECK(unknown.code == 1);
    CHECK(unknown.out.rfind("FAIL config", 0) == 0);

    const fs::path cfg = fs::temp_directory_path() / "kac_test_cli_bad.cfg";
    {
        std::ofstream os(cfg);
        os << "N = 8\nbogus_key = 3\n";
    }
    const auto bad_key = cli("coeffs --config " + cfg.string());
    CHECK(bad_key.code == 1);
    CHECK(bad_key.out.find("FAIL config") != std::string::npos);
    CHECK(bad_key.out.find("bogus_key") != std::string::npos);
    fs::remove(cfg);

    CHECK(cli("coeffs --no-such-flag").code == 2);
    CHECK(cli("").code == 2);
}
