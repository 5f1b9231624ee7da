// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
#include "kac/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <sys/wait.h>

using namespace kac;

namespace {

// 10: the quick invariant suite through the CLI, under 60 s wall time.
CheckResult check_quick_cli()
{
    const char* exe = std::getenv("KAC_CLI");
    if (!exe)
        return {"quick_verify_cli", false, "KAC_CLI not set"};
    const auto t0 = std::chrono::steady_clock::now();
    const std::string cmd = std::string("\"") + exe + "\" verify --quick > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    char detail[96];
    std::snprintf(detail, sizeof detail, "exit=%d seconds=%.2f limit=60", code, secs);
    return {"quick_verify_cli", code == 0 && secs < 60.0, detail};
}

} // namespace

int main()
{
    int failed = 0;
    int index = 0;
    auto report = [&](const CheckResult& r) {
        ++index;
        failed += r.passed ? 0 : 1;
        std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << index << ' ' << r.name << ' ' << r.detail
                  << std::endl;
    };

    report(check_closed_forms());
    report(check_coefficient_structure());
    report(check_eigenvalue_asymptotics());
    report(check_bobylev());
    report(check_hermite_bound());
    report(check_coercivity());
    report(check_hypoellipticity());
    const auto ref = canonical_run();
    report(check_well_posedness(ref));
    report(check_smoothing(ref));
    report(check_quick_cli());

    std::cout << "acceptance criteria=" << index << " failed=" << failed << '\n';
    return failed == 0 ? 0 : 1;
}
