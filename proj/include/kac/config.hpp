#pragma once

#include "kac/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace kac {

// Plain `key = value` run configuration. Every key has a documented default;
// unknown keys are rejected with ConfigError.
class RunConfigFile {
public:
    RunConfigFile(); // all defaults

    static RunConfigFile parse(std::istream& is);
    static RunConfigFile load(const std::string& path);

    // Keys in canonical order with their default values and one-line descriptions.
    static const std::vector<std::pair<std::string, std::pair<std::string, std::string>>>& schema();
    static bool is_key(const std::string& key);

    void set(const std::string& key, const std::string& value);
    const std::string& get(const std::string& key) const;

    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    std::uint64_t seed() const;

    SolverConfig solver_config() const;

    // `# key = value` lines in schema order.
    void write_echo(std::ostream& os) const;
    std::vector<std::pair<std::string, std::string>> entries() const;

private:
    std::map<std::string, std::string> values_;
};

// Config echo of a SolverConfig, in the same `# key = value` form.
void write_config_echo(std::ostream& os, const SolverConfig& config);

} // namespace kac
