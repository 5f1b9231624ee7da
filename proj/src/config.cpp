#include "kac/config.hpp"

#include "kac/coefficients.hpp"
#include "kac/errors.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace kac {

namespace {

using Schema = std::vector<std::pair<std::string, std::pair<std::string, std::string>>>;

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::istringstream is(text);
    for (std::string item; std::getline(is, item, ',');) {
        item = trim(item);
        if (!item.empty())
            out.push_back(parse_double(item));
    }
    return out;
}

std::string join_list(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ',';
        out += format_double(v[i]);
    }
    return out;
}

} // namespace

const Schema& RunConfigFile::schema()
{
    static const Schema keys = {
        {"s", {"0.5", "singularity exponent of the cross section, in (0,1)"}},
        {"N", {"32", "Hermite truncation (degrees 0..N-1)"}},
        {"K", {"16", "Fourier truncation (modes -K..K)"}},
        {"L", {"6.2831853071795862", "length of the periodic x-domain"}},
        {"dt", {"0.001", "time step"}},
        {"T", {"1", "final time (integer multiple of dt)"}},
        {"mode", {"imex", "time integration: imex or picard"}},
        {"picard_tol", {"1e-12", "relative stopping tolerance of Picard differences"}},
        {"picard_max_iters", {"50", "Picard iteration cap per step"}},
        {"initial.kind", {"random_smooth", "zero | single_mode | gaussian_bump | random_smooth | weighted_phase"}},
        {"initial.n", {"0", "single_mode Hermite degree"}},
        {"initial.j", {"0", "single_mode Fourier index"}},
        {"initial.amplitude", {"1", "single_mode amplitude (real)"}},
        {"initial.x_center", {"0", "gaussian_bump center"}},
        {"initial.x_width", {"0.5", "gaussian_bump width"}},
        {"initial.profile", {"1", "gaussian_bump Hermite profile, comma separated"}},
        {"initial.decay", {"0.5", "random_smooth damping exp(-decay (n + |j|))"}},
        {"initial.rate", {"2", "weighted_phase modulus exp(-rate (sqrt(n+1/2) + <xi>)^exponent)"}},
        {"initial.exponent", {"0.5", "weighted_phase exponent"}},
        {"initial.epsilon", {"0.001", "target ||g_0||_(1,0); 'none' keeps the raw amplitude"}},
        {"snapshot_every", {"50", "steps between state snapshots (0: first and last only)"}},
        {"seed", {"7", "seed of every random draw"}},
        {"out_dir", {"kac_run", "output directory"}},
        {"nonlinear", {"1", "1 keeps Gamma(g,g), 0 solves the linear equation"}},
        {"table_tol", {"1e-10", "relative quadrature tolerance of the coefficient table"}},
    };
    return keys;
}

bool RunConfigFile::is_key(const std::string& key)
{
    for (const auto& [k, _] : schema())
        if (k == key)
            return true;
    return false;
}

RunConfigFile::RunConfigFile()
{
    for (const auto& [key, meta] : schema())
        values_[key] = meta.first;
}

RunConfigFile RunConfigFile::parse(std::istream& is)
{
    RunConfigFile cfg;
    int lineno = 0;
    for (std::string line; std::getline(is, line);) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfigFile RunConfigFile::load(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open config file " + path);
    return parse(is);
}

void RunConfigFile::set(const std::string& key, const std::string& value)
{
    if (!is_key(key))
        throw ConfigError("unknown config key '" + key + "'");
    values_[key] = value;
}

const std::string& RunConfigFile::get(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError("unknown config key '" + key + "'");
    return it->second;
}

double RunConfigFile::get_double(const std::string& key) const
{
    try {
        return parse_double(get(key));
    } catch (const std::invalid_argument&) {
        throw ConfigError("config key '" + key + "' is not a number: '" + get(key) + "'");
    }
}

int RunConfigFile::get_int(const std::string& key) const
{
    const double v = get_double(key);
    if (v != static_cast<double>(static_cast<int>(v)))
        throw ConfigError("config key '" + key + "' is not an integer");
    return static_cast<int>(v);
}

std::uint64_t RunConfigFile::seed() const
{
    try {
        return std::stoull(get("seed"));
    } catch (const std::exception&) {
        throw ConfigError("config key 'seed' must be a non-negative integer");
    }
}

SolverConfig RunConfigFile::solver_config() const
{
    SolverConfig c;
    c.s = get_double("s");
    c.N = get_int("N");
    c.K = get_int("K");
    c.L = get_double("L");
    c.dt = get_double("dt");
    c.T = get_double("T");
    const auto& mode = get("mode");
    if (mode == "imex")
        c.mode = SolverMode::imex;
    else if (mode == "picard")
        c.mode = SolverMode::picard;
    else
        throw ConfigError("mode must be imex or picard, got '" + mode + "'");
    c.picard_tol = get_double("picard_tol");
    c.picard_max_iters = get_int("picard_max_iters");
    c.snapshot_every = get_int("snapshot_every");
    c.nonlinear = get_int("nonlinear") != 0;
    c.table_tol = get_double("table_tol");
    c.out_dir = get("out_dir");

    const auto& kind = get("initial.kind");
    if (kind == "zero") {
        c.initial = ZeroData{};
    } else if (kind == "single_mode") {
        c.initial = SingleMode{get_int("initial.n"), get_int("initial.j"), get_double("initial.amplitude")};
    } else if (kind == "gaussian_bump") {
        c.initial = GaussianBump{get_double("initial.x_center"), get_double("initial.x_width"),
                                 parse_list(get("initial.profile"))};
    } else if (kind == "random_smooth") {
        c.initial = RandomSmooth{seed(), get_double("initial.decay")};
    } else if (kind == "weighted_phase") {
        c.initial = WeightedPhase{seed(), get_double("initial.rate"), get_double("initial.exponent")};
    } else {
        throw ConfigError("unknown initial.kind '" + kind + "'");
    }
    const auto& eps = get("initial.epsilon");
    if (eps == "none" || eps.empty())
        c.initial_epsilon.reset();
    else
        c.initial_epsilon = get_double("initial.epsilon");
    c.validate();
    return c;
}

std::vector<std::pair<std::string, std::string>> RunConfigFile::entries() const
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, _] : schema())
        out.emplace_back(key, get(key));
    return out;
}

void RunConfigFile::write_echo(std::ostream& os) const
{
    for (const auto& [key, value] : entries())
        os << "# " << key << " = " << value << '\n';
}

void write_config_echo(std::ostream& os, const SolverConfig& c)
{
    RunConfigFile f;
    f.set("s", format_double(c.s));
    f.set("N", std::to_string(c.N));
    f.set("K", std::to_string(c.K));
    f.set("L", format_double(c.L));
    f.set("dt", format_double(c.dt));
    f.set("T", format_double(c.T));
    f.set("mode", c.mode == SolverMode::imex ? "imex" : "picard");
    f.set("picard_tol", format_double(c.picard_tol));
    f.set("picard_max_iters", std::to_string(c.picard_max_iters));
    f.set("snapshot_every", std::to_string(c.snapshot_every));
    f.set("nonlinear", c.nonlinear ? "1" : "0");
    f.set("table_tol", format_double(c.table_tol));
    f.set("out_dir", c.out_dir);
    f.set("initial.epsilon", c.initial_epsilon ? format_double(*c.initial_epsilon) : "none");
    if (std::holds_alternative<ZeroData>(c.initial)) {
        f.set("initial.kind", "zero");
    } else if (const auto* m = std::get_if<SingleMode>(&c.initial)) {
        f.set("initial.kind", "single_mode");
        f.set("initial.n", std::to_string(m->n));
        f.set("initial.j", std::to_string(m->j));
        f.set("initial.amplitude", format_double(m->amplitude.real()));
    } else if (const auto* b = std::get_if<GaussianBump>(&c.initial)) {
        f.set("initial.kind", "gaussian_bump");
        f.set("initial.x_center", format_double(b->x_center));
        f.set("initial.x_width", format_double(b->x_width));
        f.set("initial.profile", join_list(b->hermite_profile));
    } else if (const auto* r = std::get_if<RandomSmooth>(&c.initial)) {
        f.set("initial.kind", "random_smooth");
        f.set("seed", std::to_string(r->seed));
        f.set("initial.decay", format_double(r->decay));
    } else if (const auto* w = std::get_if<WeightedPhase>(&c.initial)) {
        f.set("initial.kind", "weighted_phase");
        f.set("seed", std::to_string(w->seed));
        f.set("initial.rate", format_double(w->rate));
        f.set("initial.exponent", format_double(w->exponent));
    }
    f.write_echo(os);
}

} // namespace kac
