#include "kac/spectral_state.hpp"

#include "kac/coefficients.hpp"
#include "kac/errors.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kac {

SpectralState::SpectralState(int N, int K, double L, double time) : N_(N), K_(K), L_(L), time_(time)
{
    if (N < 1 || K < 0)
        throw std::invalid_argument("SpectralState: need N >= 1 and K >= 0");
    if (!(L > 0.0))
        throw std::invalid_argument("SpectralState: domain length must be positive");
    data_.assign(static_cast<std::size_t>(N) * static_cast<std::size_t>(2 * K + 1), 0.0);
}

double SpectralState::xi(int j) const { return 2.0 * std::numbers::pi * j / L_; }

double SpectralState::bracket_xi(int j) const
{
    const double x = xi(j);
    return std::sqrt(1.0 + x * x);
}

bool SpectralState::same_shape(const SpectralState& o) const
{
    return N_ == o.N_ && K_ == o.K_ && L_ == o.L_;
}

bool SpectralState::is_real(double tol) const
{
    for (int n = 0; n < N_; ++n)
        for (int j = 0; j <= K_; ++j)
            if (std::abs(at(n, -j) - std::conj(at(n, j))) > tol)
                return false;
    return true;
}

SpectralState& SpectralState::operator+=(const SpectralState& o)
{
    if (!same_shape(o))
        throw std::invalid_argument("SpectralState: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += o.data_[i];
    return *this;
}

SpectralState& SpectralState::operator-=(const SpectralState& o)
{
    if (!same_shape(o))
        throw std::invalid_argument("SpectralState: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= o.data_[i];
    return *this;
}

SpectralState& SpectralState::operator*=(double a)
{
    for (auto& c : data_)
        c *= a;
    return *this;
}

SpectralState& SpectralState::operator*=(complex a)
{
    for (auto& c : data_)
        c *= a;
    return *this;
}

SpectralState SpectralState::zeros_like() const { return SpectralState(N_, K_, L_, time_); }

SpectralState SpectralState::resized(int N, int K) const
{
    SpectralState out(N, K, L_, time_);
    for (int n = 0; n < std::min(N, N_); ++n)
        for (int j = -std::min(K, K_); j <= std::min(K, K_); ++j)
            out.at(n, j) = at(n, j);
    return out;
}

namespace {

double weighted_sum(const SpectralState& state, double s, bool hermite_weight)
{
    double sum = 0.0;
    for (int n = 0; n < state.N(); ++n) {
        const double hw = hermite_weight ? std::pow(n + 0.5, s) : 1.0;
        for (int j = -state.K(); j <= state.K(); ++j) {
            const double b = state.bracket_xi(j);
            sum += hw * b * b * std::norm(state.at(n, j));
        }
    }
    return sum;
}

} // namespace

double norm(const SpectralState& state, NormKind kind, double s)
{
    switch (kind.tag) {
    case NormKind::Tag::L2: {
        double sum = 0.0;
        for (const auto& c : state.data())
            sum += std::norm(c);
        return std::sqrt(sum);
    }
    case NormKind::Tag::H10:
        return std::sqrt(weighted_sum(state, s, false));
    case NormKind::Tag::Hs2_weighted_10:
        return std::sqrt(weighted_sum(state, s, true));
    case NormKind::Tag::GS_weighted:
        return std::sqrt(
            weighted_sum(apply_weight(state, kind.t, kind.delta1, s, WeightDirection::forward), s, false));
    }
    throw std::invalid_argument("norm: unknown kind");
}

complex inner_10(const SpectralState& a, const SpectralState& b)
{
    if (!a.same_shape(b))
        throw std::invalid_argument("inner_10: shape mismatch");
    complex sum = 0.0;
    for (int n = 0; n < a.N(); ++n)
        for (int j = -a.K(); j <= a.K(); ++j) {
            const double w = a.bracket_xi(j);
            sum += w * w * a.at(n, j) * std::conj(b.at(n, j));
        }
    return sum;
}

double weight_exponent(int n, double bracket_xi, double t, double s)
{
    return t * std::pow(std::sqrt(n + 0.5) + bracket_xi, 2.0 * s / (2.0 * s + 1.0));
}

SpectralState apply_weight(const SpectralState& state, double t, double delta1, double s, WeightDirection dir)
{
    if (t < 0.0)
        throw std::invalid_argument("apply_weight: t must be >= 0");
    if (delta1 < 0.0 || delta1 > 1.0)
        throw std::invalid_argument("apply_weight: delta1 must lie in [0, 1]");
    SpectralState out = state;
    for (int n = 0; n < state.N(); ++n)
        for (int j = -state.K(); j <= state.K(); ++j) {
            const double e = weight_exponent(n, state.bracket_xi(j), t, s);
            // exp(E) / (1 + delta1 exp(E)) = 1 / (exp(-E) + delta1)
            const double inverse = std::exp(-e) + delta1;
            if (dir == WeightDirection::forward) {
                if (delta1 == 0.0 && e > 700.0)
                    throw WeightOverflowError("apply_weight: exponent " + format_double(e) + " at (n=" +
                                              std::to_string(n) + ", j=" + std::to_string(j) +
                                              ", t=" + format_double(t) + ") overflows");
                out.at(n, j) /= inverse;
            } else {
                out.at(n, j) *= inverse;
            }
        }
    return out;
}

namespace {

struct InitBuilder {
    int N, K;
    double L;

    SpectralState operator()(const ZeroData&) const { return SpectralState(N, K, L); }

    SpectralState operator()(const SingleMode& m) const
    {
        if (m.n < 0 || m.n >= N || std::abs(m.j) > K)
            throw std::invalid_argument("init_state: single mode outside truncation");
        SpectralState st(N, K, L);
        if (m.j == 0) {
            st.at(m.n, 0) = m.amplitude.real();
        } else {
            st.at(m.n, m.j) = m.amplitude;
            st.at(m.n, -m.j) = std::conj(m.amplitude);
        }
        return st;
    }

    SpectralState operator()(const GaussianBump& b) const
    {
        if (!(b.x_width > 0.0))
            throw std::invalid_argument("init_state: gaussian width must be positive");
        SpectralState st(N, K, L);
        const double amp = std::sqrt(2.0 * std::numbers::pi / L) * b.x_width;
        for (int n = 0; n < std::min<int>(N, static_cast<int>(b.hermite_profile.size())); ++n)
            for (int j = -K; j <= K; ++j) {
                const double xi = st.xi(j);
                const double env = amp * std::exp(-0.5 * xi * xi * b.x_width * b.x_width);
                st.at(n, j) = b.hermite_profile[n] * env * std::polar(1.0, -xi * b.x_center);
            }
        // exact conjugate symmetry
        for (int n = 0; n < N; ++n) {
            st.at(n, 0) = st.at(n, 0).real();
            for (int j = 1; j <= K; ++j)
                st.at(n, -j) = std::conj(st.at(n, j));
        }
        return st;
    }

    SpectralState operator()(const RandomSmooth& r) const
    {
        SpectralState st(N, K, L);
        std::mt19937_64 rng(r.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int n = 0; n < N; ++n)
            for (int j = 0; j <= K; ++j) {
                const double damp = std::exp(-r.decay * (n + j));
                const double re = gauss(rng);
                const double im = gauss(rng);
                if (j == 0) {
                    st.at(n, 0) = damp * std::copysign(std::hypot(re, im), re);
                } else {
                    st.at(n, j) = damp * complex(re, im);
                    st.at(n, -j) = std::conj(st.at(n, j));
                }
            }
        return st;
    }

    SpectralState operator()(const WeightedPhase& w) const
    {
        SpectralState st(N, K, L);
        std::mt19937_64 rng(w.seed);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        for (int n = 0; n < N; ++n)
            for (int j = 0; j <= K; ++j) {
                const double mod = std::exp(-w.rate * std::pow(std::sqrt(n + 0.5) + st.bracket_xi(j), w.exponent));
                const double a = phase(rng);
                if (j == 0) {
                    st.at(n, 0) = std::cos(a) < 0.0 ? -mod : mod;
                } else {
                    st.at(n, j) = std::polar(mod, a);
                    st.at(n, -j) = std::conj(st.at(n, j));
                }
            }
        return st;
    }
};

} // namespace

SpectralState init_state(const InitialData& spec, int N, int K, double L, std::optional<double> epsilon)
{
    SpectralState st = std::visit(InitBuilder{N, K, L}, spec);
    if (epsilon) {
        if (*epsilon < 0.0)
            throw std::invalid_argument("init_state: requested norm must be >= 0");
        const double current = norm(st, NormKind::h10(), 0.0);
        if (*epsilon == 0.0) {
            st *= 0.0;
        } else {
            if (current == 0.0)
                throw std::invalid_argument("init_state: descriptor yields the zero state; norm " +
                                            format_double(*epsilon) + " unreachable");
            st *= *epsilon / current;
        }
    }
    return st;
}

void write_snapshot(std::ostream& os, const SpectralState& state, double s, const std::string& echo)
{
    os << "# kac-state v1, N=" << state.N() << ", K=" << state.K() << ", L=" << format_double(state.L())
       << ", time=" << format_double(state.time()) << ", s=" << format_double(s) << "\n";
    os << echo;
    os << "n,j,re,im\n";
    for (int n = 0; n < state.N(); ++n)
        for (int j = -state.K(); j <= state.K(); ++j) {
            const auto c = state.at(n, j);
            os << n << ',' << j << ',' << format_double(c.real()) << ',' << format_double(c.imag()) << '\n';
        }
}

namespace {

double header_value(const std::string& header, const std::string& key)
{
    const auto pos = header.find(key + "=");
    if (pos == std::string::npos)
        throw std::runtime_error("read_snapshot: header lacks " + key);
    return parse_double(header.substr(pos + key.size() + 1));
}

} // namespace

SpectralState read_snapshot(std::istream& is, double* s_out)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("# kac-state v1", 0) != 0)
        throw std::runtime_error("read_snapshot: missing '# kac-state v1' header");
    const int N = static_cast<int>(header_value(line, "N"));
    const int K = static_cast<int>(header_value(line, "K"));
    SpectralState st(N, K, header_value(line, "L"), header_value(line, "time"));
    if (s_out)
        *s_out = header_value(line, "s");
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("n,", 0) == 0)
            continue;
        std::istringstream row(line);
        std::string ns, js, re, im;
        if (!std::getline(row, ns, ',') || !std::getline(row, js, ',') || !std::getline(row, re, ',') ||
            !std::getline(row, im))
            throw std::runtime_error("read_snapshot: malformed row '" + line + "'");
        const int n = std::stoi(ns), j = std::stoi(js);
        if (n < 0 || n >= N || std::abs(j) > K)
            throw std::runtime_error("read_snapshot: index outside truncation in '" + line + "'");
        st.at(n, j) = complex(parse_double(re), parse_double(im));
    }
    return st;
}

} // namespace kac
