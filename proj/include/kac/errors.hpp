#pragma once

#include <stdexcept>
#include <string>

namespace kac {

// Result of a ladder composition would exceed the configured Hermite truncation.
class TruncationError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Adaptive quadrature did not reach its tolerance; the message carries the offending index.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Forward exponential weight would overflow a double.
class WeightOverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// Picard differences failed to contract for three consecutive iterations.
class PicardDivergenceError : public std::runtime_error {
public:
    PicardDivergenceError(const std::string& what, int step, double ratio)
        : std::runtime_error(what), step_(step), ratio_(ratio) {}
    int step() const noexcept { return step_; }
    double ratio() const noexcept { return ratio_; }

private:
    int step_;
    double ratio_;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace kac
