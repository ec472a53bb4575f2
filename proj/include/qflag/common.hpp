#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace qflag {

constexpr const char* QFLAG_VERSION = "0.1.0";
constexpr const char* QFLAG_RNG_NAME = "mt19937_64";

using vertex_t = std::int32_t;
using index_t = std::int64_t;

constexpr vertex_t NO_VERTEX = -1;

/// Malformed input text (bad edge-list line, unreadable file).
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A precondition on values/arguments was violated (out-of-range q, loops, ...).
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numeric routine failed to meet its tolerance (singular solve, no convergence).
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

/**
 * Seedable RNG wrapper. The generator is std::mt19937_64 (standardized output
 * sequence) and the bounded/unit draws below avoid std::uniform_*_distribution,
 * whose output differs between standard libraries. Same seed, same stream,
 * on every platform.
 */
class rng_t {
public:
    explicit rng_t(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform integer in [0, n). Rejection sampling, exact.
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0) throw domain_error("rng: bounded(0)");
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
        std::uint64_t x = gen_();
        while (x >= limit) x = gen_();
        return x % n;
    }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double unit() { return static_cast<double>(gen_() >> 11) * (1.0 / 9007199254740992.0); }

private:
    std::mt19937_64 gen_;
};

/// Stream seed for an independent trial: documented derivation seed + index.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return seed + trial;
}

} // namespace qflag
