#pragma once

// Shared error type, constants and small numeric helpers used across the
// mimosar core modules.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace msar {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Exact vacuum value; configs may override (the paper's resolution numbers
// reproduce with c = 3e8).
inline constexpr double kSpeedOfLight = 299792458.0;

enum class ErrorKind : int {
    runtime = 1,
    config = 2,
    calibration = 3,
    analysis = 4,
    domain = 5,
    io = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_config(const std::string& msg) { throw Error(ErrorKind::config, msg); }
[[noreturn]] inline void throw_domain(const std::string& msg) { throw Error(ErrorKind::domain, msg); }
[[noreturn]] inline void throw_calibration(const std::string& msg) { throw Error(ErrorKind::calibration, msg); }
[[noreturn]] inline void throw_analysis(const std::string& msg) { throw Error(ErrorKind::analysis, msg); }
[[noreturn]] inline void throw_io(const std::string& msg) { throw Error(ErrorKind::io, msg); }
[[noreturn]] inline void throw_runtime(const std::string& msg) { throw Error(ErrorKind::runtime, msg); }

// FNV-1a, used for the config hashes embedded in the binary file headers.
class Fnv1a {
public:
    void update(const void* data, size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ull;
        }
    }
    void update_f64(double v) { update(&v, sizeof v); }
    void update_u64(uint64_t v) { update(&v, sizeof v); }
    void update_str(const std::string& s) { update(s.data(), s.size()); }
    uint64_t digest() const { return state_; }

private:
    uint64_t state_ = 0xcbf29ce484222325ull;
};

// Counter-based generator: output depends only on (seed, index), so seeded
// noise stays deterministic under any parallel schedule.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline double uniform01(uint64_t seed, uint64_t index, uint64_t stream) {
    uint64_t h = splitmix64(seed ^ splitmix64(index ^ splitmix64(stream)));
    return (h >> 11) * 0x1.0p-53;  // [0, 1)
}

// Standard-normal pair via Box-Muller on counter-based uniforms.
inline std::pair<double, double> gaussian_pair(uint64_t seed, uint64_t index, uint64_t stream) {
    double u1 = uniform01(seed, index, stream * 2 + 1);
    double u2 = uniform01(seed, index, stream * 2 + 2);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

inline bool nearly_equal(double a, double b, double rel_tol, double abs_tol = 0.0) {
    double diff = std::abs(a - b);
    return diff <= abs_tol || diff <= rel_tol * std::max(std::abs(a), std::abs(b));
}

inline double db20(double amplitude) {
    return 20.0 * std::log10(std::max(amplitude, 1e-300));
}

}  // namespace msar
