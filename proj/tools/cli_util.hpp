#ifndef TTWLAB_CLI_UTIL_HPP
#define TTWLAB_CLI_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "ttwlab.h"

namespace cli {

// Config or command-line problem: maps to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integration could not complete: maps to exit code 3.
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void check_status(ttw_status status, const std::string& what) {
    if (status == TTW_OK)
        return;
    const std::string msg = what + ": " + ttw_status_name(status) + " (" +
                            ttw_last_error_message() + ")";
    if (status == TTW_ERR_DOMAIN || status == TTW_ERR_INVALID_ARGUMENT ||
        status == TTW_ERR_VARIANT)
        throw ConfigError(msg);
    throw IntegrationError(msg);
}

// 17 significant digits: round-trips any double exactly.
inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Deterministic PRNG: identical streams on every platform, unlike the
// standard distributions.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

inline double wrap_angle(double a) { return std::remainder(a, 2.0 * M_PI); }

inline double state_distance(const double a[4], const double b[4]) {
    const double dr = a[0] - b[0];
    const double dphi = wrap_angle(a[1] - b[1]);
    const double dpr = a[2] - b[2];
    const double dpp = a[3] - b[3];
    return std::sqrt(dr * dr + dphi * dphi + dpr * dpr + dpp * dpp);
}

// RAII for the C handles.
struct ModelHandle {
    ttw_model* ptr = nullptr;
    ModelHandle() = default;
    explicit ModelHandle(ttw_model* p) : ptr(p) {}
    ModelHandle(ModelHandle&& o) noexcept : ptr(o.ptr) { o.ptr = nullptr; }
    ModelHandle& operator=(ModelHandle&& o) noexcept {
        if (this != &o) {
            ttw_model_destroy(ptr);
            ptr = o.ptr;
            o.ptr = nullptr;
        }
        return *this;
    }
    ModelHandle(const ModelHandle&) = delete;
    ModelHandle& operator=(const ModelHandle&) = delete;
    ~ModelHandle() { ttw_model_destroy(ptr); }
    ttw_model* get() const { return ptr; }
};

struct TrajectoryHandle {
    ttw_trajectory* ptr = nullptr;
    TrajectoryHandle() = default;
    explicit TrajectoryHandle(ttw_trajectory* p) : ptr(p) {}
    TrajectoryHandle(TrajectoryHandle&& o) noexcept : ptr(o.ptr) { o.ptr = nullptr; }
    TrajectoryHandle& operator=(TrajectoryHandle&& o) noexcept {
        if (this != &o) {
            ttw_trajectory_destroy(ptr);
            ptr = o.ptr;
            o.ptr = nullptr;
        }
        return *this;
    }
    TrajectoryHandle(const TrajectoryHandle&) = delete;
    TrajectoryHandle& operator=(const TrajectoryHandle&) = delete;
    ~TrajectoryHandle() { ttw_trajectory_destroy(ptr); }
    ttw_trajectory* get() const { return ptr; }
};

} // namespace cli

#endif
