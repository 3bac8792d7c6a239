#pragma once

/**
 * @file common.hpp
 * @brief Error taxonomy, worker-pool helpers and small utilities shared by
 *        every module of the nonlocal Stokes solver.
 */

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nls {

/** @brief Library version, embedded in reports and manifests. */
inline constexpr const char* kVersion = "0.1.0";

/** @brief Base class of all library errors. */
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** @brief Invalid user-facing configuration (bad names, ranges, schema). */
struct ConfigError : Error {
    using Error::Error;
};

/**
 * @brief Violated model assumption detected eagerly (kernel admissibility,
 *        empty clouds, degenerate partitions, non-finite data).
 */
struct ValidationError : Error {
    using Error::Error;
};

/** @brief Linear-solver or eigen-iteration failure, with iterate history. */
struct SolverError : Error {
    std::vector<double> history;  ///< residual or eigenvalue iterates

    explicit SolverError(const std::string& what, std::vector<double> hist = {})
        : Error(what), history(std::move(hist)) {}
};

/**
 * @brief Number of worker threads honoring the NLSTOKES_THREADS cap.
 *
 * Defaults to the hardware concurrency; the environment variable can only
 * lower it. Always at least 1.
 */
std::size_t worker_count();

/**
 * @brief Chunked parallel loop over [0, n).
 *
 * The body receives a half-open index range [begin, end). Ranges are
 * contiguous, disjoint and assigned statically, so writes into per-index
 * slots are race-free and the result is identical for any worker count.
 * Runs inline when a single worker is active.
 */
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/** @brief Format a double with round-trip precision ("%.17g"). */
std::string format_g17(double v);

/** @brief True if every entry is finite (no NaN, no infinity). */
bool all_finite(const double* v, std::size_t n);

}  // namespace nls
