#pragma once

/**
 * @file reports.hpp
 * @brief Report bundle plumbing: payload emitters, SHA-256 manifest, and
 *        the overwrite-guarded output directory.
 *
 * CSV payloads are byte-deterministic for a given config + seed under the
 * direct solver; wall-clock timings live only in JSON metadata.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "nlstokes/analysis/study.hpp"
#include "nlstokes/geometry/cloud.hpp"
#include "nlstokes/system/system.hpp"

namespace nls {

/** @brief SHA-256 of a byte string, lowercase hex. */
std::string sha256_hex(const std::string& data);

/**
 * @brief Collects emitted files and finalizes them into manifest.json.
 *
 * Construction creates the directory (parents included) and refuses to
 * reuse one that already holds a manifest unless force is set.
 */
class OutputDir {
public:
    struct Entry {
        std::string name;
        std::string sha256;
        std::uint64_t bytes = 0;
    };

    OutputDir(std::string path, bool force);

    /** @brief Write a payload file and record its hash. @throws ConfigError on I/O. */
    void write_text(const std::string& name, const std::string& payload);

    /** @brief Write manifest.json listing every emitted file. */
    void write_manifest(const std::string& command);

    const std::string& path() const { return dir_; }
    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::string dir_;
    std::vector<Entry> entries_;
};

/** @brief Solution table: x1..xn, tag, u1..un, p at full precision. */
std::string solution_csv(const PointCloud& cloud, const Solution& sol);

/**
 * @brief Log-log SVG plot of a study: one polyline per error norm plus
 *        slope-1/2 and slope-1 guide lines, decade ticks on both axes.
 *
 * Exactly 3 + 2 polyline elements; ticks and axes are line elements.
 */
std::string study_svg(const StudyReport& rep);

}  // namespace nls
