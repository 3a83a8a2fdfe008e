#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/pattern.hpp"

namespace bass {

// `.kspd` container: one JSON header line (magic "KSPD1", dims, item count,
// endianness, normalization flag, generator echo) followed by the raw
// payload as little-endian float32 (re, im) pairs ordered
// item -> coil -> frame -> ky -> kx.
struct DatasetFileInfo {
    bool normalized = true;
    // Verbatim JSON echoed into the header's "generator" field; empty means
    // null.
    std::string generator_json;
};

void write_dataset(const std::string& path, const Dataset& dataset,
                   const DatasetFileInfo& info = {});
Dataset read_dataset(const std::string& path);

// `.mask` text format: one JSON header line {nx, ny, nt, M, locked_count},
// then M member indices and locked_count locked indices, ascending, one per
// line. Masks carry no coil count; readers attach the one they need.
void write_mask(const std::string& path, const SamplingPattern& pattern);
SamplingPattern read_mask(const std::string& path, int nc = 1);

// Binary PGM rendering, one file per frame named <prefix>_f<t>.pgm:
// 0 = unsampled, 128 = sampled, 255 = locked. Returns the written paths.
std::vector<std::string> write_mask_pgm(const std::string& prefix,
                                        const SamplingPattern& pattern);
// Rebuilds a pattern from per-frame PGM renderings (inverse of
// write_mask_pgm for the pixel values above).
SamplingPattern read_mask_pgm(const std::vector<std::string>& frame_paths, int nc = 1);

// Importance-map serialization: "index,value" CSV rows with a header line.
// Values round-trip exactly.
void write_map_csv(const std::string& path, std::span<const double> map);
std::vector<double> read_map_csv(const std::string& path);

// Log-scaled 8-bit rendering (brighter = higher, 8 decades of dynamic
// range), one PGM per frame as with write_mask_pgm.
std::vector<std::string> write_map_pgm(const std::string& prefix, std::span<const double> map,
                                       const KSpaceGrid& grid);

}  // namespace bass
