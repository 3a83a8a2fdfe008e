#pragma once

// Small shared fixtures for the test binaries.

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/pattern.hpp"
#include "core/rng.hpp"
#include "core/volume.hpp"

namespace bass::testing {

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0;; ++i) {
            path_ = base / (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(i));
            std::error_code ec;
            if (std::filesystem::create_directory(path_, ec)) break;
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

inline std::vector<cplx> random_values(std::int64_t count, Rng& rng) {
    std::vector<cplx> v(static_cast<std::size_t>(count));
    for (auto& z : v) z = cplx(normal01(rng), normal01(rng));
    return v;
}

inline MultiCoilKSpace random_kspace(const KSpaceGrid& grid, Rng& rng) {
    return MultiCoilKSpace(grid, random_values(grid.num_points() * grid.nc(), rng));
}

inline Dataset random_dataset(const KSpaceGrid& grid, int items, std::uint64_t seed) {
    std::vector<MultiCoilKSpace> out;
    for (int i = 0; i < items; ++i) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
        out.push_back(random_kspace(grid, rng));
    }
    return Dataset(std::move(out));
}

inline ImageVolume random_image(int nx, int ny, int nt, std::uint64_t seed) {
    Rng rng = make_rng(seed, 0);
    return ImageVolume(nx, ny, nt, random_values(static_cast<std::int64_t>(nx) * ny * nt, rng));
}

// Uniform-random pattern of the given size containing `locked`.
inline SamplingPattern random_pattern(const KSpaceGrid& grid, std::int64_t size,
                                      std::vector<std::int64_t> locked, Rng& rng) {
    std::sort(locked.begin(), locked.end());
    std::vector<std::int64_t> members = locked;
    std::vector<std::int64_t> pool;
    for (std::int64_t k = 0; k < grid.num_points(); ++k) {
        if (!std::binary_search(locked.begin(), locked.end(), k)) pool.push_back(k);
    }
    for (std::int64_t want = size - static_cast<std::int64_t>(locked.size()); want > 0; --want) {
        const std::size_t j = uniform_index(rng, pool.size());
        members.push_back(pool[j]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
    }
    std::sort(members.begin(), members.end());
    return SamplingPattern(grid, std::move(members), std::move(locked));
}

inline std::string read_file(const std::string& path) {
    std::string out;
    if (auto f = std::fopen(path.c_str(), "rb")) {
        char buf[4096];
        std::size_t got;
        while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, got);
        std::fclose(f);
    }
    return out;
}

}  // namespace bass::testing
