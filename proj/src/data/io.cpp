#include "data/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace bass {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_data_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_data_error("cannot open for reading: " + path);
    return in;
}

json parse_header_line(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw_data_error("unrecognized format: empty file " + path);
    json h = json::parse(line, nullptr, false);
    if (h.is_discarded() || !h.is_object()) {
        throw_data_error("unrecognized format: bad header in " + path);
    }
    return h;
}

int header_int(const json& h, const char* key, const std::string& path) {
    if (!h.contains(key) || !h[key].is_number_integer()) {
        throw_data_error("unrecognized format: missing '" + std::string(key) + "' in " + path);
    }
    return h[key].get<int>();
}

}  // namespace

void write_dataset(const std::string& path, const Dataset& dataset,
                   const DatasetFileInfo& info) {
    const KSpaceGrid& g = dataset.grid();
    json h;
    h["magic"] = "KSPD1";
    h["nx"] = g.nx();
    h["ny"] = g.ny();
    h["nt"] = g.nt();
    h["nc"] = g.nc();
    h["n_items"] = dataset.size();
    h["endianness"] = "little";
    h["normalized"] = info.normalized;
    if (info.generator_json.empty()) {
        h["generator"] = nullptr;
    } else {
        json echo = json::parse(info.generator_json, nullptr, false);
        h["generator"] = echo.is_discarded() ? json(info.generator_json) : echo;
    }

    auto out = open_out(path);
    out << h.dump() << '\n';
    std::vector<float> row;
    for (int i = 0; i < dataset.size(); ++i) {
        const auto values = dataset.item(i).values();
        row.resize(values.size() * 2);
        for (std::size_t j = 0; j < values.size(); ++j) {
            row[2 * j] = static_cast<float>(values[j].real());
            row[2 * j + 1] = static_cast<float>(values[j].imag());
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!out) throw_data_error("failed writing dataset file: " + path);
}

Dataset read_dataset(const std::string& path) {
    auto in = open_in(path);
    const json h = parse_header_line(in, path);
    if (!h.contains("magic") || h["magic"] != "KSPD1") {
        throw_data_error("unrecognized format: bad magic in " + path);
    }
    const int nx = header_int(h, "nx", path);
    const int ny = header_int(h, "ny", path);
    const int nt = header_int(h, "nt", path);
    const int nc = header_int(h, "nc", path);
    const int n_items = header_int(h, "n_items", path);
    if (nx < 1 || ny < 1 || nt < 1 || nc < 1 || n_items < 1) {
        throw_data_error("dataset header has non-positive dims in " + path);
    }
    if (h.contains("endianness") && h["endianness"] != "little") {
        throw_data_error("unsupported endianness in " + path);
    }
    const std::int64_t per_item = static_cast<std::int64_t>(nx) * ny * nt * nc;
    if (per_item > (std::int64_t{1} << 40) / std::max(1, n_items)) {
        throw_data_error("dataset dims overflow a sane payload size in " + path);
    }
    const std::int64_t expected_floats = per_item * n_items * 2;
    const std::int64_t expected_bytes = expected_floats * static_cast<std::int64_t>(sizeof(float));

    std::vector<float> payload(static_cast<std::size_t>(expected_floats));
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(expected_bytes));
    const std::int64_t got = in.gcount();
    if (got != expected_bytes) {
        throw_data_error("truncated payload in " + path + ": expected " +
                         std::to_string(expected_bytes) + " bytes, got " + std::to_string(got));
    }
    char extra;
    if (in.read(&extra, 1)) {
        throw_data_error("trailing bytes after payload in " + path);
    }

    const KSpaceGrid grid(nx, ny, nt, nc);
    std::vector<MultiCoilKSpace> items;
    items.reserve(static_cast<std::size_t>(n_items));
    for (int i = 0; i < n_items; ++i) {
        std::vector<cplx> values(static_cast<std::size_t>(per_item));
        const std::size_t base = static_cast<std::size_t>(i) * per_item * 2;
        for (std::int64_t j = 0; j < per_item; ++j) {
            values[static_cast<std::size_t>(j)] =
                cplx(payload[base + 2 * static_cast<std::size_t>(j)],
                     payload[base + 2 * static_cast<std::size_t>(j) + 1]);
        }
        items.emplace_back(grid, std::move(values));
    }
    return Dataset(std::move(items));
}

void write_mask(const std::string& path, const SamplingPattern& pattern) {
    json h;
    h["nx"] = pattern.grid().nx();
    h["ny"] = pattern.grid().ny();
    h["nt"] = pattern.grid().nt();
    h["M"] = pattern.size();
    h["locked_count"] = pattern.locked_count();
    auto out = open_out(path);
    out << h.dump() << '\n';
    for (std::int64_t k : pattern.members()) out << k << '\n';
    for (std::int64_t k : pattern.locked()) out << k << '\n';
    if (!out) throw_data_error("failed writing mask file: " + path);
}

SamplingPattern read_mask(const std::string& path, int nc) {
    auto in = open_in(path);
    const json h = parse_header_line(in, path);
    const int nx = header_int(h, "nx", path);
    const int ny = header_int(h, "ny", path);
    const int nt = header_int(h, "nt", path);
    const std::int64_t m = header_int(h, "M", path);
    const std::int64_t locked_count = header_int(h, "locked_count", path);
    if (m < 0 || locked_count < 0) throw_data_error("negative counts in mask " + path);
    const KSpaceGrid grid(nx, ny, nt, nc);
    auto read_indices = [&](std::int64_t count, const char* what) {
        std::vector<std::int64_t> out;
        out.reserve(static_cast<std::size_t>(count));
        std::string line;
        for (std::int64_t i = 0; i < count; ++i) {
            if (!std::getline(in, line)) {
                throw_data_error("mask " + path + " ends before all " + what + " indices");
            }
            try {
                out.push_back(std::stoll(line));
            } catch (const std::exception&) {
                throw_data_error("bad index line '" + line + "' in mask " + path);
            }
        }
        return out;
    };
    auto members = read_indices(m, "member");
    auto locked = read_indices(locked_count, "locked");
    return SamplingPattern(grid, std::move(members), std::move(locked));
}

namespace {

std::vector<std::string> write_pgm_frames(const std::string& prefix, const KSpaceGrid& grid,
                                          const std::function<unsigned char(std::int64_t)>& pixel) {
    std::vector<std::string> paths;
    for (int t = 0; t < grid.nt(); ++t) {
        const std::string path = prefix + "_f" + std::to_string(t) + ".pgm";
        auto out = open_out(path);
        out << "P5\n" << grid.nx() << " " << grid.ny() << "\n255\n";
        for (int y = 0; y < grid.ny(); ++y) {
            for (int x = 0; x < grid.nx(); ++x) {
                const unsigned char v = pixel(grid.index_of(x, y, t));
                out.write(reinterpret_cast<const char*>(&v), 1);
            }
        }
        if (!out) throw_data_error("failed writing pgm file: " + path);
        paths.push_back(path);
    }
    return paths;
}

}  // namespace

std::vector<std::string> write_mask_pgm(const std::string& prefix,
                                        const SamplingPattern& pattern) {
    return write_pgm_frames(prefix, pattern.grid(), [&](std::int64_t k) -> unsigned char {
        if (pattern.is_locked(k)) return 255;
        return pattern.contains(k) ? 128 : 0;
    });
}

SamplingPattern read_mask_pgm(const std::vector<std::string>& frame_paths, int nc) {
    if (frame_paths.empty()) throw_data_error("no pgm frames given");
    std::vector<std::int64_t> members;
    std::vector<std::int64_t> locked;
    int nx = 0, ny = 0;
    for (std::size_t t = 0; t < frame_paths.size(); ++t) {
        auto in = open_in(frame_paths[t]);
        std::string magic;
        int w = 0, h = 0, maxval = 0;
        in >> magic >> w >> h >> maxval;
        if (magic != "P5" || maxval != 255 || w < 1 || h < 1) {
            throw_data_error("unrecognized format: " + frame_paths[t] + " is not a P5 pgm");
        }
        if (t == 0) {
            nx = w;
            ny = h;
        } else if (w != nx || h != ny) {
            throw_data_error("pgm frame sizes differ");
        }
        in.get();
        std::vector<unsigned char> pixels(static_cast<std::size_t>(w) * h);
        in.read(reinterpret_cast<char*>(pixels.data()),
                static_cast<std::streamsize>(pixels.size()));
        if (in.gcount() != static_cast<std::streamsize>(pixels.size())) {
            throw_data_error("truncated payload in " + frame_paths[t]);
        }
        for (std::size_t p = 0; p < pixels.size(); ++p) {
            const std::int64_t k = static_cast<std::int64_t>(t) * w * h +
                                   static_cast<std::int64_t>(p);
            if (pixels[p] == 255) {
                members.push_back(k);
                locked.push_back(k);
            } else if (pixels[p] == 128) {
                members.push_back(k);
            } else if (pixels[p] != 0) {
                throw_data_error("unexpected pixel value " + std::to_string(pixels[p]) + " in " +
                                 frame_paths[t]);
            }
        }
    }
    const KSpaceGrid grid(nx, ny, static_cast<int>(frame_paths.size()), nc);
    return SamplingPattern(grid, std::move(members), std::move(locked));
}

void write_map_csv(const std::string& path, std::span<const double> map) {
    auto out = open_out(path);
    out << "index,value\n";
    char buf[48];
    for (std::size_t i = 0; i < map.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, map[i]);
        out << buf;
    }
    if (!out) throw_data_error("failed writing map file: " + path);
}

std::vector<double> read_map_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != "index,value") {
        throw_data_error("unrecognized format: bad map header in " + path);
    }
    std::vector<double> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw_data_error("bad map row in " + path);
        out.push_back(std::strtod(line.c_str() + comma + 1, nullptr));
    }
    return out;
}

std::vector<std::string> write_map_pgm(const std::string& prefix, std::span<const double> map,
                                       const KSpaceGrid& grid) {
    if (static_cast<std::int64_t>(map.size()) != grid.num_points()) {
        throw_data_error("map length does not match grid");
    }
    double peak = 0.0;
    for (double v : map) peak = std::max(peak, v);
    return write_pgm_frames(prefix, grid, [&](std::int64_t k) -> unsigned char {
        const double v = map[static_cast<std::size_t>(k)];
        if (peak <= 0.0 || v <= 0.0) return 0;
        // 8 decades below the peak map to black.
        const double rel = 1.0 + std::log10(v / peak) / 8.0;
        const double clamped = std::clamp(rel, 0.0, 1.0);
        return static_cast<unsigned char>(std::lround(255.0 * clamped));
    });
}

}  // namespace bass
