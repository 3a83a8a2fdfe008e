#pragma once

#include <cstdint>
#include <vector>

#include "core/dataset.hpp"
#include "core/rng.hpp"
#include "recon/encoding.hpp"

namespace bass {

// Synthetic multi-coil phantom: random ellipses with per-ellipse complex
// intensity and (for nt > 1) per-ellipse exponential decay over the frame
// time stamps, encoded to k-space with simulated sensitivities, plus
// complex Gaussian k-space noise. Values are quantized to float32 at
// generation so in-memory data round-trips bit-exactly through dataset
// files.
struct PhantomConfig {
    int nx = 64;
    int ny = 64;
    int nt = 1;
    int nc = 1;
    int num_items = 1;
    int min_ellipses = 3;
    int max_ellipses = 6;
    // Semi-axes relative to min(nx, ny).
    double min_radius = 0.08;
    double max_radius = 0.35;
    double min_intensity = 0.3;
    double max_intensity = 1.0;
    // Ellipse centers scatter around the image center by up to this fraction
    // of the image size.
    double jitter = 0.2;
    double sensitivity_smoothness = 0.45;
    // One time stamp (ms) per frame; empty means 0, 25, 50, ...
    std::vector<double> frame_times;
    double decay_min_ms = 40.0;
    double decay_max_ms = 200.0;
    // Complex noise standard deviation relative to the item's k-space peak.
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

// nc smooth complex coil profiles: Gaussian lobes at angularly equispaced
// border positions with per-coil phase ramps, normalized so the coil sum of
// squares is 1 at every pixel (nc=1 therefore gives C == 1).
CoilSensitivities simulate_sensitivities(int nx, int ny, int nc, double smoothness, Rng& rng);

struct PhantomOutput {
    Dataset dataset;
    CoilSensitivities sens;
    std::vector<ImageVolume> ground_truth;
    std::vector<double> frame_times;
};

// Pure function of the config (items draw from per-item RNG streams, so the
// result does not depend on scheduling).
PhantomOutput generate_phantom_dataset(const PhantomConfig& config);

}  // namespace bass
