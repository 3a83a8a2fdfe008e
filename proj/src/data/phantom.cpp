#include "data/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "core/errors.hpp"
#include "core/ops.hpp"
#include "core/parallel.hpp"

namespace bass {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate(const PhantomConfig& c) {
    if (c.nx < 4 || c.ny < 4) throw_spec_error("phantom needs nx and ny >= 4");
    if (c.nt < 1 || c.nc < 1) throw_spec_error("phantom needs nt and nc >= 1");
    if (c.num_items < 1) throw_spec_error("phantom needs at least one item");
    if (c.min_ellipses < 1 || c.max_ellipses < c.min_ellipses) {
        throw_spec_error("phantom ellipse count range is invalid");
    }
    if (!(c.min_radius > 0.0 && c.max_radius >= c.min_radius)) {
        throw_spec_error("phantom radius range is invalid");
    }
    if (!(c.min_intensity > 0.0 && c.max_intensity >= c.min_intensity)) {
        throw_spec_error("phantom intensity range is invalid");
    }
    if (c.jitter < 0.0) throw_spec_error("phantom jitter must be >= 0");
    if (!(c.sensitivity_smoothness > 0.0)) {
        throw_spec_error("sensitivity smoothness must be > 0");
    }
    if (!c.frame_times.empty() && static_cast<int>(c.frame_times.size()) != c.nt) {
        throw_spec_error("frame_times must list one time stamp per frame");
    }
    for (double t : c.frame_times) {
        if (!(std::isfinite(t) && t >= 0.0)) throw_spec_error("frame times must be >= 0");
    }
    if (!(c.decay_min_ms > 0.0 && c.decay_max_ms >= c.decay_min_ms)) {
        throw_spec_error("decay constant range must be positive");
    }
    if (c.noise_sigma < 0.0) throw_spec_error("noise sigma must be >= 0");
}

struct Ellipse {
    double cx, cy, a, b, phi;
    cplx amplitude;
    double decay_ms;
};

ImageVolume rasterize(const std::vector<Ellipse>& ellipses, int nx, int ny,
                      const std::vector<double>& times) {
    const int nt = static_cast<int>(times.size());
    ImageVolume img = ImageVolume::zeros(nx, ny, nt);
    for (const Ellipse& e : ellipses) {
        const double cphi = std::cos(e.phi);
        const double sphi = std::sin(e.phi);
        for (int t = 0; t < nt; ++t) {
            const cplx v = e.amplitude * std::exp(-times[static_cast<std::size_t>(t)] / e.decay_ms);
            auto frame = img.mutable_frame(t);
            for (int y = 0; y < ny; ++y) {
                for (int x = 0; x < nx; ++x) {
                    const double dx = x - e.cx;
                    const double dy = y - e.cy;
                    const double u = (dx * cphi + dy * sphi) / e.a;
                    const double w = (-dx * sphi + dy * cphi) / e.b;
                    if (u * u + w * w <= 1.0) {
                        frame[static_cast<std::size_t>(y) * nx + x] += v;
                    }
                }
            }
        }
    }
    return img;
}

cplx quantize(cplx z) {
    return cplx(static_cast<float>(z.real()), static_cast<float>(z.imag()));
}

}  // namespace

CoilSensitivities simulate_sensitivities(int nx, int ny, int nc, double smoothness, Rng& rng) {
    if (nc < 1) throw_spec_error("coil count must be >= 1");
    const double span = std::min(nx, ny);
    const double width = smoothness * span;
    const double lobe_r = 0.6 * span;
    std::vector<cplx> values(static_cast<std::size_t>(nx) * ny * nc);
    for (int c = 0; c < nc; ++c) {
        const double angle = 2.0 * kPi * c / nc + 0.1 * uniform_range(rng, -1.0, 1.0);
        const double px = 0.5 * (nx - 1) + lobe_r * std::cos(angle);
        const double py = 0.5 * (ny - 1) + lobe_r * std::sin(angle);
        const double ramp = 0.5 * c / nc;
        for (int y = 0; y < ny; ++y) {
            for (int x = 0; x < nx; ++x) {
                const double d2 = (x - px) * (x - px) + (y - py) * (y - py);
                const double mag = 0.05 + std::exp(-d2 / (2.0 * width * width));
                const double phase = 2.0 * kPi * ramp *
                                     (std::cos(angle) * x / nx + std::sin(angle) * y / ny);
                values[static_cast<std::size_t>(c) * nx * ny +
                       static_cast<std::size_t>(y) * nx + x] =
                    mag * cplx(std::cos(phase), std::sin(phase));
            }
        }
    }
    // Per-pixel sum-of-squares normalization.
    const std::int64_t np = static_cast<std::int64_t>(nx) * ny;
    for (std::int64_t p = 0; p < np; ++p) {
        double s = 0.0;
        for (int c = 0; c < nc; ++c) {
            s += std::norm(values[static_cast<std::size_t>(c) * np + p]);
        }
        const double inv = 1.0 / std::sqrt(s);
        for (int c = 0; c < nc; ++c) {
            values[static_cast<std::size_t>(c) * np + p] *= inv;
        }
    }
    return CoilSensitivities(nx, ny, nc, std::move(values));
}

PhantomOutput generate_phantom_dataset(const PhantomConfig& config) {
    validate(config);
    std::vector<double> times = config.frame_times;
    if (times.empty()) {
        for (int t = 0; t < config.nt; ++t) times.push_back(25.0 * t);
    }

    Rng sens_rng = make_rng(config.seed, 0);
    CoilSensitivities sens =
        simulate_sensitivities(config.nx, config.ny, config.nc, config.sensitivity_smoothness,
                               sens_rng);

    const double span = std::min(config.nx, config.ny);
    std::vector<std::optional<MultiCoilKSpace>> items(
        static_cast<std::size_t>(config.num_items));
    std::vector<std::optional<ImageVolume>> truths(static_cast<std::size_t>(config.num_items));

    parallel_for_items(config.num_items, 0, [&](int i) {
        Rng rng = make_rng(config.seed, static_cast<std::uint64_t>(i) + 1);
        const int count = config.min_ellipses +
                          static_cast<int>(uniform_index(
                              rng, static_cast<std::uint64_t>(config.max_ellipses -
                                                              config.min_ellipses + 1)));
        std::vector<Ellipse> ellipses;
        ellipses.reserve(static_cast<std::size_t>(count));
        for (int e = 0; e < count; ++e) {
            Ellipse el;
            el.cx = 0.5 * (config.nx - 1) +
                    config.jitter * config.nx * uniform_range(rng, -1.0, 1.0);
            el.cy = 0.5 * (config.ny - 1) +
                    config.jitter * config.ny * uniform_range(rng, -1.0, 1.0);
            el.a = span * uniform_range(rng, config.min_radius, config.max_radius);
            el.b = span * uniform_range(rng, config.min_radius, config.max_radius);
            el.phi = uniform_range(rng, 0.0, kPi);
            const double amp = uniform_range(rng, config.min_intensity, config.max_intensity);
            const double theta = uniform_range(rng, 0.0, 2.0 * kPi);
            el.amplitude = amp * cplx(std::cos(theta), std::sin(theta));
            el.decay_ms = uniform_range(rng, config.decay_min_ms, config.decay_max_ms);
            ellipses.push_back(el);
        }
        ImageVolume truth = rasterize(ellipses, config.nx, config.ny, times);
        if (truth.squared_norm() == 0.0) {
            // Degenerate draw (all ellipses missed the pixel grid); keep the
            // item nonzero so normalization stays well defined.
            truth.mutable_frame(0)[static_cast<std::size_t>(config.ny / 2) * config.nx +
                                   config.nx / 2] = cplx(1.0, 0.0);
        }

        MultiCoilKSpace raw = forward_encode(truth, sens);
        std::vector<cplx> values(raw.values().begin(), raw.values().end());
        if (config.noise_sigma > 0.0) {
            const double scale = raw.max_modulus() * config.noise_sigma / std::sqrt(2.0);
            for (cplx& v : values) {
                v += scale * cplx(normal01(rng), normal01(rng));
            }
        }
        MultiCoilKSpace noisy = normalize(MultiCoilKSpace(raw.grid(), std::move(values)));
        std::vector<cplx> quantized(noisy.values().begin(), noisy.values().end());
        for (cplx& v : quantized) v = quantize(v);
        items[static_cast<std::size_t>(i)] = MultiCoilKSpace(raw.grid(), std::move(quantized));
        truths[static_cast<std::size_t>(i)] = std::move(truth);
    });

    std::vector<MultiCoilKSpace> collected;
    std::vector<ImageVolume> truth_out;
    collected.reserve(items.size());
    truth_out.reserve(items.size());
    for (int i = 0; i < config.num_items; ++i) {
        collected.push_back(std::move(*items[static_cast<std::size_t>(i)]));
        truth_out.push_back(std::move(*truths[static_cast<std::size_t>(i)]));
    }
    return PhantomOutput{Dataset(std::move(collected)), std::move(sens), std::move(truth_out),
                         std::move(times)};
}

}  // namespace bass
