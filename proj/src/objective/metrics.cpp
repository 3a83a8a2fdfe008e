#include "objective/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "core/errors.hpp"

namespace bass {

double distance_f(const MultiCoilKSpace& m, const MultiCoilKSpace& n) {
    if (!(m.grid() == n.grid())) {
        throw_data_error("distance operands use different grids: " + m.grid().describe() +
                         " vs " + n.grid().describe());
    }
    const double denom = m.squared_norm();
    if (denom == 0.0) throw_data_error("distance reference is all zero");
    double num = 0.0;
    const auto vm = m.values();
    const auto vn = n.values();
    for (std::size_t i = 0; i < vm.size(); ++i) num += std::norm(vm[i] - vn[i]);
    return num / denom;
}

double nrmse(std::span<const MultiCoilKSpace> references,
             std::span<const MultiCoilKSpace> estimates) {
    if (references.empty()) throw_data_error("nrmse needs at least one item");
    if (references.size() != estimates.size()) {
        throw_data_error("nrmse item counts differ: " + std::to_string(references.size()) +
                         " vs " + std::to_string(estimates.size()));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < references.size(); ++i) {
        total += distance_f(references[i], estimates[i]);
    }
    return std::sqrt(total);
}

namespace {

void check_residuals(std::span<const MultiCoilKSpace> residuals, const Dataset& dataset) {
    if (static_cast<int>(residuals.size()) != dataset.size()) {
        throw_data_error("residual count does not match dataset size");
    }
    for (const auto& r : residuals) {
        if (!(r.grid() == dataset.grid())) throw_data_error("residual grid mismatch");
    }
}

}  // namespace

std::vector<double> epsilon_map(std::span<const MultiCoilKSpace> residuals,
                                const Dataset& dataset) {
    check_residuals(residuals, dataset);
    const KSpaceGrid& grid = dataset.grid();
    const std::int64_t n = grid.num_points();
    std::vector<double> map(static_cast<std::size_t>(n), 0.0);
    const double scale = 1.0 / (static_cast<double>(dataset.size()) * grid.nc());
    for (int i = 0; i < dataset.size(); ++i) {
        const double inv_item = 1.0 / dataset.item(i).squared_norm();
        const auto& e = residuals[static_cast<std::size_t>(i)];
        for (int c = 0; c < grid.nc(); ++c) {
            const auto coil = e.coil(c);
            for (std::int64_t k = 0; k < n; ++k) {
                map[static_cast<std::size_t>(k)] +=
                    scale * inv_item * std::norm(coil[static_cast<std::size_t>(k)]);
            }
        }
    }
    return map;
}

std::vector<double> r_map(std::span<const MultiCoilKSpace> residuals, const Dataset& dataset,
                          double delta) {
    if (delta <= 0.0) throw_spec_error("r-map delta must be > 0");
    check_residuals(residuals, dataset);
    const KSpaceGrid& grid = dataset.grid();
    const std::int64_t n = grid.num_points();
    std::vector<double> map(static_cast<std::size_t>(n), 0.0);
    const double scale = 1.0 / (static_cast<double>(dataset.size()) * grid.nc());
    std::vector<double> enum_row(static_cast<std::size_t>(n));
    std::vector<double> denom_row(static_cast<std::size_t>(n));
    for (int i = 0; i < dataset.size(); ++i) {
        std::fill(enum_row.begin(), enum_row.end(), delta);
        std::fill(denom_row.begin(), denom_row.end(), delta);
        const auto& e = residuals[static_cast<std::size_t>(i)];
        const auto& m = dataset.item(i);
        for (int c = 0; c < grid.nc(); ++c) {
            const auto ec = e.coil(c);
            const auto mc = m.coil(c);
            for (std::int64_t k = 0; k < n; ++k) {
                enum_row[static_cast<std::size_t>(k)] += std::norm(ec[static_cast<std::size_t>(k)]);
                denom_row[static_cast<std::size_t>(k)] += std::norm(mc[static_cast<std::size_t>(k)]);
            }
        }
        for (std::int64_t k = 0; k < n; ++k) {
            map[static_cast<std::size_t>(k)] +=
                scale * enum_row[static_cast<std::size_t>(k)] / denom_row[static_cast<std::size_t>(k)];
        }
    }
    return map;
}

namespace {

constexpr int kWin = 11;
constexpr double kSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

const std::vector<double>& gaussian_taps() {
    static const std::vector<double> taps = [] {
        std::vector<double> t(kWin);
        double sum = 0.0;
        for (int i = 0; i < kWin; ++i) {
            const double d = i - kWin / 2;
            t[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * kSigma * kSigma));
            sum += t[static_cast<std::size_t>(i)];
        }
        for (double& v : t) v /= sum;
        return t;
    }();
    return taps;
}

// Separable Gaussian blur with nearest-edge padding.
std::vector<double> blur(const std::vector<double>& img, int nx, int ny) {
    const auto& taps = gaussian_taps();
    std::vector<double> tmp(img.size()), out(img.size());
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            double acc = 0.0;
            for (int i = 0; i < kWin; ++i) {
                const int xx = std::clamp(x + i - kWin / 2, 0, nx - 1);
                acc += taps[static_cast<std::size_t>(i)] *
                       img[static_cast<std::size_t>(y) * nx + xx];
            }
            tmp[static_cast<std::size_t>(y) * nx + x] = acc;
        }
    }
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            double acc = 0.0;
            for (int i = 0; i < kWin; ++i) {
                const int yy = std::clamp(y + i - kWin / 2, 0, ny - 1);
                acc += taps[static_cast<std::size_t>(i)] *
                       tmp[static_cast<std::size_t>(yy) * nx + x];
            }
            out[static_cast<std::size_t>(y) * nx + x] = acc;
        }
    }
    return out;
}

double ssim_frame(const std::vector<double>& a, const std::vector<double>& b, int nx, int ny,
                  double c1, double c2) {
    const std::size_t n = a.size();
    std::vector<double> aa(n), bb(n), ab(n);
    for (std::size_t i = 0; i < n; ++i) {
        aa[i] = a[i] * a[i];
        bb[i] = b[i] * b[i];
        ab[i] = a[i] * b[i];
    }
    const auto mu_a = blur(a, nx, ny);
    const auto mu_b = blur(b, nx, ny);
    const auto m_aa = blur(aa, nx, ny);
    const auto m_bb = blur(bb, nx, ny);
    const auto m_ab = blur(ab, nx, ny);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double va = m_aa[i] - mu_a[i] * mu_a[i];
        const double vb = m_bb[i] - mu_b[i] * mu_b[i];
        const double cov = m_ab[i] - mu_a[i] * mu_b[i];
        const double num = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
        const double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2);
        total += num / den;
    }
    return total / static_cast<double>(n);
}

}  // namespace

double ssim(const ImageVolume& x, const ImageVolume& y) {
    if (x.nx() != y.nx() || x.ny() != y.ny() || x.nt() != y.nt()) {
        throw_data_error("ssim operands have different shapes");
    }
    double peak = 0.0;
    for (const cplx& v : x.values()) peak = std::max(peak, std::abs(v));
    const double range = peak > 0.0 ? peak : 1e-30;
    const double c1 = (kK1 * range) * (kK1 * range);
    const double c2 = (kK2 * range) * (kK2 * range);
    const std::size_t np = static_cast<std::size_t>(x.num_pixels());
    std::vector<double> a(np), b(np);
    double total = 0.0;
    for (int t = 0; t < x.nt(); ++t) {
        const auto fx = x.frame(t);
        const auto fy = y.frame(t);
        for (std::size_t i = 0; i < np; ++i) {
            a[i] = std::abs(fx[i]);
            b[i] = std::abs(fy[i]);
        }
        total += ssim_frame(a, b, x.nx(), x.ny(), c1, c2);
    }
    return total / x.nt();
}

std::uint64_t dataset_fingerprint(const Dataset& dataset) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* p, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ULL;
        }
    };
    const KSpaceGrid& g = dataset.grid();
    const int dims[4] = {g.nx(), g.ny(), g.nt(), g.nc()};
    mix(dims, sizeof dims);
    for (const auto& item : dataset.items()) {
        mix(item.values().data(), item.values().size() * sizeof(cplx));
    }
    return h;
}

}  // namespace bass
