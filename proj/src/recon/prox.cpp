#include "recon/prox.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace bass {

namespace {

inline cplx clip_unit(cplx z) {
    const double a = std::abs(z);
    return a > 1.0 ? z / a : z;
}

// One frame of the TV prox: min_u 1/2|u - b|^2 + theta*TV(u) via FGP on the
// dual. p holds x-difference duals (last column unused), q y-difference
// duals (last row unused).
void prox_tv_frame(std::span<const cplx> b, std::span<cplx> out, int nx, int ny, double theta,
                   int iterations) {
    const std::size_t n = static_cast<std::size_t>(nx) * ny;
    std::vector<cplx> p(n, cplx(0, 0)), q(n, cplx(0, 0));
    std::vector<cplx> rp(n, cplx(0, 0)), rq(n, cplx(0, 0));
    std::vector<cplx> pp(n, cplx(0, 0)), pq(n, cplx(0, 0));
    std::vector<cplx> u(n);
    const double step = 1.0 / (8.0 * theta);
    double tk = 1.0;
    auto idx = [nx](int y, int x) { return static_cast<std::size_t>(y) * nx + x; };

    for (int it = 0; it < iterations; ++it) {
        // u = b - theta * adjoint(rp, rq)
        for (int y = 0; y < ny; ++y) {
            for (int x = 0; x < nx; ++x) {
                cplx div(0, 0);
                if (x > 0) div += rp[idx(y, x - 1)];
                if (x < nx - 1) div -= rp[idx(y, x)];
                if (y > 0) div += rq[idx(y - 1, x)];
                if (y < ny - 1) div -= rq[idx(y, x)];
                u[idx(y, x)] = b[idx(y, x)] - theta * div;
            }
        }
        for (int y = 0; y < ny; ++y) {
            for (int x = 0; x < nx; ++x) {
                pp[idx(y, x)] = p[idx(y, x)];
                pq[idx(y, x)] = q[idx(y, x)];
                if (x < nx - 1) {
                    p[idx(y, x)] = clip_unit(rp[idx(y, x)] +
                                             step * (u[idx(y, x + 1)] - u[idx(y, x)]));
                }
                if (y < ny - 1) {
                    q[idx(y, x)] = clip_unit(rq[idx(y, x)] +
                                             step * (u[idx(y + 1, x)] - u[idx(y, x)]));
                }
            }
        }
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
        const double mom = (tk - 1.0) / tn;
        for (std::size_t i = 0; i < n; ++i) {
            rp[i] = p[i] + mom * (p[i] - pp[i]);
            rq[i] = q[i] + mom * (q[i] - pq[i]);
        }
        tk = tn;
    }

    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            cplx div(0, 0);
            if (x > 0) div += p[idx(y, x - 1)];
            if (x < nx - 1) div -= p[idx(y, x)];
            if (y > 0) div += q[idx(y - 1, x)];
            if (y < ny - 1) div -= q[idx(y, x)];
            out[idx(y, x)] = b[idx(y, x)] - theta * div;
        }
    }
}

using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

CMat casorati(const ImageVolume& v) {
    CMat a(v.num_pixels(), v.nt());
    for (int t = 0; t < v.nt(); ++t) {
        const auto frame = v.frame(t);
        for (std::int64_t pix = 0; pix < v.num_pixels(); ++pix) {
            a(pix, t) = frame[static_cast<std::size_t>(pix)];
        }
    }
    return a;
}

}  // namespace

double tv_norm(const ImageVolume& v) {
    double s = 0.0;
    const int nx = v.nx(), ny = v.ny();
    for (int t = 0; t < v.nt(); ++t) {
        const auto f = v.frame(t);
        auto idx = [nx](int y, int x) { return static_cast<std::size_t>(y) * nx + x; };
        for (int y = 0; y < ny; ++y) {
            for (int x = 0; x < nx; ++x) {
                if (x < nx - 1) s += std::abs(f[idx(y, x + 1)] - f[idx(y, x)]);
                if (y < ny - 1) s += std::abs(f[idx(y + 1, x)] - f[idx(y, x)]);
            }
        }
    }
    return s;
}

double l1_norm(const ImageVolume& v) {
    double s = 0.0;
    for (const cplx& z : v.values()) s += std::abs(z);
    return s;
}

double nuclear_norm(const ImageVolume& v) {
    const Eigen::JacobiSVD<CMat> svd(casorati(v));
    return svd.singularValues().sum();
}

ImageVolume prox_sfd(const ImageVolume& v, double theta, int inner_iterations) {
    if (theta <= 0.0 || inner_iterations < 1) return v;
    ImageVolume out = ImageVolume::zeros(v.nx(), v.ny(), v.nt());
    for (int t = 0; t < v.nt(); ++t) {
        prox_tv_frame(v.frame(t), out.mutable_frame(t), v.nx(), v.ny(), theta, inner_iterations);
    }
    return out;
}

ImageVolume prox_nuclear(const ImageVolume& v, double theta, double* out_norm) {
    if (theta <= 0.0) {
        if (out_norm) *out_norm = nuclear_norm(v);
        return v;
    }
    Eigen::JacobiSVD<CMat> svd(casorati(v), Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd sv = svd.singularValues();
    double total = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        sv[i] = std::max(sv[i] - theta, 0.0);
        total += sv[i];
    }
    if (out_norm) *out_norm = total;
    const CMat a = svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();
    ImageVolume out = ImageVolume::zeros(v.nx(), v.ny(), v.nt());
    for (int t = 0; t < v.nt(); ++t) {
        auto frame = out.mutable_frame(t);
        for (std::int64_t pix = 0; pix < v.num_pixels(); ++pix) {
            frame[static_cast<std::size_t>(pix)] = a(pix, t);
        }
    }
    return out;
}

}  // namespace bass
