#include "core/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace bass::fft {

namespace {

// Plan creation is the only non-thread-safe part of FFTW; executions via
// fftw_execute_dft on distinct arrays are safe. Plans use FFTW_ESTIMATE so
// the chosen algorithm (and therefore the bit pattern of results) does not
// depend on runtime measurements.
class PlanCache {
public:
    fftw_plan get(int nx, int ny, int sign) {
        const Key key{nx, ny, sign};
        std::lock_guard lock(mutex_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        // Out-of-place plan; executions must also be out-of-place.
        std::vector<cplx> din(static_cast<std::size_t>(nx) * ny);
        std::vector<cplx> dout(din.size());
        fftw_plan plan = fftw_plan_dft_2d(ny, nx, reinterpret_cast<fftw_complex*>(din.data()),
                                          reinterpret_cast<fftw_complex*>(dout.data()), sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    using Key = std::tuple<int, int, int>;
    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

// out[(i + sx) % nx, (j + sy) % ny] = in[i, j], scaled.
void shift_scale(std::span<const cplx> in, std::span<cplx> out, int nx, int ny, int sx, int sy,
                 double scale) {
    for (int y = 0; y < ny; ++y) {
        const int yy = (y + sy) % ny;
        const cplx* src = in.data() + static_cast<std::size_t>(y) * nx;
        for (int x = 0; x < nx; ++x) {
            const int xx = (x + sx) % nx;
            out[static_cast<std::size_t>(yy) * nx + xx] = src[x] * scale;
        }
    }
}

}  // namespace

void forward2d(std::span<const cplx> in, std::span<cplx> out, int nx, int ny) {
    std::vector<cplx> tmp(static_cast<std::size_t>(nx) * ny);
    fftw_plan plan = cache().get(nx, ny, FFTW_FORWARD);
    fftw_execute_dft(plan, const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in.data())),
                     reinterpret_cast<fftw_complex*>(tmp.data()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(nx) * ny);
    shift_scale(tmp, out, nx, ny, nx / 2, ny / 2, scale);
}

void inverse2d(std::span<const cplx> in, std::span<cplx> out, int nx, int ny) {
    std::vector<cplx> tmp(static_cast<std::size_t>(nx) * ny);
    // Undo the centering shift, then run the backward transform.
    shift_scale(in, tmp, nx, ny, nx - nx / 2, ny - ny / 2, 1.0);
    std::vector<cplx> tmp2(tmp.size());
    fftw_plan plan = cache().get(nx, ny, FFTW_BACKWARD);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(tmp2.data()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(nx) * ny);
    for (std::size_t i = 0; i < tmp2.size(); ++i) out[i] = tmp2[i] * scale;
}

}  // namespace bass::fft
