#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is written directly from the definitions (double loops,
// plain projected gradient, exhaustive enumeration) so a test compares two
// unrelated code paths rather than the library against itself.

#include <cstdint>
#include <span>
#include <vector>

#include "core/dataset.hpp"
#include "core/pattern.hpp"
#include "core/volume.hpp"
#include "recon/encoding.hpp"
#include "recon/reconstruct.hpp"

namespace bass::oracle {

// O(n^2) DFT of one ny x nx plane under the library convention: natural
// image order (pixel (0,0) top-left), k-space centered with the DC bin at
// (nx/2, ny/2), both directions scaled by 1/sqrt(nx*ny).
std::vector<cplx> dft2d(std::span<const cplx> image, int nx, int ny);
std::vector<cplx> idft2d(std::span<const cplx> kspace, int nx, int ny);

// Proximal map of theta * anisotropic complex TV on one frame, solved by
// plain projected gradient ascent on the dual (no momentum), run for
// `sweeps` iterations. Slow but convergent reference for the library's
// accelerated solver.
std::vector<cplx> tv_prox(std::span<const cplx> frame, int nx, int ny, double theta, int sweeps);

// 0.5*||x - b||^2 + theta * TV_aniso(x); used for perturbation-based
// optimality checks of prox outputs.
double tv_objective(std::span<const cplx> x, std::span<const cplx> b, int nx, int ny,
                    double theta);

// SSIM by direct 2D convolution with an explicit 11x11 Gaussian window
// (sigma 1.5), nearest-edge padding, magnitude images, averaged over all
// pixels and frames. Second implementation for the metric suite.
double ssim(const ImageVolume& x, const ImageVolume& y);

// Every size-M pattern on the grid that contains all of `locked`; the
// members are enumerated in lexicographic order of the free choices.
std::vector<SamplingPattern> all_patterns(const KSpaceGrid& grid,
                                          std::span<const std::int64_t> locked, std::int64_t M);

// Reconstruction test double: the output k-space is the sampled rows
// embedded at their positions and zero elsewhere (no solver). F is then
// exactly the unsampled fraction of each item's energy: cheap, noiseless,
// and monotone under inclusion, which makes optimizer behavior predictable.
class EmbedReconstructor : public Reconstructor {
public:
    explicit EmbedReconstructor(KSpaceGrid grid) : grid_(std::move(grid)) {}

    const KSpaceGrid& grid() const noexcept override { return grid_; }

protected:
    ReconResult run(const SamplingPattern& pattern, const SampledData& sampled) const override;

private:
    KSpaceGrid grid_;
};

// Perfect oracle: returns the dataset item whose rows the sampled data was
// taken from (matched bitwise), so F == 0 for every pattern. When `sens` is
// given, the image is the coil-combined item, making SSIM exactly 1.
class IdentityReconstructor : public Reconstructor {
public:
    explicit IdentityReconstructor(const Dataset& dataset,
                                   const CoilSensitivities* sens = nullptr)
        : dataset_(dataset), sens_(sens) {}

    const KSpaceGrid& grid() const noexcept override { return dataset_.grid(); }

protected:
    ReconResult run(const SamplingPattern& pattern, const SampledData& sampled) const override;

private:
    const Dataset& dataset_;
    const CoilSensitivities* sens_;
};

}  // namespace bass::oracle
