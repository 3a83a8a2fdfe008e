#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/dataset.hpp"
#include "core/volume.hpp"

namespace bass {

// Normalized squared k-space distance |m - n|^2 / |m|^2 over all points and
// coils. m is the reference and must be nonzero.
double distance_f(const MultiCoilKSpace& m, const MultiCoilKSpace& n);

// sqrt of the SUM over items of |m_i - est_i|^2 / |m_i|^2 (not the mean; the
// value grows with the item count by design).
double nrmse(std::span<const MultiCoilKSpace> references,
             std::span<const MultiCoilKSpace> estimates);

// Per-point mean normalized residual energy:
// eps_k = (1/(N_i*N_c)) sum_i (sum_c |e_{i,c,k}|^2) / |m_i|^2.
std::vector<double> epsilon_map(std::span<const MultiCoilKSpace> residuals,
                                const Dataset& dataset);

// Per-point residual-to-signal ratio with delta stabilization:
// r_k = (1/(N_i*N_c)) sum_i (sum_c |e_{i,c,k}|^2 + delta) /
//                            (sum_c |m_{i,c,k}|^2 + delta).
std::vector<double> r_map(std::span<const MultiCoilKSpace> residuals, const Dataset& dataset,
                          double delta);

// Mean SSIM between the magnitude images of x (reference) and y: 11x11
// Gaussian window with sigma 1.5, K1=0.01, K2=0.03, dynamic range = max
// magnitude of x, nearest-edge padding, per frame then averaged.
double ssim(const ImageVolume& x, const ImageVolume& y);

// FNV-1a over the raw item values; identifies the dataset importance maps
// were computed from.
std::uint64_t dataset_fingerprint(const Dataset& dataset);

}  // namespace bass
