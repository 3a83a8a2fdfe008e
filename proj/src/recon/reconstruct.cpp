#include "recon/reconstruct.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"
#include "recon/prox.hpp"

namespace bass {

ReconMethod parse_recon_method(const std::string& name) {
    if (name == "zero-fill" || name == "zero_fill") return ReconMethod::zero_fill;
    if (name == "cs-sfd" || name == "cs_sfd") return ReconMethod::cs_sfd;
    if (name == "cs-lr" || name == "cs_lr") return ReconMethod::cs_lr;
    if (name == "cs-dic" || name == "cs_dic") return ReconMethod::cs_dic;
    throw_spec_error("unknown reconstruction method '" + name +
                     "' (expected zero-fill, cs-sfd, cs-lr or cs-dic)");
}

std::string to_string(ReconMethod method) {
    switch (method) {
        case ReconMethod::zero_fill: return "zero-fill";
        case ReconMethod::cs_sfd: return "cs-sfd";
        case ReconMethod::cs_lr: return "cs-lr";
        case ReconMethod::cs_dic: return "cs-dic";
    }
    return "unknown";
}

namespace {

double fidelity(const MultiCoilKSpace& k, const SampledData& sampled) {
    double acc = 0.0;
    for (int c = 0; c < sampled.num_coils; ++c) {
        for (std::int64_t j = 0; j < sampled.num_points(); ++j) {
            acc += std::norm(k.at(sampled.points[static_cast<std::size_t>(j)], c) -
                             sampled.at(j, c));
        }
    }
    return 0.5 * acc;
}

MultiCoilKSpace masked_residual(const MultiCoilKSpace& k, const SampledData& sampled) {
    const KSpaceGrid& grid = k.grid();
    std::vector<cplx> values(static_cast<std::size_t>(grid.num_points()) * grid.nc());
    for (int c = 0; c < sampled.num_coils; ++c) {
        const auto base = static_cast<std::size_t>(c) * grid.num_points();
        for (std::int64_t j = 0; j < sampled.num_points(); ++j) {
            const std::int64_t p = sampled.points[static_cast<std::size_t>(j)];
            values[base + static_cast<std::size_t>(p)] = k.at(p, c) - sampled.at(j, c);
        }
    }
    return MultiCoilKSpace(grid, std::move(values));
}

double sq_dist(const ImageVolume& a, const ImageVolume& b) {
    double s = 0.0;
    const auto va = a.values();
    const auto vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i) s += std::norm(va[i] - vb[i]);
    return s;
}

// Re<g, a - b>
double re_inner_diff(const ImageVolume& g, const ImageVolume& a, const ImageVolume& b) {
    double s = 0.0;
    const auto vg = g.values();
    const auto va = a.values();
    const auto vb = b.values();
    for (std::size_t i = 0; i < vg.size(); ++i) {
        s += (std::conj(vg[i]) * (va[i] - vb[i])).real();
    }
    return s;
}

ImageVolume add_scaled(const ImageVolume& a, const ImageVolume& b, double s) {
    ImageVolume out = a;
    auto vo = out.mutable_values();
    const auto vb = b.values();
    for (std::size_t i = 0; i < vo.size(); ++i) vo[i] += s * vb[i];
    return out;
}

// x + c1*(z - x) + c2*(x - xp)
ImageVolume momentum_combine(const ImageVolume& x, const ImageVolume& z, const ImageVolume& xp,
                             double c1, double c2) {
    ImageVolume out = x;
    auto vo = out.mutable_values();
    const auto vz = z.values();
    const auto vxp = xp.values();
    for (std::size_t i = 0; i < vo.size(); ++i) {
        vo[i] += c1 * (vz[i] - vo[i]) + c2 * (vo[i] - vxp[i]);
    }
    return out;
}

// One proximal-splitting problem: the data term 1/2 |S A x - mbar|^2 over
// the optimization volume x (image for cs_sfd/cs_lr, dictionary coefficients
// for cs_dic), plus lambda/2 times the penalty the prox implements. Reported
// costs are |S A x - mbar|^2 + lambda*penalty, matching the objective the
// configuration's lambda refers to.
struct FistaModel {
    std::function<MultiCoilKSpace(const ImageVolume&)> apply;
    std::function<ImageVolume(const MultiCoilKSpace&)> apply_adjoint;
    std::function<ImageVolume(const ImageVolume&, double)> prox;
    std::function<double(const ImageVolume&)> penalty;
    double lipschitz = 1.0;
};

struct FistaOutcome {
    ImageVolume x;
    double cost = 0.0;
    int iterations = 0;
};

std::string cost_trace(const std::vector<double>& costs) {
    std::ostringstream os;
    os << "cost trace:";
    const std::size_t first = costs.size() > 10 ? costs.size() - 10 : 0;
    for (std::size_t i = first; i < costs.size(); ++i) os << " " << costs[i];
    return os.str();
}

// Monotone FISTA with backtracking. The accepted iterate never increases the
// cost (candidates that would are discarded while the momentum still uses
// them), so the reported cost sequence is non-increasing by construction.
FistaOutcome run_fista(const FistaModel& model, const SampledData& sampled,
                       const ImageVolume& x0, const ReconConfig& cfg) {
    const double lam = cfg.lambda;
    ImageVolume x = x0;
    double cost_x = 2.0 * fidelity(model.apply(x), sampled) + lam * model.penalty(x);
    ImageVolume y = x;
    double t = 1.0;
    double s = 1.0 / model.lipschitz;
    std::vector<double> costs{cost_x};
    FistaOutcome out{x, cost_x, 0};

    for (int it = 1; it <= cfg.max_iterations; ++it) {
        const MultiCoilKSpace ky = model.apply(y);
        const double fy = fidelity(ky, sampled);
        const ImageVolume g = model.apply_adjoint(masked_residual(ky, sampled));

        ImageVolume z = y;
        double fz = 0.0;
        for (int bt = 0;; ++bt) {
            z = model.prox(add_scaled(y, g, -s), 0.5 * s * lam);
            fz = fidelity(model.apply(z), sampled);
            const double bound = fy + re_inner_diff(g, z, y) + sq_dist(z, y) / (2.0 * s) +
                                 1e-12 * std::max(1.0, fy);
            if (fz <= bound) break;
            if (bt >= 60) {
                throw_numeric_error("step backtracking exhausted; " + cost_trace(costs));
            }
            s *= 0.5;
        }

        const double cost_z = 2.0 * fz + lam * model.penalty(z);
        if (!std::isfinite(cost_z)) {
            costs.push_back(cost_z);
            throw_numeric_error("reconstruction diverged (non-finite cost); " +
                                cost_trace(costs));
        }
        const bool take = cost_z <= cost_x;
        const ImageVolume& x_new = take ? z : x;
        const double cost_new = take ? cost_z : cost_x;
        costs.push_back(cost_new);
        if (cost_new > cost_x + 1e-9) {
            throw_numeric_error("reconstruction diverged (cost increased); " +
                                cost_trace(costs));
        }

        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        y = momentum_combine(x_new, z, x, t / tn, (t - 1.0) / tn);
        const double prev_cost = cost_x;
        x = x_new;
        cost_x = cost_new;
        t = tn;
        out.iterations = it;

        if (std::abs(prev_cost - cost_new) <= cfg.tolerance * std::max(std::abs(prev_cost), 1e-30)) {
            break;
        }
    }

    out.x = std::move(x);
    out.cost = cost_x;
    return out;
}

class MethodReconstructor : public Reconstructor {
public:
    MethodReconstructor(ReconConfig cfg, const KSpaceGrid& grid, CoilSensitivities sens)
        : cfg_(std::move(cfg)), grid_(grid), sens_(std::move(sens)) {
        if (cfg_.lambda < 0.0) throw_spec_error("lambda must be >= 0");
        if (cfg_.max_iterations < 1) throw_spec_error("max_iterations must be >= 1");
        if (cfg_.prox_iterations < 1) throw_spec_error("prox_iterations must be >= 1");
        if (cfg_.tolerance < 0.0) throw_spec_error("tolerance must be >= 0");
        if (sens_.nx() != grid_.nx() || sens_.ny() != grid_.ny() || sens_.nc() != grid_.nc()) {
            throw_data_error("sensitivity dims do not match grid " + grid_.describe());
        }
        max_sos_ = sens_.max_sos();
        if (!(max_sos_ > 0.0)) throw_data_error("coil sensitivities are all zero");
        if (cfg_.method == ReconMethod::cs_dic) init_dictionary();
    }

    const KSpaceGrid& grid() const noexcept override { return grid_; }

protected:
    ReconResult run(const SamplingPattern& pattern, const SampledData& sampled) const override {
        if (!pattern.grid().same_points(grid_)) {
            throw_data_error("pattern grid " + pattern.grid().describe() +
                             " does not match reconstructor grid " + grid_.describe());
        }
        if (sampled.num_coils != grid_.nc()) {
            throw_data_error("sampled coil count does not match reconstructor grid");
        }
        if (sampled.num_points() != pattern.size()) {
            throw_data_error("sampled row count does not match pattern size");
        }
        switch (cfg_.method) {
            case ReconMethod::zero_fill: return run_zero_fill(pattern, sampled);
            case ReconMethod::cs_sfd:
            case ReconMethod::cs_lr: return run_cs(pattern, sampled);
            case ReconMethod::cs_dic: return run_dic(pattern, sampled);
        }
        throw_spec_error("unhandled reconstruction method");
    }

private:
    ReconResult run_zero_fill(const SamplingPattern& pattern, const SampledData& sampled) const {
        const MultiCoilKSpace embedded = embed_sampled(pattern, sampled);
        ImageVolume image = coil_combine(embedded, sens_);
        MultiCoilKSpace projected = forward_encode(image, sens_);
        std::vector<cplx> values(projected.values().begin(), projected.values().end());
        for (int c = 0; c < grid_.nc(); ++c) {
            const auto base = static_cast<std::size_t>(c) * grid_.num_points();
            for (std::int64_t j = 0; j < sampled.num_points(); ++j) {
                values[base + static_cast<std::size_t>(
                                  sampled.points[static_cast<std::size_t>(j)])] =
                    sampled.at(j, c);
            }
        }
        return ReconResult{MultiCoilKSpace(grid_, std::move(values)), std::move(image), 0.0, 0};
    }

    ReconResult run_cs(const SamplingPattern& pattern, const SampledData& sampled) const {
        if (pattern.size() == 0) throw_data_error("empty pattern");
        FistaModel model;
        model.apply = [this](const ImageVolume& v) { return forward_encode(v, sens_); };
        model.apply_adjoint = [this](const MultiCoilKSpace& k) {
            return adjoint_encode(k, sens_);
        };
        if (cfg_.method == ReconMethod::cs_sfd) {
            model.prox = [this](const ImageVolume& v, double theta) {
                return prox_sfd(v, theta, cfg_.prox_iterations);
            };
            model.penalty = [](const ImageVolume& v) { return tv_norm(v); };
        } else {
            model.prox = [](const ImageVolume& v, double theta) {
                return prox_nuclear(v, theta);
            };
            model.penalty = [](const ImageVolume& v) { return nuclear_norm(v); };
        }
        model.lipschitz = max_sos_;
        const ImageVolume x0 = adjoint_encode(embed_sampled(pattern, sampled), sens_);
        FistaOutcome fo = run_fista(model, sampled, x0, cfg_);
        MultiCoilKSpace k = forward_encode(fo.x, sens_);
        return ReconResult{std::move(k), std::move(fo.x), fo.cost, fo.iterations};
    }

    ReconResult run_dic(const SamplingPattern& pattern, const SampledData& sampled) const {
        if (pattern.size() == 0) throw_data_error("empty pattern");
        FistaModel model;
        model.apply = [this](const ImageVolume& u) {
            return forward_encode(synthesize(u), sens_);
        };
        model.apply_adjoint = [this](const MultiCoilKSpace& k) {
            return analyze(adjoint_encode(k, sens_));
        };
        model.prox = [](const ImageVolume& u, double theta) {
            ImageVolume out = u;
            for (auto& z : out.mutable_values()) z = soft_threshold(z, theta);
            return out;
        };
        model.penalty = [](const ImageVolume& u) { return l1_norm(u); };
        model.lipschitz = max_sos_ * dict_sigma_max_ * dict_sigma_max_;
        const ImageVolume u0 = analyze(adjoint_encode(embed_sampled(pattern, sampled), sens_));
        FistaOutcome fo = run_fista(model, sampled, u0, cfg_);
        ImageVolume image = synthesize(fo.x);
        MultiCoilKSpace k = forward_encode(image, sens_);
        return ReconResult{std::move(k), std::move(image), fo.cost, fo.iterations};
    }

    void init_dictionary() {
        const auto& dict = cfg_.dictionary;
        if (grid_.nt() < 2) throw_spec_error("cs-dic needs nt >= 2");
        if (static_cast<int>(dict.frame_times.size()) != grid_.nt()) {
            throw_spec_error("dictionary frame_times must list one time stamp per frame");
        }
        if (dict.decay_constants.empty()) throw_spec_error("dictionary has no decay constants");
        for (double tt : dict.frame_times) {
            if (!(std::isfinite(tt) && tt >= 0.0)) {
                throw_spec_error("dictionary frame times must be finite and >= 0");
            }
        }
        const int nt = grid_.nt();
        const int atoms = static_cast<int>(dict.decay_constants.size());
        atoms_.resize(static_cast<std::size_t>(atoms) * nt);
        for (int j = 0; j < atoms; ++j) {
            const double tj = dict.decay_constants[static_cast<std::size_t>(j)];
            if (!(std::isfinite(tj) && tj > 0.0)) {
                throw_spec_error("dictionary decay constants must be finite and > 0");
            }
            double nn = 0.0;
            for (int t = 0; t < nt; ++t) {
                const double v = std::exp(-dict.frame_times[static_cast<std::size_t>(t)] / tj);
                atoms_[static_cast<std::size_t>(j) * nt + t] = v;
                nn += v * v;
            }
            nn = std::sqrt(nn);
            for (int t = 0; t < nt; ++t) atoms_[static_cast<std::size_t>(j) * nt + t] /= nn;
        }
        Eigen::MatrixXd d(nt, atoms);
        for (int t = 0; t < nt; ++t) {
            for (int j = 0; j < atoms; ++j) d(t, j) = atoms_[static_cast<std::size_t>(j) * nt + t];
        }
        dict_sigma_max_ = Eigen::JacobiSVD<Eigen::MatrixXd>(d).singularValues()(0);
    }

    int num_atoms() const noexcept {
        return static_cast<int>(cfg_.dictionary.decay_constants.size());
    }

    // x_t = sum_j d_j[t] u_j, pixelwise.
    ImageVolume synthesize(const ImageVolume& u) const {
        const int nt = grid_.nt();
        ImageVolume x = ImageVolume::zeros(grid_.nx(), grid_.ny(), nt);
        for (int t = 0; t < nt; ++t) {
            auto xt = x.mutable_frame(t);
            for (int j = 0; j < num_atoms(); ++j) {
                const double d = atoms_[static_cast<std::size_t>(j) * nt + t];
                const auto uj = u.frame(j);
                for (std::size_t p = 0; p < xt.size(); ++p) xt[p] += d * uj[p];
            }
        }
        return x;
    }

    // u_j = sum_t d_j[t] v_t (atoms are real).
    ImageVolume analyze(const ImageVolume& v) const {
        const int nt = grid_.nt();
        ImageVolume u = ImageVolume::zeros(grid_.nx(), grid_.ny(), num_atoms());
        for (int j = 0; j < num_atoms(); ++j) {
            auto uj = u.mutable_frame(j);
            for (int t = 0; t < nt; ++t) {
                const double d = atoms_[static_cast<std::size_t>(j) * nt + t];
                const auto vt = v.frame(t);
                for (std::size_t p = 0; p < uj.size(); ++p) uj[p] += d * vt[p];
            }
        }
        return u;
    }

    ReconConfig cfg_;
    KSpaceGrid grid_;
    CoilSensitivities sens_;
    double max_sos_ = 1.0;
    std::vector<double> atoms_;
    double dict_sigma_max_ = 1.0;
};

}  // namespace

std::unique_ptr<Reconstructor> make_reconstructor(const ReconConfig& config,
                                                  const KSpaceGrid& grid,
                                                  CoilSensitivities sens) {
    return std::make_unique<MethodReconstructor>(config, grid, std::move(sens));
}

}  // namespace bass
