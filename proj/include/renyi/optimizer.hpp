// Copyright 2026 The renyi-chain Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "renyi/linalg.hpp"
#include "renyi/rng.hpp"
#include "renyi/states.hpp"

namespace renyi {

enum class OptMode { Inf, Sup };

enum class OptMethod { LocalSearch, GridPlusLocal, ParametrizedDescent };

struct OptimizerConfig {
    OptMode mode = OptMode::Inf;
    int restarts = 8;
    int max_iters = 2000;
    double rel_tol = 1e-10;
    OptMethod method = OptMethod::LocalSearch;
    // Full-support floor on iterates during search; the final polish re-runs
    // with the smaller floor.
    double search_floor = 1e-8;
    double polish_floor = 1e-12;
    // Optional starting densities; restart i uses seeds[i] when present.
    std::vector<Matrix> seeds;
};

struct OptimizationOutcome {
    Matrix argopt;
    double value = 0.0;
    int iterations = 0;
    double residual = 0.0;  // relative gap between the two best restarts
    std::vector<double> restart_values;
    bool converged = true;
};

using DensityObjective = std::function<double(const Matrix&)>;

namespace detail {

// Map unconstrained parameters to a full-support density via a complex factor
// L: sigma = (L L^dag + floor * tr * id/d) normalized.
inline Matrix params_to_density(const std::vector<double>& x, int d, double floor) {
    Matrix L(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) L(i, j) = Cplx(x[i * d + j], x[d * d + i * d + j]);
    Matrix S = L * L.adjoint();
    double tr = S.trace().real();
    if (!(tr > 0)) {
        S = Matrix::Identity(d, d);
        tr = static_cast<double>(d);
    }
    S += (floor * tr / d) * Matrix::Identity(d, d);
    S /= S.trace().real();
    return 0.5 * (S + S.adjoint());
}

inline std::vector<double> density_to_params(const Matrix& sigma) {
    const int d = static_cast<int>(sigma.rows());
    Matrix S = sigma + 1e-14 * Matrix::Identity(d, d);
    Eigen::LLT<Matrix> llt(0.5 * (S + S.adjoint()));
    Matrix L = llt.matrixL();
    std::vector<double> x(2 * d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            x[i * d + j] = L(i, j).real();
            x[d * d + i * d + j] = L(i, j).imag();
        }
    return x;
}

// Nelder-Mead minimization with adaptive coefficients; returns best point.
inline std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& fn, std::vector<double> x0,
    double step, int max_iters, double ftol, int* iters_used = nullptr) {
    const int n = static_cast<int>(x0.size());
    const double alpha = 1.0, gamma = 1.0 + 2.0 / n, rho = 0.75 - 0.5 / n,
                 shrink = 1.0 - 1.0 / n;

    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (int i = 1; i <= n; ++i) pts[i][i - 1] += step;
    for (int i = 0; i <= n; ++i) fv[i] = fn(pts[i]);

    std::vector<int> ord(n + 1);
    int it = 0;
    for (; it < max_iters; ++it) {
        for (int i = 0; i <= n; ++i) ord[i] = i;
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        double fbest = fv[ord[0]], fworst = fv[ord[n]];
        if (std::abs(fworst - fbest) <= ftol * (std::abs(fbest) + 1e-12)) break;

        std::vector<double> centroid(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) centroid[k] += pts[ord[i]][k] / n;

        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (int k = 0; k < n; ++k)
                p[k] = centroid[k] + coef * (centroid[k] - pts[ord[n]][k]);
            return p;
        };

        std::vector<double> xr = blend(alpha);
        double fr = fn(xr);
        if (fr < fv[ord[0]]) {
            std::vector<double> xe = blend(gamma);
            double fe = fn(xe);
            if (fe < fr) {
                pts[ord[n]] = std::move(xe);
                fv[ord[n]] = fe;
            } else {
                pts[ord[n]] = std::move(xr);
                fv[ord[n]] = fr;
            }
        } else if (fr < fv[ord[n - 1]]) {
            pts[ord[n]] = std::move(xr);
            fv[ord[n]] = fr;
        } else {
            std::vector<double> xc = blend(fr < fv[ord[n]] ? rho : -rho);
            double fc = fn(xc);
            if (fc < std::min(fr, fv[ord[n]])) {
                pts[ord[n]] = std::move(xc);
                fv[ord[n]] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    for (int k = 0; k < n; ++k)
                        pts[ord[i]][k] =
                            pts[ord[0]][k] + shrink * (pts[ord[i]][k] - pts[ord[0]][k]);
                    fv[ord[i]] = fn(pts[ord[i]]);
                }
            }
        }
    }
    if (iters_used) *iters_used = it;
    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    return {pts[best], fv[best]};
}

}  // namespace detail

// Optimize a scalar objective over the density operators of one system.
// Iterates stay full-support through the floored factor parametrization; the
// result is deterministic given the sampler's seed.
inline OptimizationOutcome optimize_density(const DensityObjective& objective, int dim,
                                            const OptimizerConfig& config,
                                            SeededSampler& sampler) {
    const double sign = (config.mode == OptMode::Sup) ? -1.0 : 1.0;
    auto signed_obj = [&](const Matrix& sigma) { return sign * objective(sigma); };

    struct Restart {
        std::vector<double> x;
        double f;
        int iters;
    };
    std::vector<Restart> results;

    const int n = 2 * dim * dim;
    for (int r = 0; r < config.restarts; ++r) {
        std::vector<double> x0;
        double step0;
        if (r < static_cast<int>(config.seeds.size())) {
            x0 = detail::density_to_params(config.seeds[r]);
            step0 = 0.02;
        } else if (r == static_cast<int>(config.seeds.size())) {
            x0 = detail::density_to_params(Matrix::Identity(dim, dim) /
                                           static_cast<double>(dim));
            step0 = 0.5;
        } else {
            SeededSampler child = sampler.fork(static_cast<std::uint64_t>(r));
            x0.resize(n);
            for (int i = 0; i < n; ++i) x0[i] = child.gauss();
            step0 = 0.5;
        }

        int total_iters = 0;
        std::vector<double> x = std::move(x0);
        double fx = std::numeric_limits<double>::infinity();
        // Coarse-to-fine rounds; each round re-seeds the simplex at the
        // current best with a smaller step.
        const double steps[3] = {step0, step0 / 50.0, step0 / 2500.0};
        for (double st : steps) {
            int used = 0;
            auto fn = [&](const std::vector<double>& p) {
                return signed_obj(detail::params_to_density(p, dim, config.search_floor));
            };
            auto [xb, fb] = detail::nelder_mead(fn, x, st, config.max_iters / 3,
                                                config.rel_tol, &used);
            total_iters += used;
            x = std::move(xb);
            fx = fb;
        }
        // Final polish with the floor relaxed.
        {
            int used = 0;
            auto fn = [&](const std::vector<double>& p) {
                return signed_obj(detail::params_to_density(p, dim, config.polish_floor));
            };
            auto [xb, fb] = detail::nelder_mead(fn, x, 1e-5, config.max_iters / 3,
                                                config.rel_tol, &used);
            total_iters += used;
            if (fb <= fx) {
                x = std::move(xb);
                fx = fb;
            }
        }
        results.push_back({std::move(x), fx, total_iters});
    }

    std::sort(results.begin(), results.end(), [](const Restart& a, const Restart& b) {
        if (a.f != b.f) return a.f < b.f;
        return a.iters < b.iters;
    });

    OptimizationOutcome out;
    out.argopt = detail::params_to_density(results[0].x, dim, config.polish_floor);
    out.value = sign * results[0].f;
    for (const auto& r : results) {
        out.iterations += r.iters;
        out.restart_values.push_back(sign * r.f);
    }
    if (results.size() >= 2) {
        out.residual = std::abs(results[0].f - results[1].f) /
                       std::max(std::abs(results[0].f), 1.0);
        out.converged = out.residual <= 1e-6;
    }
    return out;
}

// Exhaustive reference optimizer for dim <= 3: eigenvalue-simplex grid times a
// seeded net of unitaries, refined by a local polish. Test-only certification.
inline OptimizationOutcome brute_force_oracle(const DensityObjective& objective, int dim,
                                              int resolution, const OptimizerConfig& config,
                                              SeededSampler& sampler) {
    if (dim > 3) throw DimTooLarge("brute_force_oracle: dim must be <= 3");
    const double sign = (config.mode == OptMode::Sup) ? -1.0 : 1.0;

    std::vector<std::vector<double>> spectra;
    if (dim == 1) {
        spectra.push_back({1.0});
    } else if (dim == 2) {
        for (int i = 0; i <= resolution; ++i) {
            double t = static_cast<double>(i) / resolution;
            spectra.push_back({t, 1.0 - t});
        }
    } else {
        for (int i = 0; i <= resolution; ++i)
            for (int j = 0; i + j <= resolution; ++j) {
                double a = static_cast<double>(i) / resolution;
                double b = static_cast<double>(j) / resolution;
                spectra.push_back({a, b, 1.0 - a - b});
            }
    }

    std::vector<Matrix> unitaries;
    unitaries.push_back(Matrix::Identity(dim, dim));
    SeededSampler net = sampler.fork(7001);
    for (int u = 0; u < resolution * resolution; ++u)
        unitaries.push_back(random_unitary(net, dim));

    Matrix best_sigma = Matrix::Identity(dim, dim) / static_cast<double>(dim);
    double best = sign * objective(best_sigma);
    for (const auto& lam : spectra) {
        for (const auto& U : unitaries) {
            Matrix D = Matrix::Zero(dim, dim);
            for (int i = 0; i < dim; ++i)
                D(i, i) = std::max(lam[i], config.search_floor);
            Matrix sigma = U * D * U.adjoint();
            sigma /= sigma.trace().real();
            sigma = 0.5 * (sigma + sigma.adjoint());
            double f = sign * objective(sigma);
            if (f < best) {
                best = f;
                best_sigma = sigma;
            }
        }
    }

    // Local polish from the best grid point.
    OptimizerConfig polish = config;
    polish.restarts = 1;
    polish.seeds = {best_sigma};
    OptimizationOutcome refined = optimize_density(objective, dim, polish, sampler);
    double refined_signed = sign * refined.value;

    OptimizationOutcome out;
    if (refined_signed <= best) {
        out = refined;
    } else {
        out.argopt = best_sigma;
        out.value = sign * best;
    }
    out.restart_values = {out.value};
    return out;
}

}  // namespace renyi
