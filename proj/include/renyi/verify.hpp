// Copyright 2026 The renyi-chain Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "renyi/chainrule.hpp"
#include "renyi/entropy.hpp"
#include "renyi/states.hpp"

namespace renyi {

struct SuiteResult {
    std::string name;
    int trials = 0;
    int violations = 0;
    double worst_residual = 0.0;
    double max_restart_gap = 0.0;
    std::vector<std::string> failures;

    void record(bool ok, double residual, const std::string& what) {
        trials += 1;
        worst_residual = std::max(worst_residual, residual);
        if (!ok) {
            violations += 1;
            if (failures.size() < 32) failures.push_back(what);
        }
    }
};

inline const std::vector<double>& default_alpha_grid() {
    static const std::vector<double> g = {0.6, 0.75, 1.5, 2.0, 3.0};
    return g;
}

// Duality identity: |H_a(A|B) + H_ahat(A|C)| on Haar-random tripartite pure
// states, where ahat is the dual order.
inline SuiteResult run_duality_suite(std::uint64_t seed, int trials,
                                     const OptimizerConfig& config,
                                     const std::vector<double>& alphas = default_alpha_grid(),
                                     double tol = 1e-5) {
    SuiteResult res;
    res.name = "duality";
    TensorFactorization f({"A", "B", "C"}, {2, 2, 2});
    SeededSampler master(seed);
    for (int t = 0; t < trials; ++t) {
        SeededSampler child = master.fork(t);
        PureState psi = random_pure(child, f);
        DensityOperator rho = psi.density();
        DensityOperator rho_ab = rho.reduce({"A", "B"});
        DensityOperator rho_ac = rho.reduce({"A", "C"});
        for (double a : alphas) {
            RenyiOrder order(a);
            SeededSampler s1 = child.fork(1), s2 = child.fork(2);
            EntropyResult hab = cond_entropy(rho_ab, {"B"}, order, config, s1);
            EntropyResult hac = cond_entropy(rho_ac, {"C"}, order.dual(), config, s2);
            double resid = std::abs(hab.value + hac.value);
            res.max_restart_gap =
                std::max({res.max_restart_gap, hab.residual, hac.residual});
            res.record(resid <= tol, resid,
                       "duality trial " + std::to_string(t) + " alpha " + std::to_string(a));
        }
    }
    return res;
}

// Operator-vector entropy expressions against the direct divergence-based
// routes on 4-party pure states (all local dimensions 2).
inline SuiteResult run_lemma4_suite(std::uint64_t seed, int trials,
                                    const OptimizerConfig& config,
                                    const std::vector<double>& alphas = default_alpha_grid(),
                                    double tol_closed = 1e-8, double tol_opt = 1e-6) {
    SuiteResult res;
    res.name = "lemma4";
    TensorFactorization f({"A", "B", "C", "D"}, {2, 2, 2, 2});
    SeededSampler master(seed);
    for (int t = 0; t < trials; ++t) {
        SeededSampler child = master.fork(t);
        PureState psi = random_pure(child, f);
        DensityOperator rho = psi.density();
        OpView X = op_vec(psi.vector, f, {"A", "D"}, {"B", "C"});
        SeededSampler sig_sampler = child.fork(99);
        Matrix sigma_c =
            random_density(sig_sampler, TensorFactorization({"C"}, {2})).matrix;

        DensityOperator rho_abc = rho.reduce({"A", "B", "C"});
        DensityOperator rho_bc = rho.reduce({"B", "C"});

        for (double a : alphas) {
            RenyiOrder order(a);

            // Closed form on both sides.
            double direct4 = cond_entropy_pinned(rho_bc, {"C"}, sigma_c, order).value;
            double eq4 = h_expr_4(X, sigma_c, order).value;
            res.record(std::abs(direct4 - eq4) <= tol_closed, std::abs(direct4 - eq4),
                       "eq4 trial " + std::to_string(t) + " alpha " + std::to_string(a));

            // Optimized tau against the pinned closed form.
            double direct3 = cond_entropy_pinned(rho_abc, {"C"}, sigma_c, order).value;
            SeededSampler s3 = child.fork(3);
            EntropyResult eq3 = h_expr_3(X, sigma_c, order, config, s3);
            res.max_restart_gap = std::max(res.max_restart_gap, eq3.residual);
            res.record(std::abs(direct3 - eq3.value) <= tol_opt, std::abs(direct3 - eq3.value),
                       "eq3 trial " + std::to_string(t) + " alpha " + std::to_string(a));

            // Optimized tau against the optimized direct route.
            SeededSampler s5a = child.fork(5), s5b = child.fork(6);
            EntropyResult direct5 = cond_entropy(rho_abc, {"B", "C"}, order, config, s5a);
            EntropyResult eq5 = h_expr_5(X, order, config, s5b);
            res.max_restart_gap =
                std::max({res.max_restart_gap, direct5.residual, eq5.residual});
            res.record(std::abs(direct5.value - eq5.value) <= tol_opt,
                       std::abs(direct5.value - eq5.value),
                       "eq5 trial " + std::to_string(t) + " alpha " + std::to_string(a));
        }
    }
    return res;
}

// Variational Schatten norm against the singular-value route.
inline SuiteResult run_lemma6_suite(std::uint64_t seed, int trials,
                                    const OptimizerConfig& config,
                                    const std::vector<double>& alphas = {0.8, 2.0, 3.0},
                                    double tol = 1e-6) {
    SuiteResult res;
    res.name = "lemma6";
    const std::vector<int> dims = {2, 3, 4};
    SeededSampler master(seed);
    for (int t = 0; t < trials; ++t) {
        SeededSampler child = master.fork(t);
        int d = dims[t % dims.size()];
        TensorFactorization f({"A"}, {d});
        Matrix X = random_density(child, f).matrix * (1.0 + 3.0 * child.uniform());
        for (double a : alphas) {
            RenyiOrder order(a);
            SeededSampler s = child.fork(static_cast<std::uint64_t>(a * 100));
            OptimizationOutcome out = variational_norm(X, order, config, s);
            double direct = schatten(X, a);
            double resid = std::abs(out.value - direct) / std::max(direct, 1e-300);
            res.max_restart_gap = std::max(res.max_restart_gap, out.residual);
            res.record(resid <= tol, resid,
                       "lemma6 trial " + std::to_string(t) + " dim " + std::to_string(d) +
                           " alpha " + std::to_string(a));
        }
    }
    return res;
}

// Interpolation-bound endpoint instances for all three classification branches.
inline SuiteResult run_interpolation_suite(std::uint64_t seed, int trials_per_branch,
                                           double identity_tol = 1e-12) {
    SuiteResult res;
    res.name = "interpolation";
    TensorFactorization f({"A", "B", "C", "D"}, {2, 2, 2, 2});
    TensorFactorization fc({"C"}, {2}), fd({"D"}, {2});

    ChainTriple prop5 = complete_triple(RenyiOrder(3.0), RenyiOrder(3.0));
    ChainTriple prop6_bp = complete_triple(RenyiOrder(4.0 / 3.0), RenyiOrder(2.0 / 3.0));
    ChainTriple prop6_gp = complete_triple(RenyiOrder(2.0 / 3.0), RenyiOrder(4.0 / 3.0));

    SeededSampler master(seed);
    for (int t = 0; t < trials_per_branch; ++t) {
        SeededSampler child = master.fork(t);
        PureState psi = random_pure(child, f);
        OpView X = op_vec(psi.vector, f, {"A", "D"}, {"B", "C"});
        SeededSampler s1 = child.fork(1), s2 = child.fork(2);
        Matrix sigma = random_density(s1, fc).matrix;
        Matrix tau = random_density(s2, fd).matrix;

        auto check = [&](const InterpolationInstance& inst) {
            double resid = std::max(inst.ptheta_residual, inst.theta_identity_residual);
            bool ok = inst.holds && resid <= identity_tol;
            res.record(ok, std::max(resid, std::max(-inst.log2_slack, 0.0)),
                       inst.branch + " trial " + std::to_string(t));
        };
        check(interpolation_check_prop5(X, sigma, tau, prop5));
        check(interpolation_check_prop6(X, sigma, tau, prop6_bp));
        check(interpolation_check_prop6(X, sigma, tau, prop6_gp));
    }
    return res;
}

}  // namespace renyi
