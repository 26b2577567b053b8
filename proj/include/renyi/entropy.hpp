// Copyright 2026 The renyi-chain Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "renyi/linalg.hpp"
#include "renyi/optimizer.hpp"
#include "renyi/order.hpp"
#include "renyi/states.hpp"

namespace renyi {

inline constexpr double kSupportTestTol = 1e-9;

struct EntropyResult {
    double value = 0.0;  // bits; may be +-infinity
    std::string method = "direct";
    int iterations = 0;
    double residual = 0.0;  // relative gap between two best restarts
    std::vector<double> restart_values;
    std::optional<Matrix> optimizer_state;
    bool converged = true;
};

namespace detail {

// Power with eigenvalues clamped away from zero instead of truncated; used on
// full-support optimizer iterates where the support projection would be wrong.
inline Matrix mat_pow_clamped(const Matrix& M, double p, double clamp = 1e-300) {
    Spectrum s = eig_hermitian(M);
    RealVector f(s.eigenvalues.size());
    for (int i = 0; i < f.size(); ++i) f[i] = std::pow(std::max(s.eigenvalues[i], clamp), p);
    return s.eigenvectors * f.asDiagonal() * s.eigenvectors.adjoint();
}

inline bool support_contained(const Matrix& rho, const Matrix& sigma) {
    Matrix pi = support_projector(sigma);
    Matrix off = rho - pi * rho * pi;
    return off.norm() <= kSupportTestTol * std::max(rho.norm(), 1e-300);
}

// log2 tr[(sigma^{-a'/2} rho sigma^{-a'/2})^alpha] with powers on support.
inline double log2_sandwich_trace(const Matrix& rho, const Matrix& sigma, double alpha,
                                  bool clamped) {
    double ap = (alpha - 1.0) / alpha;
    Matrix sp = clamped ? mat_pow_clamped(sigma, -ap / 2.0) : mat_pow_support(sigma, -ap / 2.0);
    Matrix W = sp * rho * sp;
    Spectrum s = eig_hermitian(0.5 * (W + W.adjoint()));
    RealVector w = s.eigenvalues.cwiseMax(0.0);
    return log2_sum_pow(w, alpha);
}

inline double umegaki_divergence(const Matrix& rho, const Matrix& sigma) {
    if (!support_contained(rho, sigma)) return std::numeric_limits<double>::infinity();
    double tr = rho.trace().real();
    Matrix lr = mat_log2_support(rho);
    Matrix ls = mat_log2_support(sigma);
    return ((rho * (lr - ls)).trace().real()) / tr;
}

}  // namespace detail

// Sandwiched Renyi alpha-divergence in bits. Returns +infinity when alpha > 1
// and supp(rho) is not contained in supp(sigma). Orders within the von Neumann
// window route to the Umegaki divergence.
inline double divergence(const Matrix& rho, const Matrix& sigma, const RenyiOrder& order) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw DimensionMismatch("divergence: operand shapes differ");
    double tr = rho.trace().real();
    if (!(tr > 0.0)) throw ZeroState("divergence: rho has nonpositive trace");
    check_psd(eig_hermitian(rho).eigenvalues);
    check_psd(eig_hermitian(sigma).eigenvalues);

    if (order.is_von_neumann()) return detail::umegaki_divergence(rho, sigma);

    double alpha = order.alpha();
    if (alpha > 1.0 && !detail::support_contained(rho, sigma))
        return std::numeric_limits<double>::infinity();

    double log2q = detail::log2_sandwich_trace(rho, sigma, alpha, /*clamped=*/false);
    return (log2q - std::log2(tr)) / (alpha - 1.0);
}

namespace detail {

// Interior divergence for optimizer objectives: sigma is full support by
// construction, so powers are clamped rather than truncated and the support
// test is skipped.
inline double divergence_interior(const Matrix& rho, const Matrix& sigma,
                                  const RenyiOrder& order) {
    double alpha = order.alpha();
    double tr = rho.trace().real();
    if (order.is_von_neumann()) return umegaki_divergence(rho, sigma);
    double log2q = log2_sandwich_trace(rho, sigma, alpha, /*clamped=*/true);
    return (log2q - std::log2(tr)) / (alpha - 1.0);
}

}  // namespace detail

// Von Neumann conditional entropy in bits; pinned at sigma when given,
// otherwise at the known optimum sigma = rho_cond.
inline double von_neumann_cond(const DensityOperator& rho,
                               const std::vector<std::string>& cond,
                               const std::optional<Matrix>& sigma = std::nullopt) {
    Matrix sig = sigma ? *sigma : partial_trace(rho.matrix, rho.factorization, cond);
    Matrix full = embed_operator(rho.factorization, cond, sig);
    return -detail::umegaki_divergence(rho.matrix, full);
}

// H_alpha(rest|cond)_{rho|sigma} = -D_alpha(rho || id (x) sigma). Closed form.
inline EntropyResult cond_entropy_pinned(const DensityOperator& rho,
                                         const std::vector<std::string>& cond,
                                         const Matrix& sigma_cond, const RenyiOrder& order) {
    EntropyResult res;
    res.method = order.is_von_neumann() ? "von_neumann" : "pinned";
    Matrix full = embed_operator(rho.factorization, cond, sigma_cond);
    res.value = -divergence(rho.matrix, full, order);
    return res;
}

namespace detail {

// Damped stationarity iteration for the conditioning state. The candidate map
// is sigma <- (sigma^{(a-1)/2} tr_rest[(sigma^{-a'/2} rho sigma^{-a'/2})^a]
// sigma^{(a-1)/2})^{1/a}, normalized; steps that worsen the divergence are
// halved back toward the previous iterate.
inline Matrix fixed_point_sigma(const DensityOperator& rho,
                                const std::vector<std::string>& cond,
                                const RenyiOrder& order, Matrix sigma, int max_iters = 300) {
    const double alpha = order.alpha();
    const double ap = order.prime();
    const int dc = static_cast<int>(sigma.rows());
    const TensorFactorization& f = rho.factorization;
    const Matrix eye = Matrix::Identity(dc, dc);

    auto dval = [&](const Matrix& s) {
        return divergence_interior(rho.matrix, embed_operator(f, cond, s), order);
    };
    double current = dval(sigma);

    for (int k = 0; k < max_iters; ++k) {
        Matrix sp = mat_pow_clamped(sigma + 1e-14 * eye, -ap / 2.0);
        Matrix S = embed_operator(f, cond, sp);
        Matrix W = S * rho.matrix * S;
        W = mat_pow_support(0.5 * (W + W.adjoint()), alpha);
        Matrix G = partial_trace(W, f, cond);
        Matrix sh = mat_pow_clamped(sigma + 1e-14 * eye, (alpha - 1.0) / 2.0);
        Matrix cand = mat_pow_support(0.5 * (sh * G * sh + (sh * G * sh).adjoint()), 1.0 / alpha);
        double trc = cand.trace().real();
        if (!(trc > 0.0)) break;
        cand /= trc;
        cand = 0.5 * (cand + cand.adjoint());

        double next = dval(cand);
        int halvings = 0;
        while (next > current + 1e-12 && halvings < 6) {
            cand = 0.5 * (cand + sigma);
            cand = 0.5 * (cand + cand.adjoint());
            next = dval(cand);
            ++halvings;
        }
        double move = (cand - sigma).norm();
        if (next <= current) {
            sigma = cand;
            current = next;
        }
        if (move < 1e-15) break;
    }
    return sigma;
}

}  // namespace detail

// H_alpha(rest|cond)_rho = -inf over conditioning densities. Each restart runs
// the stationarity iteration from a different start and is then polished by
// the derivative-free optimizer; correctness is certified externally by the
// duality identity and the brute-force oracle.
inline EntropyResult cond_entropy(const DensityOperator& rho,
                                  const std::vector<std::string>& cond,
                                  const RenyiOrder& order, const OptimizerConfig& config,
                                  SeededSampler& sampler) {
    const TensorFactorization& f = rho.factorization;
    const int dc = f.dim_of_set(cond);

    if (order.is_von_neumann()) {
        EntropyResult res;
        res.method = "von_neumann";
        res.value = von_neumann_cond(rho, cond);
        res.optimizer_state = partial_trace(rho.matrix, f, cond);
        return res;
    }

    auto objective = [&](const Matrix& omega) {
        return detail::divergence_interior(rho.matrix, embed_operator(f, cond, omega), order);
    };

    OptimizerConfig cfg = config;
    cfg.mode = OptMode::Inf;
    cfg.seeds.clear();
    Matrix rho_c = partial_trace(rho.matrix, f, cond);
    rho_c = 0.5 * (rho_c + rho_c.adjoint());
    TensorFactorization fc = f.restricted_to(cond);
    std::vector<Matrix> starts = {Matrix::Identity(dc, dc) / static_cast<double>(dc), rho_c};
    SeededSampler forker = sampler.fork(4242);
    for (int r = 2; r < config.restarts; ++r) {
        SeededSampler child = forker.fork(static_cast<std::uint64_t>(r));
        starts.push_back(random_density(child, fc).matrix);
    }
    for (int r = 0; r < config.restarts && r < static_cast<int>(starts.size()); ++r) {
        Matrix st = starts[r] + 1e-10 * Matrix::Identity(dc, dc);
        st /= st.trace().real();
        cfg.seeds.push_back(detail::fixed_point_sigma(rho, cond, order, st));
    }

    OptimizationOutcome out = optimize_density(objective, dc, cfg, sampler);

    EntropyResult res;
    res.method = "direct";
    res.value = -out.value;
    res.iterations = out.iterations;
    res.residual = out.residual;
    res.restart_values = out.restart_values;
    res.optimizer_state = out.argopt;
    res.converged = out.converged;
    return res;
}

// Alternative route for the optimized conditional entropy through the
// operator-vector picture of a purification: H = -log inf over sigma of
// ||X sigma^{-a'/2}||_{2a}^{2/a'}, with X mapping the original systems to the
// purifier. Kept as an independent code path for cross-checking.
inline EntropyResult cond_entropy_lemma5(const DensityOperator& rho,
                                         const std::vector<std::string>& cond,
                                         const RenyiOrder& order,
                                         const OptimizerConfig& config,
                                         SeededSampler& sampler) {
    if (order.is_von_neumann()) throw OutOfRange("cond_entropy_lemma5: alpha too close to 1");
    const double ap = order.prime();
    const double alpha = order.alpha();

    PureState psi = purify(rho, "_purifier");
    OpView X = op_vec(psi.vector, psi.factorization, rho.factorization.labels, {"_purifier"});
    TensorFactorization fc = rho.factorization.restricted_to(cond);
    const int dc = fc.total_dim();

    auto objective = [&](const Matrix& sigma) {
        Matrix spow = detail::mat_pow_clamped(sigma, -ap / 2.0);
        Matrix right = embed_operator(X.in_f, cond, spow);
        return (2.0 / ap) * log2_schatten(X.X * right, 2.0 * alpha);
    };

    OptimizerConfig cfg = config;
    cfg.mode = OptMode::Inf;
    OptimizationOutcome out = optimize_density(objective, dc, cfg, sampler);

    EntropyResult res;
    res.method = "lemma5";
    res.value = -out.value;
    res.iterations = out.iterations;
    res.residual = out.residual;
    res.restart_values = out.restart_values;
    res.optimizer_state = out.argopt;
    res.converged = out.converged;
    return res;
}

// The three operator-vector entropy expressions for a four-party purification
// X mapping (first-in, last-in) -> (first-out, last-out). By convention the
// conditioning state sigma acts on the LAST output factor and the optimized
// tau on the LAST input factor. Optimizing over tau directly rather than its
// transpose is equivalent: the densities are closed under transposition.

// H_alpha(AB|C)_{rho|sigma} = -log sup_tau ||sigma^{-a'/2} X tau^{a'/2}||_2^{2/a'}.
inline EntropyResult h_expr_3(const OpView& X, const Matrix& sigma, const RenyiOrder& order,
                              const OptimizerConfig& config, SeededSampler& sampler) {
    if (order.is_von_neumann()) throw OutOfRange("h_expr_3: alpha too close to 1");
    const double ap = order.prime();
    const std::string& c_label = X.out_f.labels.back();
    const std::string& d_label = X.in_f.labels.back();
    const int dd = X.in_f.dim_of(d_label);

    Matrix left = embed_operator(X.out_f, {c_label}, detail::mat_pow_clamped(sigma, -ap / 2.0));
    auto objective = [&](const Matrix& tau) {
        Matrix right =
            embed_operator(X.in_f, {d_label}, detail::mat_pow_clamped(tau, ap / 2.0));
        return (2.0 / ap) * log2_schatten(left * X.X * right, 2.0);
    };

    OptimizerConfig cfg = config;
    cfg.mode = OptMode::Sup;
    OptimizationOutcome out = optimize_density(objective, dd, cfg, sampler);

    EntropyResult res;
    res.method = "opvec3";
    res.value = -out.value;
    res.iterations = out.iterations;
    res.residual = out.residual;
    res.restart_values = out.restart_values;
    res.optimizer_state = out.argopt;
    res.converged = out.converged;
    return res;
}

// H_alpha(B|C)_{rho|sigma} = -log ||sigma^{-a'/2} X||_{2 alpha}^{2/a'}. Closed form.
inline EntropyResult h_expr_4(const OpView& X, const Matrix& sigma, const RenyiOrder& order) {
    if (order.is_von_neumann()) throw OutOfRange("h_expr_4: alpha too close to 1");
    const double ap = order.prime();
    const std::string& c_label = X.out_f.labels.back();
    Matrix left = embed_operator(X.out_f, {c_label}, mat_pow_support(sigma, -ap / 2.0));
    EntropyResult res;
    res.method = "opvec4";
    res.value = -(2.0 / ap) * log2_schatten(left * X.X, 2.0 * order.alpha());
    return res;
}

// H_alpha(A|BC)_rho = -log sup_tau ||X tau^{a'/2}||_{2 alpha_hat}^{2/a'}.
inline EntropyResult h_expr_5(const OpView& X, const RenyiOrder& order,
                              const OptimizerConfig& config, SeededSampler& sampler) {
    if (order.is_von_neumann()) throw OutOfRange("h_expr_5: alpha too close to 1");
    const double ap = order.prime();
    const double ahat = order.hat();
    const std::string& d_label = X.in_f.labels.back();
    const int dd = X.in_f.dim_of(d_label);

    auto objective = [&](const Matrix& tau) {
        Matrix right =
            embed_operator(X.in_f, {d_label}, detail::mat_pow_clamped(tau, ap / 2.0));
        return (2.0 / ap) * log2_schatten(X.X * right, 2.0 * ahat);
    };

    OptimizerConfig cfg = config;
    cfg.mode = OptMode::Sup;
    OptimizationOutcome out = optimize_density(objective, dd, cfg, sampler);

    EntropyResult res;
    res.method = "opvec5";
    res.value = -out.value;
    res.iterations = out.iterations;
    res.residual = out.residual;
    res.restart_values = out.restart_values;
    res.optimizer_state = out.argopt;
    res.converged = out.converged;
    return res;
}

// Variational Schatten norm of a PSD operator: sup over densities of
// tr[Y^{a'} X] for alpha > 1, inf for alpha < 1. Cross-checked against the
// singular-value route.
inline OptimizationOutcome variational_norm(const Matrix& X, const RenyiOrder& order,
                                            const OptimizerConfig& config,
                                            SeededSampler& sampler) {
    if (order.is_von_neumann()) throw OutOfRange("variational_norm: alpha too close to 1");
    check_psd(eig_hermitian(X).eigenvalues);
    const double ap = order.prime();
    const int d = static_cast<int>(X.rows());

    auto objective = [&](const Matrix& Y) {
        Matrix yp = detail::mat_pow_clamped(Y, ap, 1e-18);
        return (yp * X).trace().real();
    };

    OptimizerConfig cfg = config;
    cfg.mode = (order.alpha() > 1.0) ? OptMode::Sup : OptMode::Inf;
    // Seed two restarts near the stationary point X^alpha / tr so the
    // two-best-restart gap certifies the optimum instead of measuring how far
    // random starts get in high dimension.
    cfg.seeds.clear();
    Matrix Xa = mat_pow_support(X, order.alpha());
    double trXa = Xa.trace().real();
    if (trXa > 0.0) {
        Matrix Ystar = Xa / trXa;
        Ystar = 0.5 * (Ystar + Ystar.adjoint());
        cfg.seeds.push_back(Ystar);
        Matrix mixed = 0.9 * Ystar + (0.1 / d) * Matrix::Identity(d, d);
        cfg.seeds.push_back(0.5 * (mixed + mixed.adjoint()));
    }
    return optimize_density(objective, d, cfg, sampler);
}

// Hand-rolled collision-entropy route for alpha = 2: an independent code path
// used to cross-check the generic divergence formula.
inline double collision_entropy_pinned(const DensityOperator& rho,
                                       const std::vector<std::string>& cond,
                                       const Matrix& sigma) {
    Spectrum s = eig_hermitian(sigma);
    check_psd(s.eigenvalues);
    const double cut = kSupportCut * std::max(s.eigenvalues.maxCoeff(), 0.0);
    RealVector f(s.eigenvalues.size());
    for (int i = 0; i < f.size(); ++i)
        f[i] = (s.eigenvalues[i] > cut) ? 1.0 / std::sqrt(std::sqrt(s.eigenvalues[i])) : 0.0;
    Matrix quarter = s.eigenvectors * f.asDiagonal() * s.eigenvectors.adjoint();
    Matrix S = embed_operator(rho.factorization, cond, quarter);
    Matrix T = S * rho.matrix * S;
    return -std::log2((T * T).trace().real());
}

}  // namespace renyi
