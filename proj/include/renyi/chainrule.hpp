// Copyright 2026 The renyi-chain Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "renyi/entropy.hpp"
#include "renyi/optimizer.hpp"
#include "renyi/order.hpp"
#include "renyi/states.hpp"

namespace renyi {

inline constexpr double kTripleResidualTol = 1e-12;
inline constexpr double kMarginTol = -1e-8;  // bits
inline constexpr double kInterpSlack = 1e-9;

enum class Direction { GEQ, LEQ, UNKNOWN };

enum class Provenance {
    Prop5,
    Prop6BetaPos,
    Prop6GammaPos,
    DualOfProp5,
    DualOfProp6BetaPos,
    DualOfProp6GammaPos,
    Unclassified
};

inline std::string to_string(Direction d) {
    switch (d) {
        case Direction::GEQ: return "GEQ";
        case Direction::LEQ: return "LEQ";
        default: return "UNKNOWN";
    }
}

inline std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Prop5: return "prop5";
        case Provenance::Prop6BetaPos: return "prop6_beta_pos";
        case Provenance::Prop6GammaPos: return "prop6_gamma_pos";
        case Provenance::DualOfProp5: return "dual_of_prop5";
        case Provenance::DualOfProp6BetaPos: return "dual_of_prop6_beta_pos";
        case Provenance::DualOfProp6GammaPos: return "dual_of_prop6_gamma_pos";
        default: return "unclassified";
    }
}

// Parameter triple on the constraint surface 1/alpha' = 1/beta' + 1/gamma'.
struct ChainTriple {
    RenyiOrder alpha;
    RenyiOrder beta;
    RenyiOrder gamma;
    Direction predicted_direction = Direction::UNKNOWN;
    Provenance provenance = Provenance::Unclassified;

    ChainTriple(RenyiOrder a, RenyiOrder b, RenyiOrder g)
        : alpha(a), beta(b), gamma(g) {
        for (const RenyiOrder* o : {&a, &b, &g}) {
            double v = o->alpha();
            if (!(v > 0.5) || v == 1.0)
                throw OutOfRange("ChainTriple: orders must lie in (1/2,1) u (1,inf)");
        }
        if (std::abs(constraint_residual()) > kTripleResidualTol)
            throw OutOfRange("ChainTriple: constraint 1/a' = 1/b' + 1/g' violated");
    }

    double constraint_residual() const {
        return 1.0 / alpha.prime() - 1.0 / beta.prime() - 1.0 / gamma.prime();
    }

    double theorem1_product() const {
        return (alpha.alpha() - 1.0) * (beta.alpha() - 1.0) * (gamma.alpha() - 1.0);
    }

    // Direction the literal product test would predict; logged next to
    // the proposition-based classification, which is authoritative here.
    Direction direction_by_product() const {
        double p = theorem1_product();
        if (p > 1.0) return Direction::GEQ;
        if (p < 1.0) return Direction::LEQ;
        return Direction::UNKNOWN;
    }
};

// Duality maps (alpha,beta,gamma) to the hatted triple with the beta and gamma
// roles exchanged, and flips the inequality direction.
inline ChainTriple dualize_triple(const ChainTriple& t);

inline ChainTriple classify_direction(ChainTriple t) {
    double a = t.alpha.alpha(), b = t.beta.alpha(), g = t.gamma.alpha();
    if (a > 1.0 && b > 1.0 && g > 1.0) {
        t.predicted_direction = Direction::GEQ;
        t.provenance = Provenance::Prop5;
    } else if (a > 1.0 && (b - 1.0) * (g - 1.0) < 0.0) {
        t.predicted_direction = Direction::LEQ;
        t.provenance = (b > 1.0) ? Provenance::Prop6BetaPos : Provenance::Prop6GammaPos;
    } else if (a < 1.0) {
        // Classify the hatted triple (alpha hat > 1) and flip the direction.
        ChainTriple hatted(t.alpha.dual(), t.gamma.dual(), t.beta.dual());
        hatted = classify_direction(hatted);
        t.predicted_direction = (hatted.predicted_direction == Direction::GEQ)
                                    ? Direction::LEQ
                                    : (hatted.predicted_direction == Direction::LEQ
                                           ? Direction::GEQ
                                           : Direction::UNKNOWN);
        switch (hatted.provenance) {
            case Provenance::Prop5: t.provenance = Provenance::DualOfProp5; break;
            case Provenance::Prop6BetaPos: t.provenance = Provenance::DualOfProp6BetaPos; break;
            case Provenance::Prop6GammaPos:
                t.provenance = Provenance::DualOfProp6GammaPos;
                break;
            default: t.provenance = Provenance::Unclassified; break;
        }
    } else {
        t.predicted_direction = Direction::UNKNOWN;
        t.provenance = Provenance::Unclassified;
    }
    return t;
}

inline ChainTriple dualize_triple(const ChainTriple& t) {
    ChainTriple d(t.alpha.dual(), t.gamma.dual(), t.beta.dual());
    return classify_direction(d);
}

// Solve the constraint for alpha given beta and gamma.
inline ChainTriple complete_triple(const RenyiOrder& beta, const RenyiOrder& gamma) {
    double s = 1.0 / beta.prime() + 1.0 / gamma.prime();
    if (std::abs(s) < 1e-14)
        throw OutOfRange("complete_triple: 1/beta' + 1/gamma' vanishes");
    double ap = 1.0 / s;
    if (!(ap > -1.0 && ap < 1.0) || ap == 0.0)
        throw OutOfRange("complete_triple: resulting alpha' outside (-1,0) u (0,1)");
    double alpha = 1.0 / (1.0 - ap);
    return classify_direction(ChainTriple(RenyiOrder(alpha), beta, gamma));
}

// The exactly-representable grid covering every provenance class.
inline std::vector<ChainTriple> default_triple_grid() {
    std::vector<ChainTriple> grid;
    grid.push_back(complete_triple(RenyiOrder(3.0), RenyiOrder(3.0)));          // (3/2,3,3)
    grid.push_back(complete_triple(RenyiOrder(2.0), RenyiOrder(2.0)));          // (4/3,2,2)
    grid.push_back(complete_triple(RenyiOrder(3.0), RenyiOrder(1.5)));          // (9/7,3,3/2)
    grid.push_back(complete_triple(RenyiOrder(2.0 / 3.0), RenyiOrder(4.0 / 3.0)));  // (2,2/3,4/3)
    grid.push_back(complete_triple(RenyiOrder(4.0 / 3.0), RenyiOrder(2.0 / 3.0)));  // (2,4/3,2/3)
    const std::size_t base = grid.size();
    for (std::size_t i = 0; i < base; ++i) grid.push_back(dualize_triple(grid[i]));
    return grid;
}

// One evaluated chain-rule instance. The margin is oriented so that a
// nonnegative value means the predicted direction holds.
struct TrialReport {
    std::string triple_id;
    double alpha = 0, beta = 0, gamma = 0;
    Direction direction = Direction::UNKNOWN;
    Provenance provenance = Provenance::Unclassified;
    std::uint64_t seed = 0;
    std::string state_name;
    std::vector<int> dims;
    int rank = 0;
    std::string pin;  // rho_C | max_mixed | random | optimized
    double lhs_bits = 0, rhs_bits = 0, h_beta_bits = 0, h_gamma_bits = 0;
    double margin_bits = 0;
    double theorem1_product = 0;
    Direction product_direction = Direction::UNKNOWN;
    bool product_disagrees = false;
    double restart_gap = 0;
    bool converged = true;
    bool finite = true;
};

namespace detail {

inline double oriented_margin(Direction d, double lhs, double rhs) {
    return (d == Direction::LEQ) ? rhs - lhs : lhs - rhs;
}

}  // namespace detail

// Evaluate lhs = H_alpha(AB|C) and rhs = H_beta(A|BC) + H_gamma(B|C) on a
// tripartite state; when sigma_C is supplied the alpha and gamma terms are
// pinned at it (closed form) and only the beta term is optimized.
inline TrialReport verify_chain_rule(const ChainTriple& t, const DensityOperator& rho,
                                     const std::optional<Matrix>& sigma_c,
                                     const OptimizerConfig& config, SeededSampler& sampler,
                                     const std::optional<EntropyResult>& h_beta_cached =
                                         std::nullopt) {
    const auto& labels = rho.factorization.labels;
    if (labels.size() != 3)
        throw DimensionMismatch("verify_chain_rule: need a tripartite factorization");
    const std::string a = labels[0], b = labels[1], c = labels[2];

    TrialReport rep;
    rep.alpha = t.alpha.alpha();
    rep.beta = t.beta.alpha();
    rep.gamma = t.gamma.alpha();
    rep.direction = t.predicted_direction;
    rep.provenance = t.provenance;
    rep.theorem1_product = t.theorem1_product();
    rep.product_direction = t.direction_by_product();
    rep.product_disagrees = (rep.product_direction != Direction::UNKNOWN &&
                             t.predicted_direction != Direction::UNKNOWN &&
                             rep.product_direction != t.predicted_direction);
    rep.dims = rho.factorization.dims;

    EntropyResult h_beta;
    if (h_beta_cached) {
        h_beta = *h_beta_cached;
    } else {
        SeededSampler sb = sampler.fork(1);
        h_beta = cond_entropy(rho, {b, c}, t.beta, config, sb);
    }
    rep.h_beta_bits = h_beta.value;
    rep.restart_gap = h_beta.residual;
    rep.converged = h_beta.converged;

    EntropyResult lhs, h_gamma;
    DensityOperator rho_bc = rho.reduce({b, c});
    if (sigma_c) {
        lhs = cond_entropy_pinned(rho, {c}, *sigma_c, t.alpha);
        h_gamma = cond_entropy_pinned(rho_bc, {c}, *sigma_c, t.gamma);
    } else {
        SeededSampler sl = sampler.fork(2);
        lhs = cond_entropy(rho, {c}, t.alpha, config, sl);
        SeededSampler sg = sampler.fork(3);
        h_gamma = cond_entropy(rho_bc, {c}, t.gamma, config, sg);
        rep.restart_gap = std::max({rep.restart_gap, lhs.residual, h_gamma.residual});
        rep.converged = rep.converged && lhs.converged && h_gamma.converged;
    }

    rep.lhs_bits = lhs.value;
    rep.h_gamma_bits = h_gamma.value;
    rep.rhs_bits = h_beta.value + h_gamma.value;
    rep.finite = std::isfinite(rep.lhs_bits) && std::isfinite(rep.rhs_bits);
    rep.margin_bits = rep.finite
                          ? detail::oriented_margin(t.predicted_direction, rep.lhs_bits,
                                                    rep.rhs_bits)
                          : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

// One evaluated interpolation-inequality instance at the strip endpoints.
struct InterpolationInstance {
    std::string branch;  // prop5 | prop6_beta_pos | prop6_gamma_pos
    double theta = 0, p0 = 0, p1 = 0, p_theta = 0, expected_p_theta = 0;
    double M0 = 0, M1 = 0, lhs = 0;
    double ptheta_residual = 0;
    double theta_identity_residual = 0;
    bool holds = false;
    double log2_slack = 0;  // log2(bound) - log2(lhs); >= ~0 when the bound holds
};

namespace detail {

inline InterpolationInstance finish_instance(InterpolationInstance inst) {
    inst.p_theta = 1.0 / ((1.0 - inst.theta) / inst.p0 + inst.theta / inst.p1);
    inst.ptheta_residual = std::abs(inst.p_theta - inst.expected_p_theta);
    double log2_bound = (1.0 - inst.theta) * std::log2(inst.M0) + inst.theta * std::log2(inst.M1);
    inst.log2_slack = log2_bound - std::log2(inst.lhs);
    inst.holds = inst.lhs <= std::exp2(log2_bound) * (1.0 + kInterpSlack);
    return inst;
}

inline Matrix interp_left(const OpView& X, const Matrix& sigma, double power) {
    return embed_operator(X.out_f, {X.out_f.labels.back()}, mat_pow_support(sigma, power));
}

inline Matrix interp_right(const OpView& X, const Matrix& tau, double power) {
    return embed_operator(X.in_f, {X.in_f.labels.back()}, mat_pow_support(tau, power));
}

}  // namespace detail

// Endpoint instance of the three-line bound behind the GEQ case:
// ||s^{-a'/2} X t^{a'/2}||_2 <= ||X t^{b'/2}||_{2 beta_hat}^{a'/b'}
//                               ||s^{-g'/2} X||_{2 gamma}^{a'/g'}.
inline InterpolationInstance interpolation_check_prop5(const OpView& X, const Matrix& sigma,
                                                       const Matrix& tau,
                                                       const ChainTriple& t) {
    if (t.provenance != Provenance::Prop5)
        throw ClassificationMismatch("interpolation_check_prop5: triple is not prop5");
    const double ap = t.alpha.prime(), bp = t.beta.prime(), gp = t.gamma.prime();
    const double bhat = t.beta.hat();

    InterpolationInstance inst;
    inst.branch = "prop5";
    inst.theta = ap / gp;
    inst.p0 = 2.0 * bhat;
    inst.p1 = 2.0 * t.gamma.alpha();
    inst.expected_p_theta = 2.0;
    inst.theta_identity_residual = std::abs((1.0 - inst.theta) - ap / bp);

    inst.lhs = schatten(detail::interp_left(X, sigma, -ap / 2.0) * X.X *
                            detail::interp_right(X, tau, ap / 2.0),
                        2.0);
    inst.M0 = schatten(X.X * detail::interp_right(X, tau, bp / 2.0), 2.0 * bhat);
    inst.M1 = schatten(detail::interp_left(X, sigma, -gp / 2.0) * X.X, 2.0 * t.gamma.alpha());
    return detail::finish_instance(inst);
}

// Endpoint instances of the two LEQ-case bounds; the branch is selected by the
// sign of beta'.
inline InterpolationInstance interpolation_check_prop6(const OpView& X, const Matrix& sigma,
                                                       const Matrix& tau,
                                                       const ChainTriple& t) {
    if (t.provenance != Provenance::Prop6BetaPos && t.provenance != Provenance::Prop6GammaPos)
        throw ClassificationMismatch("interpolation_check_prop6: triple is not prop6");
    const double ap = t.alpha.prime(), bp = t.beta.prime(), gp = t.gamma.prime();
    const double bhat = t.beta.hat();

    InterpolationInstance inst;
    Matrix F_alpha = detail::interp_left(X, sigma, -ap / 2.0) * X.X *
                     detail::interp_right(X, tau, ap / 2.0);
    if (bp > 0.0) {
        inst.branch = "prop6_beta_pos";
        inst.theta = -bp / gp;
        inst.p0 = 2.0;
        inst.p1 = 2.0 * t.gamma.alpha();
        inst.expected_p_theta = 2.0 * bhat;
        inst.theta_identity_residual = std::abs((1.0 - inst.theta) - bp / ap);
        inst.lhs = schatten(X.X * detail::interp_right(X, tau, bp / 2.0), 2.0 * bhat);
        inst.M0 = schatten(F_alpha, 2.0);
        inst.M1 = schatten(detail::interp_left(X, sigma, -gp / 2.0) * X.X,
                           2.0 * t.gamma.alpha());
    } else {
        inst.branch = "prop6_gamma_pos";
        inst.theta = -gp / bp;
        inst.p0 = 2.0;
        inst.p1 = 2.0 * bhat;
        inst.expected_p_theta = 2.0 * t.gamma.alpha();
        inst.theta_identity_residual = std::abs((1.0 - inst.theta) - gp / ap);
        inst.lhs = schatten(detail::interp_left(X, sigma, -gp / 2.0) * X.X,
                            2.0 * t.gamma.alpha());
        inst.M0 = schatten(F_alpha, 2.0);
        inst.M1 = schatten(X.X * detail::interp_right(X, tau, bp / 2.0), 2.0 * bhat);
    }
    return detail::finish_instance(inst);
}

// Monte-Carlo sweep configuration and summary.
struct SweepSpec {
    TensorFactorization factorization{{"A", "B", "C"}, {2, 2, 2}};
    int trials = 300;
    int rank = 8;
    std::string ensemble = "both";  // ginibre | corners | both
    bool include_optimized = false;
    int threads = 1;
};

struct TripleSummary {
    std::string triple_id;
    double min_margin = std::numeric_limits<double>::infinity();
    double mean_margin = 0.0;
    int trials = 0;
    int violations = 0;
    bool product_disagrees = false;
};

struct SweepResult {
    std::vector<TrialReport> reports;
    std::vector<TripleSummary> summaries;
    int violations = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    double max_restart_gap = 0.0;
};

// Deterministic Monte-Carlo sweep over (triple, state, pin). The beta term is
// optimized once per (triple, state) and shared across pins.
inline SweepResult sweep(const std::vector<ChainTriple>& triples, const SweepSpec& spec,
                         const OptimizerConfig& config, const SeededSampler& master) {
    struct Task {
        std::size_t triple_idx;
        int trial_idx;
        DensityOperator state;
        std::string name;
        int rank;
        std::uint64_t seed;
    };

    std::vector<Task> tasks;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        int trial = 0;
        if (spec.ensemble == "ginibre" || spec.ensemble == "both") {
            for (int j = 0; j < spec.trials; ++j, ++trial) {
                SeededSampler child =
                    master.fork(static_cast<std::uint64_t>(i) * 1000003ULL +
                                static_cast<std::uint64_t>(j));
                DensityOperator rho = random_density(child, spec.factorization, spec.rank);
                tasks.push_back(
                    {i, trial, std::move(rho), "ginibre", spec.rank, child.seed()});
            }
        }
        if (spec.ensemble == "corners" || spec.ensemble == "both") {
            SeededSampler corner_sampler = master.fork(static_cast<std::uint64_t>(i) + 777ULL);
            for (auto& [name, rho] : corner_states(spec.factorization, corner_sampler)) {
                int full_dim = static_cast<int>(rho.matrix.rows());
                tasks.push_back(
                    {i, trial++, std::move(rho), name, full_dim, corner_sampler.seed()});
            }
        }
    }

    std::vector<std::vector<TrialReport>> per_task(tasks.size());
    std::atomic<std::size_t> next{0};

    auto run_task = [&](std::size_t k) {
        const Task& task = tasks[k];
        const ChainTriple& t = triples[task.triple_idx];
        const auto& labels = spec.factorization.labels;
        SeededSampler trial_sampler =
            master.fork(0xC0FFEEULL + static_cast<std::uint64_t>(k));

        // Beta term is pin-independent; compute once.
        SeededSampler sb = trial_sampler.fork(1);
        EntropyResult h_beta =
            cond_entropy(task.state, {labels[1], labels[2]}, t.beta, config, sb);

        Matrix rho_c = partial_trace(task.state.matrix, spec.factorization, {labels[2]});
        rho_c = 0.5 * (rho_c + rho_c.adjoint());
        const int dc = static_cast<int>(rho_c.rows());
        SeededSampler pin_sampler = trial_sampler.fork(4);
        Matrix random_pin =
            random_density(pin_sampler, spec.factorization.restricted_to({labels[2]})).matrix;

        std::vector<std::pair<std::string, std::optional<Matrix>>> pins = {
            {"rho_C", rho_c},
            {"max_mixed", Matrix::Identity(dc, dc) / static_cast<double>(dc)},
            {"random", random_pin}};
        if (spec.include_optimized) pins.push_back({"optimized", std::nullopt});

        for (const auto& [pin_name, pin] : pins) {
            SeededSampler ps = trial_sampler.fork(10 + per_task[k].size());
            TrialReport rep = verify_chain_rule(t, task.state, pin, config, ps, h_beta);
            rep.triple_id = "(" + std::to_string(t.alpha.alpha()) + "," +
                            std::to_string(t.beta.alpha()) + "," +
                            std::to_string(t.gamma.alpha()) + ")";
            rep.seed = task.seed;
            rep.state_name = task.name;
            rep.rank = task.rank;
            rep.pin = pin_name;
            per_task[k].push_back(std::move(rep));
        }
    };

    int n_threads = std::max(spec.threads, 1);
    if (n_threads == 1) {
        for (std::size_t k = 0; k < tasks.size(); ++k) run_task(k);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < tasks.size();
                     k = next.fetch_add(1))
                    run_task(k);
            });
        }
        for (auto& th : pool) th.join();
    }

    SweepResult result;
    std::vector<TripleSummary> summaries(triples.size());
    std::vector<double> sums(triples.size(), 0.0);
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        for (auto& rep : per_task[k]) {
            TripleSummary& s = summaries[tasks[k].triple_idx];
            s.triple_id = rep.triple_id;
            s.trials += 1;
            s.product_disagrees = s.product_disagrees || rep.product_disagrees;
            if (std::isfinite(rep.margin_bits)) {
                s.min_margin = std::min(s.min_margin, rep.margin_bits);
                sums[tasks[k].triple_idx] += rep.margin_bits;
            }
            bool violated = !(rep.margin_bits >= kMarginTol);
            if (rep.direction != Direction::UNKNOWN && violated) {
                s.violations += 1;
                result.violations += 1;
            }
            result.worst_margin = std::min(result.worst_margin, rep.margin_bits);
            result.max_restart_gap = std::max(result.max_restart_gap, rep.restart_gap);
            result.reports.push_back(std::move(rep));
        }
    }
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        if (summaries[i].trials > 0) summaries[i].mean_margin = sums[i] / summaries[i].trials;
        result.summaries.push_back(summaries[i]);
    }
    return result;
}

}  // namespace renyi
