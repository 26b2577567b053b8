// Copyright 2026 The renyi-chain Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "renyi/chainrule.hpp"
#include "renyi/io.hpp"

using namespace renyi;

namespace {

const OptimizerConfig kCfg = [] {
    OptimizerConfig c;
    c.restarts = 3;
    c.max_iters = 900;
    return c;
}();

}  // namespace

TEST_CASE("complete_triple constraint arithmetic") {
    ChainTriple t1 = complete_triple(RenyiOrder(3.0), RenyiOrder(3.0));
    CHECK(t1.alpha.alpha() == doctest::Approx(1.5).epsilon(1e-14));

    ChainTriple t2 = complete_triple(RenyiOrder(2.0 / 3.0), RenyiOrder(4.0 / 3.0));
    CHECK(t2.alpha.alpha() == doctest::Approx(2.0).epsilon(1e-14));

    // 1/gamma' = -1/beta' makes the constraint singular.
    CHECK_THROWS_AS(complete_triple(RenyiOrder(2.0), RenyiOrder(2.0 / 3.0)), OutOfRange);
}

TEST_CASE("triple construction validation") {
    CHECK_THROWS_AS(ChainTriple(RenyiOrder(1.0), RenyiOrder(3.0), RenyiOrder(3.0)),
                    OutOfRange);
    // Orders fine but constraint violated.
    CHECK_THROWS_AS(ChainTriple(RenyiOrder(2.0), RenyiOrder(3.0), RenyiOrder(3.0)),
                    OutOfRange);
}

TEST_CASE("direction classification covers all provenance classes") {
    ChainTriple p5 = complete_triple(RenyiOrder(3.0), RenyiOrder(3.0));
    CHECK(p5.predicted_direction == Direction::GEQ);
    CHECK(p5.provenance == Provenance::Prop5);

    ChainTriple p6g = complete_triple(RenyiOrder(2.0 / 3.0), RenyiOrder(4.0 / 3.0));
    CHECK(p6g.predicted_direction == Direction::LEQ);
    CHECK(p6g.provenance == Provenance::Prop6GammaPos);

    ChainTriple p6b = complete_triple(RenyiOrder(4.0 / 3.0), RenyiOrder(2.0 / 3.0));
    CHECK(p6b.predicted_direction == Direction::LEQ);
    CHECK(p6b.provenance == Provenance::Prop6BetaPos);

    ChainTriple low = complete_triple(RenyiOrder(2.0), RenyiOrder(2.0));
    CHECK(low.alpha.alpha() == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(low.predicted_direction == Direction::GEQ);
    CHECK(low.provenance == Provenance::Prop5);
    // The literal product test disagrees here: (1/3)(1)(1) = 1/3 < 1.
    CHECK(low.theorem1_product() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(low.direction_by_product() == Direction::LEQ);
}

TEST_CASE("dualize_triple hat arithmetic and direction flip") {
    ChainTriple t = complete_triple(RenyiOrder(3.0), RenyiOrder(3.0));  // (3/2,3,3)
    ChainTriple d = dualize_triple(t);
    CHECK(d.alpha.alpha() == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(d.beta.alpha() == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(d.gamma.alpha() == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(d.predicted_direction == Direction::LEQ);
    CHECK(d.provenance == Provenance::DualOfProp5);
}

TEST_CASE("dualize_triple is an involution") {
    for (const ChainTriple& t : default_triple_grid()) {
        ChainTriple dd = dualize_triple(dualize_triple(t));
        CHECK(std::abs(dd.alpha.alpha() - t.alpha.alpha()) <= 1e-12);
        CHECK(std::abs(dd.beta.alpha() - t.beta.alpha()) <= 1e-12);
        CHECK(std::abs(dd.gamma.alpha() - t.gamma.alpha()) <= 1e-12);
        CHECK(dd.predicted_direction == t.predicted_direction);
    }
}

TEST_CASE("constraint closure on 100 random admissible triples") {
    SeededSampler s(1);
    int made = 0;
    while (made < 100) {
        double b = 0.55 + 2.5 * s.uniform();
        double g = 0.55 + 2.5 * s.uniform();
        if (std::abs(b - 1.0) < 0.02 || std::abs(g - 1.0) < 0.02) continue;
        try {
            ChainTriple t = complete_triple(RenyiOrder(b), RenyiOrder(g));
            CHECK(std::abs(t.constraint_residual()) <= 1e-12);
            ChainTriple d = dualize_triple(t);
            CHECK(std::abs(d.constraint_residual()) <= 1e-12);
            ++made;
        } catch (const OutOfRange&) {
            continue;  // constraint pushed alpha outside the admissible band
        }
    }
}

TEST_CASE("default grid covers every provenance class exactly once per dual pair") {
    auto grid = default_triple_grid();
    CHECK(grid.size() == 10);
    int prop5 = 0, prop6 = 0, duals = 0;
    for (const auto& t : grid) {
        CHECK(t.predicted_direction != Direction::UNKNOWN);
        switch (t.provenance) {
            case Provenance::Prop5: ++prop5; break;
            case Provenance::Prop6BetaPos:
            case Provenance::Prop6GammaPos: ++prop6; break;
            default: ++duals; break;
        }
    }
    CHECK(prop5 == 3);
    CHECK(prop6 == 2);
    CHECK(duals == 5);
}

TEST_CASE("chain rule on the maximally mixed tripartite state is tight") {
    TensorFactorization f({"A", "B", "C"}, {2, 2, 2});
    DensityOperator rho = maximally_mixed(f);
    ChainTriple t = complete_triple(RenyiOrder(3.0), RenyiOrder(3.0));
    Matrix pin = 0.5 * Matrix::Identity(2, 2);
    SeededSampler s(2);
    TrialReport rep = verify_chain_rule(t, rho, pin, kCfg, s);
    CHECK(rep.lhs_bits == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(rep.rhs_bits == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(std::abs(rep.margin_bits) <= 1e-6);
    CHECK(rep.h_gamma_bits == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("chain rule on a product pure state has both sides zero") {
    TensorFactorization f({"A", "B", "C"}, {2, 2, 2});
    Vector v = Vector::Zero(8);
    v[0] = 1.0;
    DensityOperator rho = PureState(v, f).density();
    Matrix pin = partial_trace(rho.matrix, f, {"C"});
    for (const ChainTriple& t : default_triple_grid()) {
        SeededSampler s(3);
        TrialReport rep = verify_chain_rule(t, rho, pin, kCfg, s);
        CHECK(std::abs(rep.lhs_bits) <= 1e-6);
        CHECK(std::abs(rep.rhs_bits) <= 1e-6);
    }
}

TEST_CASE("interpolation endpoint checks on closed-form and random instances") {
    TensorFactorization f({"A", "B", "C", "D"}, {2, 2, 2, 2});
    ChainTriple p5 = complete_triple(RenyiOrder(3.0), RenyiOrder(3.0));
    ChainTriple p6b = complete_triple(RenyiOrder(4.0 / 3.0), RenyiOrder(2.0 / 3.0));
    ChainTriple p6g = complete_triple(RenyiOrder(2.0 / 3.0), RenyiOrder(4.0 / 3.0));

    SUBCASE("product state with maximally mixed reference operators") {
        Vector v = Vector::Zero(16);
        v[0] = 1.0;
        OpView X = op_vec(v, f, {"A", "D"}, {"B", "C"});
        Matrix half = 0.5 * Matrix::Identity(2, 2);
        InterpolationInstance inst = interpolation_check_prop5(X, half, half, p5);
        CHECK(inst.holds);
        CHECK(inst.p_theta == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(inst.ptheta_residual <= 1e-12);
        CHECK(inst.theta_identity_residual <= 1e-12);
    }

    SUBCASE("random instances across all three branches") {
        SeededSampler gen(4);
        for (int t = 0; t < 25; ++t) {
            PureState psi = random_pure(gen, f);
            OpView X = op_vec(psi.vector, f, {"A", "D"}, {"B", "C"});
            Matrix sig = random_density(gen, TensorFactorization({"C"}, {2})).matrix;
            Matrix tau = random_density(gen, TensorFactorization({"D"}, {2})).matrix;
            for (const ChainTriple* tr : {&p5, &p6b, &p6g}) {
                InterpolationInstance inst =
                    tr->provenance == Provenance::Prop5
                        ? interpolation_check_prop5(X, sig, tau, *tr)
                        : interpolation_check_prop6(X, sig, tau, *tr);
                CHECK(inst.holds);
                CHECK(inst.ptheta_residual <= 1e-12);
                CHECK(inst.theta_identity_residual <= 1e-12);
            }
        }
    }

    SUBCASE("classification mismatch throws") {
        Vector v = Vector::Zero(16);
        v[0] = 1.0;
        OpView X = op_vec(v, f, {"A", "D"}, {"B", "C"});
        Matrix half = 0.5 * Matrix::Identity(2, 2);
        CHECK_THROWS_AS(interpolation_check_prop5(X, half, half, p6b),
                        ClassificationMismatch);
        CHECK_THROWS_AS(interpolation_check_prop6(X, half, half, p5),
                        ClassificationMismatch);
    }
}

TEST_CASE("sweep basics: empty input, determinism, corner coverage") {
    SweepSpec spec;
    spec.trials = 2;
    spec.ensemble = "both";
    SeededSampler master(5);

    SweepResult empty = sweep({}, spec, kCfg, master);
    CHECK(empty.reports.empty());
    CHECK(empty.violations == 0);

    std::vector<ChainTriple> one = {complete_triple(RenyiOrder(3.0), RenyiOrder(3.0))};
    SweepResult a = sweep(one, spec, kCfg, master);
    SweepResult b = sweep(one, spec, kCfg, master);
    RunManifest m;
    m.command = "sweep";
    CHECK(sweep_to_jsonl(a, m) == sweep_to_jsonl(b, m));
    CHECK(sweep_to_csv(a) == sweep_to_csv(b));

    // Threaded run merges to the same deterministic report order.
    SweepSpec threaded = spec;
    threaded.threads = 4;
    SweepResult c = sweep(one, threaded, kCfg, master);
    CHECK(sweep_to_jsonl(c, m) == sweep_to_jsonl(a, m));

    bool product_seen = false, bell_seen = false;
    for (const auto& rep : a.reports) {
        if (rep.state_name == "pure_product") product_seen = true;
        if (rep.state_name == "max_entangled_01") bell_seen = true;
        CHECK(rep.margin_bits >= kMarginTol);
    }
    CHECK(product_seen);
    CHECK(bell_seen);
    CHECK(a.violations == 0);
}
