// Copyright 2026 The renyi-chain Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "renyi/linalg.hpp"
#include "renyi/rng.hpp"
#include "renyi/tensor.hpp"

namespace renyi {

inline constexpr double kTraceTol = 1e-10;

// Positive semidefinite operator with unit trace (subnormalized if flagged).
struct DensityOperator {
    Matrix matrix;
    TensorFactorization factorization;
    bool subnormalized = false;

    DensityOperator() = default;
    DensityOperator(Matrix m, TensorFactorization f, bool subnorm = false)
        : matrix(std::move(m)), factorization(std::move(f)), subnormalized(subnorm) {
        validate();
    }

    double trace() const { return matrix.trace().real(); }

    void validate() const {
        if (matrix.rows() != factorization.total_dim())
            throw DimensionMismatch("DensityOperator: matrix/factorization mismatch");
        Spectrum s = eig_hermitian(matrix);
        check_psd(s.eigenvalues);
        double tr = trace();
        if (subnormalized) {
            if (!(tr > 0.0 && tr <= 1.0 + kTraceTol))
                throw Error("DensityOperator: subnormalized trace outside (0,1]");
        } else if (std::abs(tr - 1.0) > kTraceTol) {
            throw Error("DensityOperator: trace not 1 within 1e-10");
        }
    }

    DensityOperator reduce(const std::vector<std::string>& keep) const {
        return DensityOperator(partial_trace(matrix, factorization, keep),
                               factorization.restricted_to(keep), subnormalized);
    }
};

// Normalized vector with declared tensor factorization.
struct PureState {
    Vector vector;
    TensorFactorization factorization;

    PureState() = default;
    PureState(Vector v, TensorFactorization f)
        : vector(std::move(v)), factorization(std::move(f)) {
        if (vector.size() != factorization.total_dim())
            throw DimensionMismatch("PureState: vector/factorization mismatch");
        if (std::abs(vector.norm() - 1.0) > 1e-10)
            throw Error("PureState: norm not 1 within 1e-10");
    }

    Matrix projector() const { return vector * vector.adjoint(); }

    DensityOperator density() const { return DensityOperator(projector(), factorization); }
};

// Minimal purification: purifier dimension equals rank(rho), appended as the
// last tensor factor.
inline PureState purify(const DensityOperator& rho, const std::string& purifier_label) {
    if (rho.factorization.contains(purifier_label))
        throw UnknownLabel("purify: purifier label already present");
    Spectrum s = eig_hermitian(rho.matrix);
    check_psd(s.eigenvalues);
    const double cut = kSupportCut * std::max(s.eigenvalues.maxCoeff(), 0.0);
    int rank = 0;
    for (int i = 0; i < s.eigenvalues.size(); ++i)
        if (s.eigenvalues[i] > cut) ++rank;
    rank = std::max(rank, 1);

    const int d = static_cast<int>(rho.matrix.rows());
    Vector psi = Vector::Zero(d * rank);
    for (int i = 0; i < rank; ++i) {
        double w = std::sqrt(std::max(s.eigenvalues[i], 0.0));
        for (int a = 0; a < d; ++a) psi[a * rank + i] = w * s.eigenvectors(a, i);
    }
    psi /= psi.norm();

    TensorFactorization f = rho.factorization;
    f.labels.push_back(purifier_label);
    f.dims.push_back(rank);
    return PureState(std::move(psi), TensorFactorization(f.labels, f.dims));
}

// Haar-random pure state: normalized complex standard-normal vector.
inline PureState random_pure(SeededSampler& sampler, const TensorFactorization& f) {
    const int d = f.total_dim();
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = sampler.complex_gauss();
    v /= v.norm();
    return PureState(std::move(v), f);
}

// Ginibre-induced density: G G^dag / tr with G a dim x rank standard-normal matrix.
inline DensityOperator random_density(SeededSampler& sampler, const TensorFactorization& f,
                                      int rank) {
    const int d = f.total_dim();
    if (rank < 1 || rank > d) throw RankInvalid("random_density: rank must be in [1, dim]");
    Matrix G(d, rank);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < rank; ++j) G(i, j) = sampler.complex_gauss();
    Matrix M = G * G.adjoint();
    M /= M.trace().real();
    M = 0.5 * (M + M.adjoint());
    return DensityOperator(std::move(M), f);
}

inline DensityOperator random_density(SeededSampler& sampler, const TensorFactorization& f) {
    return random_density(sampler, f, f.total_dim());
}

// Haar-random unitary via QR of a Ginibre matrix with phase fixing.
inline Matrix random_unitary(SeededSampler& sampler, int d) {
    Matrix G(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) G(i, j) = sampler.complex_gauss();
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ();
    Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        Cplx r = R(j, j);
        Q.col(j) *= (std::abs(r) > 0) ? r / std::abs(r) : Cplx(1.0, 0.0);
    }
    return Q;
}

inline DensityOperator maximally_mixed(const TensorFactorization& f) {
    const int d = f.total_dim();
    return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(d), f);
}

// Adversarial corner states for inequality sweeps on a multipartite system.
// Includes pure product, GHZ-type, bipartite maximally entangled, maximally
// mixed, a seeded classical diagonal, and a rank-deficient Ginibre state.
inline std::vector<std::pair<std::string, DensityOperator>> corner_states(
    const TensorFactorization& f, SeededSampler& sampler) {
    std::vector<std::pair<std::string, DensityOperator>> out;
    const int d = f.total_dim();

    Vector prod = Vector::Zero(d);
    prod[0] = 1.0;
    out.emplace_back("pure_product", PureState(prod, f).density());

    int dmin = f.dims[0];
    for (int x : f.dims) dmin = std::min(dmin, x);
    Vector ghz = Vector::Zero(d);
    std::vector<int> idx(f.size());
    for (int k = 0; k < dmin; ++k) {
        for (std::size_t a = 0; a < f.size(); ++a) idx[a] = k;
        ghz[f.encode(idx)] = 1.0 / std::sqrt(static_cast<double>(dmin));
    }
    out.emplace_back("ghz", PureState(ghz, f).density());

    if (f.size() >= 2 && f.dims[0] == f.dims[1]) {
        Vector bell = Vector::Zero(d);
        for (int k = 0; k < f.dims[0]; ++k) {
            std::fill(idx.begin(), idx.end(), 0);
            idx[0] = k;
            idx[1] = k;
            bell[f.encode(idx)] = 1.0 / std::sqrt(static_cast<double>(f.dims[0]));
        }
        out.emplace_back("max_entangled_01", PureState(bell, f).density());
    }

    out.emplace_back("max_mixed", maximally_mixed(f));

    SeededSampler s1 = sampler.fork(101);
    Matrix diag = Matrix::Zero(d, d);
    double tot = 0.0;
    for (int i = 0; i < d; ++i) {
        double w = s1.uniform() + 1e-3;
        diag(i, i) = w;
        tot += w;
    }
    diag /= tot;
    out.emplace_back("classical_diagonal", DensityOperator(diag, f));

    SeededSampler s2 = sampler.fork(102);
    out.emplace_back("rank_deficient", random_density(s2, f, std::max(d / 4, 1)));
    return out;
}

}  // namespace renyi
