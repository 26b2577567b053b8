// Copyright 2026 The renyi-chain Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "renyi/errors.hpp"
#include "renyi/tensor.hpp"

namespace renyi {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermTol = 1e-10;     // max entrywise |M - M^dag|
inline constexpr double kEigTol = 1e-10;      // PSD slack, relative to lambda_max
inline constexpr double kSupportCut = 1e-12;  // support cutoff, relative to lambda_max

// Hermitian eigendecomposition, eigenvalues descending.
struct Spectrum {
    RealVector eigenvalues;  // descending
    Matrix eigenvectors;     // columns, same order
};

inline double hermiticity_defect(const Matrix& M) {
    return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

inline Spectrum eig_hermitian(const Matrix& M) {
    if (M.rows() != M.cols()) throw DimensionMismatch("eig_hermitian: matrix not square");
    if (M.rows() == 0) throw DimensionMismatch("eig_hermitian: empty matrix");
    if (hermiticity_defect(M) > kHermTol)
        throw NotHermitian("eig_hermitian: hermiticity defect exceeds 1e-10");
    Matrix H = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    if (es.info() != Eigen::Success) throw Error("eig_hermitian: eigensolver failed");
    const int n = static_cast<int>(M.rows());
    Spectrum s;
    s.eigenvalues.resize(n);
    s.eigenvectors.resize(n, n);
    for (int i = 0; i < n; ++i) {  // Eigen sorts ascending; flip
        s.eigenvalues[i] = es.eigenvalues()[n - 1 - i];
        s.eigenvectors.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    return s;
}

inline void check_psd(const RealVector& eigs) {
    double lmax = std::max(eigs.size() ? eigs.maxCoeff() : 0.0, 0.0);
    double floor = -kEigTol * std::max(lmax, 1.0);
    if (eigs.minCoeff() < floor) throw NotPSD("matrix has eigenvalue below -eigtol*lambda_max");
}

// Power of a PSD matrix on its support: eigenvalues at or below the relative
// cutoff map to zero (pseudo-power / support projection).
inline Matrix mat_pow_support(const Matrix& M, double p) {
    if (!std::isfinite(p)) throw Error("mat_pow_support: non-finite exponent");
    Spectrum s = eig_hermitian(M);
    check_psd(s.eigenvalues);
    const double lmax = std::max(s.eigenvalues.maxCoeff(), 0.0);
    const double cut = kSupportCut * lmax;
    RealVector f(s.eigenvalues.size());
    for (int i = 0; i < f.size(); ++i) {
        double lam = s.eigenvalues[i];
        f[i] = (lam > cut) ? std::pow(lam, p) : 0.0;
    }
    return s.eigenvectors * f.asDiagonal() * s.eigenvectors.adjoint();
}

// log2 of a PSD matrix on its support (zero eigenvalues stay zero).
inline Matrix mat_log2_support(const Matrix& M) {
    Spectrum s = eig_hermitian(M);
    check_psd(s.eigenvalues);
    const double cut = kSupportCut * std::max(s.eigenvalues.maxCoeff(), 0.0);
    RealVector f(s.eigenvalues.size());
    for (int i = 0; i < f.size(); ++i)
        f[i] = (s.eigenvalues[i] > cut) ? std::log2(s.eigenvalues[i]) : 0.0;
    return s.eigenvectors * f.asDiagonal() * s.eigenvectors.adjoint();
}

// Support projector of a PSD matrix.
inline Matrix support_projector(const Matrix& M) {
    Spectrum s = eig_hermitian(M);
    check_psd(s.eigenvalues);
    const double cut = kSupportCut * std::max(s.eigenvalues.maxCoeff(), 0.0);
    RealVector f(s.eigenvalues.size());
    for (int i = 0; i < f.size(); ++i) f[i] = (s.eigenvalues[i] > cut) ? 1.0 : 0.0;
    return s.eigenvectors * f.asDiagonal() * s.eigenvectors.adjoint();
}

inline RealVector singular_values(const Matrix& X) {
    Eigen::JacobiSVD<Matrix> svd(X);
    return svd.singularValues();
}

// log2 of sum_i v_i^p over strictly positive entries, evaluated in log space
// so very large and very small p stay finite.
inline double log2_sum_pow(const RealVector& v, double p) {
    double vmax = 0.0;
    for (int i = 0; i < v.size(); ++i) vmax = std::max(vmax, v[i]);
    if (vmax <= 0.0) return -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (int i = 0; i < v.size(); ++i) {
        if (v[i] > 0.0) acc += std::exp2(p * std::log2(v[i] / vmax));
    }
    return p * std::log2(vmax) + std::log2(acc);
}

// log2 of the Schatten p-(quasi-)norm.
inline double log2_schatten(const Matrix& X, double p) {
    if (!(p > 0.0)) throw Error("schatten: p must be positive");
    return log2_sum_pow(singular_values(X), p) / p;
}

// Schatten p-(quasi-)norm: (sum_i s_i^p)^(1/p) over singular values.
inline double schatten(const Matrix& X, double p) {
    double v = std::exp2(log2_schatten(X, p));
    if (!std::isfinite(v) && v > 0) throw ComputeOverflow("schatten: overflow");
    return v;
}

// Partial trace keeping the listed labels (result ordered per factorization).
inline Matrix partial_trace(const Matrix& M, const TensorFactorization& f,
                            const std::vector<std::string>& keep) {
    if (M.rows() != f.total_dim() || M.cols() != f.total_dim())
        throw DimensionMismatch("partial_trace: matrix/factorization size mismatch");
    TensorFactorization fk = f.restricted_to(keep);
    std::vector<std::string> traced = f.complement_of(keep);
    TensorFactorization ft = f.restricted_to(traced);

    std::vector<int> keep_pos, traced_pos;
    for (const auto& lab : f.labels) {
        if (fk.contains(lab))
            keep_pos.push_back(f.index_of(lab));
        else
            traced_pos.push_back(f.index_of(lab));
    }

    const int dk = fk.total_dim();
    const int dt = ft.total_dim();
    Matrix out = Matrix::Zero(dk, dk);
    std::vector<int> ki, kj, ti, full_r(f.size()), full_c(f.size());
    for (int r = 0; r < dk; ++r) {
        fk.decode(r, ki);
        for (int c = 0; c < dk; ++c) {
            fk.decode(c, kj);
            Cplx acc = 0.0;
            for (int t = 0; t < dt; ++t) {
                ft.decode(t, ti);
                for (std::size_t a = 0; a < keep_pos.size(); ++a) {
                    full_r[keep_pos[a]] = ki[a];
                    full_c[keep_pos[a]] = kj[a];
                }
                for (std::size_t a = 0; a < traced_pos.size(); ++a) {
                    full_r[traced_pos[a]] = ti[a];
                    full_c[traced_pos[a]] = ti[a];
                }
                acc += M(f.encode(full_r), f.encode(full_c));
            }
            out(r, c) = acc;
        }
    }
    return out;
}

// op acting on the given subset of factors (product with identity elsewhere).
inline Matrix embed_operator(const TensorFactorization& f,
                             const std::vector<std::string>& subset, const Matrix& op) {
    TensorFactorization fs = f.restricted_to(subset);
    if (op.rows() != fs.total_dim() || op.cols() != fs.total_dim())
        throw DimensionMismatch("embed_operator: operator/subset dimension mismatch");
    std::vector<int> sub_pos;
    for (const auto& lab : fs.labels) sub_pos.push_back(f.index_of(lab));

    const int d = f.total_dim();
    Matrix out = Matrix::Zero(d, d);
    std::vector<int> ri, ci, si(sub_pos.size()), sj(sub_pos.size());
    for (int r = 0; r < d; ++r) {
        f.decode(r, ri);
        for (int c = 0; c < d; ++c) {
            f.decode(c, ci);
            bool match = true;
            for (std::size_t a = 0; a < f.size() && match; ++a) {
                bool in_sub = false;
                for (int sp : sub_pos)
                    if (sp == static_cast<int>(a)) in_sub = true;
                if (!in_sub && ri[a] != ci[a]) match = false;
            }
            if (!match) continue;
            for (std::size_t a = 0; a < sub_pos.size(); ++a) {
                si[a] = ri[sub_pos[a]];
                sj[a] = ci[sub_pos[a]];
            }
            out(r, c) = op(fs.encode(si), fs.encode(sj));
        }
    }
    return out;
}

inline Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

// Operator-vector correspondence: a vector on input (x) output factors maps to
// the matrix X[out, in] = psi[...]; basis vector |i>_in (x) |j>_out goes to
// |j>_out <i|_in. Groups keep the factorization's label order.
struct OpView {
    Matrix X;
    TensorFactorization out_f;
    TensorFactorization in_f;
};

inline OpView op_vec(const Vector& v, const TensorFactorization& f,
                     const std::vector<std::string>& input,
                     const std::vector<std::string>& output) {
    if (v.size() != f.total_dim())
        throw DimensionMismatch("op_vec: vector/factorization size mismatch");
    for (const auto& lab : input)
        if (std::find(output.begin(), output.end(), lab) != output.end())
            throw LabelPartitionInvalid("op_vec: input and output overlap on " + lab);
    if (input.size() + output.size() != f.size())
        throw LabelPartitionInvalid("op_vec: input+output must cover all labels");

    OpView view;
    view.in_f = f.restricted_to(input);
    view.out_f = f.restricted_to(output);
    std::vector<int> in_pos, out_pos;
    for (const auto& lab : view.in_f.labels) in_pos.push_back(f.index_of(lab));
    for (const auto& lab : view.out_f.labels) out_pos.push_back(f.index_of(lab));

    view.X.resize(view.out_f.total_dim(), view.in_f.total_dim());
    std::vector<int> oi, ii, full(f.size());
    for (int r = 0; r < view.X.rows(); ++r) {
        view.out_f.decode(r, oi);
        for (int c = 0; c < view.X.cols(); ++c) {
            view.in_f.decode(c, ii);
            for (std::size_t a = 0; a < out_pos.size(); ++a) full[out_pos[a]] = oi[a];
            for (std::size_t a = 0; a < in_pos.size(); ++a) full[in_pos[a]] = ii[a];
            view.X(r, c) = v[f.encode(full)];
        }
    }
    return view;
}

// Inverse of op_vec under the same partition and ordering convention.
inline Vector vec_op(const OpView& view, const TensorFactorization& f) {
    std::vector<int> in_pos, out_pos;
    for (const auto& lab : view.in_f.labels) in_pos.push_back(f.index_of(lab));
    for (const auto& lab : view.out_f.labels) out_pos.push_back(f.index_of(lab));
    Vector v(f.total_dim());
    std::vector<int> oi, ii, full(f.size());
    for (int r = 0; r < view.X.rows(); ++r) {
        view.out_f.decode(r, oi);
        for (int c = 0; c < view.X.cols(); ++c) {
            view.in_f.decode(c, ii);
            for (std::size_t a = 0; a < out_pos.size(); ++a) full[out_pos[a]] = oi[a];
            for (std::size_t a = 0; a < in_pos.size(); ++a) full[in_pos[a]] = ii[a];
            v[f.encode(full)] = view.X(r, c);
        }
    }
    return v;
}

// Op of (X_in (x) Y_out)|psi>; equal to Y * Op(psi) * X^T.
inline Matrix op_vec_sandwich(const Vector& v, const TensorFactorization& f,
                              const std::vector<std::string>& input,
                              const std::vector<std::string>& output, const Matrix& X_in,
                              const Matrix& Y_out) {
    Matrix full = embed_operator(f, input, X_in) * embed_operator(f, output, Y_out);
    return op_vec(full * v, f, input, output).X;
}

}  // namespace renyi
