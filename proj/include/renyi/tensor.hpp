// Copyright 2026 The renyi-chain Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "renyi/errors.hpp"

namespace renyi {

// Ordered tensor factorization of a Hilbert space. Indexing is row-major over
// the label order: the first label is the most significant factor.
struct TensorFactorization {
    std::vector<std::string> labels;
    std::vector<int> dims;

    TensorFactorization() = default;
    TensorFactorization(std::vector<std::string> l, std::vector<int> d)
        : labels(std::move(l)), dims(std::move(d)) {
        if (labels.size() != dims.size())
            throw DimensionMismatch("factorization: labels/dims length mismatch");
        std::set<std::string> seen;
        for (const auto& lab : labels)
            if (!seen.insert(lab).second) throw UnknownLabel("duplicate label: " + lab);
        for (int d2 : dims)
            if (d2 < 1) throw DimensionMismatch("factorization: nonpositive dimension");
    }

    int total_dim() const {
        return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
    }

    std::size_t size() const { return labels.size(); }

    int index_of(const std::string& label) const {
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) throw UnknownLabel("unknown label: " + label);
        return static_cast<int>(it - labels.begin());
    }

    bool contains(const std::string& label) const {
        return std::find(labels.begin(), labels.end(), label) != labels.end();
    }

    int dim_of(const std::string& label) const { return dims[index_of(label)]; }

    int dim_of_set(const std::vector<std::string>& subset) const {
        int d = 1;
        for (const auto& lab : subset) d *= dim_of(lab);
        return d;
    }

    // Sub-factorization keeping the given labels, in this factorization's order.
    TensorFactorization restricted_to(const std::vector<std::string>& keep) const {
        std::vector<std::string> l;
        std::vector<int> d;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (std::find(keep.begin(), keep.end(), labels[i]) != keep.end()) {
                l.push_back(labels[i]);
                d.push_back(dims[i]);
            }
        }
        if (l.size() != keep.size()) throw UnknownLabel("restricted_to: label not in factorization");
        return TensorFactorization(std::move(l), std::move(d));
    }

    std::vector<std::string> complement_of(const std::vector<std::string>& subset) const {
        std::vector<std::string> out;
        for (const auto& lab : labels) {
            if (std::find(subset.begin(), subset.end(), lab) == subset.end()) out.push_back(lab);
        }
        return out;
    }

    // Decompose a flat row-major index into per-factor indices.
    void decode(int flat, std::vector<int>& out) const {
        out.resize(dims.size());
        for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
            out[i] = flat % dims[i];
            flat /= dims[i];
        }
    }

    int encode(const std::vector<int>& idx) const {
        int flat = 0;
        for (std::size_t i = 0; i < dims.size(); ++i) flat = flat * dims[i] + idx[i];
        return flat;
    }

    bool operator==(const TensorFactorization& o) const {
        return labels == o.labels && dims == o.dims;
    }
};

}  // namespace renyi
