// Copyright 2026 The renyi-chain Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <limits>

#include "renyi/errors.hpp"

namespace renyi {

// Divergences at |alpha - 1| below this are routed to the von Neumann branch.
inline constexpr double kVonNeumannWindow = 1e-6;

// A Renyi order alpha with its Hoelder-conjugate shorthand alpha' = (alpha-1)/alpha
// and the dual order satisfying 1/alpha + 1/alpha_hat = 2 (so alpha_hat' = -alpha').
class RenyiOrder {
  public:
    explicit RenyiOrder(double alpha) : alpha_(alpha) {
        if (!(alpha >= 0.5)) throw OutOfRange("RenyiOrder: alpha must be >= 1/2");
    }

    double alpha() const { return alpha_; }
    double prime() const { return (alpha_ - 1.0) / alpha_; }

    double hat() const {
        // 1/hat = 2 - 1/alpha; alpha = 1/2 maps to infinity.
        double inv = 2.0 - 1.0 / alpha_;
        if (inv <= 0.0) return std::numeric_limits<double>::infinity();
        return 1.0 / inv;
    }

    RenyiOrder dual() const { return RenyiOrder(hat()); }

    bool is_von_neumann() const { return std::abs(alpha_ - 1.0) < kVonNeumannWindow; }

  private:
    double alpha_;
};

}  // namespace renyi
