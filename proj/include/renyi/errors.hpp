// Copyright 2026 The renyi-chain Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace renyi {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitian : Error {
    using Error::Error;
};
struct NotPSD : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct UnknownLabel : Error {
    using Error::Error;
};
struct LabelPartitionInvalid : Error {
    using Error::Error;
};
struct RankInvalid : Error {
    using Error::Error;
};
struct ZeroState : Error {
    using Error::Error;
};
struct ComputeOverflow : Error {
    using Error::Error;
};
struct DimTooLarge : Error {
    using Error::Error;
};
struct OutOfRange : Error {
    using Error::Error;
};
struct ClassificationMismatch : Error {
    using Error::Error;
};

}  // namespace renyi
