// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <reliefchain/bytes.hpp>

#include <cstdint>

namespace reliefchain::crypto {

/// Incremental SHA3-256 (FIPS 202, domain byte 0x06, not Keccak-256).
class Sha3_256 {
public:
    Sha3_256() = default;

    Sha3_256& update(BytesView data);
    Hash32 final();

private:
    static constexpr std::size_t kRate = 136;  // 1088-bit rate / 512-bit capacity

    void absorb_block();

    std::uint64_t state_[25]{};
    std::uint8_t buffer_[kRate]{};
    std::size_t buffered_ = 0;
};

Hash32 sha3_256(BytesView data);

}  // namespace reliefchain::crypto
