// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reliefchain {

using Bytes = std::vector<std::uint8_t>;
using BytesView = std::span<const std::uint8_t>;

/// 32-byte digest (tx hashes, block hashes, forensics hashes).
struct Hash32 {
    std::array<std::uint8_t, 32> bytes{};

    auto operator<=>(const Hash32&) const = default;
    std::string hex() const;
    static Hash32 from_hex(std::string_view hx);  // throws std::invalid_argument
};

/// 20-byte account/contract address.
struct Address {
    std::array<std::uint8_t, 20> bytes{};

    auto operator<=>(const Address&) const = default;
    std::string hex() const;
    static Address from_hex(std::string_view hx);
    bool is_zero() const;
};

std::string to_hex(BytesView data);
Bytes from_hex(std::string_view hx);

/// Big-endian encoding of v with leading zero bytes stripped; 0 encodes as empty.
Bytes minimal_be(std::uint64_t v);
/// Inverse of minimal_be for inputs of at most 8 bytes; longer inputs keep the low 8.
std::uint64_t u64_from_be(BytesView data);

inline Bytes to_bytes(std::string_view s)
{
    return Bytes(s.begin(), s.end());
}

}  // namespace reliefchain
