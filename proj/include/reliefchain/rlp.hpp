// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <reliefchain/bytes.hpp>

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

namespace reliefchain::rlp {

/// Recursive length prefix item: a byte string or an ordered list of items.
/// Encoding is canonical: each item has exactly one valid encoding, and the
/// strict decoder rejects everything else.
struct Item {
    std::variant<Bytes, std::vector<Item>> value;

    Item() : value(Bytes{}) {}
    Item(Bytes b) : value(std::move(b)) {}
    Item(std::vector<Item> l) : value(std::move(l)) {}

    bool is_string() const { return value.index() == 0; }
    bool is_list() const { return value.index() == 1; }
    const Bytes& str() const { return std::get<Bytes>(value); }
    const std::vector<Item>& list() const { return std::get<std::vector<Item>>(value); }

    bool operator==(const Item& other) const = default;
};

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Item string_item(BytesView data);
Item u64_item(std::uint64_t v);  // minimal big-endian byte string
Item address_item(const Address& a);
Item hash_item(const Hash32& h);

Bytes encode(const Item& item);

/// Strict decode of exactly one item; trailing bytes or any non-canonical
/// form (non-minimal length, single byte < 0x80 wrapped in a prefix) throw.
Item decode(BytesView data);

}  // namespace reliefchain::rlp
