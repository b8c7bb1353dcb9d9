// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#include <reliefchain/bytes.hpp>

#include <algorithm>
#include <stdexcept>

namespace reliefchain {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    throw std::invalid_argument("invalid hex digit");
}
}  // namespace

std::string to_hex(BytesView data)
{
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hx)
{
    if (hx.size() >= 2 && hx[0] == '0' && (hx[1] == 'x' || hx[1] == 'X'))
        hx.remove_prefix(2);
    if (hx.size() % 2 != 0)
        throw std::invalid_argument("odd-length hex string");
    Bytes out(hx.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(hex_nibble(hx[2 * i]) << 4 | hex_nibble(hx[2 * i + 1]));
    return out;
}

std::string Hash32::hex() const
{
    return to_hex(bytes);
}

Hash32 Hash32::from_hex(std::string_view hx)
{
    const auto raw = reliefchain::from_hex(hx);
    if (raw.size() != 32)
        throw std::invalid_argument("expected 32-byte hex value");
    Hash32 h;
    std::copy(raw.begin(), raw.end(), h.bytes.begin());
    return h;
}

std::string Address::hex() const
{
    return to_hex(bytes);
}

Address Address::from_hex(std::string_view hx)
{
    const auto raw = reliefchain::from_hex(hx);
    if (raw.size() != 20)
        throw std::invalid_argument("expected 20-byte hex value");
    Address a;
    std::copy(raw.begin(), raw.end(), a.bytes.begin());
    return a;
}

bool Address::is_zero() const
{
    return std::all_of(bytes.begin(), bytes.end(), [](auto b) { return b == 0; });
}

Bytes minimal_be(std::uint64_t v)
{
    Bytes out;
    for (int shift = 56; shift >= 0; shift -= 8) {
        const auto byte = static_cast<std::uint8_t>(v >> shift);
        if (byte != 0 || !out.empty())
            out.push_back(byte);
    }
    return out;
}

std::uint64_t u64_from_be(BytesView data)
{
    if (data.size() > 8)
        data = data.subspan(data.size() - 8);
    std::uint64_t v = 0;
    for (auto b : data)
        v = v << 8 | b;
    return v;
}

}  // namespace reliefchain
