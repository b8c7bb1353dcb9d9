// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#include <reliefchain/sha3.hpp>

#include <cstring>

namespace reliefchain::crypto {

namespace {

constexpr std::uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr int kRotations[25] = {
    0,  1,  62, 28, 27,  //
    36, 44, 6,  55, 20,  //
    3,  10, 43, 25, 39,  //
    41, 45, 15, 21, 8,   //
    18, 2,  61, 56, 14,  //
};

inline std::uint64_t rotl(std::uint64_t v, int n)
{
    return n == 0 ? v : (v << n) | (v >> (64 - n));
}

void keccak_f1600(std::uint64_t state[25])
{
    for (int round = 0; round < 24; ++round) {
        // theta
        std::uint64_t c[5];
        for (int x = 0; x < 5; ++x)
            c[x] = state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^ state[x + 20];
        for (int x = 0; x < 5; ++x) {
            const std::uint64_t d = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
            for (int y = 0; y < 5; ++y)
                state[x + 5 * y] ^= d;
        }

        // rho + pi
        std::uint64_t b[25];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl(state[x + 5 * y], kRotations[x + 5 * y]);

        // chi
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                state[x + 5 * y] = b[x + 5 * y] ^ (~b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);

        // iota
        state[0] ^= kRoundConstants[round];
    }
}

}  // namespace

void Sha3_256::absorb_block()
{
    for (std::size_t i = 0; i < kRate / 8; ++i) {
        std::uint64_t lane = 0;
        std::memcpy(&lane, buffer_ + 8 * i, 8);  // little-endian host assumed
        state_[i] ^= lane;
    }
    keccak_f1600(state_);
    buffered_ = 0;
}

Sha3_256& Sha3_256::update(BytesView data)
{
    for (auto byte : data) {
        buffer_[buffered_++] = byte;
        if (buffered_ == kRate)
            absorb_block();
    }
    return *this;
}

Hash32 Sha3_256::final()
{
    // pad10*1 with SHA-3 domain separation
    std::memset(buffer_ + buffered_, 0, kRate - buffered_);
    buffer_[buffered_] = 0x06;
    buffer_[kRate - 1] |= 0x80;
    buffered_ = kRate;
    absorb_block();

    Hash32 out;
    std::memcpy(out.bytes.data(), state_, 32);
    return out;
}

Hash32 sha3_256(BytesView data)
{
    return Sha3_256{}.update(data).final();
}

}  // namespace reliefchain::crypto
