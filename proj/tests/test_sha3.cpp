// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <reliefchain/rng.hpp>
#include <reliefchain/sha3.hpp>

using namespace reliefchain;

namespace {
Bytes repeated(std::uint8_t byte, std::size_t n)
{
    return Bytes(n, byte);
}
}  // namespace

TEST_CASE("FIPS 202 vectors")
{
    CHECK(crypto::sha3_256({}).hex() ==
          "a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a");
    CHECK(crypto::sha3_256(to_bytes("abc")).hex() ==
          "3a985da74fe225b2045c172d6bd390bd855f086e3e9d525b46bfe24511431532");
    CHECK(crypto::sha3_256(repeated(0xa3, 200)).hex() ==
          "79f38adec5c20307a98ef76e8324afbfd46cfd81b22e3973c65fa1bd9de31787");
}

TEST_CASE("rate boundary lengths")
{
    CHECK(crypto::sha3_256(repeated(0xa3, 135)).hex() ==
          "d51927265ca4bf0cc8b4453387700918c03f8894e395ad437d4573f3be4d2c34");
    CHECK(crypto::sha3_256(repeated(0xa3, 136)).hex() ==
          "0adf6bfb359ae40019b67d8c49c361574b70242a6b752de6f9e0d426ca177f7a");
    CHECK(crypto::sha3_256(repeated(0xa3, 137)).hex() ==
          "e2fa06eaa22fe60106af67d5f6ea093fe58f07d2dcfb06d51057953f114849a7");
    CHECK(crypto::sha3_256(repeated(0xa3, 272)).hex() ==
          "c4742d97ad8ff950c0b5b078600ab1908c864c75b60f419e2d208dfc26a8ba11");
}

TEST_CASE("incremental update equals one-shot")
{
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        Bytes data(rng.range(0, 600));
        for (auto& b : data)
            b = static_cast<std::uint8_t>(rng.next());

        crypto::Sha3_256 hasher;
        std::size_t pos = 0;
        while (pos < data.size()) {
            const std::size_t chunk =
                std::min<std::size_t>(data.size() - pos, rng.range(1, 100));
            hasher.update(BytesView{data.data() + pos, chunk});
            pos += chunk;
        }
        CHECK(hasher.final() == crypto::sha3_256(data));
    }
}
