// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <reliefchain/rlp.hpp>
#include <reliefchain/rng.hpp>

#include "support/gen.hpp"

#include <set>

using namespace reliefchain;
using rlp::Item;

TEST_CASE("string forms")
{
    CHECK(to_hex(rlp::encode(rlp::string_item({}))) == "80");
    CHECK(to_hex(rlp::encode(Item{Bytes{0x05}})) == "05");
    CHECK(to_hex(rlp::encode(Item{Bytes{0x7f}})) == "7f");
    CHECK(to_hex(rlp::encode(Item{Bytes{0x80}})) == "8180");
    CHECK(to_hex(rlp::encode(Item{to_bytes("dog")})) == "83646f67");

    const Bytes lorem = to_bytes("Lorem ipsum dolor sit amet, consectetur adipisicing elit");
    const Bytes enc = rlp::encode(Item{lorem});
    CHECK(enc[0] == 0xb8);
    CHECK(enc[1] == 0x38);
    CHECK(enc.size() == lorem.size() + 2);
}

TEST_CASE("list forms")
{
    CHECK(to_hex(rlp::encode(Item{std::vector<Item>{}})) == "c0");
    CHECK(to_hex(rlp::encode(Item{std::vector<Item>{Item{to_bytes("cat")},
              Item{to_bytes("dog")}}})) == "c88363617483646f67");

    // [ [], [[]], [ [], [[]] ] ]
    const Item empty{std::vector<Item>{}};
    const Item one{std::vector<Item>{empty}};
    const Item two{std::vector<Item>{empty, one}};
    const Item nested{std::vector<Item>{empty, one, two}};
    CHECK(to_hex(rlp::encode(nested)) == "c7c0c1c0c3c0c1c0");
}

TEST_CASE("u64 items are minimal big-endian")
{
    CHECK(to_hex(rlp::encode(rlp::u64_item(0))) == "80");
    CHECK(to_hex(rlp::encode(rlp::u64_item(5))) == "05");
    CHECK(to_hex(rlp::encode(rlp::u64_item(1024))) == "820400");
}

TEST_CASE("address-nonce pairs match the reference encoding")
{
    Address a;
    for (int i = 0; i < 20; ++i)
        a.bytes[i] = static_cast<std::uint8_t>(i + 1);
    const Item zero{std::vector<Item>{rlp::address_item(a), rlp::u64_item(0)}};
    const Item five{std::vector<Item>{rlp::address_item(a), rlp::u64_item(5)}};
    CHECK(to_hex(rlp::encode(zero)) == "d6940102030405060708090a0b0c0d0e0f101112131480");
    CHECK(to_hex(rlp::encode(five)) == "d6940102030405060708090a0b0c0d0e0f101112131405");
}

TEST_CASE("strict decoder rejects non-canonical forms")
{
    CHECK_THROWS_AS(rlp::decode(from_hex("8105")), rlp::DecodeError);  // wrapped single byte
    CHECK_THROWS_AS(rlp::decode(from_hex("b803646f67")), rlp::DecodeError);  // long form, short len
    CHECK_THROWS_AS(rlp::decode(from_hex("b90003646f67")), rlp::DecodeError);  // leading zero len
    CHECK_THROWS_AS(rlp::decode(from_hex("83646f")), rlp::DecodeError);        // truncated
    CHECK_THROWS_AS(rlp::decode(from_hex("8080")), rlp::DecodeError);          // trailing bytes
    CHECK_THROWS_AS(rlp::decode(from_hex("c18105")), rlp::DecodeError);  // bad nested item
    CHECK_THROWS_AS(rlp::decode(Bytes{}), rlp::DecodeError);             // empty input
}

TEST_CASE("nonce injectivity over 0..255")
{
    Address a;
    a.bytes[0] = 0xaa;
    std::set<Bytes> encodings;
    for (std::uint64_t nonce = 0; nonce <= 255; ++nonce) {
        const Item item{std::vector<Item>{rlp::address_item(a), rlp::u64_item(nonce)}};
        encodings.insert(rlp::encode(item));
    }
    CHECK(encodings.size() == 256);
}

TEST_CASE("round-trip property")
{
    Rng rng(42);
    for (int trial = 0; trial < 2000; ++trial) {
        const Item item = testgen::random_item(rng, 4, 96);
        const Bytes enc = rlp::encode(item);
        CHECK(rlp::decode(enc) == item);
    }
    // a couple of long-form cases above the 55-byte boundary
    for (const std::size_t n : {56u, 300u, 1024u}) {
        const Item item{Bytes(n, 0x61)};
        CHECK(rlp::decode(rlp::encode(item)) == item);
    }
}

TEST_CASE("injectivity property")
{
    Rng rng(43);
    for (int trial = 0; trial < 2000; ++trial) {
        const Item a = testgen::random_item(rng, 3, 48);
        const Item b = testgen::random_item(rng, 3, 48);
        const bool same_item = a == b;
        const bool same_encoding = rlp::encode(a) == rlp::encode(b);
        CHECK(same_item == same_encoding);
    }
}
