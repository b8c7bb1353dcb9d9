// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <reliefchain/ledger.hpp>
#include <reliefchain/rlp.hpp>

using namespace reliefchain;
using namespace reliefchain::chain;
using vm::Instr;
using vm::Op;

namespace {

Address actor(std::uint8_t tag)
{
    Address a;
    a.bytes[19] = tag;
    return a;
}

Bytes trivial_code()
{
    return vm::assemble({{Op::STOP, 0}});
}

Bytes store_code()
{
    // expects call data [key, value]
    return vm::assemble({{Op::SSTORE, 0}, {Op::STOP, 0}});
}

Bytes kv_payload(std::uint64_t key, std::uint64_t value)
{
    return rlp::encode(rlp::Item{
        std::vector<rlp::Item>{rlp::u64_item(key), rlp::u64_item(value)}});
}

}  // namespace

TEST_CASE("submission validates nonces and payloads")
{
    Network net({4, 2, 0.0, 64});
    const Address d = actor(1);

    const Transaction tx0 = make_creation(d, 0, trivial_code());
    CHECK(net.submit_transaction(tx0) == tx0.hash);

    // replaying the same (sender, nonce) is stale
    CHECK_THROWS_AS(net.submit_transaction(tx0), ChainError);
    try {
        net.submit_transaction(make_creation(d, 0, trivial_code()));
    } catch (const ChainError& e) {
        CHECK(e.code() == Errc::StaleNonce);
    }

    // empty creation payload
    try {
        net.submit_transaction(make_creation(d, 1, Bytes{}));
        CHECK(false);
    } catch (const ChainError& e) {
        CHECK(e.code() == Errc::MalformedPayload);
    }
}

TEST_CASE("sealing drains the pool FIFO up to the cap")
{
    Network net({4, 0, 0.0, 64});
    const Address d = actor(2);
    std::vector<Hash32> submitted;
    for (int i = 0; i < 3; ++i)
        submitted.push_back(net.submit_transaction(make_creation(d, i, trivial_code())));

    SUBCASE("drain all")
    {
        const Block b = net.seal_block(net.current_leader(), 10);
        REQUIRE(b.transactions.size() == 3);
        for (int i = 0; i < 3; ++i)
            CHECK(b.transactions[i].hash == submitted[i]);
    }
    SUBCASE("cap leaves the remainder pooled")
    {
        const Block b = net.seal_block(net.current_leader(), 2);
        REQUIRE(b.transactions.size() == 2);
        CHECK(b.transactions[0].hash == submitted[0]);
        CHECK(b.transactions[1].hash == submitted[1]);
        CHECK(net.pool_size() == 1);
    }
    SUBCASE("non-leader cannot seal")
    {
        const NodeId not_leader = (net.current_leader() + 1) % net.full_node_count();
        CHECK_THROWS_AS(net.seal_block(not_leader, 10), ChainError);
    }
}

TEST_CASE("empty pool is an explicit signal")
{
    Network net;
    try {
        net.seal_block(net.current_leader());
        CHECK(false);
    } catch (const ChainError& e) {
        CHECK(e.code() == Errc::EmptyPool);
    }
}

TEST_CASE("consensus accepts honest blocks and rejects tampering")
{
    Network net({4, 3, 0.0, 64});
    const Address d = actor(3);
    net.submit_transaction(make_creation(d, 0, trivial_code()));
    net.advance_time(5);
    Block b = net.seal_block(net.current_leader());

    SUBCASE("well-formed block accepted on all nodes")
    {
        const ConsensusResult r = net.run_consensus(b);
        CHECK(r.accepted);
        CHECK(r.votes_valid == 4);
        CHECK(net.height() == 1);
        for (NodeId n = 0; n < net.full_node_count(); ++n)
            CHECK(net.full_node_blocks(n).size() == 2);
    }
    SUBCASE("tampered tx hash is rejected")
    {
        b.transactions[0].hash.bytes[0] ^= 0xff;
        b.block_hash = compute_block_hash(b);  // attacker recomputes the header too
        const ConsensusResult r = net.run_consensus(b);
        CHECK(!r.accepted);
        CHECK(r.reason == RejectReason::BadHash);
    }
    SUBCASE("tampered block hash is rejected")
    {
        b.block_hash.bytes[0] ^= 0xff;
        const ConsensusResult r = net.run_consensus(b);
        CHECK(!r.accepted);
        CHECK(r.reason == RejectReason::BadHash);
    }
    SUBCASE("bad parent linkage is rejected")
    {
        b.parent_hash.bytes[0] ^= 0xff;
        b.block_hash = compute_block_hash(b);
        const ConsensusResult r = net.run_consensus(b);
        CHECK(!r.accepted);
        CHECK(r.reason == RejectReason::BadParent);
    }
}

TEST_CASE("receipts carry derived addresses and revert status")
{
    Network net;
    const Address d = actor(4);

    const Transaction creation = make_creation(d, 0, store_code());
    net.submit_transaction(creation);
    net.commit_next();

    const Receipt rc = net.get_receipt(creation.hash);
    CHECK(rc.status == ReceiptStatus::Success);
    REQUIRE(rc.contract_address.has_value());
    CHECK(*rc.contract_address == vm::derive_contract_address(d, 0));

    // pooled but unsealed -> unknown
    const Transaction pooled = make_call(d, 1, *rc.contract_address, kv_payload(1, 2));
    net.submit_transaction(pooled);
    CHECK_THROWS_AS(net.get_receipt(pooled.hash), ChainError);
    net.commit_next();
    CHECK(net.get_receipt(pooled.hash).status == ReceiptStatus::Success);

    // a call that underflows the stack reverts but still confirms
    const Transaction reverting =
        make_call(d, 2, *rc.contract_address, rlp::encode(rlp::Item{std::vector<rlp::Item>{}}));
    net.submit_transaction(reverting);
    net.commit_next();
    const Receipt rr = net.get_receipt(reverting.hash);
    CHECK(rr.status == ReceiptStatus::Reverted);
    CHECK(!rr.contract_address.has_value());

    // never-seen hash
    Hash32 unknown;
    unknown.bytes[5] = 9;
    CHECK_THROWS_AS(net.get_receipt(unknown), ChainError);

    // creation with a bad jump target confirms as reverted, no address
    std::vector<vm::Instr> bad{{Op::JUMP, 99}, {Op::STOP, 0}};
    const Transaction bad_creation = make_creation(d, 3, vm::assemble(bad));
    net.submit_transaction(bad_creation);
    net.commit_next();
    const Receipt bc = net.get_receipt(bad_creation.hash);
    CHECK(bc.status == ReceiptStatus::Reverted);
    CHECK(!bc.contract_address.has_value());
    CHECK(bc.revert_reason == vm::RevertReason::MalformedCode);

    // call against a never-deployed address confirms as reverted
    const Transaction ghost = make_call(d, 4, actor(200), kv_payload(1, 1));
    net.submit_transaction(ghost);
    net.commit_next();
    const Receipt gr = net.get_receipt(ghost.hash);
    CHECK(gr.status == ReceiptStatus::Reverted);
    CHECK(gr.revert_reason == vm::RevertReason::UnknownTarget);
}

TEST_CASE("chain integrity: linkage and recomputable hashes")
{
    Network net;
    const Address d = actor(5);
    for (int i = 0; i < 5; ++i) {
        net.submit_transaction(make_creation(d, i, trivial_code()));
        net.advance_time(1);
        net.commit_next();
    }
    const auto& blocks = net.blocks();
    REQUIRE(blocks.size() == 6);
    for (std::size_t i = 1; i < blocks.size(); ++i) {
        CHECK(blocks[i].parent_hash == blocks[i - 1].block_hash);
        CHECK(blocks[i].height == blocks[i - 1].height + 1);
        CHECK(blocks[i].timestamp > blocks[i - 1].timestamp);
        CHECK(compute_block_hash(blocks[i]) == blocks[i].block_hash);
        for (const Transaction& tx : blocks[i].transactions)
            CHECK(compute_tx_hash(tx) == tx.hash);
    }
}

TEST_CASE("determinism: identical submissions give identical hashes")
{
    const auto run = [] {
        Network net({4, 2, 0.0, 64});
        const Address d = actor(6);
        const Address target = vm::derive_contract_address(d, 0);
        net.submit_transaction(make_creation(d, 0, store_code()));
        net.advance_time(3);
        net.commit_next();
        for (int i = 1; i <= 4; ++i) {
            net.submit_transaction(make_call(d, i, target, kv_payload(i, i * 10)));
            net.advance_time(1);
            net.commit_next();
        }
        return net.chain_log();
    };
    CHECK(run() == run());
}

TEST_CASE("no double inclusion")
{
    Network net;
    const Address d = actor(7);
    const Transaction tx = make_creation(d, 0, trivial_code());
    net.submit_transaction(tx);
    net.advance_time(1);
    const Block good = net.seal_block(net.current_leader());
    CHECK(net.run_consensus(good).accepted);

    // a leader proposing the same tx again is voted down
    Block evil;
    evil.height = net.tip().height + 1;
    evil.parent_hash = net.tip().block_hash;
    evil.timestamp = net.tip().timestamp + 1;
    evil.proposer = net.proposer_address(net.current_leader());
    evil.transactions.push_back(tx);
    evil.block_hash = compute_block_hash(evil);
    const ConsensusResult r = net.run_consensus(evil);
    CHECK(!r.accepted);
    CHECK(r.reason == RejectReason::InvalidTx);
}

TEST_CASE("light nodes hold exactly the header projection")
{
    Network net({3, 2, 0.0, 64});
    CHECK(net.node_count(NodeRole::Full) == 3);
    CHECK(net.node_count(NodeRole::Light) == 2);
    const Address d = actor(8);
    for (int i = 0; i < 4; ++i) {
        net.submit_transaction(make_creation(d, i, trivial_code()));
        net.advance_time(2);
        net.commit_next();
    }
    for (std::size_t l = 0; l < net.light_node_count(); ++l) {
        const auto& headers = net.light_node_headers(l);
        const auto& blocks = net.full_node_blocks(0);
        REQUIRE(headers.size() == blocks.size());
        for (std::size_t i = 0; i < headers.size(); ++i)
            CHECK(headers[i] == blocks[i].header());
    }
}

TEST_CASE("leader rotation is round-robin")
{
    Network net({4, 0, 0.0, 64});
    const Address d = actor(9);
    for (int i = 0; i < 6; ++i) {
        CHECK(net.current_leader() == static_cast<NodeId>((net.height() + 1) % 4));
        net.submit_transaction(make_creation(d, i, trivial_code()));
        net.advance_time(1);
        net.commit_next();
    }
}

TEST_CASE("replay reproduces stored traces even after later blocks")
{
    Network net;
    const Address d = actor(11);
    const Transaction creation = make_creation(d, 0, store_code());
    net.submit_transaction(creation);
    net.advance_time(1);
    net.commit_next();
    const Address target = *net.get_receipt(creation.hash).contract_address;

    const Transaction early = make_call(d, 1, target, kv_payload(5, 100));
    net.submit_transaction(early);
    net.advance_time(1);
    net.commit_next();

    const vm::Trace snapshot = net.trace_of(early.hash);  // copy before the state moves on

    // later blocks overwrite the same storage key
    for (int i = 2; i <= 5; ++i) {
        net.submit_transaction(make_call(d, i, target, kv_payload(5, 100 + i)));
        net.advance_time(1);
        net.commit_next();
    }
    CHECK(net.state().find(target)->storage.at(5) == 105);

    const vm::Trace replayed = net.replay(early.hash);
    CHECK(replayed.outcome == snapshot.outcome);
    REQUIRE(replayed.events.size() == snapshot.events.size());
    for (std::size_t i = 0; i < snapshot.events.size(); ++i) {
        CHECK(replayed.events[i].op == snapshot.events[i].op);
        CHECK(replayed.events[i].pc == snapshot.events[i].pc);
        CHECK(replayed.events[i].call_depth == snapshot.events[i].call_depth);
        CHECK(replayed.events[i].stack_top == snapshot.events[i].stack_top);
        CHECK(replayed.events[i].gas_remaining == snapshot.events[i].gas_remaining);
    }
    // replay never disturbs the live chain
    CHECK(net.state().find(target)->storage.at(5) == 105);

    Hash32 unknown;
    unknown.bytes[1] = 1;
    CHECK_THROWS_AS(net.replay(unknown), ChainError);
}

TEST_CASE("chain log lists height, hash, tx count")
{
    Network net;
    const Address d = actor(10);
    net.submit_transaction(make_creation(d, 0, trivial_code()));
    net.advance_time(1);
    net.commit_next();
    const std::string log = net.chain_log();
    const std::string genesis_line = "0\t" + net.blocks()[0].block_hash.hex() + "\t0\n";
    const std::string first_line = "1\t" + net.blocks()[1].block_hash.hex() + "\t1\n";
    CHECK(log == genesis_line + first_line);
}
