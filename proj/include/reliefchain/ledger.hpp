// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <reliefchain/bytes.hpp>
#include <reliefchain/errors.hpp>
#include <reliefchain/vm.hpp>

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace reliefchain::chain {

enum class TxKind { ContractCreation, ContractCall };

struct Transaction {
    Address sender;
    std::uint64_t nonce = 0;
    TxKind kind = TxKind::ContractCall;
    std::optional<Address> target;  // absent iff ContractCreation
    Bytes payload;                  // bytecode for creation, call data for calls
    std::uint64_t gas_limit = 0;
    Hash32 hash;
};

/// SHA3-256 over the canonical RLP form
/// [sender, nonce, kind, target-or-empty, payload, gas_limit].
Hash32 compute_tx_hash(const Transaction& tx);

Transaction make_creation(const Address& sender, std::uint64_t nonce, Bytes code,
    std::uint64_t gas_limit = 1'000'000);
Transaction make_call(const Address& sender, std::uint64_t nonce, const Address& target,
    Bytes payload, std::uint64_t gas_limit = 1'000'000);

struct BlockHeader {
    std::uint64_t height = 0;
    Hash32 parent_hash;
    std::uint64_t timestamp = 0;
    Address proposer;
    Hash32 block_hash;
    std::size_t tx_count = 0;

    bool operator==(const BlockHeader&) const = default;
};

struct Block {
    std::uint64_t height = 0;
    Hash32 parent_hash;
    std::uint64_t timestamp = 0;  // simulated seconds, strictly increasing
    Address proposer;
    std::vector<Transaction> transactions;
    Hash32 block_hash;

    BlockHeader header() const;
};

/// SHA3-256 over RLP [height, parent_hash, timestamp, proposer, [tx hashes...]].
Hash32 compute_block_hash(const Block& block);

enum class ReceiptStatus { Success, Reverted };

struct Receipt {
    Hash32 tx_hash;
    ReceiptStatus status = ReceiptStatus::Success;
    std::optional<Address> contract_address;  // present iff creation succeeded
    std::uint64_t block_height = 0;
    std::uint64_t gas_used = 0;
    vm::RevertReason revert_reason = vm::RevertReason::None;
};

enum class RejectReason { BadParent, BadHash, InvalidTx };

struct ConsensusResult {
    bool accepted = false;
    RejectReason reason = RejectReason::BadParent;
    std::string detail;
    std::size_t votes_valid = 0;
    std::size_t votes_total = 0;
};

enum class NodeRole { Full, Light };

using NodeId = std::size_t;

struct NetworkParams {
    std::size_t full_nodes = 4;
    std::size_t light_nodes = 8;
    double hop_delay_s = 0.0;  // simulated per-hop delivery delay
    std::size_t max_block_txs = 64;
};

/// Deterministic consortium chain: FIFO transaction pool, round-robin leader
/// among full nodes, and a >= 2/3 validity vote before a block is appended.
/// Single writer: all mutations go through one instance; const readers may
/// take value snapshots of the world state.
class Network {
public:
    explicit Network(NetworkParams params = {});

    // Logical clock, advanced by the scenario driver.
    void advance_time(std::uint64_t seconds);
    void advance_time_to(std::uint64_t timestamp);
    std::uint64_t now() const { return clock_; }

    Hash32 submit_transaction(const Transaction& tx);

    NodeId current_leader() const;
    Address proposer_address(NodeId node) const;
    Block seal_block(NodeId proposer, std::size_t max_txs = 0);  // 0 = params default
    ConsensusResult run_consensus(const Block& block);

    /// Leader seals and consensus runs; throws on rejection (which cannot
    /// happen for honestly produced blocks).
    Block commit_next(std::size_t max_txs = 0);
    /// Seals blocks until the pool is drained.
    std::vector<Block> commit_all();

    const Receipt& get_receipt(const Hash32& tx_hash) const;
    bool is_confirmed(const Hash32& tx_hash) const;
    const Transaction& get_transaction(const Hash32& tx_hash) const;
    const vm::Trace& trace_of(const Hash32& tx_hash) const;

    /// Re-executes a confirmed transaction against the pre-state of its block
    /// position; the result is bit-identical to the stored trace.
    vm::Trace replay(const Hash32& tx_hash) const;
    vm::WorldState pre_state_of(const Hash32& tx_hash) const;

    const vm::WorldState& state() const { return state_; }
    vm::WorldState state_snapshot() const { return state_; }

    std::uint64_t next_nonce(const Address& sender) const;
    std::size_t pool_size() const { return pool_.size(); }
    std::vector<Transaction> pending_snapshot() const;

    const std::vector<Block>& blocks() const { return blocks_; }
    const Block& tip() const { return blocks_.back(); }
    std::uint64_t height() const { return blocks_.back().height; }
    std::uint64_t block_time_of(const Hash32& tx_hash) const;

    /// Newline-delimited block summaries: height, block hash hex, tx count.
    std::string chain_log() const;

    /// Confirmed txs that touched the contract (root target or nested call),
    /// in chain order.
    std::vector<Hash32> txs_touching(const Address& contract) const;

    std::size_t full_node_count() const { return full_nodes_.size(); }
    std::size_t light_node_count() const { return light_nodes_.size(); }
    std::size_t node_count(NodeRole role) const
    {
        return role == NodeRole::Full ? full_nodes_.size() : light_nodes_.size();
    }
    const std::vector<Block>& full_node_blocks(NodeId node) const;
    const std::vector<BlockHeader>& light_node_headers(std::size_t index) const;
    double hop_delay_s() const { return params_.hop_delay_s; }
    std::size_t max_block_txs() const { return params_.max_block_txs; }

    /// Validates and appends an externally produced block (chain import for
    /// offline verification); bypasses the pool.
    void import_block(const Block& block);

private:
    struct FullNode {
        std::vector<Block> blocks;
        std::set<Hash32> confirmed;
        std::map<Address, std::uint64_t> nonces;
    };

    struct Vote {
        bool valid = false;
        RejectReason reason = RejectReason::BadParent;
        std::string detail;
    };

    Vote validate_block(const FullNode& node, const Block& block) const;
    void apply_block(const Block& block);
    void execute_into(vm::WorldState& world, const Transaction& tx, const vm::BlockCtx& ctx,
        vm::ExecResult* out) const;

    NetworkParams params_;
    std::uint64_t clock_ = 0;
    std::deque<Transaction> pool_;
    std::map<Address, std::uint64_t> expected_nonce_;  // confirmed + pooled

    std::vector<FullNode> full_nodes_;
    std::vector<std::vector<BlockHeader>> light_nodes_;

    std::vector<Block> blocks_;  // canonical chain (equal on every full node)
    vm::WorldState state_;

    std::map<Hash32, Receipt> receipts_;
    std::map<Hash32, vm::Trace> traces_;
    std::map<Hash32, std::pair<std::size_t, std::size_t>> tx_position_;
    std::map<Address, std::vector<Hash32>> touch_index_;
};

}  // namespace reliefchain::chain
