// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#include <reliefchain/ledger.hpp>

#include <reliefchain/rlp.hpp>
#include <reliefchain/sha3.hpp>

#include <algorithm>
#include <sstream>

namespace reliefchain::chain {

Hash32 compute_tx_hash(const Transaction& tx)
{
    std::vector<rlp::Item> fields;
    fields.push_back(rlp::address_item(tx.sender));
    fields.push_back(rlp::u64_item(tx.nonce));
    fields.push_back(rlp::u64_item(tx.kind == TxKind::ContractCreation ? 0 : 1));
    fields.push_back(tx.target ? rlp::address_item(*tx.target) : rlp::string_item({}));
    fields.push_back(rlp::string_item(tx.payload));
    fields.push_back(rlp::u64_item(tx.gas_limit));
    return crypto::sha3_256(rlp::encode(rlp::Item{std::move(fields)}));
}

Transaction make_creation(const Address& sender, std::uint64_t nonce, Bytes code,
    std::uint64_t gas_limit)
{
    Transaction tx;
    tx.sender = sender;
    tx.nonce = nonce;
    tx.kind = TxKind::ContractCreation;
    tx.payload = std::move(code);
    tx.gas_limit = gas_limit;
    tx.hash = compute_tx_hash(tx);
    return tx;
}

Transaction make_call(const Address& sender, std::uint64_t nonce, const Address& target,
    Bytes payload, std::uint64_t gas_limit)
{
    Transaction tx;
    tx.sender = sender;
    tx.nonce = nonce;
    tx.kind = TxKind::ContractCall;
    tx.target = target;
    tx.payload = std::move(payload);
    tx.gas_limit = gas_limit;
    tx.hash = compute_tx_hash(tx);
    return tx;
}

BlockHeader Block::header() const
{
    return {height, parent_hash, timestamp, proposer, block_hash, transactions.size()};
}

Hash32 compute_block_hash(const Block& block)
{
    std::vector<rlp::Item> tx_hashes;
    tx_hashes.reserve(block.transactions.size());
    for (const Transaction& tx : block.transactions)
        tx_hashes.push_back(rlp::hash_item(tx.hash));

    std::vector<rlp::Item> fields;
    fields.push_back(rlp::u64_item(block.height));
    fields.push_back(rlp::hash_item(block.parent_hash));
    fields.push_back(rlp::u64_item(block.timestamp));
    fields.push_back(rlp::address_item(block.proposer));
    fields.push_back(rlp::Item{std::move(tx_hashes)});
    return crypto::sha3_256(rlp::encode(rlp::Item{std::move(fields)}));
}

Network::Network(NetworkParams params) : params_(params)
{
    if (params_.full_nodes == 0)
        params_.full_nodes = 1;

    Block genesis;
    genesis.height = 0;
    genesis.timestamp = 0;
    genesis.block_hash = compute_block_hash(genesis);

    full_nodes_.resize(params_.full_nodes);
    for (auto& node : full_nodes_)
        node.blocks.push_back(genesis);
    light_nodes_.resize(params_.light_nodes);
    for (auto& headers : light_nodes_)
        headers.push_back(genesis.header());
    blocks_.push_back(genesis);
}

void Network::advance_time(std::uint64_t seconds)
{
    clock_ += seconds;
}

void Network::advance_time_to(std::uint64_t timestamp)
{
    clock_ = std::max(clock_, timestamp);
}

Hash32 Network::submit_transaction(const Transaction& tx)
{
    if (compute_tx_hash(tx) != tx.hash)
        throw ChainError(Errc::MalformedPayload, "transaction hash mismatch");
    if (tx.kind == TxKind::ContractCreation) {
        if (tx.target.has_value())
            throw ChainError(Errc::MalformedPayload, "creation must not carry a target");
        if (tx.payload.empty())
            throw ChainError(Errc::MalformedPayload, "creation payload empty");
    } else if (!tx.target.has_value()) {
        throw ChainError(Errc::MalformedPayload, "call without target");
    }
    const auto it = expected_nonce_.find(tx.sender);
    const std::uint64_t expected = it == expected_nonce_.end() ? 0 : it->second;
    if (tx.nonce != expected)
        throw ChainError(Errc::StaleNonce, "expected nonce " + std::to_string(expected));
    expected_nonce_[tx.sender] = expected + 1;
    pool_.push_back(tx);
    return tx.hash;
}

NodeId Network::current_leader() const
{
    return static_cast<NodeId>((blocks_.back().height + 1) % full_nodes_.size());
}

Address Network::proposer_address(NodeId node) const
{
    // Full nodes get stable synthetic identities.
    Address a;
    a.bytes[0] = 0xf0;
    a.bytes[19] = static_cast<std::uint8_t>(node + 1);
    return a;
}

Block Network::seal_block(NodeId proposer, std::size_t max_txs)
{
    if (proposer != current_leader())
        throw ChainError(Errc::NotLeader, "node " + std::to_string(proposer) + " is not leader");
    if (pool_.empty())
        throw ChainError(Errc::EmptyPool, "no pending transactions");
    if (max_txs == 0)
        max_txs = params_.max_block_txs;

    Block block;
    const Block& parent = blocks_.back();
    block.height = parent.height + 1;
    block.parent_hash = parent.block_hash;
    block.timestamp = std::max(clock_, parent.timestamp + 1);
    block.proposer = proposer_address(proposer);
    while (!pool_.empty() && block.transactions.size() < max_txs) {
        block.transactions.push_back(pool_.front());
        pool_.pop_front();
    }
    block.block_hash = compute_block_hash(block);
    return block;
}

Network::Vote Network::validate_block(const FullNode& node, const Block& block) const
{
    const Block& tip = node.blocks.back();
    if (block.parent_hash != tip.block_hash || block.height != tip.height + 1)
        return {false, RejectReason::BadParent, "parent does not match tip"};
    if (block.timestamp <= tip.timestamp)
        return {false, RejectReason::InvalidTx, "timestamp not increasing"};
    if (compute_block_hash(block) != block.block_hash)
        return {false, RejectReason::BadHash, "block hash mismatch"};

    std::map<Address, std::uint64_t> nonces = node.nonces;
    std::set<Hash32> seen;
    for (const Transaction& tx : block.transactions) {
        if (compute_tx_hash(tx) != tx.hash)
            return {false, RejectReason::BadHash, "tx hash mismatch"};
        if (node.confirmed.count(tx.hash) || seen.count(tx.hash))
            return {false, RejectReason::InvalidTx, "tx already included"};
        seen.insert(tx.hash);
        if (tx.kind == TxKind::ContractCreation) {
            if (tx.target.has_value() || tx.payload.empty())
                return {false, RejectReason::InvalidTx, "malformed creation"};
        } else if (!tx.target.has_value()) {
            return {false, RejectReason::InvalidTx, "call without target"};
        }
        const std::uint64_t expected = nonces.count(tx.sender) ? nonces[tx.sender] : 0;
        if (tx.nonce != expected)
            return {false, RejectReason::InvalidTx, "nonce out of sequence"};
        nonces[tx.sender] = expected + 1;
    }
    return {true, RejectReason::BadParent, ""};
}

ConsensusResult Network::run_consensus(const Block& block)
{
    ConsensusResult result;
    result.votes_total = full_nodes_.size();
    Vote first_failure;
    bool failed = false;
    for (const FullNode& node : full_nodes_) {
        const Vote vote = validate_block(node, block);
        if (vote.valid) {
            ++result.votes_valid;
        } else if (!failed) {
            first_failure = vote;
            failed = true;
        }
    }
    if (result.votes_valid * 3 < result.votes_total * 2) {
        result.accepted = false;
        result.reason = first_failure.reason;
        result.detail = first_failure.detail;
        return result;
    }
    result.accepted = true;
    apply_block(block);
    return result;
}

void Network::execute_into(vm::WorldState& world, const Transaction& tx, const vm::BlockCtx& ctx,
    vm::ExecResult* out) const
{
    if (tx.kind == TxKind::ContractCreation) {
        vm::ExecResult result;
        result.trace.tx_hash = tx.hash;
        try {
            const Address addr = world.create_contract(tx.sender, tx.nonce, tx.payload);
            result.trace.root_contract = addr;
            result.touched.insert(addr);
            result.status = vm::ExecStatus::Success;
        } catch (const ChainError&) {
            result.status = vm::ExecStatus::Reverted;
            result.reason = vm::RevertReason::MalformedCode;
        }
        result.gas_used = 1;
        result.trace.outcome = result.status;
        if (out)
            *out = std::move(result);
        return;
    }

    const vm::ContractInstance* target = world.find(*tx.target);
    if (target == nullptr || target->destroyed) {
        vm::ExecResult result;
        result.trace.tx_hash = tx.hash;
        result.trace.root_contract = *tx.target;
        result.status = vm::ExecStatus::Reverted;
        result.reason = vm::RevertReason::UnknownTarget;
        result.trace.outcome = result.status;
        if (out)
            *out = std::move(result);
        return;
    }
    vm::ExecResult result =
        vm::execute_call(world, *tx.target, tx.payload, tx.gas_limit, ctx, tx.hash);
    if (out)
        *out = std::move(result);
}

void Network::apply_block(const Block& block)
{
    const vm::BlockCtx ctx{block.timestamp, block.height};
    const std::size_t block_index = blocks_.size();
    for (std::size_t i = 0; i < block.transactions.size(); ++i) {
        const Transaction& tx = block.transactions[i];
        vm::ExecResult result;
        execute_into(state_, tx, ctx, &result);

        Receipt receipt;
        receipt.tx_hash = tx.hash;
        receipt.status = result.status == vm::ExecStatus::Success ? ReceiptStatus::Success
                                                                  : ReceiptStatus::Reverted;
        if (tx.kind == TxKind::ContractCreation && result.status == vm::ExecStatus::Success)
            receipt.contract_address = result.trace.root_contract;
        receipt.block_height = block.height;
        receipt.gas_used = result.gas_used;
        receipt.revert_reason = result.reason;

        receipts_[tx.hash] = receipt;
        traces_[tx.hash] = std::move(result.trace);
        tx_position_[tx.hash] = {block_index, i};
        if (tx.kind == TxKind::ContractCall)  // creations are not mined interactions
            for (const Address& addr : result.touched)
                touch_index_[addr].push_back(tx.hash);
    }

    blocks_.push_back(block);
    for (FullNode& node : full_nodes_) {
        node.blocks.push_back(block);
        for (const Transaction& tx : block.transactions) {
            node.confirmed.insert(tx.hash);
            node.nonces[tx.sender] = tx.nonce + 1;
        }
    }
    for (auto& headers : light_nodes_)
        headers.push_back(block.header());
}

Block Network::commit_next(std::size_t max_txs)
{
    const Block block = seal_block(current_leader(), max_txs);
    const ConsensusResult result = run_consensus(block);
    if (!result.accepted)
        throw ChainError(Errc::InvalidTx, "own proposal rejected: " + result.detail);
    return block;
}

std::vector<Block> Network::commit_all()
{
    std::vector<Block> out;
    while (!pool_.empty())
        out.push_back(commit_next());
    return out;
}

const Receipt& Network::get_receipt(const Hash32& tx_hash) const
{
    const auto it = receipts_.find(tx_hash);
    if (it == receipts_.end())
        throw ChainError(Errc::UnknownTx, "no receipt for " + tx_hash.hex());
    return it->second;
}

bool Network::is_confirmed(const Hash32& tx_hash) const
{
    return receipts_.count(tx_hash) != 0;
}

const Transaction& Network::get_transaction(const Hash32& tx_hash) const
{
    const auto it = tx_position_.find(tx_hash);
    if (it == tx_position_.end())
        throw ChainError(Errc::UnknownTx, "unconfirmed tx " + tx_hash.hex());
    return blocks_[it->second.first].transactions[it->second.second];
}

const vm::Trace& Network::trace_of(const Hash32& tx_hash) const
{
    const auto it = traces_.find(tx_hash);
    if (it == traces_.end())
        throw ChainError(Errc::UnknownTx, "no trace for " + tx_hash.hex());
    return it->second;
}

vm::WorldState Network::pre_state_of(const Hash32& tx_hash) const
{
    const auto it = tx_position_.find(tx_hash);
    if (it == tx_position_.end())
        throw ChainError(Errc::UnknownTx, "unconfirmed tx " + tx_hash.hex());
    const auto [block_index, tx_index] = it->second;

    vm::WorldState world;
    for (std::size_t b = 1; b <= block_index; ++b) {
        const Block& block = blocks_[b];
        const vm::BlockCtx ctx{block.timestamp, block.height};
        const std::size_t upto = b == block_index ? tx_index : block.transactions.size();
        for (std::size_t i = 0; i < upto; ++i)
            execute_into(world, block.transactions[i], ctx, nullptr);
    }
    return world;
}

vm::Trace Network::replay(const Hash32& tx_hash) const
{
    vm::WorldState world = pre_state_of(tx_hash);
    const auto [block_index, tx_index] = tx_position_.at(tx_hash);
    const Block& block = blocks_[block_index];
    const vm::BlockCtx ctx{block.timestamp, block.height};
    vm::ExecResult result;
    execute_into(world, block.transactions[tx_index], ctx, &result);
    return std::move(result.trace);
}

std::uint64_t Network::next_nonce(const Address& sender) const
{
    const auto it = expected_nonce_.find(sender);
    return it == expected_nonce_.end() ? 0 : it->second;
}

std::vector<Transaction> Network::pending_snapshot() const
{
    return {pool_.begin(), pool_.end()};
}

std::uint64_t Network::block_time_of(const Hash32& tx_hash) const
{
    const auto it = tx_position_.find(tx_hash);
    if (it == tx_position_.end())
        throw ChainError(Errc::UnknownTx, "unconfirmed tx " + tx_hash.hex());
    return blocks_[it->second.first].timestamp;
}

std::string Network::chain_log() const
{
    std::ostringstream out;
    for (const Block& block : blocks_)
        out << block.height << '\t' << block.block_hash.hex() << '\t' << block.transactions.size()
            << '\n';
    return out.str();
}

std::vector<Hash32> Network::txs_touching(const Address& contract) const
{
    const auto it = touch_index_.find(contract);
    return it == touch_index_.end() ? std::vector<Hash32>{} : it->second;
}

const std::vector<Block>& Network::full_node_blocks(NodeId node) const
{
    return full_nodes_.at(node).blocks;
}

const std::vector<BlockHeader>& Network::light_node_headers(std::size_t index) const
{
    return light_nodes_.at(index);
}

void Network::import_block(const Block& block)
{
    const Vote vote = validate_block(full_nodes_.front(), block);
    if (!vote.valid)
        throw ChainError(Errc::InvalidTx, "import rejected: " + vote.detail);
    apply_block(block);
    clock_ = std::max(clock_, block.timestamp);
    for (const Transaction& tx : block.transactions)
        expected_nonce_[tx.sender] = std::max(expected_nonce_[tx.sender], tx.nonce + 1);
}

}  // namespace reliefchain::chain
