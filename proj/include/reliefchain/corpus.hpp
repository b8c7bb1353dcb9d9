// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <reliefchain/audit.hpp>
#include <reliefchain/ledger.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace reliefchain::sim {

struct CorpusContract {
    std::vector<vm::Instr> code;
    // PUSH instructions whose operand must become the registry id of another
    // contract of the same instance (index -> contract ordinal).
    std::map<std::size_t, std::size_t> callee_patches;
};

struct CorpusTx {
    std::size_t contract_ordinal = 0;
    std::vector<std::uint64_t> words;  // payload is the RLP list of these words
    std::uint64_t gas = 10'000;
};

/// One attack or benign-twin instance: contracts, the transactions that
/// exercise them, and (for attacks) the single query it is built to fire.
struct CorpusInstance {
    audit::VulnClass vuln_class = audit::VulnClass::Reentrancy;
    bool attack = false;
    std::string label;
    std::vector<CorpusContract> contracts;
    std::size_t victim_ordinal = 0;
    std::vector<CorpusTx> setup;
    std::vector<CorpusTx> triggers;
    std::vector<CorpusTx> pending;  // submitted but deliberately left unsealed
    std::string expected_query;     // "Q1".."Q5" for attacks, empty for benign
};

/// `count` randomized attack/benign pairs for one class, deterministic in
/// (class, count, seed). Throws ChainError{UnknownClass} via the name parser
/// when driven from the CLI.
std::vector<CorpusInstance> generate_corpus(audit::VulnClass vuln_class, int count,
    std::uint64_t seed);

std::vector<CorpusInstance> generate_full_corpus(int count_per_class, std::uint64_t seed);

struct DeployedInstance {
    std::vector<Address> contracts;
    Address victim;
    std::vector<Hash32> setup_txs;
    std::vector<Hash32> trigger_txs;
    std::vector<Hash32> pending_txs;  // empty when hold_pending
};

/// Deploys the instance's contracts, seals setup and trigger transactions,
/// and submits pending ones unsealed (unless held for later submission).
DeployedInstance run_instance(chain::Network& net, const CorpusInstance& instance,
    const Address& operator_addr, bool hold_pending = false);

/// Submits the instance's pending transactions without sealing them.
std::vector<Hash32> submit_pending(chain::Network& net, const CorpusInstance& instance,
    const DeployedInstance& deployed);

std::string instance_to_json(const CorpusInstance& instance);

}  // namespace reliefchain::sim
