// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <reliefchain/ledger.hpp>
#include <reliefchain/vm.hpp>

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace reliefchain::audit {

enum class TraceCategory {
    Arithmetic,
    Storage,
    Conditional,
    Transfer,
    Invocation,
    ExceptionThrow,
    SelfDestruct,
    BlockInfo,
};

std::string_view category_name(TraceCategory cat);

/// PUSH, POP, DUP, JUMP, RETURN and STOP are stack/control plumbing removed
/// by heuristic filtering; every other mnemonic maps to exactly one category.
bool is_plumbing(vm::Op op);
std::optional<TraceCategory> categorize(vm::Op op);

struct CatEvent {
    TraceCategory category;
    vm::Op op;
    std::uint32_t call_depth = 0;
    std::vector<std::uint64_t> stack_top;
};

struct CategorizedTrace {
    Hash32 tx_hash;
    Address contract;
    std::vector<CatEvent> events;
};

/// Drops program counters, gas and plumbing events; preserves order.
CategorizedTrace filter_trace(const vm::Trace& trace);

struct AbnormalExecution {
    Hash32 tx_hash;
    std::string pattern;                // Q1..Q5
    std::vector<std::size_t> evidence;  // indices into the categorized event list
};

/// Pending-pool context used by Q4 and by order-dependency confirmation.
struct PoolContext {
    std::vector<chain::Transaction> pending;
    // contract -> storage key -> pending txs that would write it
    std::map<Address, std::map<std::uint64_t, std::vector<Hash32>>> pending_writes;
};

/// Fixed symbolic query set over a categorized trace:
///   Q1 invocation followed later by a storage write at a shallower depth
///   Q2 invocation whose failure flag is never read by a conditional
///   Q3 block-info value flowing to a conditional/transfer (8-event window)
///   Q4 storage write to a key also written by a different pending tx
///   Q5 exception at depth >= 1 with the caller continuing unguarded
std::vector<AbnormalExecution> query_abnormal(const CategorizedTrace& trace,
    const PoolContext& pool = {});

enum class VulnClass {
    Reentrancy,
    UncheckedCall,
    TimestampDependency,
    TransactionOrderDependency,
    UnhandledException,
};

inline constexpr VulnClass kAllVulnClasses[] = {
    VulnClass::Reentrancy,
    VulnClass::UncheckedCall,
    VulnClass::TimestampDependency,
    VulnClass::TransactionOrderDependency,
    VulnClass::UnhandledException,
};

std::string_view vuln_class_name(VulnClass cls);
std::optional<VulnClass> vuln_class_from_name(std::string_view name);

struct VulnerabilityReport {
    Address contract;
    VulnClass vuln_class;
    std::vector<Hash32> offending_txs;
    std::vector<AbnormalExecution> evidence;
};

/// One report per line: contract hex, class, tx count, first tx hash hex.
std::string export_reports(const std::vector<VulnerabilityReport>& reports);

/// Re-executes [A then B] and [B then A] from identical pre-state snapshots
/// and reports whether the target contract's final storage differs.
/// Side-effect free; throws ChainError{InvalidTx} unless both are calls
/// against the same existing contract.
bool order_dependency_check(const chain::Network& net, const chain::Transaction& a,
    const chain::Transaction& b);

/// Classifier slot for mapping query matches to vulnerability classes.
/// The default rule backend maps Q1/Q2/Q3/Q5 directly and confirms Q4
/// candidates through order_dependency_check; a learned backend can be
/// plugged in behind the same interface.
class VulnClassifier {
public:
    virtual ~VulnClassifier() = default;
    virtual std::vector<VulnerabilityReport> classify(const chain::Network& net,
        const Address& contract, const std::vector<CategorizedTrace>& traces,
        const std::vector<std::vector<AbnormalExecution>>& abnormal,
        const PoolContext& pool) const = 0;
};

class RuleClassifier final : public VulnClassifier {
public:
    std::vector<VulnerabilityReport> classify(const chain::Network& net, const Address& contract,
        const std::vector<CategorizedTrace>& traces,
        const std::vector<std::vector<AbnormalExecution>>& abnormal,
        const PoolContext& pool) const override;
};

/// Incremental miner over confirmed traces of one contract; poll() yields
/// newly confirmed traces in chain order and keeps yielding as blocks land.
class TraceMiner {
public:
    TraceMiner(const chain::Network& net, const Address& contract, std::uint64_t from_height = 0);

    std::vector<vm::Trace> poll();
    const Address& contract() const { return contract_; }

private:
    const chain::Network& net_;
    Address contract_;
    std::uint64_t from_height_;
    std::size_t cursor_ = 0;
};

/// Builds the pool context (pending txs plus their speculative write sets).
PoolContext build_pool_context(const chain::Network& net);

/// Full pipeline for one contract: mine, filter, query, classify. A shared
/// pool context can be passed in when sweeping many contracts.
std::vector<VulnerabilityReport> audit_contract(const chain::Network& net,
    const Address& contract, std::uint64_t from_height = 0,
    const VulnClassifier* classifier = nullptr, const PoolContext* pool = nullptr);

}  // namespace reliefchain::audit
