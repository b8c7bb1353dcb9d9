// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#include <reliefchain/audit.hpp>

#include <algorithm>
#include <sstream>

namespace reliefchain::audit {

namespace {
constexpr std::size_t kFlowWindow = 8;  // Q3 dataflow under-approximation window
}

std::string_view category_name(TraceCategory cat)
{
    switch (cat) {
    case TraceCategory::Arithmetic:
        return "Arithmetic";
    case TraceCategory::Storage:
        return "Storage";
    case TraceCategory::Conditional:
        return "Conditional";
    case TraceCategory::Transfer:
        return "Transfer";
    case TraceCategory::Invocation:
        return "Invocation";
    case TraceCategory::ExceptionThrow:
        return "ExceptionThrow";
    case TraceCategory::SelfDestruct:
        return "SelfDestruct";
    case TraceCategory::BlockInfo:
        return "BlockInfo";
    }
    return "";
}

bool is_plumbing(vm::Op op)
{
    switch (op) {
    case vm::Op::PUSH:
    case vm::Op::POP:
    case vm::Op::DUP:
    case vm::Op::JUMP:
    case vm::Op::RETURN:
    case vm::Op::STOP:
        return true;
    default:
        return false;
    }
}

std::optional<TraceCategory> categorize(vm::Op op)
{
    switch (op) {
    case vm::Op::ADD:
    case vm::Op::SUB:
    case vm::Op::MUL:
    case vm::Op::DIV:
        return TraceCategory::Arithmetic;
    case vm::Op::SLOAD:
    case vm::Op::SSTORE:
        return TraceCategory::Storage;
    case vm::Op::JUMPI:
    case vm::Op::EQ:
    case vm::Op::LT:
    case vm::Op::GT:
        return TraceCategory::Conditional;
    case vm::Op::TRANSFER:
        return TraceCategory::Transfer;
    case vm::Op::CALL:
        return TraceCategory::Invocation;
    case vm::Op::THROW:
        return TraceCategory::ExceptionThrow;
    case vm::Op::SELFDESTRUCT:
        return TraceCategory::SelfDestruct;
    case vm::Op::TIMESTAMP:
    case vm::Op::BLOCKNUMBER:
        return TraceCategory::BlockInfo;
    default:
        return std::nullopt;
    }
}

CategorizedTrace filter_trace(const vm::Trace& trace)
{
    CategorizedTrace out;
    out.tx_hash = trace.tx_hash;
    out.contract = trace.root_contract;
    for (const vm::TraceEvent& ev : trace.events) {
        const auto cat = categorize(ev.op);
        if (!cat)
            continue;
        out.events.push_back({*cat, ev.op, ev.call_depth, ev.stack_top});
    }
    return out;
}

namespace {

bool stack_contains(const CatEvent& ev, std::uint64_t value)
{
    return std::find(ev.stack_top.begin(), ev.stack_top.end(), value) != ev.stack_top.end();
}

void query_q1(const CategorizedTrace& ct, std::vector<AbnormalExecution>& out)
{
    const auto& ev = ct.events;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (ev[i].category != TraceCategory::Invocation)
            continue;
        for (std::size_t j = i + 1; j < ev.size(); ++j) {
            if (ev[j].op == vm::Op::SSTORE && ev[j].call_depth < ev[i].call_depth) {
                out.push_back({ct.tx_hash, "Q1", {i, j}});
                break;
            }
        }
    }
}

void query_q2(const CategorizedTrace& ct, std::vector<AbnormalExecution>& out)
{
    const auto& ev = ct.events;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (ev[i].category != TraceCategory::Invocation)
            continue;
        const std::uint32_t depth = ev[i].call_depth;

        // First caller-frame event after the call carries the failure flag on
        // top of its stack.
        std::size_t first_same = 0;
        bool found = false;
        for (std::size_t j = i + 1; j < ev.size(); ++j) {
            if (ev[j].call_depth < depth)
                break;
            if (ev[j].call_depth == depth) {
                first_same = j;
                found = true;
                break;
            }
        }
        if (!found) {
            out.push_back({ct.tx_hash, "Q2", {i}});
            continue;
        }
        if (ev[first_same].stack_top.empty())
            continue;
        const std::uint64_t flag = ev[first_same].stack_top.front();
        bool read = false;
        for (std::size_t j = first_same; j < ev.size(); ++j) {
            if (ev[j].call_depth < depth)
                break;
            if (ev[j].call_depth == depth && ev[j].category == TraceCategory::Conditional &&
                stack_contains(ev[j], flag)) {
                read = true;
                break;
            }
        }
        if (!read)
            out.push_back({ct.tx_hash, "Q2", {i, first_same}});
    }
}

void query_q3(const CategorizedTrace& ct, std::vector<AbnormalExecution>& out)
{
    const auto& ev = ct.events;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (ev[i].category != TraceCategory::BlockInfo)
            continue;
        const std::uint32_t depth = ev[i].call_depth;

        // Candidate values: the stack of the next same-depth event, where the
        // block-info word has just been pushed.
        const CatEvent* witness = nullptr;
        for (std::size_t j = i + 1; j < ev.size() && j <= i + kFlowWindow; ++j) {
            if (ev[j].call_depth == depth) {
                witness = &ev[j];
                break;
            }
        }
        if (witness == nullptr || witness->stack_top.empty())
            continue;

        std::vector<std::size_t> hits;
        for (std::size_t j = i + 1; j < ev.size() && j <= i + kFlowWindow; ++j) {
            if (ev[j].call_depth != depth)
                continue;
            if (ev[j].category != TraceCategory::Conditional &&
                ev[j].category != TraceCategory::Transfer)
                continue;
            const bool shares = std::any_of(witness->stack_top.begin(), witness->stack_top.end(),
                [&](std::uint64_t v) { return stack_contains(ev[j], v); });
            if (shares)
                hits.push_back(j);
        }
        if (!hits.empty()) {
            AbnormalExecution abn{ct.tx_hash, "Q3", {i}};
            abn.evidence.insert(abn.evidence.end(), hits.begin(), hits.end());
            out.push_back(std::move(abn));
        }
    }
}

void query_q4(const CategorizedTrace& ct, const PoolContext& pool,
    std::vector<AbnormalExecution>& out)
{
    const auto writes_it = pool.pending_writes.find(ct.contract);
    if (writes_it == pool.pending_writes.end())
        return;
    const auto& ev = ct.events;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (ev[i].op != vm::Op::SSTORE || ev[i].stack_top.empty())
            continue;
        const std::uint64_t key = ev[i].stack_top.front();
        const auto key_it = writes_it->second.find(key);
        if (key_it == writes_it->second.end())
            continue;
        const bool conflicting = std::any_of(key_it->second.begin(), key_it->second.end(),
            [&](const Hash32& h) { return h != ct.tx_hash; });
        if (conflicting)
            out.push_back({ct.tx_hash, "Q4", {i}});
    }
}

void query_q5(const CategorizedTrace& ct, std::vector<AbnormalExecution>& out)
{
    const auto& ev = ct.events;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (ev[i].category != TraceCategory::ExceptionThrow || ev[i].call_depth == 0)
            continue;
        std::size_t caller = 0;
        bool found = false;
        for (std::size_t j = i + 1; j < ev.size(); ++j) {
            if (ev[j].call_depth < ev[i].call_depth) {
                caller = j;
                found = true;
                break;
            }
        }
        if (!found)
            continue;
        bool guarded = false;
        for (std::size_t j = i + 1; j <= caller; ++j) {
            if (ev[j].category == TraceCategory::Conditional) {
                guarded = true;
                break;
            }
        }
        if (!guarded)
            out.push_back({ct.tx_hash, "Q5", {i, caller}});
    }
}

}  // namespace

std::vector<AbnormalExecution> query_abnormal(const CategorizedTrace& trace,
    const PoolContext& pool)
{
    std::vector<AbnormalExecution> out;
    query_q1(trace, out);
    query_q2(trace, out);
    query_q3(trace, out);
    query_q4(trace, pool, out);
    query_q5(trace, out);
    return out;
}

std::string_view vuln_class_name(VulnClass cls)
{
    switch (cls) {
    case VulnClass::Reentrancy:
        return "Reentrancy";
    case VulnClass::UncheckedCall:
        return "UncheckedCall";
    case VulnClass::TimestampDependency:
        return "TimestampDependency";
    case VulnClass::TransactionOrderDependency:
        return "TransactionOrderDependency";
    case VulnClass::UnhandledException:
        return "UnhandledException";
    }
    return "";
}

std::optional<VulnClass> vuln_class_from_name(std::string_view name)
{
    for (const VulnClass cls : kAllVulnClasses)
        if (vuln_class_name(cls) == name)
            return cls;
    return std::nullopt;
}

std::string export_reports(const std::vector<VulnerabilityReport>& reports)
{
    std::ostringstream out;
    for (const VulnerabilityReport& report : reports) {
        out << report.contract.hex() << '\t' << vuln_class_name(report.vuln_class) << '\t'
            << report.offending_txs.size() << '\t'
            << (report.offending_txs.empty() ? std::string("-")
                                             : report.offending_txs.front().hex())
            << '\n';
    }
    return out.str();
}

bool order_dependency_check(const chain::Network& net, const chain::Transaction& a,
    const chain::Transaction& b)
{
    if (a.kind != chain::TxKind::ContractCall || b.kind != chain::TxKind::ContractCall)
        throw ChainError(Errc::InvalidTx, "order check requires contract calls");
    if (!a.target || !b.target || *a.target != *b.target)
        throw ChainError(Errc::InvalidTx, "order check requires a common target");
    const Address target = *a.target;
    if (net.state().find(target) == nullptr)
        throw ChainError(Errc::InvalidTx, "target contract does not exist");

    // Pre-state: before the earliest confirmed of the pair, else the tip.
    vm::WorldState base;
    const bool a_conf = net.is_confirmed(a.hash);
    const bool b_conf = net.is_confirmed(b.hash);
    if (a_conf && b_conf) {
        const auto ha = net.get_receipt(a.hash).block_height;
        const auto hb = net.get_receipt(b.hash).block_height;
        base = net.pre_state_of(ha <= hb ? a.hash : b.hash);
    } else if (a_conf) {
        base = net.pre_state_of(a.hash);
    } else if (b_conf) {
        base = net.pre_state_of(b.hash);
    } else {
        base = net.state_snapshot();
    }

    const vm::BlockCtx ctx{net.now() + 1, net.height() + 1};
    const auto run_pair = [&](const chain::Transaction& first, const chain::Transaction& second) {
        vm::WorldState world = base;
        if (world.find(target) == nullptr)
            throw ChainError(Errc::InvalidTx, "target missing in pre-state");
        vm::execute_call(world, target, first.payload, first.gas_limit, ctx, first.hash);
        vm::execute_call(world, target, second.payload, second.gas_limit, ctx, second.hash);
        return world.find(target)->storage;
    };

    return run_pair(a, b) != run_pair(b, a);
}

std::vector<VulnerabilityReport> RuleClassifier::classify(const chain::Network& net,
    const Address& contract, const std::vector<CategorizedTrace>& traces,
    const std::vector<std::vector<AbnormalExecution>>& abnormal, const PoolContext& pool) const
{
    std::map<VulnClass, VulnerabilityReport> by_class;
    const auto add = [&](VulnClass cls, const Hash32& tx, const AbnormalExecution& abn) {
        VulnerabilityReport& report = by_class[cls];
        report.contract = contract;
        report.vuln_class = cls;
        if (std::find(report.offending_txs.begin(), report.offending_txs.end(), tx) ==
            report.offending_txs.end())
            report.offending_txs.push_back(tx);
        report.evidence.push_back(abn);
    };

    for (std::size_t t = 0; t < traces.size(); ++t) {
        for (const AbnormalExecution& abn : abnormal[t]) {
            if (abn.pattern == "Q1") {
                add(VulnClass::Reentrancy, abn.tx_hash, abn);
            } else if (abn.pattern == "Q2") {
                add(VulnClass::UncheckedCall, abn.tx_hash, abn);
            } else if (abn.pattern == "Q3") {
                add(VulnClass::TimestampDependency, abn.tx_hash, abn);
            } else if (abn.pattern == "Q5") {
                add(VulnClass::UnhandledException, abn.tx_hash, abn);
            } else if (abn.pattern == "Q4") {
                // Candidate only; confirm through the two-order replay test.
                const chain::Transaction& confirmed = net.get_transaction(abn.tx_hash);
                for (const chain::Transaction& pending : pool.pending) {
                    if (pending.hash == abn.tx_hash)
                        continue;
                    if (!pending.target || *pending.target != contract)
                        continue;
                    if (order_dependency_check(net, confirmed, pending)) {
                        add(VulnClass::TransactionOrderDependency, abn.tx_hash, abn);
                        VulnerabilityReport& report =
                            by_class[VulnClass::TransactionOrderDependency];
                        if (std::find(report.offending_txs.begin(), report.offending_txs.end(),
                                pending.hash) == report.offending_txs.end())
                            report.offending_txs.push_back(pending.hash);
                        break;
                    }
                }
            }
        }
    }

    std::vector<VulnerabilityReport> out;
    for (auto& [cls, report] : by_class)
        out.push_back(std::move(report));
    return out;
}

TraceMiner::TraceMiner(const chain::Network& net, const Address& contract,
    std::uint64_t from_height)
    : net_(net), contract_(contract), from_height_(from_height)
{
    if (net.state().find(contract) == nullptr)
        throw ChainError(Errc::UnknownContract, "not deployed: " + contract.hex());
}

std::vector<vm::Trace> TraceMiner::poll()
{
    std::vector<vm::Trace> out;
    const std::vector<Hash32> touching = net_.txs_touching(contract_);
    for (; cursor_ < touching.size(); ++cursor_) {
        const Hash32& tx = touching[cursor_];
        if (net_.get_receipt(tx).block_height < from_height_)
            continue;
        out.push_back(net_.trace_of(tx));
    }
    return out;
}

PoolContext build_pool_context(const chain::Network& net)
{
    PoolContext ctx;
    ctx.pending = net.pending_snapshot();
    for (const chain::Transaction& tx : ctx.pending) {
        if (tx.kind != chain::TxKind::ContractCall)
            continue;
        vm::WorldState scratch = net.state_snapshot();
        if (scratch.find(*tx.target) == nullptr)
            continue;
        const vm::BlockCtx block_ctx{net.now() + 1, net.height() + 1};
        const vm::ExecResult result =
            vm::execute_call(scratch, *tx.target, tx.payload, tx.gas_limit, block_ctx, tx.hash);
        for (const auto& [addr, keys] : result.sstore_keys)
            for (const std::uint64_t key : keys)
                ctx.pending_writes[addr][key].push_back(tx.hash);
    }
    return ctx;
}

std::vector<VulnerabilityReport> audit_contract(const chain::Network& net,
    const Address& contract, std::uint64_t from_height, const VulnClassifier* classifier,
    const PoolContext* pool)
{
    static const RuleClassifier default_classifier;
    if (classifier == nullptr)
        classifier = &default_classifier;

    PoolContext local;
    if (pool == nullptr) {
        local = build_pool_context(net);
        pool = &local;
    }

    TraceMiner miner(net, contract, from_height);
    std::vector<CategorizedTrace> categorized;
    std::vector<std::vector<AbnormalExecution>> abnormal;
    for (const vm::Trace& trace : miner.poll()) {
        CategorizedTrace ct = filter_trace(trace);
        ct.contract = contract;  // attribute to the audited address
        abnormal.push_back(query_abnormal(ct, *pool));
        categorized.push_back(std::move(ct));
    }
    return classifier->classify(net, contract, categorized, abnormal, *pool);
}

}  // namespace reliefchain::audit
