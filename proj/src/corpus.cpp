// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#include <reliefchain/corpus.hpp>

#include <reliefchain/relief.hpp>
#include <reliefchain/rlp.hpp>
#include <reliefchain/rng.hpp>

#include <json.hpp>

#include <sstream>

namespace reliefchain::sim {

namespace {

using vm::Instr;
using vm::Op;

// Label-resolving code builder so templates can carry randomized plumbing
// noise without hand-counting jump targets.
class CodeBuilder {
public:
    void emit(Op op, std::uint64_t operand = 0) { code_.push_back({op, operand}); }

    void emit_push_contract(std::size_t ordinal)
    {
        patches_[code_.size()] = ordinal;
        code_.push_back({Op::PUSH, 0});
    }

    void emit_branch(Op op, const std::string& label)
    {
        fixups_.emplace_back(code_.size(), label);
        code_.push_back({op, 0});
    }

    void label(const std::string& name) { labels_[name] = code_.size(); }

    /// Stack-neutral plumbing noise (PUSH/POP pairs); filtered out by the
    /// audit pipeline, so it varies traces without changing query behavior.
    void noise(Rng& rng)
    {
        const std::uint64_t pairs = rng.range(0, 2);
        for (std::uint64_t i = 0; i < pairs; ++i) {
            emit(Op::PUSH, rng.range(1, 9));
            emit(Op::POP);
        }
    }

    CorpusContract build()
    {
        for (const auto& [index, label] : fixups_)
            code_[index].operand = labels_.at(label);
        return {code_, patches_};
    }

private:
    std::vector<Instr> code_;
    std::map<std::string, std::size_t> labels_;
    std::vector<std::pair<std::size_t, std::string>> fixups_;
    std::map<std::size_t, std::size_t> patches_;
};

struct TemplateParams {
    std::uint64_t key_a;    // primary storage key (balance / written key / log)
    std::uint64_t key_b;    // secondary key (guard / flag / divergent twin key)
    std::uint64_t amount;   // transfer/deposit amount
    std::uint64_t deadline; // timestamp comparison constant
};

TemplateParams draw_params(Rng& rng)
{
    // Key ranges sit far above registry ids, amounts and logical timestamps,
    // so the stack-value flow heuristics never collide on a constant.
    TemplateParams p;
    p.key_a = rng.range(0x10000, 0x17fff);
    p.key_b = rng.range(0x18000, 0x1ffff);
    p.amount = rng.range(40, 99);
    p.deadline = 1'000'000 + rng.range(0, 999);
    return p;
}

// Victim with a deposit branch (selector != 1 stores one key/value pair) and
// a withdraw branch (selector 1). The attack variant updates its balance
// after the external call, the benign twin before it.
CorpusContract reentrancy_victim(Rng& rng, const TemplateParams& p, bool attack)
{
    CodeBuilder b;
    b.noise(rng);
    b.emit(Op::PUSH, 1);
    b.emit(Op::EQ);
    b.emit_branch(Op::JUMPI, "withdraw");
    b.emit(Op::SSTORE);  // deposit: [key, value]
    b.emit(Op::STOP);
    b.label("withdraw");
    b.emit(Op::PUSH, p.key_a);
    b.emit(Op::SLOAD);
    b.emit(Op::PUSH, 0);
    b.emit(Op::GT);
    b.emit_branch(Op::JUMPI, "pay");
    b.emit(Op::STOP);
    b.label("pay");
    if (!attack) {
        b.emit(Op::PUSH, 0);
        b.emit(Op::PUSH, p.key_a);
        b.emit(Op::SSTORE);  // effects before interaction
    }
    b.emit(Op::PUSH, 0);        // call argument
    b.emit_push_contract(1);    // attacker id
    b.emit(Op::CALL);
    b.emit_branch(Op::JUMPI, "done");  // read the failure flag
    b.label("done");
    if (attack) {
        b.emit(Op::PUSH, 0);
        b.emit(Op::PUSH, p.key_a);
        b.emit(Op::SSTORE);  // effects after interaction
    }
    b.emit(Op::STOP);
    return b.build();
}

// Re-enters the victim once, guarded by its own storage flag.
CorpusContract reentrancy_attacker(Rng& rng, const TemplateParams& p)
{
    CodeBuilder b;
    b.noise(rng);
    b.emit(Op::PUSH, p.key_b);
    b.emit(Op::SLOAD);
    b.emit_branch(Op::JUMPI, "done");
    b.emit(Op::PUSH, 1);
    b.emit(Op::PUSH, p.key_b);
    b.emit(Op::SSTORE);
    b.emit(Op::PUSH, 1);      // selector: withdraw
    b.emit_push_contract(0);  // victim id
    b.emit(Op::CALL);
    b.emit_branch(Op::JUMPI, "done");
    b.label("done");
    b.emit(Op::STOP);
    return b.build();
}

CorpusContract arithmetic_helper(Rng& rng)
{
    CodeBuilder b;
    b.emit(Op::PUSH, rng.range(2, 9));
    b.emit(Op::PUSH, rng.range(2, 9));
    b.emit(Op::ADD);
    b.emit(Op::POP);
    b.emit(Op::STOP);
    return b.build();
}

CorpusContract sink_contract()
{
    CodeBuilder b;
    b.emit(Op::STOP);
    return b.build();
}

CorpusContract thrower_contract()
{
    CodeBuilder b;
    b.emit(Op::THROW);
    return b.build();
}

CorpusContract unchecked_caller(Rng& rng, const TemplateParams& p, bool attack)
{
    CodeBuilder b;
    b.noise(rng);
    b.emit(Op::PUSH, 0);
    b.emit_push_contract(1);  // helper
    b.emit(Op::CALL);
    if (attack)
        b.emit(Op::POP);  // drop the failure flag unread
    else
        b.emit_branch(Op::JUMPI, "store");
    b.label("store");
    b.emit(Op::PUSH, p.amount);
    b.emit(Op::PUSH, p.key_a);
    b.emit(Op::SSTORE);
    b.emit(Op::STOP);
    return b.build();
}

CorpusContract timestamp_victim(Rng& rng, const TemplateParams& p, bool attack)
{
    CodeBuilder b;
    if (attack) {
        b.noise(rng);
        b.emit(Op::TIMESTAMP);
        b.emit(Op::PUSH, p.deadline);
        b.emit(Op::LT);  // timestamp < deadline
        b.emit_branch(Op::JUMPI, "pay");
        b.emit(Op::STOP);
        b.label("pay");
        b.emit(Op::PUSH, p.amount);
        b.emit_push_contract(1);  // sink
        b.emit(Op::TRANSFER);
        b.emit(Op::STOP);
        return b.build();
    }
    // Benign twin: timestamp only logged; payout guarded by a stored flag.
    b.noise(rng);
    b.emit(Op::PUSH, 1);
    b.emit(Op::EQ);
    b.emit_branch(Op::JUMPI, "act");
    b.emit(Op::SSTORE);  // deposit: [key, value]
    b.emit(Op::STOP);
    b.label("act");
    b.emit(Op::TIMESTAMP);
    b.emit(Op::PUSH, p.key_a);
    b.emit(Op::SSTORE);  // log the timestamp
    b.emit(Op::PUSH, p.key_b);
    b.emit(Op::SLOAD);
    b.emit_branch(Op::JUMPI, "pay");
    b.emit(Op::STOP);
    b.label("pay");
    b.emit(Op::PUSH, p.amount);
    b.emit_push_contract(1);
    b.emit(Op::TRANSFER);
    b.emit(Op::STOP);
    return b.build();
}

CorpusContract tod_contract(Rng& rng)
{
    CodeBuilder b;
    b.noise(rng);
    b.emit(Op::SSTORE);  // [key, value] from the call data
    b.emit(Op::STOP);
    return b.build();
}

CorpusContract unhandled_exception_victim(Rng& rng, const TemplateParams& p, bool attack)
{
    CodeBuilder b;
    b.noise(rng);
    b.emit(Op::PUSH, 0);
    b.emit_push_contract(1);  // thrower
    b.emit(Op::CALL);
    if (attack) {
        // Damage first, flag read only afterwards.
        b.emit(Op::DUP);
        b.emit(Op::SLOAD);  // keyed by the duplicated failure flag, keeping it on top
        b.emit(Op::PUSH, p.amount);
        b.emit_push_contract(2);  // sink
        b.emit(Op::TRANSFER);
        b.emit(Op::POP);
        b.emit_branch(Op::JUMPI, "done");
        b.label("done");
        b.emit(Op::STOP);
        return b.build();
    }
    b.emit(Op::PUSH, 0);
    b.emit(Op::EQ);  // failed?
    b.emit_branch(Op::JUMPI, "done");
    b.emit(Op::PUSH, p.amount);
    b.emit_push_contract(2);
    b.emit(Op::TRANSFER);
    b.label("done");
    b.emit(Op::STOP);
    return b.build();
}

CorpusInstance make_instance(audit::VulnClass cls, bool attack, int index, Rng& rng)
{
    const TemplateParams p = draw_params(rng);
    CorpusInstance inst;
    inst.vuln_class = cls;
    inst.attack = attack;
    inst.label = std::string(audit::vuln_class_name(cls)) + "/" +
                 (attack ? "attack" : "benign") + "/" + std::to_string(index);
    inst.victim_ordinal = 0;

    switch (cls) {
    case audit::VulnClass::Reentrancy: {
        inst.contracts.push_back(reentrancy_victim(rng, p, attack));
        inst.contracts.push_back(reentrancy_attacker(rng, p));
        inst.setup.push_back({0, {0, p.key_a, rng.range(5, 50)}});  // fund the balance slot
        inst.triggers.push_back({0, {1}});                          // withdraw
        inst.expected_query = attack ? "Q1" : "";
        break;
    }
    case audit::VulnClass::UncheckedCall: {
        inst.contracts.push_back(unchecked_caller(rng, p, attack));
        inst.contracts.push_back(arithmetic_helper(rng));
        inst.triggers.push_back({0, {}});
        inst.expected_query = attack ? "Q2" : "";
        break;
    }
    case audit::VulnClass::TimestampDependency: {
        inst.contracts.push_back(timestamp_victim(rng, p, attack));
        inst.contracts.push_back(sink_contract());
        if (!attack) {
            inst.setup.push_back({0, {0, p.key_b, 1}});  // enable the payout flag
            inst.triggers.push_back({0, {1}});
        } else {
            inst.triggers.push_back({0, {}});
        }
        inst.expected_query = attack ? "Q3" : "";
        break;
    }
    case audit::VulnClass::TransactionOrderDependency: {
        inst.contracts.push_back(tod_contract(rng));
        const std::uint64_t value_a = rng.range(1, 100);
        const std::uint64_t value_b = value_a + rng.range(1, 100);
        if (attack) {
            inst.triggers.push_back({0, {p.key_a, value_a}});
            inst.pending.push_back({0, {p.key_a, value_b}});
        } else {
            inst.triggers.push_back({0, {p.key_a, value_a}});
            inst.pending.push_back({0, {p.key_b, value_b}});  // disjoint keys commute
        }
        inst.expected_query = attack ? "Q4" : "";
        break;
    }
    case audit::VulnClass::UnhandledException: {
        inst.contracts.push_back(unhandled_exception_victim(rng, p, attack));
        inst.contracts.push_back(thrower_contract());
        inst.contracts.push_back(sink_contract());
        inst.triggers.push_back({0, {}});
        inst.expected_query = attack ? "Q5" : "";
        break;
    }
    }
    return inst;
}

std::uint64_t mix_seed(std::uint64_t seed, audit::VulnClass cls, int index)
{
    return seed * 1000003ULL + static_cast<std::uint64_t>(cls) * 101ULL +
           static_cast<std::uint64_t>(index) * 7919ULL;
}

}  // namespace

std::vector<CorpusInstance> generate_corpus(audit::VulnClass vuln_class, int count,
    std::uint64_t seed)
{
    std::vector<CorpusInstance> out;
    for (int i = 0; i < count; ++i) {
        Rng rng_attack(mix_seed(seed, vuln_class, 2 * i));
        out.push_back(make_instance(vuln_class, true, i, rng_attack));
        Rng rng_benign(mix_seed(seed, vuln_class, 2 * i + 1));
        out.push_back(make_instance(vuln_class, false, i, rng_benign));
    }
    return out;
}

std::vector<CorpusInstance> generate_full_corpus(int count_per_class, std::uint64_t seed)
{
    std::vector<CorpusInstance> out;
    for (const audit::VulnClass cls : audit::kAllVulnClasses) {
        auto batch = generate_corpus(cls, count_per_class, seed);
        out.insert(out.end(), std::make_move_iterator(batch.begin()),
            std::make_move_iterator(batch.end()));
    }
    return out;
}

namespace {

Bytes words_payload(const std::vector<std::uint64_t>& words)
{
    std::vector<rlp::Item> items;
    items.reserve(words.size());
    for (const std::uint64_t w : words)
        items.push_back(rlp::u64_item(w));
    return rlp::encode(rlp::Item{std::move(items)});
}

Hash32 submit_corpus_call(chain::Network& net, const Address& sender, const Address& target,
    const CorpusTx& tx)
{
    const chain::Transaction call =
        chain::make_call(sender, net.next_nonce(sender), target, words_payload(tx.words), tx.gas);
    return net.submit_transaction(call);
}

}  // namespace

DeployedInstance run_instance(chain::Network& net, const CorpusInstance& instance,
    const Address& operator_addr, bool hold_pending)
{
    DeployedInstance deployed;

    const std::uint64_t base_id = net.state().next_registry_id();
    for (const CorpusContract& contract : instance.contracts) {
        std::vector<Instr> code = contract.code;
        for (const auto& [index, ordinal] : contract.callee_patches)
            code[index].operand = base_id + ordinal;
        const std::uint64_t nonce = net.next_nonce(operator_addr);
        const chain::Transaction tx =
            chain::make_creation(operator_addr, nonce, vm::assemble(code));
        net.submit_transaction(tx);
        deployed.contracts.push_back(vm::derive_contract_address(operator_addr, nonce));
    }
    net.commit_all();
    deployed.victim = deployed.contracts.at(instance.victim_ordinal);

    for (const CorpusTx& tx : instance.setup)
        deployed.setup_txs.push_back(
            submit_corpus_call(net, operator_addr, deployed.contracts.at(tx.contract_ordinal), tx));
    if (!instance.setup.empty())
        net.commit_all();

    for (const CorpusTx& tx : instance.triggers)
        deployed.trigger_txs.push_back(
            submit_corpus_call(net, operator_addr, deployed.contracts.at(tx.contract_ordinal), tx));
    if (!instance.triggers.empty())
        net.commit_all();

    if (!hold_pending)
        deployed.pending_txs = submit_pending(net, instance, deployed);
    return deployed;
}

std::vector<Hash32> submit_pending(chain::Network& net, const CorpusInstance& instance,
    const DeployedInstance& deployed)
{
    std::vector<Hash32> out;
    const Address sender = relief::participant_address(instance.label + "/pending");
    for (const CorpusTx& tx : instance.pending)
        out.push_back(submit_corpus_call(net, sender, deployed.contracts.at(tx.contract_ordinal), tx));
    return out;
}

std::string instance_to_json(const CorpusInstance& instance)
{
    nlohmann::ordered_json j;
    j["label"] = instance.label;
    j["vuln_class"] = std::string(audit::vuln_class_name(instance.vuln_class));
    j["attack"] = instance.attack;
    j["expected_query"] = instance.expected_query;
    j["victim_ordinal"] = instance.victim_ordinal;
    j["contracts"] = nlohmann::ordered_json::array();
    for (const CorpusContract& c : instance.contracts) {
        nlohmann::ordered_json jc;
        jc["code"] = vm::disassemble(c.code);
        nlohmann::ordered_json patches = nlohmann::ordered_json::object();
        for (const auto& [index, ordinal] : c.callee_patches)
            patches[std::to_string(index)] = ordinal;
        jc["callee_patches"] = patches;
        j["contracts"].push_back(jc);
    }
    const auto tx_array = [](const std::vector<CorpusTx>& txs) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const CorpusTx& tx : txs)
            arr.push_back({{"contract", tx.contract_ordinal}, {"words", tx.words},
                {"gas", tx.gas}});
        return arr;
    };
    j["setup"] = tx_array(instance.setup);
    j["triggers"] = tx_array(instance.triggers);
    j["pending"] = tx_array(instance.pending);
    return j.dump(2) + "\n";
}

}  // namespace reliefchain::sim
