// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#include <reliefchain/vm.hpp>

#include <reliefchain/rlp.hpp>
#include <reliefchain/sha3.hpp>

#include <algorithm>
#include <sstream>

namespace reliefchain::vm {

namespace {

struct OpInfo {
    Op op;
    std::string_view name;
};

constexpr OpInfo kOps[] = {
    {Op::STOP, "STOP"},
    {Op::ADD, "ADD"},
    {Op::SUB, "SUB"},
    {Op::MUL, "MUL"},
    {Op::DIV, "DIV"},
    {Op::EQ, "EQ"},
    {Op::LT, "LT"},
    {Op::GT, "GT"},
    {Op::JUMP, "JUMP"},
    {Op::JUMPI, "JUMPI"},
    {Op::PUSH, "PUSH"},
    {Op::POP, "POP"},
    {Op::DUP, "DUP"},
    {Op::SLOAD, "SLOAD"},
    {Op::SSTORE, "SSTORE"},
    {Op::TIMESTAMP, "TIMESTAMP"},
    {Op::BLOCKNUMBER, "BLOCKNUMBER"},
    {Op::TRANSFER, "TRANSFER"},
    {Op::CALL, "CALL"},
    {Op::RETURN, "RETURN"},
    {Op::THROW, "THROW"},
    {Op::SELFDESTRUCT, "SELFDESTRUCT"},
};

bool known_opcode(std::uint8_t byte)
{
    for (const auto& info : kOps)
        if (static_cast<std::uint8_t>(info.op) == byte)
            return true;
    return false;
}

}  // namespace

std::string_view mnemonic(Op op)
{
    for (const auto& info : kOps)
        if (info.op == op)
            return info.name;
    return "UNKNOWN";
}

std::optional<Op> op_from_mnemonic(std::string_view name)
{
    for (const auto& info : kOps)
        if (info.name == name)
            return info.op;
    return std::nullopt;
}

bool has_operand(Op op)
{
    return op == Op::PUSH || op == Op::JUMP || op == Op::JUMPI;
}

Bytes assemble(const std::vector<Instr>& instrs)
{
    Bytes out;
    for (const Instr& ins : instrs) {
        out.push_back(static_cast<std::uint8_t>(ins.op));
        if (has_operand(ins.op)) {
            for (int shift = 56; shift >= 0; shift -= 8)
                out.push_back(static_cast<std::uint8_t>(ins.operand >> shift));
        }
    }
    return out;
}

std::vector<Instr> decode_code(BytesView code)
{
    std::vector<Instr> instrs;
    std::size_t pos = 0;
    while (pos < code.size()) {
        const std::uint8_t byte = code[pos++];
        if (!known_opcode(byte))
            throw ChainError(Errc::MalformedCode, "unknown opcode byte");
        Instr ins{static_cast<Op>(byte), 0};
        if (has_operand(ins.op)) {
            if (pos + 8 > code.size())
                throw ChainError(Errc::MalformedCode, "truncated operand");
            std::uint64_t v = 0;
            for (int i = 0; i < 8; ++i)
                v = v << 8 | code[pos++];
            ins.operand = v;
        }
        instrs.push_back(ins);
    }
    for (const Instr& ins : instrs) {
        if ((ins.op == Op::JUMP || ins.op == Op::JUMPI) && ins.operand >= instrs.size())
            throw ChainError(Errc::MalformedCode, "jump target out of bounds");
    }
    return instrs;
}

std::string disassemble(const std::vector<Instr>& instrs)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < instrs.size(); ++i) {
        out << i << '\t' << mnemonic(instrs[i].op);
        if (has_operand(instrs[i].op))
            out << ' ' << instrs[i].operand;
        out << '\n';
    }
    return out.str();
}

Address derive_contract_address(const Address& creator, std::uint64_t nonce)
{
    const Bytes encoded = rlp::encode(
        rlp::Item{std::vector<rlp::Item>{rlp::address_item(creator), rlp::u64_item(nonce)}});
    const Hash32 digest = crypto::sha3_256(encoded);
    Address out;
    std::copy(digest.bytes.begin() + 12, digest.bytes.end(), out.bytes.begin());
    return out;
}

const ContractInstance* WorldState::find(const Address& addr) const
{
    const auto it = accounts_.find(addr);
    return it == accounts_.end() ? nullptr : &it->second;
}

ContractInstance* WorldState::find(const Address& addr)
{
    const auto it = accounts_.find(addr);
    return it == accounts_.end() ? nullptr : &it->second;
}

const ContractInstance* WorldState::by_id(std::uint64_t registry_id) const
{
    if (registry_id == 0 || registry_id > registry_.size())
        return nullptr;
    return find(registry_[registry_id - 1]);
}

Address WorldState::create_contract(const Address& creator, std::uint64_t nonce, const Bytes& code)
{
    if (code.empty())
        throw ChainError(Errc::MalformedCode, "empty code");
    ContractInstance instance;
    instance.instrs = decode_code(code);  // throws on malformed code
    instance.address = derive_contract_address(creator, nonce);
    instance.code = code;
    instance.deployer = creator;
    instance.deploy_nonce = nonce;
    instance.registry_id = registry_.size() + 1;
    registry_.push_back(instance.address);
    accounts_[instance.address] = std::move(instance);
    return registry_.back();
}

std::vector<std::uint64_t> payload_words(BytesView payload)
{
    std::vector<std::uint64_t> words;
    try {
        const rlp::Item item = rlp::decode(payload);
        if (!item.is_list())
            return words;
        for (const rlp::Item& child : item.list())
            words.push_back(child.is_string() ? u64_from_be(child.str()) : 0);
    } catch (const rlp::DecodeError&) {
        words.clear();
    }
    return words;
}

std::string export_trace(const Trace& trace)
{
    std::ostringstream out;
    for (const TraceEvent& ev : trace.events) {
        out << ev.pc << '\t' << ev.call_depth << '\t' << mnemonic(ev.op) << '\t';
        if (ev.operand_present)
            out << ev.operand;
        else
            out << '-';
        out << '\t';
        if (ev.stack_top.empty()) {
            out << '-';
        } else {
            for (std::size_t i = 0; i < ev.stack_top.size(); ++i) {
                if (i)
                    out << ',';
                out << ev.stack_top[i];
            }
        }
        out << '\t' << ev.gas_remaining << '\n';
    }
    return out.str();
}

std::string_view revert_reason_name(RevertReason reason)
{
    switch (reason) {
    case RevertReason::None:
        return "None";
    case RevertReason::Throw:
        return "Throw";
    case RevertReason::OutOfGas:
        return "OutOfGas";
    case RevertReason::StackUnderflow:
        return "StackUnderflow";
    case RevertReason::UnknownTarget:
        return "UnknownTarget";
    case RevertReason::TransferError:
        return "TransferError";
    case RevertReason::DepthLimit:
        return "DepthLimit";
    case RevertReason::MalformedCode:
        return "MalformedCode";
    }
    return "None";
}

namespace {

struct JournalEntry {
    enum class Kind { Storage, StorageNew, Balance, Destroyed } kind;
    Address addr;
    std::uint64_t key = 0;
    std::uint64_t old_value = 0;
};

class Machine {
public:
    Machine(WorldState& world, const BlockCtx& ctx, std::uint64_t gas_limit, ExecResult& result)
        : world_(world), ctx_(ctx), gas_(gas_limit), result_(result)
    {
    }

    bool run_frame(const Address& self, std::vector<std::uint64_t> stack, int depth,
        RevertReason& fail_reason)
    {
        ContractInstance* instance = world_.find(self);
        if (instance == nullptr) {
            fail_reason = RevertReason::UnknownTarget;
            return false;
        }
        result_.touched.insert(self);
        const std::vector<Instr>& code = instance->instrs;

        std::size_t pc = 0;
        while (true) {
            if (pc >= code.size())
                return finish_frame(depth, stack, true);  // fell off the end: implicit stop
            const Instr& ins = code[pc];
            record_event(ins, pc, depth, stack);

            const std::uint64_t cost = ins.op == Op::CALL ? kGasPerCall : kGasPerOp;
            if (gas_ < cost) {
                fail_reason = RevertReason::OutOfGas;
                return false;
            }
            gas_ -= cost;

            switch (ins.op) {
            case Op::PUSH:
                stack.push_back(ins.operand);
                ++pc;
                break;
            case Op::POP:
                if (!need(stack, 1, fail_reason))
                    return false;
                stack.pop_back();
                ++pc;
                break;
            case Op::DUP:
                if (!need(stack, 1, fail_reason))
                    return false;
                stack.push_back(stack.back());
                ++pc;
                break;
            case Op::JUMP:
                pc = static_cast<std::size_t>(ins.operand);
                break;
            case Op::JUMPI: {
                if (!need(stack, 1, fail_reason))
                    return false;
                const std::uint64_t cond = stack.back();
                stack.pop_back();
                pc = cond != 0 ? static_cast<std::size_t>(ins.operand) : pc + 1;
                break;
            }
            case Op::ADD:
            case Op::SUB:
            case Op::MUL:
            case Op::DIV:
            case Op::EQ:
            case Op::LT:
            case Op::GT: {
                if (!need(stack, 2, fail_reason))
                    return false;
                const std::uint64_t rhs = stack.back();
                stack.pop_back();
                const std::uint64_t lhs = stack.back();
                stack.pop_back();
                stack.push_back(binary_op(ins.op, lhs, rhs));
                ++pc;
                break;
            }
            case Op::SLOAD: {
                if (!need(stack, 1, fail_reason))
                    return false;
                const std::uint64_t key = stack.back();
                stack.pop_back();
                const auto it = instance->storage.find(key);
                stack.push_back(it == instance->storage.end() ? 0 : it->second);
                ++pc;
                break;
            }
            case Op::SSTORE: {
                if (!need(stack, 2, fail_reason))
                    return false;
                const std::uint64_t key = stack.back();
                stack.pop_back();
                const std::uint64_t value = stack.back();
                stack.pop_back();
                store(*instance, key, value);
                ++pc;
                break;
            }
            case Op::TIMESTAMP:
                stack.push_back(ctx_.timestamp);
                ++pc;
                break;
            case Op::BLOCKNUMBER:
                stack.push_back(ctx_.height);
                ++pc;
                break;
            case Op::TRANSFER: {
                if (!need(stack, 2, fail_reason))
                    return false;
                const std::uint64_t to_id = stack.back();
                stack.pop_back();
                const std::uint64_t amount = stack.back();
                stack.pop_back();
                const ContractInstance* to = world_.by_id(to_id);
                if (to == nullptr || to->destroyed) {
                    fail_reason = RevertReason::TransferError;
                    return false;
                }
                move_balance(*instance, *world_.find(to->address), amount);
                ++pc;
                break;
            }
            case Op::CALL: {
                if (!need(stack, 2, fail_reason))
                    return false;
                const std::uint64_t callee_id = stack.back();
                stack.pop_back();
                const std::uint64_t arg = stack.back();
                stack.pop_back();
                const ContractInstance* callee = world_.by_id(callee_id);
                if (callee == nullptr || callee->destroyed || depth + 1 > kMaxCallDepth) {
                    stack.push_back(0);  // unresolvable call fails without aborting the caller
                    ++pc;
                    break;
                }
                const std::size_t mark = journal_.size();
                RevertReason callee_reason = RevertReason::None;
                const bool ok =
                    run_frame(callee->address, {arg}, depth + 1, callee_reason);
                if (!ok)
                    rollback_to(mark);
                stack.push_back(ok ? 1 : 0);
                instance = world_.find(self);  // re-resolve, callee may have self-destructed
                ++pc;
                break;
            }
            case Op::THROW:
                fail_reason = RevertReason::Throw;
                return false;
            case Op::SELFDESTRUCT: {
                if (!need(stack, 1, fail_reason))
                    return false;
                const std::uint64_t beneficiary_id = stack.back();
                stack.pop_back();
                const ContractInstance* beneficiary = world_.by_id(beneficiary_id);
                if (beneficiary == nullptr || beneficiary->address == self) {
                    fail_reason = RevertReason::TransferError;
                    return false;
                }
                move_balance(*instance, *world_.find(beneficiary->address), instance->balance);
                journal_.push_back({JournalEntry::Kind::Destroyed, self, 0, 0});
                instance->destroyed = true;
                return finish_frame(depth, stack, true);
            }
            case Op::RETURN:
            case Op::STOP:
                return finish_frame(depth, stack, true);
            }
        }
    }

    void rollback_all() { rollback_to(0); }

private:
    bool finish_frame(int depth, std::vector<std::uint64_t>& stack, bool ok)
    {
        if (depth == 0)
            result_.final_stack = stack;
        return ok;
    }

    bool need(const std::vector<std::uint64_t>& stack, std::size_t n, RevertReason& reason)
    {
        if (stack.size() < n) {
            reason = RevertReason::StackUnderflow;
            return false;
        }
        return true;
    }

    static std::uint64_t binary_op(Op op, std::uint64_t lhs, std::uint64_t rhs)
    {
        switch (op) {
        case Op::ADD:
            return lhs + rhs;
        case Op::SUB:
            return lhs - rhs;
        case Op::MUL:
            return lhs * rhs;
        case Op::DIV:
            return rhs == 0 ? 0 : lhs / rhs;
        case Op::EQ:
            return lhs == rhs ? 1 : 0;
        case Op::LT:
            return lhs < rhs ? 1 : 0;
        case Op::GT:
            return lhs > rhs ? 1 : 0;
        default:
            return 0;
        }
    }

    void record_event(const Instr& ins, std::size_t pc, int depth,
        const std::vector<std::uint64_t>& stack)
    {
        TraceEvent ev;
        ev.op = ins.op;
        ev.operand_present = has_operand(ins.op);
        ev.operand = ins.operand;
        ev.pc = static_cast<std::uint32_t>(pc);
        ev.call_depth = static_cast<std::uint32_t>(depth);
        const std::size_t n = std::min<std::size_t>(4, stack.size());
        for (std::size_t i = 0; i < n; ++i)
            ev.stack_top.push_back(stack[stack.size() - 1 - i]);
        ev.gas_remaining = gas_;
        result_.trace.events.push_back(std::move(ev));
    }

    void store(ContractInstance& instance, std::uint64_t key, std::uint64_t value)
    {
        const auto it = instance.storage.find(key);
        if (it == instance.storage.end()) {
            journal_.push_back({JournalEntry::Kind::StorageNew, instance.address, key, 0});
            instance.storage.emplace(key, value);
        } else {
            journal_.push_back({JournalEntry::Kind::Storage, instance.address, key, it->second});
            it->second = value;
        }
        result_.sstore_keys[instance.address].insert(key);
    }

    void move_balance(ContractInstance& from, ContractInstance& to, std::uint64_t amount)
    {
        const std::uint64_t moved = std::min(amount, from.balance);
        journal_.push_back({JournalEntry::Kind::Balance, from.address, 0, from.balance});
        journal_.push_back({JournalEntry::Kind::Balance, to.address, 0, to.balance});
        from.balance -= moved;
        to.balance += moved;
    }

    void rollback_to(std::size_t mark)
    {
        while (journal_.size() > mark) {
            const JournalEntry entry = journal_.back();
            journal_.pop_back();
            ContractInstance* instance = world_.find(entry.addr);
            switch (entry.kind) {
            case JournalEntry::Kind::Storage:
                instance->storage[entry.key] = entry.old_value;
                break;
            case JournalEntry::Kind::StorageNew:
                instance->storage.erase(entry.key);
                break;
            case JournalEntry::Kind::Balance:
                instance->balance = entry.old_value;
                break;
            case JournalEntry::Kind::Destroyed:
                instance->destroyed = false;
                break;
            }
        }
    }

    WorldState& world_;
    const BlockCtx& ctx_;
    std::uint64_t gas_;
    ExecResult& result_;
    std::vector<JournalEntry> journal_;

public:
    std::uint64_t gas_left() const { return gas_; }
};

}  // namespace

ExecResult execute_call(WorldState& world, const Address& target, BytesView payload,
    std::uint64_t gas_limit, const BlockCtx& ctx, const Hash32& tx_hash)
{
    ExecResult result;
    result.trace.tx_hash = tx_hash;
    result.trace.root_contract = target;

    Machine machine(world, ctx, gas_limit, result);
    RevertReason reason = RevertReason::None;
    std::vector<std::uint64_t> stack = payload_words(payload);
    std::reverse(stack.begin(), stack.end());  // first payload item on top
    const bool ok = machine.run_frame(target, std::move(stack), 0, reason);
    if (!ok) {
        machine.rollback_all();
        result.status = ExecStatus::Reverted;
        result.reason = reason;
    }
    result.trace.outcome = result.status;
    result.gas_used = gas_limit - machine.gas_left();
    return result;
}

}  // namespace reliefchain::vm
