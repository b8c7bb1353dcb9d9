// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <reliefchain/bytes.hpp>
#include <reliefchain/errors.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace reliefchain::vm {

/// Stack machine over 64-bit unsigned words. Word-level semantics:
///   - binary ops pop the right operand first: PUSH lhs; PUSH rhs; OP
///   - SSTORE pops key, then value: PUSH value; PUSH key; SSTORE
///   - CALL pops callee registry id, then one argument word that becomes the
///     callee's initial stack; the callee's success flag (1/0) is pushed back
///   - TRANSFER pops recipient registry id, then amount (clamped to balance)
///   - SELFDESTRUCT pops the beneficiary registry id
enum class Op : std::uint8_t {
    STOP = 0x00,
    ADD = 0x01,
    SUB = 0x02,
    MUL = 0x03,
    DIV = 0x04,
    EQ = 0x10,
    LT = 0x11,
    GT = 0x12,
    JUMP = 0x20,
    JUMPI = 0x21,
    PUSH = 0x30,
    POP = 0x31,
    DUP = 0x32,
    SLOAD = 0x40,
    SSTORE = 0x41,
    TIMESTAMP = 0x50,
    BLOCKNUMBER = 0x51,
    TRANSFER = 0x60,
    CALL = 0x61,
    RETURN = 0x70,
    THROW = 0x71,
    SELFDESTRUCT = 0x72,
};

std::string_view mnemonic(Op op);
std::optional<Op> op_from_mnemonic(std::string_view name);

/// PUSH carries an immediate word; JUMP/JUMPI carry an instruction-index target.
bool has_operand(Op op);

struct Instr {
    Op op;
    std::uint64_t operand = 0;

    bool operator==(const Instr&) const = default;
};

/// Bytecode form: one opcode byte, followed by an 8-byte big-endian operand
/// for PUSH/JUMP/JUMPI.
Bytes assemble(const std::vector<Instr>& instrs);

/// Decodes and validates bytecode. Throws ChainError{MalformedCode} on an
/// unknown opcode, a truncated operand, or a jump target out of bounds.
std::vector<Instr> decode_code(BytesView code);

std::string disassemble(const std::vector<Instr>& instrs);

struct ContractInstance {
    Address address;
    Bytes code;
    std::vector<Instr> instrs;
    std::map<std::uint64_t, std::uint64_t> storage;
    std::uint64_t balance = 0;
    bool destroyed = false;
    Address deployer;
    std::uint64_t deploy_nonce = 0;
    std::uint64_t registry_id = 0;  // 1-based id used by CALL/TRANSFER operands
};

/// Contract address derivation: last 20 bytes of SHA3-256(RLP(creator, nonce)).
Address derive_contract_address(const Address& creator, std::uint64_t nonce);

/// Value-semantic world state; copies are independent snapshots.
class WorldState {
public:
    const ContractInstance* find(const Address& addr) const;
    ContractInstance* find(const Address& addr);
    const ContractInstance* by_id(std::uint64_t registry_id) const;

    Address create_contract(const Address& creator, std::uint64_t nonce, const Bytes& code);

    std::uint64_t next_registry_id() const { return registry_.size() + 1; }
    const std::vector<Address>& registry() const { return registry_; }
    const std::map<Address, ContractInstance>& accounts() const { return accounts_; }

private:
    std::map<Address, ContractInstance> accounts_;
    std::vector<Address> registry_;
};

struct BlockCtx {
    std::uint64_t timestamp = 0;
    std::uint64_t height = 0;
};

struct TraceEvent {
    Op op;
    bool operand_present = false;
    std::uint64_t operand = 0;
    std::uint32_t pc = 0;
    std::uint32_t call_depth = 0;
    std::vector<std::uint64_t> stack_top;  // up to 4 values, top first, at instruction start
    std::uint64_t gas_remaining = 0;       // before charging this instruction
};

enum class ExecStatus { Success, Reverted };

struct Trace {
    Hash32 tx_hash;
    Address root_contract;
    std::vector<TraceEvent> events;
    ExecStatus outcome = ExecStatus::Success;
};

/// One event per line: pc, depth, mnemonic, operand, stack-top csv, gas;
/// tab-separated, "-" for an absent operand or empty stack.
std::string export_trace(const Trace& trace);

enum class RevertReason {
    None,
    Throw,
    OutOfGas,
    StackUnderflow,
    UnknownTarget,
    TransferError,
    DepthLimit,
    MalformedCode,
};

std::string_view revert_reason_name(RevertReason reason);

struct ExecResult {
    ExecStatus status = ExecStatus::Success;
    RevertReason reason = RevertReason::None;
    std::uint64_t gas_used = 0;
    Trace trace;
    std::vector<std::uint64_t> final_stack;
    // Keys written per contract, including writes later rolled back; used by
    // the audit pipeline to build pending-transaction write sets.
    std::map<Address, std::set<std::uint64_t>> sstore_keys;
    std::set<Address> touched;
};

inline constexpr std::uint64_t kGasPerOp = 1;
inline constexpr std::uint64_t kGasPerCall = 10;
inline constexpr int kMaxCallDepth = 64;

/// Executes a call transaction payload against `world`. The payload is RLP:
/// a list whose items are loaded as 64-bit words onto the initial stack with
/// the first item on top (an undecodable payload yields an empty stack).
/// A failure in a nested frame rolls back that frame and pushes 0 on the
/// caller's stack; a failure in the root frame reverts all state changes.
ExecResult execute_call(WorldState& world, const Address& target, BytesView payload,
    std::uint64_t gas_limit, const BlockCtx& ctx, const Hash32& tx_hash);

/// Decodes a call payload into the initial stack words (first item on top).
std::vector<std::uint64_t> payload_words(BytesView payload);

}  // namespace reliefchain::vm
