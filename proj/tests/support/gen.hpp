// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <reliefchain/rlp.hpp>
#include <reliefchain/rng.hpp>
#include <reliefchain/vm.hpp>

#include <vector>

namespace testgen {

using reliefchain::Bytes;
using reliefchain::Rng;

/// Random RLP item, bounded nesting depth and string length.
inline reliefchain::rlp::Item random_item(Rng& rng, int max_depth, std::size_t max_len = 64)
{
    if (max_depth == 0 || rng.range(0, 2) != 0) {
        Bytes s(rng.range(0, max_len));
        for (auto& b : s)
            b = static_cast<std::uint8_t>(rng.next());
        return reliefchain::rlp::Item{std::move(s)};
    }
    std::vector<reliefchain::rlp::Item> children(rng.range(0, 4));
    for (auto& child : children)
        child = random_item(rng, max_depth - 1, max_len);
    return reliefchain::rlp::Item{std::move(children)};
}

/// Random stack-machine program with in-bounds jumps. Programs may underflow
/// or run out of gas; the properties under test hold regardless.
inline std::vector<reliefchain::vm::Instr> random_program(Rng& rng, std::size_t max_len = 24)
{
    using reliefchain::vm::Instr;
    using reliefchain::vm::Op;
    static const Op pool[] = {Op::PUSH, Op::PUSH, Op::PUSH, Op::POP, Op::DUP, Op::ADD, Op::SUB,
        Op::MUL, Op::DIV, Op::EQ, Op::LT, Op::GT, Op::SLOAD, Op::SSTORE, Op::TIMESTAMP,
        Op::BLOCKNUMBER, Op::JUMPI, Op::STOP};
    const std::size_t len = rng.range(1, max_len);
    std::vector<Instr> code;
    for (std::size_t i = 0; i < len; ++i) {
        const Op op = pool[rng.range(0, std::size(pool) - 1)];
        Instr ins{op, 0};
        if (op == Op::PUSH)
            ins.operand = rng.range(0, 500);
        if (op == Op::JUMPI)
            ins.operand = rng.range(0, len - 1);  // forward or backward, in bounds
        code.push_back(ins);
    }
    code.push_back({Op::STOP, 0});
    return code;
}

}  // namespace testgen
