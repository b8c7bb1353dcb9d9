// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#include <reliefchain/relief.hpp>

#include <reliefchain/rlp.hpp>
#include <reliefchain/sha3.hpp>

#include <algorithm>
#include <cmath>

namespace reliefchain::relief {

namespace {

using vm::Instr;
using vm::Op;

// Storage slots written by the record contracts. The contracts keep the
// latest record per slot; the authoritative registry is reconstructed from
// the confirmed call payloads.
constexpr std::uint64_t kSlotBase = 0x1000;

std::vector<Instr> record_store_code(std::size_t field_count)
{
    std::vector<Instr> code;
    for (std::size_t i = 0; i < field_count; ++i) {
        code.push_back({Op::PUSH, kSlotBase + i});
        code.push_back({Op::SSTORE, 0});
    }
    code.push_back({Op::STOP, 0});
    return code;
}

// Match contract: selector 0 stores a seven-field plan row, selector 1 a
// (shipment id, status) pair.
std::vector<Instr> match_code()
{
    std::vector<Instr> code;
    code.push_back({Op::PUSH, 1});
    code.push_back({Op::EQ, 0});
    const std::size_t jumpi_index = code.size();
    code.push_back({Op::JUMPI, 0});  // patched below
    for (std::size_t i = 0; i < 7; ++i) {
        code.push_back({Op::PUSH, kSlotBase + i});
        code.push_back({Op::SSTORE, 0});
    }
    code.push_back({Op::STOP, 0});
    code[jumpi_index].operand = code.size();
    code.push_back({Op::SSTORE, 0});
    code.push_back({Op::STOP, 0});
    return code;
}

rlp::Item u64_list(std::initializer_list<rlp::Item> items)
{
    return rlp::Item{std::vector<rlp::Item>(items)};
}

std::optional<std::vector<Bytes>> decode_payload_fields(BytesView payload, std::size_t arity)
{
    try {
        const rlp::Item item = rlp::decode(payload);
        if (!item.is_list() || item.list().size() != arity)
            return std::nullopt;
        std::vector<Bytes> fields;
        for (const rlp::Item& child : item.list()) {
            if (!child.is_string())
                return std::nullopt;
            fields.push_back(child.str());
        }
        return fields;
    } catch (const rlp::DecodeError&) {
        return std::nullopt;
    }
}

Address address_field(const Bytes& raw)
{
    Address a;
    if (raw.size() == 20)
        std::copy(raw.begin(), raw.end(), a.bytes.begin());
    return a;
}

}  // namespace

std::string_view resource_type_name(ResourceType t)
{
    switch (t) {
    case ResourceType::Food:
        return "Food";
    case ResourceType::Water:
        return "Water";
    case ResourceType::Medical:
        return "Medical";
    case ResourceType::Equipment:
        return "Equipment";
    }
    return "";
}

std::optional<ResourceType> resource_type_from_name(std::string_view name)
{
    for (const auto t : {ResourceType::Food, ResourceType::Water, ResourceType::Medical,
             ResourceType::Equipment})
        if (resource_type_name(t) == name)
            return t;
    return std::nullopt;
}

std::string_view asset_kind_name(AssetKind k)
{
    return k == AssetKind::UAV ? "UAV" : "GroundVehicle";
}

std::optional<AssetKind> asset_kind_from_name(std::string_view name)
{
    if (name == "UAV")
        return AssetKind::UAV;
    if (name == "GroundVehicle")
        return AssetKind::GroundVehicle;
    return std::nullopt;
}

std::string_view shipment_status_name(ShipmentStatus s)
{
    switch (s) {
    case ShipmentStatus::Planned:
        return "Planned";
    case ShipmentStatus::InTransit:
        return "InTransit";
    case ShipmentStatus::Delivered:
        return "Delivered";
    }
    return "";
}

double euclid_km(const GeoPoint& a, const GeoPoint& b)
{
    const double dx = a.x_km - b.x_km;
    const double dy = a.y_km - b.y_km;
    return std::sqrt(dx * dx + dy * dy);
}

std::uint64_t to_fp(double v)
{
    return static_cast<std::uint64_t>(std::llround(v * kFixedPointScale));
}

double from_fp(std::uint64_t fp)
{
    return static_cast<double>(fp) / kFixedPointScale;
}

Address participant_address(std::string_view label)
{
    const Hash32 digest = crypto::sha3_256(to_bytes(label));
    Address out;
    std::copy(digest.bytes.begin() + 12, digest.bytes.end(), out.bytes.begin());
    return out;
}

ReliefService::ReliefService(chain::Network& net) : net_(net)
{
    coordinator_ = participant_address("relief-coordinator");
    const auto deploy = [&](const std::vector<Instr>& code) {
        const std::uint64_t nonce = net_.next_nonce(coordinator_);
        const chain::Transaction tx =
            chain::make_creation(coordinator_, nonce, vm::assemble(code));
        net_.submit_transaction(tx);
        return vm::derive_contract_address(coordinator_, nonce);
    };
    demand_addr_ = deploy(record_store_code(7));
    supply_addr_ = deploy(record_store_code(6));
    transport_addr_ = deploy(record_store_code(8));
    square_addr_ = deploy({{Op::STOP, 0}});
    match_addr_ = deploy(match_code());
    net_.commit_all();
}

bool ReliefService::is_relief_contract(const Address& addr) const
{
    return addr == demand_addr_ || addr == supply_addr_ || addr == transport_addr_ ||
           addr == square_addr_ || addr == match_addr_;
}

void ReliefService::set_forensics_recorder(
    std::function<void(const Address&, const Hash32&)> recorder)
{
    recorder_ = std::move(recorder);
}

Hash32 ReliefService::submit_relief_call(const Address& contract, const Address& sender,
    Bytes payload)
{
    const chain::Transaction tx =
        chain::make_call(sender, net_.next_nonce(sender), contract, std::move(payload));
    net_.submit_transaction(tx);
    unrecorded_.emplace_back(contract, tx.hash);
    if (auto_commit_)
        commit();
    return tx.hash;
}

Hash32 ReliefService::submit_demand(ReliefDemand d)
{
    if (d.quantity == 0)
        throw ChainError(Errc::InvalidDemand, "quantity must be positive");
    if (d.urgency < 1 || d.urgency > 5)
        throw ChainError(Errc::InvalidDemand, "urgency out of range");
    d.id = next_demand_id_++;
    const std::uint64_t x = to_fp(d.location.x_km);
    const std::uint64_t y = to_fp(d.location.y_km);
    const Bytes payload = rlp::encode(u64_list({rlp::u64_item(d.id), rlp::u64_item(x),
        rlp::u64_item(y), rlp::u64_item(static_cast<std::uint64_t>(d.resource_type)),
        rlp::u64_item(d.quantity), rlp::u64_item(static_cast<std::uint64_t>(d.urgency)),
        rlp::address_item(d.submitter)}));
    return submit_relief_call(demand_addr_, d.submitter, payload);
}

Hash32 ReliefService::submit_supply(ReliefSupply s)
{
    if (s.quantity == 0)
        throw ChainError(Errc::InvalidSupply, "quantity must be positive");
    s.id = next_supply_id_++;
    const Bytes payload = rlp::encode(u64_list({rlp::u64_item(s.id),
        rlp::u64_item(to_fp(s.location.x_km)), rlp::u64_item(to_fp(s.location.y_km)),
        rlp::u64_item(static_cast<std::uint64_t>(s.resource_type)), rlp::u64_item(s.quantity),
        rlp::address_item(s.supplier)}));
    return submit_relief_call(supply_addr_, s.supplier, payload);
}

Hash32 ReliefService::register_transport(TransportAsset a)
{
    const std::uint64_t range_fp = to_fp(a.range_km);
    const std::uint64_t speed_fp = to_fp(a.speed_kmh);
    if (a.payload_capacity == 0 || range_fp == 0 || speed_fp == 0)
        throw ChainError(Errc::InvalidAsset, "capacity, range and speed must be positive");
    a.id = next_asset_id_++;
    const Bytes payload = rlp::encode(u64_list({rlp::u64_item(a.id),
        rlp::u64_item(static_cast<std::uint64_t>(a.kind)), rlp::u64_item(to_fp(a.location.x_km)),
        rlp::u64_item(to_fp(a.location.y_km)), rlp::u64_item(a.payload_capacity),
        rlp::u64_item(range_fp), rlp::u64_item(speed_fp), rlp::address_item(a.operator_addr)}));
    return submit_relief_call(transport_addr_, a.operator_addr, payload);
}

SquareState ReliefService::square_snapshot() const
{
    SquareState square;
    for (const chain::Block& block : net_.blocks()) {
        for (const chain::Transaction& tx : block.transactions) {
            if (tx.kind != chain::TxKind::ContractCall || !tx.target)
                continue;
            if (net_.get_receipt(tx.hash).status != chain::ReceiptStatus::Success)
                continue;
            if (*tx.target == demand_addr_) {
                if (const auto f = decode_payload_fields(tx.payload, 7)) {
                    ReliefDemand d;
                    d.id = u64_from_be((*f)[0]);
                    d.location = {from_fp(u64_from_be((*f)[1])), from_fp(u64_from_be((*f)[2]))};
                    d.resource_type = static_cast<ResourceType>(u64_from_be((*f)[3]));
                    d.quantity = u64_from_be((*f)[4]);
                    d.urgency = static_cast<int>(u64_from_be((*f)[5]));
                    d.submitter = address_field((*f)[6]);
                    square.demands.push_back(d);
                }
            } else if (*tx.target == supply_addr_) {
                if (const auto f = decode_payload_fields(tx.payload, 6)) {
                    ReliefSupply s;
                    s.id = u64_from_be((*f)[0]);
                    s.location = {from_fp(u64_from_be((*f)[1])), from_fp(u64_from_be((*f)[2]))};
                    s.resource_type = static_cast<ResourceType>(u64_from_be((*f)[3]));
                    s.quantity = u64_from_be((*f)[4]);
                    s.supplier = address_field((*f)[5]);
                    square.supplies.push_back(s);
                }
            } else if (*tx.target == transport_addr_) {
                if (const auto f = decode_payload_fields(tx.payload, 8)) {
                    TransportAsset a;
                    a.id = u64_from_be((*f)[0]);
                    a.kind = static_cast<AssetKind>(u64_from_be((*f)[1]));
                    a.location = {from_fp(u64_from_be((*f)[2])), from_fp(u64_from_be((*f)[3]))};
                    a.payload_capacity = u64_from_be((*f)[4]);
                    a.range_km = from_fp(u64_from_be((*f)[5]));
                    a.speed_kmh = from_fp(u64_from_be((*f)[6]));
                    a.operator_addr = address_field((*f)[7]);
                    square.assets.push_back(a);
                }
            } else if (*tx.target == match_addr_) {
                if (const auto row = decode_payload_fields(tx.payload, 8)) {
                    if (u64_from_be((*row)[0]) == 0)
                        square.shipment_statuses[u64_from_be((*row)[1])] =
                            ShipmentStatus::Planned;
                } else if (const auto st = decode_payload_fields(tx.payload, 3)) {
                    if (u64_from_be((*st)[0]) == 1)
                        square.shipment_statuses[u64_from_be((*st)[1])] =
                            static_cast<ShipmentStatus>(u64_from_be((*st)[2]));
                }
            }
        }
    }
    return square;
}

MatchPlan ReliefService::run_match()
{
    const SquareState square = square_snapshot();
    const MatchPlan plan = plan_matches(square);
    for (const Shipment& row : plan.shipments) {
        const Bytes payload = rlp::encode(u64_list({rlp::u64_item(0),
            rlp::u64_item(row.shipment_id), rlp::u64_item(row.supply_id),
            rlp::u64_item(row.demand_id), rlp::u64_item(row.asset_id),
            rlp::u64_item(row.quantity), rlp::u64_item(to_fp(row.leg_distance_km)),
            rlp::u64_item(to_fp(row.est_time_h))}));
        const chain::Transaction tx = chain::make_call(coordinator_,
            net_.next_nonce(coordinator_), match_addr_, payload);
        net_.submit_transaction(tx);
        unrecorded_.emplace_back(match_addr_, tx.hash);
    }
    commit();
    return plan;
}

Hash32 ReliefService::update_shipment_status(std::uint64_t shipment_id, ShipmentStatus status)
{
    const Bytes payload = rlp::encode(u64_list({rlp::u64_item(1), rlp::u64_item(shipment_id),
        rlp::u64_item(static_cast<std::uint64_t>(status))}));
    return submit_relief_call(match_addr_, coordinator_, payload);
}

void ReliefService::commit()
{
    net_.commit_all();
    for (const auto& [contract, tx] : unrecorded_) {
        if (!net_.is_confirmed(tx))
            continue;
        if (recorder_)
            recorder_(contract, tx);
    }
    unrecorded_.clear();
}

}  // namespace reliefchain::relief
