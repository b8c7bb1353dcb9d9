// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <reliefchain/ledger.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reliefchain::relief {

enum class ResourceType : std::uint64_t { Food = 0, Water = 1, Medical = 2, Equipment = 3 };
enum class AssetKind : std::uint64_t { UAV = 0, GroundVehicle = 1 };
enum class ShipmentStatus : std::uint64_t { Planned = 0, InTransit = 1, Delivered = 2 };

std::string_view resource_type_name(ResourceType t);
std::optional<ResourceType> resource_type_from_name(std::string_view name);
std::string_view asset_kind_name(AssetKind k);
std::optional<AssetKind> asset_kind_from_name(std::string_view name);
std::string_view shipment_status_name(ShipmentStatus s);

/// Planar coordinates in kilometres, quantized to 1e-6 km on submission so
/// on-chain payloads and native records agree bit for bit.
struct GeoPoint {
    double x_km = 0;
    double y_km = 0;

    bool operator==(const GeoPoint&) const = default;
};

double euclid_km(const GeoPoint& a, const GeoPoint& b);

struct ReliefDemand {
    std::uint64_t id = 0;  // assigned at submission
    GeoPoint location;
    ResourceType resource_type = ResourceType::Food;
    std::uint64_t quantity = 0;
    int urgency = 1;  // 1..5, 5 highest
    Address submitter;
};

struct ReliefSupply {
    std::uint64_t id = 0;
    GeoPoint location;
    ResourceType resource_type = ResourceType::Food;
    std::uint64_t quantity = 0;
    Address supplier;
};

struct TransportAsset {
    std::uint64_t id = 0;
    AssetKind kind = AssetKind::UAV;
    GeoPoint location;
    std::uint64_t payload_capacity = 0;  // units per trip
    double range_km = 0;                 // per trip
    double speed_kmh = 0;
    Address operator_addr;
};

struct Shipment {
    std::uint64_t shipment_id = 0;
    std::uint64_t supply_id = 0;
    std::uint64_t demand_id = 0;
    std::uint64_t asset_id = 0;
    std::uint64_t quantity = 0;
    double leg_distance_km = 0;  // supply -> demand
    double est_time_h = 0;       // leg_distance / speed
};

struct MatchSummary {
    std::uint64_t demanded = 0;
    std::uint64_t shipped = 0;
    std::uint64_t residual = 0;
    double total_distance_km = 0;  // repositioning + round trip, per trip
};

struct MatchPlan {
    std::vector<Shipment> shipments;
    MatchSummary summary;
};

struct SquareState {
    std::vector<ReliefDemand> demands;
    std::vector<ReliefSupply> supplies;
    std::vector<TransportAsset> assets;
    std::map<std::uint64_t, ShipmentStatus> shipment_statuses;
};

/// Greedy planner: demands by urgency descending then submission order;
/// same-type supplies nearest first; each allocation split into capacity-
/// bounded trips served by the feasible asset (repositioning plus round-trip
/// leg within range) that minimizes total leg distance, ties to the lowest
/// asset id. Unmatched demand shows up as summary residual.
MatchPlan plan_matches(const SquareState& square);

inline constexpr double kDistanceEps = 1e-9;
inline constexpr double kFixedPointScale = 1e6;

std::uint64_t to_fp(double v);
double from_fp(std::uint64_t fp);

/// The five cooperating contracts hosted on the VM. Record fields arrive as
/// canonical RLP tuples in call payloads and are stored via SSTORE, so the
/// audit pipeline sees real traces; typed records are reconstructed from the
/// confirmed-chain payloads.
class ReliefService {
public:
    explicit ReliefService(chain::Network& net);

    const Address& demand_contract() const { return demand_addr_; }
    const Address& supply_contract() const { return supply_addr_; }
    const Address& transport_contract() const { return transport_addr_; }
    const Address& square_contract() const { return square_addr_; }
    const Address& match_contract() const { return match_addr_; }
    const Address& coordinator() const { return coordinator_; }
    bool is_relief_contract(const Address& addr) const;

    /// When true (default) every submission is sealed immediately, matching
    /// each operation's confirmed-on-return contract; the scenario driver
    /// disables it to batch one block per logical timestep.
    void set_auto_commit(bool on) { auto_commit_ = on; }
    /// Called once per confirmed relief transaction with (contract, tx hash).
    void set_forensics_recorder(std::function<void(const Address&, const Hash32&)> recorder);

    Hash32 submit_demand(ReliefDemand d);          // throws InvalidDemand
    Hash32 submit_supply(ReliefSupply s);          // throws InvalidSupply
    Hash32 register_transport(TransportAsset a);   // throws InvalidAsset

    SquareState square_snapshot() const;
    MatchPlan run_match();
    Hash32 update_shipment_status(std::uint64_t shipment_id, ShipmentStatus status);

    /// Seals everything pending and runs forensics recording for the relief
    /// transactions confirmed by it.
    void commit();

private:
    Hash32 submit_relief_call(const Address& contract, const Address& sender, Bytes payload);

    chain::Network& net_;
    Address coordinator_;
    Address demand_addr_;
    Address supply_addr_;
    Address transport_addr_;
    Address square_addr_;
    Address match_addr_;
    bool auto_commit_ = true;
    std::uint64_t next_demand_id_ = 1;
    std::uint64_t next_supply_id_ = 1;
    std::uint64_t next_asset_id_ = 1;
    std::function<void(const Address&, const Hash32&)> recorder_;
    std::vector<std::pair<Address, Hash32>> unrecorded_;
};

/// Deterministic participant identity: last 20 bytes of SHA3-256 of the label.
Address participant_address(std::string_view label);

}  // namespace reliefchain::relief
