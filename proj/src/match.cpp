// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#include <reliefchain/relief.hpp>

#include <algorithm>
#include <cmath>

namespace reliefchain::relief {

namespace {

std::uint64_t trips_needed(std::uint64_t quantity, std::uint64_t capacity)
{
    return (quantity + capacity - 1) / capacity;
}

// Total distance an asset travels to move `quantity` from s to d:
// one repositioning approach plus a round trip per capacity-bounded load.
double allocation_distance(const TransportAsset& asset, double reposition_km, double leg_km,
    std::uint64_t quantity)
{
    return static_cast<double>(trips_needed(quantity, asset.payload_capacity)) *
           (reposition_km + 2.0 * leg_km);
}

}  // namespace

MatchPlan plan_matches(const SquareState& square)
{
    MatchPlan plan;
    for (const ReliefDemand& d : square.demands)
        plan.summary.demanded += d.quantity;

    std::vector<const ReliefDemand*> demands;
    for (const ReliefDemand& d : square.demands)
        demands.push_back(&d);
    std::stable_sort(demands.begin(), demands.end(),
        [](const ReliefDemand* a, const ReliefDemand* b) {
            if (a->urgency != b->urgency)
                return a->urgency > b->urgency;
            return a->id < b->id;
        });

    std::map<std::uint64_t, std::uint64_t> supply_left;
    for (const ReliefSupply& s : square.supplies)
        supply_left[s.id] = s.quantity;

    std::uint64_t next_shipment_id = 1;
    for (const ReliefDemand* demand : demands) {
        std::uint64_t remaining = demand->quantity;
        if (remaining == 0)
            continue;

        std::vector<const ReliefSupply*> candidates;
        for (const ReliefSupply& s : square.supplies)
            if (s.resource_type == demand->resource_type && supply_left[s.id] > 0)
                candidates.push_back(&s);
        std::stable_sort(candidates.begin(), candidates.end(),
            [&](const ReliefSupply* a, const ReliefSupply* b) {
                const double da = euclid_km(a->location, demand->location);
                const double db = euclid_km(b->location, demand->location);
                if (std::abs(da - db) > kDistanceEps)
                    return da < db;
                return a->id < b->id;
            });

        for (const ReliefSupply* supply : candidates) {
            if (remaining == 0)
                break;
            const std::uint64_t available = supply_left[supply->id];
            if (available == 0)
                continue;
            const std::uint64_t quantity = std::min(remaining, available);
            const double leg = euclid_km(supply->location, demand->location);

            const TransportAsset* best = nullptr;
            double best_distance = 0;
            for (const TransportAsset& asset : square.assets) {
                const double reposition = euclid_km(asset.location, supply->location);
                if (reposition + 2.0 * leg > asset.range_km + kDistanceEps)
                    continue;
                const double total = allocation_distance(asset, reposition, leg, quantity);
                if (best == nullptr || total < best_distance - kDistanceEps ||
                    (std::abs(total - best_distance) <= kDistanceEps && asset.id < best->id)) {
                    best = &asset;
                    best_distance = total;
                }
            }
            if (best == nullptr)
                continue;  // nothing can carry this pairing

            const double reposition = euclid_km(best->location, supply->location);
            std::uint64_t to_ship = quantity;
            while (to_ship > 0) {
                const std::uint64_t trip_qty = std::min(to_ship, best->payload_capacity);
                Shipment row;
                row.shipment_id = next_shipment_id++;
                row.supply_id = supply->id;
                row.demand_id = demand->id;
                row.asset_id = best->id;
                row.quantity = trip_qty;
                row.leg_distance_km = leg;
                row.est_time_h = leg / best->speed_kmh;
                plan.shipments.push_back(row);
                plan.summary.total_distance_km += reposition + 2.0 * leg;
                to_ship -= trip_qty;
            }
            supply_left[supply->id] -= quantity;
            remaining -= quantity;
            plan.summary.shipped += quantity;
        }
    }

    plan.summary.residual = plan.summary.demanded - plan.summary.shipped;
    return plan;
}

}  // namespace reliefchain::relief
