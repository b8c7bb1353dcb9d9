// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <reliefchain/audit.hpp>
#include <reliefchain/relief.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace reliefchain::sim {

/// Versioned JSON scenario: node counts, relief records, attack insertions
/// and a logical-time submission schedule. The seed fully determines a run.
struct Scenario {
    struct Insertion {
        audit::VulnClass vuln_class;
        int count = 0;
    };

    struct Event {
        enum class Action { Demand, Supply, Asset, Match } action = Action::Demand;
        std::uint64_t at = 0;
        std::size_t index = 0;  // into the record list for submissions
    };

    int version = 1;
    std::uint64_t seed = 0;
    std::size_t full_count = 4;
    std::size_t light_count = 8;
    double network_delay_s = 0.0;
    std::vector<relief::ReliefDemand> demands;
    std::vector<relief::ReliefSupply> supplies;
    std::vector<relief::TransportAsset> assets;
    std::vector<Insertion> attack_insertions;
    std::vector<Event> schedule;  // empty: records submitted in order, then match
};

Scenario scenario_from_json_text(const std::string& text);     // throws ParseError/InvalidScenario
Scenario load_scenario(const std::filesystem::path& path);    // adds file errors as ParseError

/// Fills an empty schedule (one event per second, then a match) and validates
/// indices; called by the driver.
void normalize_schedule(Scenario& scenario);

}  // namespace reliefchain::sim
