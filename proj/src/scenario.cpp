// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#include <reliefchain/scenario.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>

namespace reliefchain::sim {

namespace {

using nlohmann::json;

Address participant_field(const json& j, const char* field)
{
    const std::string value = j.at(field).get<std::string>();
    if (value.size() == 40 || (value.size() == 42 && value.rfind("0x", 0) == 0)) {
        try {
            return Address::from_hex(value);
        } catch (const std::invalid_argument&) {
            // fall through to label derivation
        }
    }
    return relief::participant_address(value);
}

relief::GeoPoint location_field(const json& j)
{
    const auto& loc = j.at("location");
    if (!loc.is_array() || loc.size() != 2)
        throw ChainError(Errc::InvalidScenario, "location must be [x, y]");
    return {loc[0].get<double>(), loc[1].get<double>()};
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ChainError(Errc::ParseError, e.what());
    }

    Scenario scenario;
    try {
        scenario.version = j.at("version").get<int>();
        if (scenario.version != 1)
            throw ChainError(Errc::InvalidScenario, "unsupported scenario version");
        scenario.seed = j.value("seed", 0ull);
        if (j.contains("nodes")) {
            scenario.full_count = j["nodes"].value("full_count", 4u);
            scenario.light_count = j["nodes"].value("light_count", 8u);
        }
        scenario.network_delay_s = j.value("network_delay_s", 0.0);
        if (scenario.network_delay_s < 0)
            throw ChainError(Errc::InvalidScenario, "network_delay_s must be non-negative");

        for (const auto& jd : j.value("demands", json::array())) {
            relief::ReliefDemand d;
            d.location = location_field(jd);
            const auto type = relief::resource_type_from_name(jd.at("resource_type").get<std::string>());
            if (!type)
                throw ChainError(Errc::InvalidScenario, "unknown resource_type");
            d.resource_type = *type;
            d.quantity = jd.at("quantity").get<std::uint64_t>();
            d.urgency = jd.at("urgency").get<int>();
            d.submitter = participant_field(jd, "submitter");
            if (d.quantity == 0 || d.urgency < 1 || d.urgency > 5)
                throw ChainError(Errc::InvalidScenario, "invalid demand record");
            scenario.demands.push_back(d);
        }
        for (const auto& js : j.value("supplies", json::array())) {
            relief::ReliefSupply s;
            s.location = location_field(js);
            const auto type = relief::resource_type_from_name(js.at("resource_type").get<std::string>());
            if (!type)
                throw ChainError(Errc::InvalidScenario, "unknown resource_type");
            s.resource_type = *type;
            s.quantity = js.at("quantity").get<std::uint64_t>();
            s.supplier = participant_field(js, "supplier");
            if (s.quantity == 0)
                throw ChainError(Errc::InvalidScenario, "invalid supply record");
            scenario.supplies.push_back(s);
        }
        for (const auto& ja : j.value("assets", json::array())) {
            relief::TransportAsset a;
            const auto kind = relief::asset_kind_from_name(ja.at("kind").get<std::string>());
            if (!kind)
                throw ChainError(Errc::InvalidScenario, "unknown asset kind");
            a.kind = *kind;
            a.location = location_field(ja);
            a.payload_capacity = ja.at("payload_capacity").get<std::uint64_t>();
            a.range_km = ja.at("range").get<double>();
            a.speed_kmh = ja.at("speed").get<double>();
            a.operator_addr = participant_field(ja, "operator");
            if (a.payload_capacity == 0 || a.range_km <= 0 || a.speed_kmh <= 0)
                throw ChainError(Errc::InvalidScenario, "invalid asset record");
            scenario.assets.push_back(a);
        }
        for (const auto& ji : j.value("attack_insertions", json::array())) {
            Scenario::Insertion ins;
            const auto cls = audit::vuln_class_from_name(ji.at("vuln_class").get<std::string>());
            if (!cls)
                throw ChainError(Errc::UnknownClass, ji.at("vuln_class").get<std::string>());
            ins.vuln_class = *cls;
            ins.count = ji.at("count").get<int>();
            if (ins.count < 0)
                throw ChainError(Errc::InvalidScenario, "negative insertion count");
            scenario.attack_insertions.push_back(ins);
        }
        for (const auto& je : j.value("schedule", json::array())) {
            Scenario::Event ev;
            const std::string action = je.at("action").get<std::string>();
            if (action == "demand")
                ev.action = Scenario::Event::Action::Demand;
            else if (action == "supply")
                ev.action = Scenario::Event::Action::Supply;
            else if (action == "asset")
                ev.action = Scenario::Event::Action::Asset;
            else if (action == "match")
                ev.action = Scenario::Event::Action::Match;
            else
                throw ChainError(Errc::InvalidScenario, "unknown schedule action: " + action);
            ev.at = je.at("at").get<std::uint64_t>();
            ev.index = je.value("index", 0u);
            scenario.schedule.push_back(ev);
        }
    } catch (const json::exception& e) {
        throw ChainError(Errc::ParseError, e.what());
    }

    Scenario normalized = scenario;
    normalize_schedule(normalized);  // validates indices up front
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ChainError(Errc::ParseError, "cannot open scenario file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scenario_from_json_text(text);
}

void normalize_schedule(Scenario& scenario)
{
    if (scenario.schedule.empty()) {
        std::uint64_t t = 1;
        for (std::size_t i = 0; i < scenario.demands.size(); ++i)
            scenario.schedule.push_back({Scenario::Event::Action::Demand, t++, i});
        for (std::size_t i = 0; i < scenario.supplies.size(); ++i)
            scenario.schedule.push_back({Scenario::Event::Action::Supply, t++, i});
        for (std::size_t i = 0; i < scenario.assets.size(); ++i)
            scenario.schedule.push_back({Scenario::Event::Action::Asset, t++, i});
        scenario.schedule.push_back({Scenario::Event::Action::Match, t, 0});
    }
    for (const Scenario::Event& ev : scenario.schedule) {
        const std::size_t limit = ev.action == Scenario::Event::Action::Demand
            ? scenario.demands.size()
            : ev.action == Scenario::Event::Action::Supply
            ? scenario.supplies.size()
            : ev.action == Scenario::Event::Action::Asset ? scenario.assets.size()
                                                          : SIZE_MAX;
        if (limit != SIZE_MAX && ev.index >= limit)
            throw ChainError(Errc::InvalidScenario, "schedule index out of range");
    }
    std::stable_sort(scenario.schedule.begin(), scenario.schedule.end(),
        [](const Scenario::Event& a, const Scenario::Event& b) { return a.at < b.at; });
}

}  // namespace reliefchain::sim
