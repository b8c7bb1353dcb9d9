// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <reliefchain/corpus.hpp>
#include <reliefchain/forensics.hpp>
#include <reliefchain/scenario.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reliefchain::sim {

/// Simulated latency decomposition per relief transaction. Values derive
/// from the logical clock and the configured per-hop delay, so reports are
/// byte-identical across same-seed runs; total is the sum of the three parts.
struct LatencyRow {
    Hash32 tx_hash;
    double confirmation_s = 0;
    double forensics_s = 0;
    double mining_s = 0;
    double total_s = 0;
};

struct LatencyStats {
    double confirmation_s = 0;
    double forensics_s = 0;
    double mining_s = 0;
    double total_s = 0;
};

struct DetectionStat {
    int injected = 0;
    int detected = 0;
    int false_positives = 0;
};

struct ForensicsStats {
    int anchored = 0;
    int verified_valid = 0;
    int verified_tampered = 0;
};

struct RunReport {
    std::uint64_t seed = 0;
    LatencyStats latency_avg;
    LatencyStats latency_max;
    std::map<audit::VulnClass, DetectionStat> detection;
    relief::MatchSummary match_summary;
    ForensicsStats forensics;
};

std::string render_report(const RunReport& report);  // stable JSON bytes

struct RunOptions {
    std::optional<std::filesystem::path> run_dir;  // persists chain + off-chain blobs
};

struct RunResult {
    RunReport report;
    std::string report_json;
    std::vector<LatencyRow> per_tx_latency;
    std::vector<Hash32> block_hashes;
    std::vector<Hash32> relief_txs;
    std::vector<Hash32> forensics_hashes;
    Hash32 trace_digest;  // SHA3 over every confirmed trace export, chain order
    relief::MatchPlan plan;
    std::string plan_text;
    std::vector<audit::VulnerabilityReport> vuln_reports;
    std::string chain_log;
};

RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

std::string plan_to_text(const relief::MatchPlan& plan);

/// Chain persistence for offline verification.
void save_chain(const chain::Network& net, const std::filesystem::path& path);
chain::Network load_chain(const std::filesystem::path& path);

struct VerifyRunResult {
    bool known = false;  // forensics hash anchored in the run
    forensics::VerifyStatus status = forensics::VerifyStatus::Unavailable;
    std::string detail;
};

VerifyRunResult verify_run(const std::filesystem::path& run_dir, const Hash32& forensics_hash);

}  // namespace reliefchain::sim
