// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#include <reliefchain/corpus.hpp>
#include <reliefchain/driver.hpp>
#include <reliefchain/scenario.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace reliefchain;

namespace {

// Exit codes: 0 success, 1 usage, 2 validation, 3 verification failure.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitVerification = 3;

int cmd_run(const std::string& scenario_path, const std::string& out_path,
    const std::string& run_dir, std::optional<std::uint64_t> seed_override)
{
    sim::Scenario scenario;
    try {
        scenario = sim::load_scenario(scenario_path);
    } catch (const ChainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    if (seed_override)
        scenario.seed = *seed_override;

    sim::RunOptions options;
    if (!run_dir.empty())
        options.run_dir = fs::path(run_dir);

    const sim::RunResult result = sim::run_scenario(scenario, options);
    std::cout << result.report_json;
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << '\n';
            return kExitValidation;
        }
        out << result.report_json;
    }
    return kExitOk;
}

int cmd_corpus(const std::string& cls_name, int count, std::uint64_t seed,
    const std::string& out_dir)
{
    std::vector<sim::CorpusInstance> instances;
    if (cls_name == "all") {
        instances = sim::generate_full_corpus(count, seed);
    } else {
        const auto cls = audit::vuln_class_from_name(cls_name);
        if (!cls) {
            std::cerr << "error: UnknownClass: " << cls_name << '\n';
            return kExitValidation;
        }
        instances = sim::generate_corpus(*cls, count, seed);
    }

    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < instances.size(); ++i) {
        std::string name = instances[i].label;
        std::replace(name.begin(), name.end(), '/', '_');
        std::ofstream out(fs::path(out_dir) / (name + ".json"), std::ios::binary);
        out << sim::instance_to_json(instances[i]);
    }
    std::cout << "wrote " << instances.size() << " instances to " << out_dir << '\n';
    return kExitOk;
}

int cmd_verify(const std::string& hash_hex, const std::string& run_dir)
{
    if (!fs::exists(fs::path(run_dir) / "chain.json")) {
        std::cerr << "error: no persisted run at " << run_dir << '\n';
        return kExitValidation;
    }
    Hash32 hash;
    try {
        hash = Hash32::from_hex(hash_hex);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    sim::VerifyRunResult result;
    try {
        result = sim::verify_run(run_dir, hash);
    } catch (const ChainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    if (!result.known) {
        std::cout << "UnknownHash: " << result.detail << '\n';
        return kExitVerification;
    }
    switch (result.status) {
    case forensics::VerifyStatus::Valid:
        std::cout << "Valid\n";
        return kExitOk;
    case forensics::VerifyStatus::Tampered:
        std::cout << "Tampered: " << result.detail << '\n';
        return kExitVerification;
    case forensics::VerifyStatus::Unavailable:
        std::cout << "Unavailable: " << result.detail << '\n';
        return kExitVerification;
    }
    return kExitVerification;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"consortium blockchain simulator for coordinated disaster relief"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, run_dir;
    std::optional<std::uint64_t> seed_override;
    CLI::App* run = app.add_subcommand("run", "run a scenario and report metrics");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_path, "also write the report JSON here");
    run->add_option("--run-dir", run_dir, "persist chain + off-chain store for verification");
    std::uint64_t seed_value = 0;
    CLI::Option* seed_opt = run->add_option("--seed", seed_value, "override the scenario seed");

    std::string cls_name = "all", corpus_out = "corpus_out";
    int count = 1;
    std::uint64_t corpus_seed = 1;
    CLI::App* corpus = app.add_subcommand("corpus", "generate attack/benign contract corpora");
    corpus->add_option("class", cls_name, "vulnerability class or 'all'")->required();
    corpus->add_option("--count", count, "instances per class")->required();
    corpus->add_option("--seed", corpus_seed, "corpus seed")->required();
    corpus->add_option("--out", corpus_out, "output directory")->required();

    std::string hash_hex, verify_dir;
    CLI::App* verify = app.add_subcommand("verify", "verify an anchored forensics hash");
    verify->add_option("hash", hash_hex, "forensics hash (hex)")->required();
    verify->add_option("--run", verify_dir, "persisted run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors collapse to exit 1
    }

    if (run->parsed()) {
        if (seed_opt->count() > 0)
            seed_override = seed_value;
        return cmd_run(scenario_path, out_path, run_dir, seed_override);
    }
    if (corpus->parsed())
        return cmd_corpus(cls_name, count, corpus_seed, corpus_out);
    if (verify->parsed())
        return cmd_verify(hash_hex, verify_dir);
    return 1;
}
