// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <reliefchain/ledger.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reliefchain::forensics {

/// Forensics hash: SHA3-256 over RLP(deployer, nonce) followed by the relief
/// transaction hashes in confirmation order. Any bit of content, deployer or
/// nonce moves the hash.
Hash32 compute_forensics_hash(const Address& deployer, std::uint64_t nonce,
    const std::vector<Hash32>& content);

struct ForensicsRecord {
    Hash32 forensics_hash;
    Address contract;
    Address deployer;
    std::uint64_t nonce = 0;
    std::vector<Hash32> content;  // relief tx hashes, confirmation order
};

struct TxForEntry {
    Hash32 forensics_hash;
    Address deployer;
    std::uint64_t nonce = 0;
    std::uint64_t content_length = 0;
};

/// Blob layout: 4-byte big-endian count, then count x 32-byte tx hashes.
Bytes encode_content_blob(const std::vector<Hash32>& content);
std::optional<std::vector<Hash32>> decode_content_blob(BytesView blob);

/// Content-addressed store: forensics hash -> blob. In-memory, optionally
/// mirrored to a directory with one file per hash (filename = hex hash).
class OffChainStore {
public:
    OffChainStore() = default;
    explicit OffChainStore(std::filesystem::path dir);

    bool contains(const Hash32& key) const;
    /// False if the key is already present (existing blobs are never replaced).
    bool put(const Hash32& key, const Bytes& blob);
    std::optional<Bytes> get(const Hash32& key) const;
    void erase(const Hash32& key);           // test hook for availability failures
    void tamper(const Hash32& key, std::size_t bit_index);  // test hook
    std::vector<Hash32> keys() const;

    /// Loads every well-named blob file from the directory.
    void reload();

private:
    std::optional<std::filesystem::path> dir_;
    std::map<Hash32, Bytes> blobs_;
};

enum class VerifyStatus { Valid, Tampered, Unavailable };

struct VerifyOutcome {
    VerifyStatus status = VerifyStatus::Valid;
    std::string detail;
};

/// On/off-chain cooperative forensics: relief tx hashes are clustered per
/// contract instance off-chain; the TxFor contract keeps the on-chain map of
/// forensics hash to (deployer, nonce, content length).
class ForensicsService {
public:
    explicit ForensicsService(chain::Network& net);
    ForensicsService(chain::Network& net, std::filesystem::path offchain_dir);

    /// Attaches to an already-populated chain (offline verification path):
    /// no TxFor deployment, entries re-scanned from confirmed calls.
    static ForensicsService attach_existing(chain::Network& net,
        std::filesystem::path offchain_dir);

    const Address& txfor_contract() const { return txfor_addr_; }
    OffChainStore& store() { return store_; }
    const OffChainStore& store() const { return store_; }

    /// Appends a confirmed relief tx to the contract's cluster and returns
    /// the updated record. Throws UnknownContract / UnconfirmedTx.
    ForensicsRecord record_forensics(const Address& contract, const Hash32& tx_hash);
    ForensicsRecord current_record(const Address& contract) const;

    /// Anchors a record: blob to the off-chain store, pointer entry on-chain
    /// through a TxFor contract call. Returns the anchoring tx hash.
    /// Throws DuplicateHash / InvalidRecord.
    Hash32 txfor_add(const ForensicsRecord& record);

    /// Joins the on-chain entry with the off-chain blob.
    /// Throws UnknownHash / MissingContent.
    ForensicsRecord txfor_query(const Hash32& forensics_hash) const;

    VerifyOutcome verify(const Hash32& forensics_hash) const;

    bool is_anchored(const Hash32& forensics_hash) const;
    std::vector<Hash32> anchored_hashes() const;

    /// Rebuilds the anchored-entry map by scanning confirmed TxFor calls;
    /// used after importing a persisted chain.
    void rebuild_from_chain();

private:
    struct AttachTag {};
    ForensicsService(AttachTag, chain::Network& net, std::filesystem::path offchain_dir);

    void deploy_txfor();

    chain::Network& net_;
    Address coordinator_;
    Address txfor_addr_;
    OffChainStore store_;
    std::map<Address, std::vector<Hash32>> clusters_;
    std::map<Hash32, TxForEntry> anchored_;
};

/// Decodes a TxFor call payload RLP(forensics_hash, deployer, nonce,
/// content_length); nullopt when the payload has a different shape.
std::optional<TxForEntry> decode_txfor_payload(BytesView payload);

}  // namespace reliefchain::forensics
