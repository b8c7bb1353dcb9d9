// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#include <reliefchain/forensics.hpp>

#include <reliefchain/relief.hpp>
#include <reliefchain/rlp.hpp>
#include <reliefchain/sha3.hpp>

#include <algorithm>
#include <fstream>

namespace reliefchain::forensics {

namespace fs = std::filesystem;

Hash32 compute_forensics_hash(const Address& deployer, std::uint64_t nonce,
    const std::vector<Hash32>& content)
{
    const Bytes prefix = rlp::encode(
        rlp::Item{std::vector<rlp::Item>{rlp::address_item(deployer), rlp::u64_item(nonce)}});
    crypto::Sha3_256 hasher;
    hasher.update(prefix);
    for (const Hash32& h : content)
        hasher.update(h.bytes);
    return hasher.final();
}

Bytes encode_content_blob(const std::vector<Hash32>& content)
{
    Bytes blob;
    const auto count = static_cast<std::uint32_t>(content.size());
    for (int shift = 24; shift >= 0; shift -= 8)
        blob.push_back(static_cast<std::uint8_t>(count >> shift));
    for (const Hash32& h : content)
        blob.insert(blob.end(), h.bytes.begin(), h.bytes.end());
    return blob;
}

std::optional<std::vector<Hash32>> decode_content_blob(BytesView blob)
{
    if (blob.size() < 4)
        return std::nullopt;
    std::uint32_t count = 0;
    for (int i = 0; i < 4; ++i)
        count = count << 8 | blob[i];
    if (blob.size() != 4 + static_cast<std::size_t>(count) * 32)
        return std::nullopt;
    std::vector<Hash32> content(count);
    for (std::uint32_t i = 0; i < count; ++i)
        std::copy_n(blob.begin() + 4 + i * 32, 32, content[i].bytes.begin());
    return content;
}

OffChainStore::OffChainStore(fs::path dir) : dir_(std::move(dir))
{
    fs::create_directories(*dir_);
    reload();
}

bool OffChainStore::contains(const Hash32& key) const
{
    return blobs_.count(key) != 0;
}

bool OffChainStore::put(const Hash32& key, const Bytes& blob)
{
    if (contains(key))
        return false;
    blobs_[key] = blob;
    if (dir_) {
        std::ofstream out(*dir_ / key.hex(), std::ios::binary);
        out.write(reinterpret_cast<const char*>(blob.data()),
            static_cast<std::streamsize>(blob.size()));
    }
    return true;
}

std::optional<Bytes> OffChainStore::get(const Hash32& key) const
{
    const auto it = blobs_.find(key);
    if (it == blobs_.end())
        return std::nullopt;
    return it->second;
}

void OffChainStore::erase(const Hash32& key)
{
    blobs_.erase(key);
    if (dir_)
        fs::remove(*dir_ / key.hex());
}

void OffChainStore::tamper(const Hash32& key, std::size_t bit_index)
{
    const auto it = blobs_.find(key);
    if (it == blobs_.end() || it->second.empty())
        return;
    Bytes& blob = it->second;
    bit_index %= blob.size() * 8;
    blob[bit_index / 8] ^= static_cast<std::uint8_t>(1u << (bit_index % 8));
    if (dir_) {
        std::ofstream out(*dir_ / key.hex(), std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(blob.data()),
            static_cast<std::streamsize>(blob.size()));
    }
}

std::vector<Hash32> OffChainStore::keys() const
{
    std::vector<Hash32> out;
    for (const auto& [key, blob] : blobs_)
        out.push_back(key);
    return out;
}

void OffChainStore::reload()
{
    if (!dir_)
        return;
    blobs_.clear();
    for (const auto& entry : fs::directory_iterator(*dir_)) {
        if (!entry.is_regular_file())
            continue;
        Hash32 key;
        try {
            key = Hash32::from_hex(entry.path().filename().string());
        } catch (const std::invalid_argument&) {
            continue;
        }
        std::ifstream in(entry.path(), std::ios::binary);
        Bytes blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        blobs_[key] = std::move(blob);
    }
}

std::optional<TxForEntry> decode_txfor_payload(BytesView payload)
{
    try {
        const rlp::Item item = rlp::decode(payload);
        if (!item.is_list() || item.list().size() != 4)
            return std::nullopt;
        const auto& fields = item.list();
        for (const rlp::Item& f : fields)
            if (!f.is_string())
                return std::nullopt;
        if (fields[0].str().size() != 32 || fields[1].str().size() != 20)
            return std::nullopt;
        TxForEntry entry;
        std::copy(fields[0].str().begin(), fields[0].str().end(),
            entry.forensics_hash.bytes.begin());
        std::copy(fields[1].str().begin(), fields[1].str().end(), entry.deployer.bytes.begin());
        entry.nonce = u64_from_be(fields[2].str());
        entry.content_length = u64_from_be(fields[3].str());
        return entry;
    } catch (const rlp::DecodeError&) {
        return std::nullopt;
    }
}

ForensicsService::ForensicsService(chain::Network& net) : net_(net)
{
    deploy_txfor();
}

ForensicsService::ForensicsService(chain::Network& net, fs::path offchain_dir)
    : net_(net), store_(std::move(offchain_dir))
{
    deploy_txfor();
}

ForensicsService::ForensicsService(AttachTag, chain::Network& net, fs::path offchain_dir)
    : net_(net), store_(std::move(offchain_dir))
{
}

ForensicsService ForensicsService::attach_existing(chain::Network& net, fs::path offchain_dir)
{
    ForensicsService service(AttachTag{}, net, std::move(offchain_dir));
    service.rebuild_from_chain();
    return service;
}

void ForensicsService::deploy_txfor()
{
    using vm::Instr;
    using vm::Op;
    coordinator_ = relief::participant_address("forensics-coordinator");
    // Entry fingerprint goes to storage; the authoritative map is parsed back
    // from the confirmed call payloads.
    const std::vector<Instr> code{
        {Op::SSTORE, 0}, {Op::POP, 0}, {Op::POP, 0}, {Op::STOP, 0}};
    const std::uint64_t nonce = net_.next_nonce(coordinator_);
    const chain::Transaction tx = chain::make_creation(coordinator_, nonce, vm::assemble(code));
    net_.submit_transaction(tx);
    net_.commit_all();
    txfor_addr_ = *net_.get_receipt(tx.hash).contract_address;
}

ForensicsRecord ForensicsService::record_forensics(const Address& contract, const Hash32& tx_hash)
{
    const vm::ContractInstance* instance = net_.state().find(contract);
    if (instance == nullptr)
        throw ChainError(Errc::UnknownContract, contract.hex());
    if (!net_.is_confirmed(tx_hash))
        throw ChainError(Errc::UnconfirmedTx, tx_hash.hex());
    const chain::Transaction& tx = net_.get_transaction(tx_hash);
    if (!tx.target || *tx.target != contract)
        throw ChainError(Errc::InvalidTx, "tx does not target the contract");

    std::vector<Hash32>& cluster = clusters_[contract];
    if (std::find(cluster.begin(), cluster.end(), tx_hash) == cluster.end())
        cluster.push_back(tx_hash);
    return current_record(contract);
}

ForensicsRecord ForensicsService::current_record(const Address& contract) const
{
    const vm::ContractInstance* instance = net_.state().find(contract);
    if (instance == nullptr)
        throw ChainError(Errc::UnknownContract, contract.hex());
    ForensicsRecord record;
    record.contract = contract;
    record.deployer = instance->deployer;
    record.nonce = instance->deploy_nonce;
    const auto it = clusters_.find(contract);
    if (it != clusters_.end())
        record.content = it->second;
    record.forensics_hash = compute_forensics_hash(record.deployer, record.nonce, record.content);
    return record;
}

Hash32 ForensicsService::txfor_add(const ForensicsRecord& record)
{
    if (compute_forensics_hash(record.deployer, record.nonce, record.content) !=
        record.forensics_hash)
        throw ChainError(Errc::InvalidRecord, "forensics hash does not match content");
    if (anchored_.count(record.forensics_hash))
        throw ChainError(Errc::DuplicateHash, record.forensics_hash.hex());

    store_.put(record.forensics_hash, encode_content_blob(record.content));

    const Bytes payload = rlp::encode(rlp::Item{std::vector<rlp::Item>{
        rlp::hash_item(record.forensics_hash), rlp::address_item(record.deployer),
        rlp::u64_item(record.nonce), rlp::u64_item(record.content.size())}});
    const chain::Transaction tx = chain::make_call(coordinator_, net_.next_nonce(coordinator_),
        txfor_addr_, payload);
    net_.submit_transaction(tx);
    net_.commit_all();

    anchored_[record.forensics_hash] = {record.forensics_hash, record.deployer, record.nonce,
        record.content.size()};
    return tx.hash;
}

ForensicsRecord ForensicsService::txfor_query(const Hash32& forensics_hash) const
{
    const auto it = anchored_.find(forensics_hash);
    if (it == anchored_.end())
        throw ChainError(Errc::UnknownHash, forensics_hash.hex());
    const auto blob = store_.get(forensics_hash);
    if (!blob)
        throw ChainError(Errc::MissingContent, forensics_hash.hex());
    const auto content = decode_content_blob(*blob);
    if (!content)
        throw ChainError(Errc::MissingContent, "blob is not parseable");

    ForensicsRecord record;
    record.forensics_hash = forensics_hash;
    record.deployer = it->second.deployer;
    record.nonce = it->second.nonce;
    record.contract = vm::derive_contract_address(record.deployer, record.nonce);
    record.content = *content;
    return record;
}

VerifyOutcome ForensicsService::verify(const Hash32& forensics_hash) const
{
    const auto it = anchored_.find(forensics_hash);
    if (it == anchored_.end())
        return {VerifyStatus::Unavailable, "forensics hash not anchored"};
    const TxForEntry& entry = it->second;

    const auto blob = store_.get(forensics_hash);
    if (!blob)
        return {VerifyStatus::Unavailable, "off-chain content missing"};
    const auto content = decode_content_blob(*blob);
    if (!content)
        return {VerifyStatus::Tampered, "blob structure invalid"};
    if (content->size() != entry.content_length)
        return {VerifyStatus::Tampered, "content length differs from on-chain entry"};
    if (compute_forensics_hash(entry.deployer, entry.nonce, *content) != forensics_hash)
        return {VerifyStatus::Tampered, "content hash mismatch"};
    for (std::size_t i = 0; i < content->size(); ++i) {
        const Hash32& tx_hash = (*content)[i];
        if (!net_.is_confirmed(tx_hash))
            return {VerifyStatus::Tampered,
                "unknown tx hash at index " + std::to_string(i) + ": " + tx_hash.hex()};
        if (chain::compute_tx_hash(net_.get_transaction(tx_hash)) != tx_hash)
            return {VerifyStatus::Tampered, "tx hash mismatch at index " + std::to_string(i)};
    }
    return {VerifyStatus::Valid, ""};
}

bool ForensicsService::is_anchored(const Hash32& forensics_hash) const
{
    return anchored_.count(forensics_hash) != 0;
}

std::vector<Hash32> ForensicsService::anchored_hashes() const
{
    std::vector<Hash32> out;
    for (const auto& [hash, entry] : anchored_)
        out.push_back(hash);
    return out;
}

void ForensicsService::rebuild_from_chain()
{
    anchored_.clear();
    for (const chain::Block& block : net_.blocks()) {
        for (const chain::Transaction& tx : block.transactions) {
            if (tx.kind != chain::TxKind::ContractCall)
                continue;
            if (const auto entry = decode_txfor_payload(tx.payload))
                anchored_[entry->forensics_hash] = *entry;
        }
    }
    store_.reload();
}

}  // namespace reliefchain::forensics
