// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace reliefchain {

enum class Errc {
    StaleNonce,
    MalformedPayload,
    NotLeader,
    EmptyPool,
    UnknownTx,
    MalformedCode,
    UnknownContract,
    UnconfirmedTx,
    InvalidTx,
    InvalidDemand,
    InvalidSupply,
    InvalidAsset,
    UnknownHash,
    MissingContent,
    DuplicateHash,
    InvalidRecord,
    ParseError,
    InvalidScenario,
    UnknownClass,
};

inline const char* errc_name(Errc code)
{
    switch (code) {
    case Errc::StaleNonce:
        return "StaleNonce";
    case Errc::MalformedPayload:
        return "MalformedPayload";
    case Errc::NotLeader:
        return "NotLeader";
    case Errc::EmptyPool:
        return "EmptyPool";
    case Errc::UnknownTx:
        return "UnknownTx";
    case Errc::MalformedCode:
        return "MalformedCode";
    case Errc::UnknownContract:
        return "UnknownContract";
    case Errc::UnconfirmedTx:
        return "UnconfirmedTx";
    case Errc::InvalidTx:
        return "InvalidTx";
    case Errc::InvalidDemand:
        return "InvalidDemand";
    case Errc::InvalidSupply:
        return "InvalidSupply";
    case Errc::InvalidAsset:
        return "InvalidAsset";
    case Errc::UnknownHash:
        return "UnknownHash";
    case Errc::MissingContent:
        return "MissingContent";
    case Errc::DuplicateHash:
        return "DuplicateHash";
    case Errc::InvalidRecord:
        return "InvalidRecord";
    case Errc::ParseError:
        return "ParseError";
    case Errc::InvalidScenario:
        return "InvalidScenario";
    case Errc::UnknownClass:
        return "UnknownClass";
    }
    return "Error";
}

class ChainError : public std::runtime_error {
public:
    ChainError(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code)
    {
    }

    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace reliefchain
