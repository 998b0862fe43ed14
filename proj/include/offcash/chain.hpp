// Copyright 2026 The Offcash Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <utility>

#include "offcash/block.hpp"

namespace offcash {

enum class FailureCode : uint8_t {
    hash_link,
    signature,
    certificate,
    variant,
    value,
    counter,
    difficulty,
    timestamp,
};

const char* to_string(FailureCode code);

struct ValidationFailure {
    size_t block_index;  // 0 = genesis
    FailureCode code;
    bool operator==(const ValidationFailure&) const = default;
};

struct ValidationReport {
    bool valid = true;  // valid <=> failures empty
    std::vector<ValidationFailure> failures;
    /// Tip is a transfer block whose secret nonce is withheld; final hash
    /// recomputation is deferred until the reveal.
    bool deferred_tip = false;
    /// Dynamic chains: whole mining intervals elapsed since the tip.
    uint64_t blocks_behind = 0;

    void add(size_t index, FailureCode code) {
        valid = false;
        failures.push_back({index, code});
    }
    std::string summary() const;
};

/// Proof-of-work regime of a dynamic chain.
struct DynamicParams {
    unsigned difficulty_bits = 12;  // leading zero bits of the block hash
    Tick interval = 10;             // one block due per interval
    uint64_t max_backlog = 360;     // intervals; beyond this the coin is slow
    unsigned catchup_rate = 4;      // extra backlog blocks mined per tick
    bool operator==(const DynamicParams&) const = default;
};

/// Certificates identifying one customer: person, wallet, and the bank
/// that issued them.
struct HolderIdentity {
    Certificate person_cert;
    Certificate wallet_cert;
    Certificate bank_cert;
    bool operator==(const HolderIdentity&) const = default;
};

/// Identity plus the signing keys; what a wallet needs to extend a chain.
struct HolderKeys {
    KeyPair wallet_keys;
    KeyPair person_keys;
    HolderIdentity id;
};

ValidationReport validate_chain(const CoinChain& chain, const TrustStore& trust,
                                const std::optional<DynamicParams>& dynamic,
                                Tick now);

/// Mining deficit: whole intervals elapsed since the chain tip.
uint64_t blocks_behind(const CoinChain& chain, Tick now, Tick interval);

enum class HolderStatus : uint8_t {
    settled,         // tip transfer complete (or no transfer at tip)
    pending_reveal,  // tip transfer awaiting its secret nonce
    repudiated,      // tip transfer cancelled; coin stays with the sender
};

struct HolderInfo {
    PublicKey person_vk;
    PublicKey wallet_vk;
    HolderStatus status = HolderStatus::settled;
};

/// Walks the chain and reports who holds the coin. The chain must be
/// structurally sound (validate first); throws on unclassifiable blocks.
HolderInfo current_holder(const CoinChain& chain);

/// Longest fully-valid candidate; ties broken by earliest tip timestamp,
/// then smallest tip hash. Returns nullptr when no candidate validates.
const CoinChain* longest_valid_chain(std::span<const CoinChain> candidates,
                                     const TrustStore& trust,
                                     const std::optional<DynamicParams>& dynamic,
                                     Tick now);

/// Non-destructive append; throws on linkage or timestamp violations.
CoinChain append_block(const CoinChain& chain, Block block);

/// Fractioning: splits a cold coin into two children sharing the mother
/// prefix. amount_a + amount_b must equal the value in force exactly.
std::pair<CoinChain, CoinChain> fork_chain(
    const CoinChain& chain, Amount amount_a, Amount amount_b,
    const HolderKeys& holder, Tick now,
    const std::optional<DynamicParams>& dynamic = std::nullopt);

// Block builders. Each fills the Table-layout fields, mines the nonce when
// the chain is dynamic, computes the hash and signs.

Block make_delivery_block(const CoinChain& chain, const HolderIdentity& to,
                          const KeyPair& bank_keys, Tick now,
                          const std::optional<DynamicParams>& dynamic);

Block make_mined_block(const CoinChain& chain, const HolderKeys& holder,
                       Tick now, const DynamicParams& dynamic);

Block make_transfer_block(const CoinChain& chain, const HolderKeys& sender,
                          const HolderIdentity& beneficiary,
                          uint64_t invoice_serial, const Bytes& secret_nonce,
                          Tick now,
                          const std::optional<DynamicParams>& dynamic);

/// Wire copy of a transfer block with the secret nonce withheld.
Block withhold_secret(Block block);

/// Stable identifier of a chain's fork lineage: the genesis serial plus a
/// short hash component per fork block. Siblings and their descendants
/// get distinct, prefix-ordered keys; transfer/mined blocks do not change
/// the key.
std::string coin_key(const CoinChain& chain);

}  // namespace offcash
