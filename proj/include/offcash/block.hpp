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

#include <optional>
#include <string>
#include <vector>

#include "offcash/amount.hpp"
#include "offcash/bytes.hpp"
#include "offcash/cert.hpp"
#include "offcash/clock.hpp"
#include "offcash/sha256.hpp"
#include "offcash/sign.hpp"

namespace offcash {

// Every coin carries its own append-only chain. The genesis block is
// minted and signed by the central bank; later blocks are mined blocks,
// fork blocks (fractioning), or transfer blocks that reassign ownership.

struct CoinKind {
    std::optional<Tick> expiration;      // hot coins only
    std::optional<Tick> claim_deadline;  // hot coins only

    bool is_hot() const { return expiration.has_value(); }
    static CoinKind cold() { return {}; }
    static CoinKind hot(Tick expiration, Tick claim_deadline) {
        return {expiration, claim_deadline};
    }
    bool operator==(const CoinKind&) const = default;
};

struct GenesisBlock {
    PublicKey central_vk;
    std::string serial;
    Amount value;
    Tick timestamp = 0;
    Certificate bank_cert;
    CoinKind kind;
    Digest hash;            // over all preceding fields
    Signature central_sig;  // over hash

    /// Canonical bytes of the fields covered by `hash`.
    Bytes preimage() const;
    /// hash || central_sig; what the next block links to.
    Bytes signed_hash() const;

    void encode(ByteWriter& w) const;
    static GenesisBlock decode(ByteReader& r);
    bool operator==(const GenesisBlock&) const = default;
};

enum class BlockVariant : uint8_t { delivery, mined, fork, transfer };

const char* to_string(BlockVariant v);

/// Non-genesis block. Exactly one variant applies:
///  - delivery: the bank hands the fresh coin to the customer (index 1
///    only); no invoice, no secret.
///  - mined: proof-of-work continuation of a dynamic chain, wallet
///    signature only.
///  - fork: fractioning; carries this child's value, holder unchanged.
///  - transfer: reassigns ownership; carries the invoice serial and a
///    secret nonce that is withheld on the wire until the receiver
///    approves the chain.
struct Block {
    Bytes prev_signed_hash;  // predecessor's hash || signature(s)
    Tick timestamp = 0;
    Certificate holder_cert;  // person holding the coin after this block
    Certificate wallet_cert;  // that person's wallet
    Certificate bank_cert;    // bank that issued the two certs above
    std::optional<Amount> child_value;       // fork blocks
    std::optional<uint64_t> invoice_serial;  // transfer blocks
    std::optional<uint64_t> mined_nonce;     // dynamic chains
    std::optional<Bytes> secret_nonce;       // transfer blocks; 16 bytes
    Digest hash;  // over all preceding fields (secret included when set)
    Signature wallet_sig;                      // sender wallet key over hash
    std::optional<Signature> person_sig;       // sender person key over wallet_sig
    std::optional<Signature> repudiation_sig;  // beneficiary over person_sig

    bool is_transfer() const { return invoice_serial.has_value(); }
    bool is_fork() const { return child_value.has_value(); }

    Bytes preimage() const;
    /// preimage() plus the payload offset of the 8 mined-nonce bytes.
    /// mined_nonce must be set (the miner rewrites it in place).
    std::pair<Bytes, size_t> preimage_for_mining() const;
    Bytes signed_hash() const;

    void encode(ByteWriter& w) const;
    static Block decode(ByteReader& r);
    bool operator==(const Block&) const = default;
};

Digest block_hash(const GenesisBlock& g);
Digest block_hash(const Block& b);

struct CoinChain {
    GenesisBlock genesis;
    std::vector<Block> blocks;

    size_t length() const { return 1 + blocks.size(); }
    /// Value carried by this chain: the genesis value until a fork block
    /// narrows it to a child value.
    Amount value_in_force() const;
    Bytes tip_signed_hash() const;
    Digest tip_hash() const;
    Tick tip_timestamp() const;

    void encode(ByteWriter& w) const;
    static CoinChain decode(ByteReader& r);
    /// Framed chain-file bytes (magic + version + body).
    Bytes serialize() const;
    static CoinChain deserialize(std::span<const uint8_t> data);

    bool operator==(const CoinChain&) const = default;
};

/// Mints a coin's genesis block. `threshold` is the per-coin mint cap.
GenesisBlock mint_genesis(const KeyPair& central, const Certificate& bank_cert,
                          Amount value, const CoinKind& kind, Tick now,
                          const std::string& serial, Amount threshold);

}  // namespace offcash
