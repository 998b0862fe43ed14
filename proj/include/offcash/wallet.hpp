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

#include <map>
#include <random>
#include <set>
#include <variant>

#include "offcash/chain.hpp"
#include "offcash/repstring.hpp"

namespace offcash {

// The offline wallet. Models the sealed execution environment: private
// keys and the replay-protected counter live behind this API only. One
// logical owner mutates a Wallet at a time; the simulator hands wallets
// between steps but never shares them.

enum class CoinStatus : uint8_t {
    owned,
    pending_outgoing,              // transfer built, secret escrowed
    transferred_awaiting_upload,   // secret revealed, chain appended
    pending_incoming,              // receiver side, awaiting the reveal
    error_flagged,                 // disputed; upload blocked
};

const char* to_string(CoinStatus s);

struct CoinRecord {
    CoinChain chain;
    CoinStatus status = CoinStatus::owned;
    /// pending_outgoing only: the full transfer block plus its secret.
    std::optional<std::pair<Bytes, Block>> escrow;
    /// pending_incoming only: pre-signed cancellation held on standby.
    std::optional<Signature> standby_repudiation;
    std::optional<DynamicParams> dynamic;
    bool slow = false;  // mining stalled beyond the backlog; transfers blocked
};

/// Payment request from the beneficiary. Carries the replay-protected
/// invoice serial range and the certificates the payer needs to address
/// the transfer blocks.
struct Invoice {
    Amount amount;
    Certificate beneficiary_cert;
    Certificate beneficiary_wallet_cert;
    Certificate beneficiary_bank_cert;
    uint64_t base_invoice_serial = 0;
    uint32_t coin_slots = 0;
    Tick timestamp = 0;
    Signature wallet_sig;  // beneficiary wallet key over the fields above
    Signature person_sig;  // beneficiary person key over wallet_sig

    Bytes core_bytes() const;
    void encode(ByteWriter& w) const;
    static Invoice decode(ByteReader& r);
    bool operator==(const Invoice&) const = default;
};

/// The chains of a payment, each ending in a transfer block whose secret
/// nonce is withheld.
struct TransferProposal {
    uint64_t base_invoice_serial = 0;
    std::vector<CoinChain> chains;

    void encode(ByteWriter& w) const;
    static TransferProposal decode(ByteReader& r);
    bool operator==(const TransferProposal&) const = default;
};

/// Dual-signed response payload scaffold (wallet key over the payload,
/// person key over the wallet signature).
struct DualSig {
    Signature wallet_sig;
    Signature person_sig;
    bool operator==(const DualSig&) const = default;
};

struct Approval {
    uint64_t base_invoice_serial = 0;
    Digest proposal_digest;  // over the proposal tip hashes
    DualSig sig;

    Bytes core_bytes() const;
    void encode(ByteWriter& w) const;
    static Approval decode(ByteReader& r);
    bool operator==(const Approval&) const = default;
};

struct Rejection {
    uint64_t base_invoice_serial = 0;
    std::vector<FailureCode> codes;
    std::vector<Repudiation> repudiations;
    DualSig sig;

    Bytes core_bytes() const;
    void encode(ByteWriter& w) const;
    static Rejection decode(ByteReader& r);
    bool operator==(const Rejection&) const = default;
};

struct SecretReveal {
    uint64_t base_invoice_serial = 0;
    std::vector<std::pair<std::string, Bytes>> nonces;  // coin key -> nonce
    DualSig sig;

    Bytes core_bytes() const;
    void encode(ByteWriter& w) const;
    static SecretReveal decode(ByteReader& r);
    bool operator==(const SecretReveal&) const = default;
};

struct RepudiationDelivery {
    uint64_t base_invoice_serial = 0;
    std::vector<std::pair<std::string, Repudiation>> repudiations;  // by key
    DualSig sig;

    Bytes core_bytes() const;
    void encode(ByteWriter& w) const;
    static RepudiationDelivery decode(ByteReader& r);
    bool operator==(const RepudiationDelivery&) const = default;
};

struct Confirmation {
    uint64_t base_invoice_serial = 0;
    DualSig sig;

    Bytes core_bytes() const;
    void encode(ByteWriter& w) const;
    static Confirmation decode(ByteReader& r);
    bool operator==(const Confirmation&) const = default;
};

struct WalletConfig {
    Tick approval_timeout = 30;
    uint32_t default_invoice_slots = 8;
    DynamicParams dynamic;  // regime applied to dynamic coins
};

struct MineEvent {
    std::string key;
    size_t appended = 0;
    bool marked_slow = false;
};

class Wallet {
public:
    Wallet(WalletConfig config, KeyPair wallet_keys, KeyPair person_keys,
           HolderIdentity id, TrustStore trust, uint64_t rng_seed);

    const PublicKey& person_vk() const { return person_keys_.vk; }
    const PublicKey& wallet_vk() const { return wallet_keys_.vk; }
    const HolderIdentity& identity() const { return id_; }
    const HolderKeys& holder_keys() const { return holder_; }
    uint64_t rpmb_counter() const { return rpmb_counter_; }
    const std::set<uint64_t>& consumed_invoices() const {
        return consumed_invoices_;
    }

    /// Re-provisioning: fresh certificates, counter untouched.
    void update_identity(KeyPair person_keys, HolderIdentity id);

    // -- coin store -----------------------------------------------------
    void add_owned_coin(CoinChain chain,
                        std::optional<DynamicParams> dynamic = std::nullopt);
    const CoinRecord* coin(const std::string& key) const;
    const std::map<std::string, CoinRecord>& coins() const { return coins_; }
    Amount owned_total() const;
    /// Chains ready to go online (transferred, not error-flagged).
    std::vector<std::pair<std::string, CoinChain>> uploadable_chains() const;
    void mark_uploaded(const std::string& key);
    void remove_coin(const std::string& key);

    // -- receiver side ----------------------------------------------------
    Invoice create_invoice(Amount amount, uint32_t max_coins, Tick now);
    std::variant<Approval, Rejection> receive_proposal(
        const TransferProposal& proposal, Tick now);
    /// nullopt when the reveal matches no live incoming payment (replays,
    /// stray messages); those change no state.
    std::optional<std::variant<Confirmation, RepudiationDelivery>>
    finalize_receive(const SecretReveal& reveal, Tick now);
    /// Every cancellation this wallet could still hand out (standby and
    /// already-delivered ones), for the QR-string fallback.
    std::vector<Repudiation> exportable_repudiations() const;
    /// Gives up on a stuck incoming payment: emits the standby
    /// cancellations and keeps them exportable.
    std::optional<RepudiationDelivery> expire_incoming(
        uint64_t base_invoice_serial);

    // -- sender side ------------------------------------------------------
    TransferProposal prepare_payment(const Invoice& invoice, Tick now);
    std::optional<SecretReveal> reveal_secret(const Approval& approval,
                                              Tick now);
    /// Burns the escrowed transfer blocks of a rejected or timed-out
    /// payment; the coins stay owned. Returns false when the payment is
    /// unknown or already past escrow.
    bool handle_rejection(const Rejection& rejection);
    bool abort_payment(uint64_t base_invoice_serial);
    bool apply_repudiation(const std::string& key, const Signature& rep_sig);
    void flag_error(const std::string& key);

    // -- mining -----------------------------------------------------------
    std::vector<MineEvent> mine_tick(Tick now);

    // -- persistence ------------------------------------------------------
    using SnapshotKey = std::array<uint8_t, 32>;
    Bytes snapshot(const SnapshotKey& key) const;
    static Wallet restore(std::span<const uint8_t> data, const SnapshotKey& key,
                          WalletConfig config, TrustStore trust);

    /// Adversary hook: byte-for-byte duplicate of the sealed state,
    /// modeling physical extraction. Not reachable through the protocol.
    Wallet clone_storage() const { return *this; }

private:
    struct OpenInvoice {
        Amount amount;
        uint32_t slots = 0;
        std::set<uint64_t> in_use;
        bool closed = false;
    };
    struct OutgoingPayment {
        std::vector<std::string> coin_keys;
        PublicKey beneficiary_person_vk;
        PublicKey beneficiary_wallet_vk;
        Digest proposal_digest;
        bool revealed = false;
    };
    struct IncomingPayment {
        std::vector<std::string> coin_keys;
        PublicKey sender_person_vk;
        PublicKey sender_wallet_vk;
        Digest proposal_digest;
        bool settled = false;
    };

    Bytes next_secret_nonce();
    DualSig dual_sign(std::span<const uint8_t> core) const;
    Rejection make_rejection(uint64_t base, std::vector<FailureCode> codes,
                             const TransferProposal& proposal);

    WalletConfig config_;
    KeyPair wallet_keys_;
    KeyPair person_keys_;
    HolderIdentity id_;
    HolderKeys holder_;
    TrustStore trust_;
    uint64_t rpmb_counter_ = 0;
    std::set<uint64_t> consumed_invoices_;
    std::map<std::string, CoinRecord> coins_;
    std::map<uint64_t, OpenInvoice> open_invoices_;
    std::map<uint64_t, OutgoingPayment> outgoing_;
    std::map<uint64_t, IncomingPayment> incoming_;
    std::map<std::string, Repudiation> delivered_repudiations_;
    std::mt19937_64 rng_;
};

/// Verifies the layered signature convention: wallet key over `core`,
/// person key over the wallet signature.
bool verify_dual(const PublicKey& wallet_vk, const PublicKey& person_vk,
                 std::span<const uint8_t> core, const DualSig& sig);

}  // namespace offcash
