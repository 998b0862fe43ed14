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

#include "offcash/wallet.hpp"

namespace offcash {

// The online tier: a central bank that mints serials and keeps the
// registry of uploaded chains, and a commercial bank holding customer
// token accounts. Online interactions are assumed reliable; the faulty
// channel only sits between offline wallets.

enum class SerialStatus : uint8_t { outstanding, burned, claim_pending };

const char* to_string(SerialStatus s);

struct RegistryEntry {
    SerialStatus status = SerialStatus::outstanding;
    PublicKey owner_vk;   // holder of the longest valid uploaded chain
    CoinKind kind;
    Amount value;         // face value at mint
    Amount remaining;     // face value not yet burned
    std::optional<DynamicParams> dynamic;
    Digest genesis_hash;
    std::vector<CoinChain> uploads;
    std::map<std::string, Amount> burned_leaves;  // coin key -> credited
};

struct UploadOutcome {
    bool accepted = false;
    bool conflict = false;  // double-spend evidence; family quarantined
    ValidationReport report;
    std::string detail;
};

struct CashOutOptions {
    bool hot = false;
    std::optional<Tick> expiration;      // defaults applied when absent
    std::optional<Tick> claim_deadline;
    std::optional<DynamicParams> dynamic;
};

class Bank;

class CentralBank {
public:
    struct Config {
        Amount per_coin_threshold = Amount::parse("500.00");
        uint32_t per_request_coin_cap = 16;
        Tick hot_expiration_delta = 30 * kTicksPerDay;
        Tick hot_claim_delta = 7 * kTicksPerDay;
    };

    explicit CentralBank(uint64_t key_seed) : CentralBank(key_seed, Config{}) {}
    CentralBank(uint64_t key_seed, Config config);

    const KeyPair& keys() const { return keys_; }
    const TrustStore& trust() const { return trust_; }
    const Config& config() const { return config_; }

    /// Key rotation: a fresh root key; the old one stays in the history.
    void rotate_key(uint64_t new_seed);

    Certificate certify_bank(const PublicKey& bank_vk);

    // reserve accounting
    void open_reserve(const PublicKey& bank_vk, Amount amount);
    Amount reserve(const PublicKey& bank_vk) const;

    /// Mints one coin on behalf of the bank: debits the reserve and opens
    /// the registry entry with the customer as registered owner.
    GenesisBlock mint(const Certificate& bank_cert, const PublicKey& owner_vk,
                      Amount value, Tick now, const CashOutOptions& options);

    UploadOutcome upload_chain(const CoinChain& chain, Tick now);

    /// Burn handshake: a challenge is issued, signed by the claimant, and
    /// consumed on use, so burn requests cannot be replayed.
    Bytes burn_challenge(const PublicKey& claimant_vk);
    /// Returns the credited value; throws on any rejection.
    Amount burn_coin(const CoinChain& chain, const PublicKey& claimant_vk,
                     const Signature& proof, Tick now);

    /// Post-deadline analysis of a hot coin's uploads. Returns the owner
    /// credited, or nullopt when the serial stays parked (no uploads or
    /// quarantined family). Token credit goes through `bank`.
    std::optional<PublicKey> resolve_claims(Bank& bank,
                                            const std::string& serial,
                                            Tick now);

    /// Redeems a stalled dynamic coin at face value.
    Amount collect_slow_coin(const CoinChain& chain,
                             const PublicKey& claimant_vk,
                             const Signature& proof, Tick now);

    const RegistryEntry* registry_entry(const std::string& serial) const;
    const std::map<std::string, RegistryEntry>& registry() const {
        return registry_;
    }
    /// Sum of un-burned face value across all serials.
    Amount outstanding_face() const;
    /// One line per serial: `serial status owner_vk value kind`.
    std::string registry_dump() const;
    /// Ownership history of a serial from its best uploaded chain.
    std::vector<std::pair<Tick, PublicKey>> ownership_history(
        const std::string& serial) const;

private:
    Amount burn_leaf(RegistryEntry& entry, const CoinChain& chain,
                     const PublicKey& claimant_vk, const Signature& proof,
                     Tick now, bool require_slow);
    void check_family(RegistryEntry& entry);
    bool consume_challenge(const PublicKey& claimant_vk,
                           const Signature& proof,
                           const std::string& serial);

    KeyPair keys_;
    TrustStore trust_;
    Config config_;
    uint64_t serial_counter_ = 0;
    std::map<std::string, RegistryEntry> registry_;
    std::map<std::string, Bytes> challenges_;  // claimant vk hex -> nonce
    std::mt19937_64 challenge_rng_;
    std::map<std::string, Amount> reserves_;   // bank vk hex -> reserve
};

class Bank {
public:
    Bank(CentralBank& central, uint64_t key_seed,
         const PublicKey& manufacturer_vk);

    const KeyPair& keys() const { return keys_; }
    const Certificate& certificate() const { return cert_; }

    // token accounts
    void fund_customer(const PublicKey& person_vk, Amount amount);
    Amount token_balance(const PublicKey& person_vk) const;
    Amount total_tokens() const;
    void credit(const PublicKey& person_vk, Amount amount);

    /// Authenticates a wallet (manufacturer attestation over the hardware
    /// key) and a person, then issues the cross-linked certificates.
    HolderIdentity provision(const PublicKey& wallet_vk,
                             const Signature& oem_attestation,
                             const PublicKey& person_vk);

    /// Exchanges tokens for offline coins: mints (splitting over the
    /// per-coin threshold), appends the delivery block, debits tokens.
    std::vector<CoinChain> cash_out(CentralBank& central,
                                    const HolderIdentity& customer,
                                    Amount amount, Tick now,
                                    const CashOutOptions& options);

    /// Burns a coin at the central bank and credits the claimant's tokens.
    Amount redeem(CentralBank& central, const CoinChain& chain,
                  const PublicKey& claimant_vk, const Signature& proof,
                  Tick now, bool slow_collection = false);

private:
    KeyPair keys_;
    Certificate cert_;
    PublicKey manufacturer_vk_;
    std::map<std::string, Amount> tokens_;  // person vk hex -> balance
};

}  // namespace offcash
