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

#include "offcash/institutions.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace offcash {

const char* to_string(SerialStatus s) {
    switch (s) {
        case SerialStatus::outstanding: return "outstanding";
        case SerialStatus::burned: return "burned";
        case SerialStatus::claim_pending: return "claim_pending";
    }
    return "?";
}

// --- CentralBank ---------------------------------------------------------------

CentralBank::CentralBank(uint64_t key_seed, Config config)
    : keys_(generate_keypair(seed_from_u64(key_seed))),
      trust_(TrustStore::single(keys_.vk)),
      config_(config),
      challenge_rng_(key_seed ^ 0x9e3779b97f4a7c15ull) {}

void CentralBank::rotate_key(uint64_t new_seed) {
    keys_ = generate_keypair(seed_from_u64(new_seed));
    trust_.historical_central_vks.push_back(keys_.vk);
}

Certificate CentralBank::certify_bank(const PublicKey& bank_vk) {
    return issue_certificate(keys_, bank_vk, std::nullopt, CertRole::bank);
}

void CentralBank::open_reserve(const PublicKey& bank_vk, Amount amount) {
    reserves_[bank_vk.hex()] += amount;
}

Amount CentralBank::reserve(const PublicKey& bank_vk) const {
    auto it = reserves_.find(bank_vk.hex());
    return it == reserves_.end() ? Amount{} : it->second;
}

GenesisBlock CentralBank::mint(const Certificate& bank_cert,
                               const PublicKey& owner_vk, Amount value,
                               Tick now, const CashOutOptions& options) {
    if (!verify_certificate_path(bank_cert, nullptr, trust_))
        throw std::invalid_argument("unknown bank");
    Amount& reserve = reserves_[bank_cert.subject_vk.hex()];
    if (reserve < value)
        throw std::invalid_argument("bank reserve does not cover the mint");

    CoinKind kind = CoinKind::cold();
    if (options.hot) {
        Tick expiration =
            options.expiration.value_or(now + config_.hot_expiration_delta);
        Tick claim =
            options.claim_deadline.value_or(expiration + config_.hot_claim_delta);
        kind = CoinKind::hot(expiration, claim);
    }

    char serial_buf[24];
    std::snprintf(serial_buf, sizeof(serial_buf), "C-%06llu",
                  static_cast<unsigned long long>(++serial_counter_));
    std::string serial = serial_buf;

    GenesisBlock g = mint_genesis(keys_, bank_cert, value, kind, now, serial,
                                  config_.per_coin_threshold);
    reserve -= value;

    RegistryEntry entry;
    entry.status = SerialStatus::outstanding;
    entry.owner_vk = owner_vk;
    entry.kind = kind;
    entry.value = value;
    entry.remaining = value;
    entry.dynamic = options.dynamic;
    entry.genesis_hash = g.hash;
    registry_.emplace(serial, std::move(entry));
    return g;
}

// Double-spend evidence: across all uploads of one serial, any block may
// have at most one successor, except a fork point, which must have exactly
// two fork children conserving the parent value.
void CentralBank::check_family(RegistryEntry& entry) {
    struct Node {
        std::map<std::string, const Block*> children;  // by block hash
        Amount value_before;
        bool value_known = false;
    };
    std::map<std::string, Node> nodes;  // by digest of prev_signed_hash

    for (const CoinChain& chain : entry.uploads) {
        Amount value = chain.genesis.value;
        Bytes parent = chain.genesis.signed_hash();
        for (const Block& b : chain.blocks) {
            Node& node = nodes[sha256(parent).hex()];
            node.children.emplace(b.hash.hex(), &b);
            if (!node.value_known) {
                node.value_before = value;
                node.value_known = true;
            }
            if (b.child_value) value = *b.child_value;
            parent = b.signed_hash();
        }
    }

    for (const auto& [parent, node] : nodes) {
        if (node.children.size() <= 1) continue;
        bool all_forks = true;
        Amount child_sum;
        for (const auto& [hash, block] : node.children) {
            if (!block->is_fork()) all_forks = false;
            if (block->child_value) child_sum += *block->child_value;
        }
        bool fork_ok = all_forks && node.children.size() == 2 &&
                       child_sum == node.value_before;
        if (!fork_ok) {
            entry.status = SerialStatus::claim_pending;
            return;
        }
    }
}

UploadOutcome CentralBank::upload_chain(const CoinChain& chain, Tick now) {
    UploadOutcome out;
    auto it = registry_.find(chain.genesis.serial);
    if (it == registry_.end()) {
        out.detail = "unknown serial";
        return out;
    }
    RegistryEntry& entry = it->second;
    if (!(entry.genesis_hash == chain.genesis.hash)) {
        out.detail = "genesis does not match the minted coin";
        return out;
    }
    if (entry.status == SerialStatus::burned) {
        out.detail = "serial already burned; upload refused";
        return out;
    }

    out.report = validate_chain(chain, trust_, entry.dynamic, now);
    if (!out.report.valid || out.report.deferred_tip) {
        out.detail = out.report.deferred_tip ? "incomplete transfer tip"
                                             : out.report.summary();
        return out;
    }

    // Idempotent store.
    bool known = false;
    for (const CoinChain& existing : entry.uploads)
        if (existing == chain) known = true;
    if (!known) entry.uploads.push_back(chain);
    out.accepted = true;

    check_family(entry);
    if (entry.status == SerialStatus::claim_pending) {
        out.conflict = true;
        out.detail = "conflicting chains; serial family quarantined";
        return out;
    }

    const CoinChain* best =
        longest_valid_chain(entry.uploads, trust_, entry.dynamic, now);
    if (best) entry.owner_vk = current_holder(*best).person_vk;
    out.detail = "owner " + entry.owner_vk.hex().substr(0, 16);
    return out;
}

Bytes CentralBank::burn_challenge(const PublicKey& claimant_vk) {
    Bytes nonce(32);
    for (int i = 0; i < 4; ++i) {
        uint64_t v = challenge_rng_();
        for (int j = 0; j < 8; ++j)
            nonce[i * 8 + j] = static_cast<uint8_t>(v >> (56 - 8 * j));
    }
    challenges_[claimant_vk.hex()] = nonce;
    return nonce;
}

bool CentralBank::consume_challenge(const PublicKey& claimant_vk,
                                    const Signature& proof,
                                    const std::string& serial) {
    auto it = challenges_.find(claimant_vk.hex());
    if (it == challenges_.end()) return false;
    ByteWriter w;
    w.bytes(it->second);
    w.str(serial);
    bool ok = verify(claimant_vk, w.data(), proof);
    challenges_.erase(it);  // single use either way
    return ok;
}

Amount CentralBank::burn_leaf(RegistryEntry& entry, const CoinChain& chain,
                              const PublicKey& claimant_vk,
                              const Signature& proof, Tick now,
                              bool require_slow) {
    if (entry.status == SerialStatus::burned)
        throw std::invalid_argument("serial already burned");
    if (entry.status == SerialStatus::claim_pending)
        throw std::invalid_argument(
            "serial family under investigation; burns suspended");

    ValidationReport report = validate_chain(chain, trust_, entry.dynamic, now);
    if (!report.valid || report.deferred_tip)
        throw std::invalid_argument("chain does not validate: " +
                                    report.summary());
    if (entry.dynamic) {
        bool slow = report.blocks_behind > entry.dynamic->max_backlog;
        if (require_slow && !slow)
            throw std::invalid_argument(
                "mining schedule is conformant; use a regular burn");
        if (!require_slow && slow)
            throw std::invalid_argument(
                "mining stalled; use slow-coin collection");
    } else if (require_slow) {
        throw std::invalid_argument("not a dynamic coin");
    }

    // The claimant's copy joins the uploads; ownership is judged over
    // everything seen for this serial.
    UploadOutcome upload = upload_chain(chain, now);
    if (!upload.accepted)
        throw std::invalid_argument("chain rejected: " + upload.detail);
    if (upload.conflict)
        throw std::invalid_argument(
            "conflicting chains detected; burns suspended");

    // Ownership of this leaf is judged over every upload of the same
    // leaf; a longer copy (a later transfer the claimant does not show)
    // supersedes the presented chain.
    std::string leaf = coin_key(chain);
    std::vector<CoinChain> same_leaf;
    for (const CoinChain& c : entry.uploads) {
        std::string key = coin_key(c);
        if (key == leaf) same_leaf.push_back(c);
        if (key.starts_with(leaf + "."))
            throw std::invalid_argument(
                "the coin was fractioned; burn the child chains");
    }
    const CoinChain* best =
        longest_valid_chain(same_leaf, trust_, entry.dynamic, now);
    if (!best) throw std::invalid_argument("no valid chain for this leaf");
    HolderInfo owner = current_holder(*best);
    if (!(owner.person_vk == claimant_vk))
        throw std::invalid_argument(
            "a transfer block names another beneficiary");
    if (best->length() != chain.length())
        throw std::invalid_argument("a longer chain supersedes this copy");
    for (const auto& [burned, credited] : entry.burned_leaves) {
        if (burned == leaf || burned.starts_with(leaf + ".") ||
            leaf.starts_with(burned + "."))
            throw std::invalid_argument("coin already burned");
    }
    Amount value = chain.value_in_force();
    if (entry.remaining < value) {
        entry.status = SerialStatus::claim_pending;
        throw std::invalid_argument(
            "burn exceeds the serial's outstanding value; family quarantined");
    }

    if (!consume_challenge(claimant_vk, proof, chain.genesis.serial))
        throw std::invalid_argument("stale or missing burn challenge");

    entry.burned_leaves.emplace(leaf, value);
    entry.remaining -= value;
    if (!entry.remaining.positive()) entry.status = SerialStatus::burned;
    reserves_[chain.genesis.bank_cert.subject_vk.hex()] += value;
    return value;
}

Amount CentralBank::burn_coin(const CoinChain& chain,
                              const PublicKey& claimant_vk,
                              const Signature& proof, Tick now) {
    auto it = registry_.find(chain.genesis.serial);
    if (it == registry_.end()) throw std::invalid_argument("unknown serial");
    return burn_leaf(it->second, chain, claimant_vk, proof, now, false);
}

Amount CentralBank::collect_slow_coin(const CoinChain& chain,
                                      const PublicKey& claimant_vk,
                                      const Signature& proof, Tick now) {
    auto it = registry_.find(chain.genesis.serial);
    if (it == registry_.end()) throw std::invalid_argument("unknown serial");
    return burn_leaf(it->second, chain, claimant_vk, proof, now, true);
}

std::optional<PublicKey> CentralBank::resolve_claims(Bank& bank,
                                                     const std::string& serial,
                                                     Tick now) {
    auto it = registry_.find(serial);
    if (it == registry_.end()) throw std::invalid_argument("unknown serial");
    RegistryEntry& entry = it->second;
    if (!entry.kind.is_hot())
        throw std::invalid_argument("claims apply to hot coins only");
    if (entry.status == SerialStatus::burned)
        throw std::invalid_argument("serial already burned");
    if (now < *entry.kind.claim_deadline)
        throw std::invalid_argument("claim deadline not reached");

    if (entry.uploads.empty()) {
        // Nothing to analyze; the serial parks until a chain shows up.
        entry.status = SerialStatus::claim_pending;
        return std::nullopt;
    }

    check_family(entry);
    const CoinChain* best =
        longest_valid_chain(entry.uploads, trust_, entry.dynamic, now);
    if (!best) {
        entry.status = SerialStatus::claim_pending;
        return std::nullopt;
    }

    PublicKey owner = current_holder(*best).person_vk;
    Amount value = entry.remaining;
    entry.burned_leaves.emplace(coin_key(*best), value);
    entry.remaining = Amount{};
    entry.status = SerialStatus::burned;
    entry.owner_vk = owner;
    reserves_[best->genesis.bank_cert.subject_vk.hex()] += value;
    bank.credit(owner, value);
    return owner;
}

const RegistryEntry* CentralBank::registry_entry(
    const std::string& serial) const {
    auto it = registry_.find(serial);
    return it == registry_.end() ? nullptr : &it->second;
}

Amount CentralBank::outstanding_face() const {
    Amount total;
    for (const auto& [serial, entry] : registry_) total += entry.remaining;
    return total;
}

std::string CentralBank::registry_dump() const {
    std::ostringstream os;
    for (const auto& [serial, entry] : registry_) {
        os << serial << ' ' << to_string(entry.status) << ' '
           << entry.owner_vk.hex() << ' ' << entry.remaining.str() << ' '
           << (entry.kind.is_hot() ? "hot" : "cold") << '\n';
    }
    return os.str();
}

std::vector<std::pair<Tick, PublicKey>> CentralBank::ownership_history(
    const std::string& serial) const {
    std::vector<std::pair<Tick, PublicKey>> history;
    auto it = registry_.find(serial);
    if (it == registry_.end()) return history;
    const CoinChain* best = nullptr;
    for (const CoinChain& c : it->second.uploads)
        if (!best || c.length() > best->length()) best = &c;
    if (!best) return history;

    history.emplace_back(best->genesis.timestamp,
                         best->genesis.bank_cert.subject_vk);
    for (size_t j = 0; j < best->blocks.size(); ++j) {
        const Block& b = best->blocks[j];
        bool delivery = j == 0 && !b.is_transfer() && !b.is_fork();
        bool settled_transfer =
            b.is_transfer() && b.secret_nonce && !b.repudiation_sig;
        if (delivery || settled_transfer)
            history.emplace_back(b.timestamp, b.holder_cert.subject_vk);
    }
    return history;
}

// --- Bank ------------------------------------------------------------------------

Bank::Bank(CentralBank& central, uint64_t key_seed,
           const PublicKey& manufacturer_vk)
    : keys_(generate_keypair(seed_from_u64(key_seed))),
      cert_(central.certify_bank(keys_.vk)),
      manufacturer_vk_(manufacturer_vk) {}

void Bank::fund_customer(const PublicKey& person_vk, Amount amount) {
    tokens_[person_vk.hex()] += amount;
}

Amount Bank::token_balance(const PublicKey& person_vk) const {
    auto it = tokens_.find(person_vk.hex());
    return it == tokens_.end() ? Amount{} : it->second;
}

Amount Bank::total_tokens() const {
    Amount total;
    for (const auto& [vk, balance] : tokens_) total += balance;
    return total;
}

void Bank::credit(const PublicKey& person_vk, Amount amount) {
    tokens_[person_vk.hex()] += amount;
}

HolderIdentity Bank::provision(const PublicKey& wallet_vk,
                               const Signature& oem_attestation,
                               const PublicKey& person_vk) {
    if (!verify(manufacturer_vk_, wallet_vk.bytes, oem_attestation))
        throw std::invalid_argument(
            "hardware key fails the manufacturer verification");
    HolderIdentity id;
    id.person_cert =
        issue_certificate(keys_, person_vk, wallet_vk, CertRole::person);
    id.wallet_cert =
        issue_certificate(keys_, wallet_vk, person_vk, CertRole::wallet);
    id.bank_cert = cert_;
    return id;
}

std::vector<CoinChain> Bank::cash_out(CentralBank& central,
                                      const HolderIdentity& customer,
                                      Amount amount, Tick now,
                                      const CashOutOptions& options) {
    if (!amount.positive())
        throw std::invalid_argument("cash-out amount must be positive");
    Amount& balance = tokens_[customer.person_cert.subject_vk.hex()];
    if (balance < amount)
        throw std::invalid_argument("insufficient token balance");
    if (central.reserve(keys_.vk) < amount)
        throw std::invalid_argument("bank reserve does not cover the request");

    // Over-threshold requests split into several coins.
    Amount threshold = central.config().per_coin_threshold;
    std::vector<Amount> values;
    Amount left = amount;
    while (left.positive()) {
        Amount coin = left < threshold ? left : threshold;
        values.push_back(coin);
        left -= coin;
        if (values.size() > central.config().per_request_coin_cap)
            throw std::invalid_argument(
                "request needs more coins than the per-request cap");
    }

    std::vector<CoinChain> chains;
    for (Amount value : values) {
        CoinChain chain;
        chain.genesis = central.mint(cert_, customer.person_cert.subject_vk,
                                     value, now, options);
        chain = append_block(
            chain, make_delivery_block(chain, customer, keys_, now,
                                       options.dynamic));
        chains.push_back(std::move(chain));
    }
    balance -= amount;
    return chains;
}

Amount Bank::redeem(CentralBank& central, const CoinChain& chain,
                    const PublicKey& claimant_vk, const Signature& proof,
                    Tick now, bool slow_collection) {
    Amount value = slow_collection
                       ? central.collect_slow_coin(chain, claimant_vk, proof, now)
                       : central.burn_coin(chain, claimant_vk, proof, now);
    credit(claimant_vk, value);
    return value;
}

}  // namespace offcash
