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

#include "offcash/wallet.hpp"

#include <sodium.h>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace offcash {

const char* to_string(CoinStatus s) {
    switch (s) {
        case CoinStatus::owned: return "owned";
        case CoinStatus::pending_outgoing: return "pending_outgoing";
        case CoinStatus::transferred_awaiting_upload:
            return "transferred_awaiting_upload";
        case CoinStatus::pending_incoming: return "pending_incoming";
        case CoinStatus::error_flagged: return "error_flagged";
    }
    return "?";
}

// --- payload encodings -------------------------------------------------------

namespace {

Signature read_sig(ByteReader& r) {
    Bytes b = r.bytes();
    if (b.size() != kSignatureSize) throw DecodeError("bad signature length");
    Signature s;
    std::copy(b.begin(), b.end(), s.bytes.begin());
    return s;
}

Digest read_digest(ByteReader& r) {
    Bytes b = r.bytes();
    if (b.size() != 32) throw DecodeError("bad digest length");
    Digest d;
    std::copy(b.begin(), b.end(), d.bytes.begin());
    return d;
}

void write_dual(ByteWriter& w, const DualSig& s) {
    w.bytes(s.wallet_sig.bytes);
    w.bytes(s.person_sig.bytes);
}

DualSig read_dual(ByteReader& r) {
    DualSig s;
    s.wallet_sig = read_sig(r);
    s.person_sig = read_sig(r);
    return s;
}

}  // namespace

Bytes Invoice::core_bytes() const {
    ByteWriter w;
    w.u64(static_cast<uint64_t>(amount.minor()));
    beneficiary_cert.encode(w);
    beneficiary_wallet_cert.encode(w);
    beneficiary_bank_cert.encode(w);
    w.u64(base_invoice_serial);
    w.u32(coin_slots);
    w.u64(timestamp);
    return w.take();
}

void Invoice::encode(ByteWriter& w) const {
    w.raw(core_bytes());
    w.bytes(wallet_sig.bytes);
    w.bytes(person_sig.bytes);
}

Invoice Invoice::decode(ByteReader& r) {
    Invoice inv;
    inv.amount = Amount::from_minor(static_cast<int64_t>(r.u64()));
    inv.beneficiary_cert = Certificate::decode(r);
    inv.beneficiary_wallet_cert = Certificate::decode(r);
    inv.beneficiary_bank_cert = Certificate::decode(r);
    inv.base_invoice_serial = r.u64();
    inv.coin_slots = r.u32();
    inv.timestamp = r.u64();
    inv.wallet_sig = read_sig(r);
    inv.person_sig = read_sig(r);
    return inv;
}

void TransferProposal::encode(ByteWriter& w) const {
    w.u64(base_invoice_serial);
    w.u32(static_cast<uint32_t>(chains.size()));
    for (const CoinChain& c : chains) c.encode(w);
}

TransferProposal TransferProposal::decode(ByteReader& r) {
    TransferProposal p;
    p.base_invoice_serial = r.u64();
    uint32_t n = r.u32();
    if (n > 4096) throw DecodeError("implausible chain count");
    for (uint32_t i = 0; i < n; ++i) p.chains.push_back(CoinChain::decode(r));
    return p;
}

Bytes Approval::core_bytes() const {
    ByteWriter w;
    w.u64(base_invoice_serial);
    w.bytes(proposal_digest.bytes);
    return w.take();
}

void Approval::encode(ByteWriter& w) const {
    w.raw(core_bytes());
    write_dual(w, sig);
}

Approval Approval::decode(ByteReader& r) {
    Approval a;
    a.base_invoice_serial = r.u64();
    a.proposal_digest = read_digest(r);
    a.sig = read_dual(r);
    return a;
}

Bytes Rejection::core_bytes() const {
    ByteWriter w;
    w.u64(base_invoice_serial);
    w.u32(static_cast<uint32_t>(codes.size()));
    for (FailureCode c : codes) w.u8(static_cast<uint8_t>(c));
    w.u32(static_cast<uint32_t>(repudiations.size()));
    for (const Repudiation& rep : repudiations) {
        w.str(rep.serial);
        w.bytes(rep.signature.bytes);
    }
    return w.take();
}

void Rejection::encode(ByteWriter& w) const {
    w.raw(core_bytes());
    write_dual(w, sig);
}

Rejection Rejection::decode(ByteReader& r) {
    Rejection rej;
    rej.base_invoice_serial = r.u64();
    uint32_t nc = r.u32();
    if (nc > 4096) throw DecodeError("implausible code count");
    for (uint32_t i = 0; i < nc; ++i) {
        uint8_t c = r.u8();
        if (c > static_cast<uint8_t>(FailureCode::timestamp))
            throw DecodeError("bad failure code");
        rej.codes.push_back(static_cast<FailureCode>(c));
    }
    uint32_t nr = r.u32();
    if (nr > 4096) throw DecodeError("implausible repudiation count");
    for (uint32_t i = 0; i < nr; ++i) {
        Repudiation rep;
        rep.serial = r.str();
        rep.signature = read_sig(r);
        rej.repudiations.push_back(std::move(rep));
    }
    rej.sig = read_dual(r);
    return rej;
}

Bytes SecretReveal::core_bytes() const {
    ByteWriter w;
    w.u64(base_invoice_serial);
    w.u32(static_cast<uint32_t>(nonces.size()));
    for (const auto& [key, nonce] : nonces) {
        w.str(key);
        w.bytes(nonce);
    }
    return w.take();
}

void SecretReveal::encode(ByteWriter& w) const {
    w.raw(core_bytes());
    write_dual(w, sig);
}

SecretReveal SecretReveal::decode(ByteReader& r) {
    SecretReveal s;
    s.base_invoice_serial = r.u64();
    uint32_t n = r.u32();
    if (n > 4096) throw DecodeError("implausible nonce count");
    for (uint32_t i = 0; i < n; ++i) {
        std::string key = r.str();
        Bytes nonce = r.bytes();
        if (nonce.size() != 16) throw DecodeError("bad nonce length");
        s.nonces.emplace_back(std::move(key), std::move(nonce));
    }
    s.sig = read_dual(r);
    return s;
}

Bytes RepudiationDelivery::core_bytes() const {
    ByteWriter w;
    w.u64(base_invoice_serial);
    w.u32(static_cast<uint32_t>(repudiations.size()));
    for (const auto& [key, rep] : repudiations) {
        w.str(key);
        w.str(rep.serial);
        w.bytes(rep.signature.bytes);
    }
    return w.take();
}

void RepudiationDelivery::encode(ByteWriter& w) const {
    w.raw(core_bytes());
    write_dual(w, sig);
}

RepudiationDelivery RepudiationDelivery::decode(ByteReader& r) {
    RepudiationDelivery d;
    d.base_invoice_serial = r.u64();
    uint32_t n = r.u32();
    if (n > 4096) throw DecodeError("implausible repudiation count");
    for (uint32_t i = 0; i < n; ++i) {
        std::string key = r.str();
        Repudiation rep;
        rep.serial = r.str();
        rep.signature = read_sig(r);
        d.repudiations.emplace_back(std::move(key), std::move(rep));
    }
    d.sig = read_dual(r);
    return d;
}

Bytes Confirmation::core_bytes() const {
    ByteWriter w;
    w.u64(base_invoice_serial);
    return w.take();
}

void Confirmation::encode(ByteWriter& w) const {
    w.raw(core_bytes());
    write_dual(w, sig);
}

Confirmation Confirmation::decode(ByteReader& r) {
    Confirmation c;
    c.base_invoice_serial = r.u64();
    c.sig = read_dual(r);
    return c;
}

bool verify_dual(const PublicKey& wallet_vk, const PublicKey& person_vk,
                 std::span<const uint8_t> core, const DualSig& sig) {
    return verify(wallet_vk, core, sig.wallet_sig) &&
           verify(person_vk, sig.wallet_sig.bytes, sig.person_sig);
}

// --- Wallet ------------------------------------------------------------------

Wallet::Wallet(WalletConfig config, KeyPair wallet_keys, KeyPair person_keys,
               HolderIdentity id, TrustStore trust, uint64_t rng_seed)
    : config_(config),
      wallet_keys_(std::move(wallet_keys)),
      person_keys_(std::move(person_keys)),
      id_(std::move(id)),
      trust_(std::move(trust)),
      rng_(rng_seed) {
    holder_ = HolderKeys{wallet_keys_, person_keys_, id_};
}

void Wallet::update_identity(KeyPair person_keys, HolderIdentity id) {
    person_keys_ = std::move(person_keys);
    id_ = std::move(id);
    holder_ = HolderKeys{wallet_keys_, person_keys_, id_};
}

Bytes Wallet::next_secret_nonce() {
    Bytes nonce(16);
    for (int half = 0; half < 2; ++half) {
        uint64_t v = rng_();
        for (int i = 0; i < 8; ++i)
            nonce[half * 8 + i] = static_cast<uint8_t>(v >> (56 - 8 * i));
    }
    return nonce;
}

DualSig Wallet::dual_sign(std::span<const uint8_t> core) const {
    DualSig s;
    s.wallet_sig = sign(wallet_keys_.sk, core);
    s.person_sig = sign(person_keys_.sk, s.wallet_sig.bytes);
    return s;
}

void Wallet::add_owned_coin(CoinChain chain,
                            std::optional<DynamicParams> dynamic) {
    std::string key = coin_key(chain);
    if (coins_.count(key))
        throw std::invalid_argument("coin already in the wallet: " + key);
    CoinRecord rec;
    rec.chain = std::move(chain);
    rec.dynamic = dynamic;
    coins_.emplace(std::move(key), std::move(rec));
}

const CoinRecord* Wallet::coin(const std::string& key) const {
    auto it = coins_.find(key);
    return it == coins_.end() ? nullptr : &it->second;
}

Amount Wallet::owned_total() const {
    Amount total;
    for (const auto& [key, rec] : coins_)
        if (rec.status == CoinStatus::owned)
            total += rec.chain.value_in_force();
    return total;
}

std::vector<std::pair<std::string, CoinChain>> Wallet::uploadable_chains()
    const {
    std::vector<std::pair<std::string, CoinChain>> out;
    for (const auto& [key, rec] : coins_)
        if (rec.status == CoinStatus::transferred_awaiting_upload)
            out.emplace_back(key, rec.chain);
    return out;
}

void Wallet::mark_uploaded(const std::string& key) {
    auto it = coins_.find(key);
    if (it == coins_.end()) return;
    if (it->second.status != CoinStatus::transferred_awaiting_upload) return;
    coins_.erase(it);
}

void Wallet::remove_coin(const std::string& key) { coins_.erase(key); }

// --- receiver side -----------------------------------------------------------

Invoice Wallet::create_invoice(Amount amount, uint32_t max_coins, Tick now) {
    if (!amount.positive())
        throw std::invalid_argument("invoice amount must be positive");
    if (max_coins == 0)
        throw std::invalid_argument("invoice needs at least one coin slot");
    if (rpmb_counter_ > UINT64_MAX - max_coins)
        throw std::overflow_error("replay counter exhausted");

    Invoice inv;
    inv.amount = amount;
    inv.beneficiary_cert = id_.person_cert;
    inv.beneficiary_wallet_cert = id_.wallet_cert;
    inv.beneficiary_bank_cert = id_.bank_cert;
    inv.base_invoice_serial = rpmb_counter_;
    inv.coin_slots = max_coins;
    inv.timestamp = now;
    Bytes core = inv.core_bytes();
    inv.wallet_sig = sign(wallet_keys_.sk, core);
    inv.person_sig = sign(person_keys_.sk, inv.wallet_sig.bytes);

    open_invoices_[inv.base_invoice_serial] =
        OpenInvoice{amount, max_coins, {}, false};
    rpmb_counter_ += max_coins;
    return inv;
}

Rejection Wallet::make_rejection(uint64_t base, std::vector<FailureCode> codes,
                                 const TransferProposal& proposal) {
    Rejection rej;
    rej.base_invoice_serial = base;
    rej.codes = std::move(codes);
    // The cancellation signatures go out with the refusal, so the sender
    // can reclaim the coins no matter what failed.
    for (const CoinChain& c : proposal.chains) {
        if (c.blocks.empty()) continue;
        const Block& tip = c.blocks.back();
        if (!tip.person_sig) continue;
        Repudiation rep;
        rep.serial = coin_key(c);
        rep.signature = sign(person_keys_.sk, tip.person_sig->bytes);
        rej.repudiations.push_back(std::move(rep));
    }
    rej.sig = dual_sign(rej.core_bytes());
    return rej;
}

std::variant<Approval, Rejection> Wallet::receive_proposal(
    const TransferProposal& proposal, Tick now) {
    const uint64_t base = proposal.base_invoice_serial;
    std::vector<FailureCode> codes;
    auto fail = [&](FailureCode c) {
        if (std::find(codes.begin(), codes.end(), c) == codes.end())
            codes.push_back(c);
    };

    auto inv_it = open_invoices_.find(base);
    if (inv_it == open_invoices_.end() || inv_it->second.closed)
        return make_rejection(base, {FailureCode::counter}, proposal);
    OpenInvoice& invoice = inv_it->second;

    if (proposal.chains.empty())
        return make_rejection(base, {FailureCode::variant}, proposal);

    Amount total;
    for (const CoinChain& c : proposal.chains) total += c.value_in_force();
    if (!(total == invoice.amount)) fail(FailureCode::value);

    std::optional<PublicKey> sender_person;
    std::optional<PublicKey> sender_wallet;
    std::set<uint64_t> seen_serials;
    std::vector<Digest> tip_hashes;

    for (const CoinChain& c : proposal.chains) {
        if (c.blocks.empty() || !c.blocks.back().is_transfer() ||
            c.blocks.back().secret_nonce) {
            fail(FailureCode::variant);
            continue;
        }
        const Block& tip = c.blocks.back();
        tip_hashes.push_back(tip.hash);

        // Dynamic coins announce themselves by the mined nonce on the tip.
        std::optional<DynamicParams> dyn;
        if (tip.mined_nonce) dyn = config_.dynamic;

        ValidationReport report = validate_chain(c, trust_, dyn, now);
        if (!report.valid)
            for (const auto& f : report.failures) fail(f.code);
        if (dyn && report.blocks_behind > config_.dynamic.max_backlog)
            fail(FailureCode::difficulty);  // a slow coin transfers no more

        if (c.genesis.kind.is_hot() && now > *c.genesis.kind.expiration)
            fail(FailureCode::timestamp);

        // The transfer must be addressed to this wallet's holder.
        if (!(tip.holder_cert.subject_vk == person_keys_.vk) ||
            !(tip.wallet_cert.subject_vk == wallet_keys_.vk))
            fail(FailureCode::certificate);

        // One payer per payment.
        try {
            HolderInfo h = current_holder(c);
            if (!sender_person) {
                sender_person = h.person_vk;
                sender_wallet = h.wallet_vk;
            } else if (!(*sender_person == h.person_vk)) {
                fail(FailureCode::variant);
            }
        } catch (const std::invalid_argument&) {
            fail(FailureCode::variant);
        }

        // Replay protection: the invoice serial must hit a fresh slot.
        if (!tip.invoice_serial) {
            fail(FailureCode::counter);
        } else {
            uint64_t serial = *tip.invoice_serial;
            bool in_range = serial >= base && serial - base < invoice.slots;
            if (!in_range || invoice.in_use.count(serial) ||
                consumed_invoices_.count(serial) || seen_serials.count(serial))
                fail(FailureCode::counter);
            seen_serials.insert(serial);
        }
        if (coins_.count(coin_key(c))) fail(FailureCode::counter);
    }

    if (!codes.empty()) return make_rejection(base, std::move(codes), proposal);
    if (!sender_person)
        return make_rejection(base, {FailureCode::variant}, proposal);

    // Approved: escrow a standby repudiation for every coin, then sign the
    // payment as a whole.
    ByteWriter digest_input;
    for (const Digest& h : tip_hashes) digest_input.raw(h.bytes);
    Digest proposal_digest = sha256(digest_input.data());

    IncomingPayment payment;
    payment.sender_person_vk = *sender_person;
    payment.sender_wallet_vk = *sender_wallet;
    payment.proposal_digest = proposal_digest;
    for (const CoinChain& c : proposal.chains) {
        const Block& tip = c.blocks.back();
        CoinRecord rec;
        rec.chain = c;
        rec.status = CoinStatus::pending_incoming;
        rec.standby_repudiation = sign(person_keys_.sk, tip.person_sig->bytes);
        if (tip.mined_nonce) rec.dynamic = config_.dynamic;
        std::string key = coin_key(c);
        payment.coin_keys.push_back(key);
        coins_.emplace(std::move(key), std::move(rec));
        invoice.in_use.insert(*tip.invoice_serial);
    }
    incoming_[base] = std::move(payment);

    Approval approval;
    approval.base_invoice_serial = base;
    approval.proposal_digest = proposal_digest;
    approval.sig = dual_sign(approval.core_bytes());
    return approval;
}

std::optional<std::variant<Confirmation, RepudiationDelivery>>
Wallet::finalize_receive(const SecretReveal& reveal, Tick) {
    auto it = incoming_.find(reveal.base_invoice_serial);
    if (it == incoming_.end() || it->second.settled) return std::nullopt;
    IncomingPayment& payment = it->second;

    if (!verify_dual(payment.sender_wallet_vk, payment.sender_person_vk,
                     reveal.core_bytes(), reveal.sig))
        return std::nullopt;

    // The last step of the handshake: one hash recomputation per coin.
    std::map<std::string, Bytes> nonce_by_key;
    for (const auto& [key, nonce] : reveal.nonces) nonce_by_key[key] = nonce;

    bool all_match = true;
    std::map<std::string, CoinChain> completed;
    for (const std::string& key : payment.coin_keys) {
        auto coin_it = coins_.find(key);
        if (coin_it == coins_.end() ||
            coin_it->second.status != CoinStatus::pending_incoming) {
            all_match = false;
            break;
        }
        auto nonce_it = nonce_by_key.find(key);
        if (nonce_it == nonce_by_key.end()) {
            all_match = false;
            break;
        }
        CoinChain candidate = coin_it->second.chain;
        candidate.blocks.back().secret_nonce = nonce_it->second;
        if (!(block_hash(candidate.blocks.back()) ==
              candidate.blocks.back().hash)) {
            all_match = false;
            break;
        }
        completed[key] = std::move(candidate);
    }

    payment.settled = true;
    if (all_match) {
        for (const std::string& key : payment.coin_keys) {
            CoinRecord& rec = coins_.at(key);
            rec.chain = std::move(completed.at(key));
            rec.status = CoinStatus::owned;
            rec.standby_repudiation.reset();
            consumed_invoices_.insert(*rec.chain.blocks.back().invoice_serial);
        }
        auto inv_it = open_invoices_.find(reveal.base_invoice_serial);
        if (inv_it != open_invoices_.end()) inv_it->second.closed = true;
        Confirmation conf;
        conf.base_invoice_serial = reveal.base_invoice_serial;
        conf.sig = dual_sign(conf.core_bytes());
        return std::variant<Confirmation, RepudiationDelivery>(conf);
    }

    // Failed reveal: ship the standby cancellations and drop the coins.
    RepudiationDelivery delivery;
    delivery.base_invoice_serial = reveal.base_invoice_serial;
    for (const std::string& key : payment.coin_keys) {
        auto coin_it = coins_.find(key);
        if (coin_it == coins_.end()) continue;
        if (coin_it->second.standby_repudiation) {
            Repudiation rep{key, *coin_it->second.standby_repudiation};
            delivered_repudiations_[key] = rep;
            delivery.repudiations.emplace_back(key, rep);
        }
        coins_.erase(coin_it);
    }
    delivery.sig = dual_sign(delivery.core_bytes());
    return std::variant<Confirmation, RepudiationDelivery>(delivery);
}

std::optional<RepudiationDelivery> Wallet::expire_incoming(
    uint64_t base_invoice_serial) {
    auto it = incoming_.find(base_invoice_serial);
    if (it == incoming_.end() || it->second.settled) return std::nullopt;
    it->second.settled = true;

    RepudiationDelivery delivery;
    delivery.base_invoice_serial = base_invoice_serial;
    for (const std::string& key : it->second.coin_keys) {
        auto coin_it = coins_.find(key);
        if (coin_it == coins_.end()) continue;
        if (coin_it->second.standby_repudiation) {
            Repudiation rep{key, *coin_it->second.standby_repudiation};
            delivered_repudiations_[key] = rep;
            delivery.repudiations.emplace_back(key, rep);
        }
        coins_.erase(coin_it);
    }
    delivery.sig = dual_sign(delivery.core_bytes());
    return delivery;
}

std::vector<Repudiation> Wallet::exportable_repudiations() const {
    std::vector<Repudiation> out;
    for (const auto& [key, rec] : coins_)
        if (rec.status == CoinStatus::pending_incoming &&
            rec.standby_repudiation)
            out.push_back(Repudiation{key, *rec.standby_repudiation});
    for (const auto& [key, rep] : delivered_repudiations_) out.push_back(rep);
    return out;
}

// --- sender side ---------------------------------------------------------------

TransferProposal Wallet::prepare_payment(const Invoice& invoice, Tick now) {
    if (!invoice.amount.positive())
        throw std::invalid_argument("invoice amount must be positive");
    if (outgoing_.count(invoice.base_invoice_serial))
        throw std::invalid_argument("payment for this invoice already made");

    // The beneficiary's paperwork must check out before any coin moves.
    if (!verify_certificate_path(invoice.beneficiary_cert,
                                 &invoice.beneficiary_bank_cert, trust_) ||
        !verify_certificate_path(invoice.beneficiary_wallet_cert,
                                 &invoice.beneficiary_bank_cert, trust_))
        throw std::invalid_argument("beneficiary certificates do not verify");
    if (invoice.beneficiary_cert.role != CertRole::person ||
        invoice.beneficiary_wallet_cert.role != CertRole::wallet ||
        !invoice.beneficiary_cert.linked_vk ||
        !(*invoice.beneficiary_cert.linked_vk ==
          invoice.beneficiary_wallet_cert.subject_vk))
        throw std::invalid_argument("beneficiary certificates do not link");
    if (!verify(invoice.beneficiary_wallet_cert.subject_vk,
                invoice.core_bytes(), invoice.wallet_sig) ||
        !verify(invoice.beneficiary_cert.subject_vk, invoice.wallet_sig.bytes,
                invoice.person_sig))
        throw std::invalid_argument("invoice signature does not verify");

    // Largest-first selection over spendable coins.
    std::vector<std::pair<std::string, Amount>> eligible;
    for (const auto& [key, rec] : coins_) {
        if (rec.status != CoinStatus::owned || rec.slow) continue;
        if (rec.chain.genesis.kind.is_hot() &&
            now > *rec.chain.genesis.kind.expiration)
            continue;
        eligible.emplace_back(key, rec.chain.value_in_force());
    }
    std::sort(eligible.begin(), eligible.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
              });

    std::vector<std::string> selected;
    Amount total;
    for (const auto& [key, value] : eligible) {
        if (total >= invoice.amount) break;
        selected.push_back(key);
        total += value;
    }
    if (total < invoice.amount)
        throw std::invalid_argument("insufficient funds");
    if (selected.size() > invoice.coin_slots)
        throw std::invalid_argument(
            "payment needs more coins than the invoice reserved slots for");

    HolderIdentity beneficiary{invoice.beneficiary_cert,
                               invoice.beneficiary_wallet_cert,
                               invoice.beneficiary_bank_cert};

    // Exact change: fork the last selected coin once if needed.
    if (total > invoice.amount) {
        const std::string last_key = selected.back();
        CoinRecord& last = coins_.at(last_key);
        if (last.chain.genesis.kind.is_hot())
            throw std::invalid_argument(
                "exact change needs fractioning, which hot coins do not "
                "support");
        Amount last_value = last.chain.value_in_force();
        Amount needed = invoice.amount - (total - last_value);
        std::optional<DynamicParams> dyn = last.dynamic;
        auto [pay_chain, keep_chain] =
            fork_chain(last.chain, needed, last_value - needed, holder_, now,
                       dyn);
        coins_.erase(last_key);
        add_owned_coin(keep_chain, dyn);
        add_owned_coin(pay_chain, dyn);
        selected.back() = coin_key(pay_chain);
    }

    TransferProposal proposal;
    proposal.base_invoice_serial = invoice.base_invoice_serial;
    OutgoingPayment payment;
    payment.beneficiary_person_vk = invoice.beneficiary_cert.subject_vk;
    payment.beneficiary_wallet_vk = invoice.beneficiary_wallet_cert.subject_vk;

    ByteWriter digest_input;
    uint64_t offset = 0;
    for (const std::string& key : selected) {
        CoinRecord& rec = coins_.at(key);
        Bytes nonce = next_secret_nonce();
        Block transfer = make_transfer_block(
            rec.chain, holder_, beneficiary,
            invoice.base_invoice_serial + offset, nonce, now, rec.dynamic);
        ++offset;
        digest_input.raw(transfer.hash.bytes);
        proposal.chains.push_back(
            append_block(rec.chain, withhold_secret(transfer)));
        rec.escrow = std::make_pair(std::move(nonce), std::move(transfer));
        rec.status = CoinStatus::pending_outgoing;
        payment.coin_keys.push_back(key);
    }
    payment.proposal_digest = sha256(digest_input.data());
    outgoing_[invoice.base_invoice_serial] = std::move(payment);
    return proposal;
}

std::optional<SecretReveal> Wallet::reveal_secret(const Approval& approval,
                                                  Tick) {
    auto it = outgoing_.find(approval.base_invoice_serial);
    if (it == outgoing_.end()) return std::nullopt;
    OutgoingPayment& payment = it->second;
    if (payment.revealed) return std::nullopt;

    if (!verify_dual(payment.beneficiary_wallet_vk,
                     payment.beneficiary_person_vk, approval.core_bytes(),
                     approval.sig))
        return std::nullopt;
    if (!(approval.proposal_digest == payment.proposal_digest))
        return std::nullopt;

    // The approval is genuine: append the transfer blocks for good and
    // hand over the secrets.
    SecretReveal reveal;
    reveal.base_invoice_serial = approval.base_invoice_serial;
    for (const std::string& key : payment.coin_keys) {
        CoinRecord& rec = coins_.at(key);
        if (rec.status != CoinStatus::pending_outgoing || !rec.escrow)
            return std::nullopt;
        auto& [nonce, block] = *rec.escrow;
        rec.chain = append_block(rec.chain, block);
        reveal.nonces.emplace_back(key, nonce);
        rec.status = CoinStatus::transferred_awaiting_upload;
        rec.escrow.reset();
    }
    payment.revealed = true;
    reveal.sig = dual_sign(reveal.core_bytes());
    return reveal;
}

bool Wallet::handle_rejection(const Rejection& rejection) {
    auto it = outgoing_.find(rejection.base_invoice_serial);
    if (it == outgoing_.end() || it->second.revealed) return false;
    if (!verify_dual(it->second.beneficiary_wallet_vk,
                     it->second.beneficiary_person_vk, rejection.core_bytes(),
                     rejection.sig))
        return false;
    return abort_payment(rejection.base_invoice_serial);
}

bool Wallet::abort_payment(uint64_t base_invoice_serial) {
    auto it = outgoing_.find(base_invoice_serial);
    if (it == outgoing_.end() || it->second.revealed) return false;
    for (const std::string& key : it->second.coin_keys) {
        auto coin_it = coins_.find(key);
        if (coin_it == coins_.end()) continue;
        if (coin_it->second.status == CoinStatus::pending_outgoing) {
            coin_it->second.escrow.reset();  // the transfer block is burned
            coin_it->second.status = CoinStatus::owned;
        }
    }
    outgoing_.erase(it);
    return true;
}

bool Wallet::apply_repudiation(const std::string& key,
                               const Signature& rep_sig) {
    auto it = coins_.find(key);
    if (it == coins_.end()) return false;
    CoinRecord& rec = it->second;

    const Block* transfer = nullptr;
    if (rec.status == CoinStatus::pending_outgoing && rec.escrow) {
        transfer = &rec.escrow->second;
    } else if (rec.status == CoinStatus::transferred_awaiting_upload ||
               rec.status == CoinStatus::error_flagged) {
        transfer = &rec.chain.blocks.back();
    } else if (rec.status == CoinStatus::owned && !rec.chain.blocks.empty() &&
               rec.chain.blocks.back().repudiation_sig == rep_sig) {
        return true;  // already applied
    } else {
        return false;
    }
    if (!transfer->is_transfer() || !transfer->person_sig) return false;
    if (!verify(transfer->holder_cert.subject_vk, transfer->person_sig->bytes,
                rep_sig))
        return false;

    if (rec.status == CoinStatus::pending_outgoing) {
        // Never appended; the cancellation just burns the escrow.
        rec.escrow.reset();
    } else {
        rec.chain.blocks.back().repudiation_sig = rep_sig;
    }
    rec.status = CoinStatus::owned;
    return true;
}

void Wallet::flag_error(const std::string& key) {
    auto it = coins_.find(key);
    if (it == coins_.end()) throw std::invalid_argument("unknown coin: " + key);
    if (it->second.status != CoinStatus::transferred_awaiting_upload)
        throw std::invalid_argument(
            "only a transferred, disputed coin can be flagged");
    it->second.status = CoinStatus::error_flagged;
}

// --- mining --------------------------------------------------------------------

std::vector<MineEvent> Wallet::mine_tick(Tick now) {
    std::vector<MineEvent> events;
    for (auto& [key, rec] : coins_) {
        if (!rec.dynamic || rec.slow) continue;
        if (rec.status != CoinStatus::owned) continue;  // paused mid-handshake
        const DynamicParams& dyn = *rec.dynamic;
        uint64_t due = blocks_behind(rec.chain, now, dyn.interval);
        if (due == 0) continue;
        if (due > dyn.max_backlog) {
            rec.slow = true;
            events.push_back({key, 0, true});
            continue;
        }
        // Backlog blocks take their scheduled timestamps, so the deficit
        // stays meaningful across a partial catch-up.
        uint64_t appends = std::min<uint64_t>(due, 1 + dyn.catchup_rate);
        for (uint64_t i = 0; i < appends; ++i) {
            Tick slot = rec.chain.tip_timestamp() + dyn.interval;
            rec.chain = append_block(
                rec.chain, make_mined_block(rec.chain, holder_, slot, dyn));
        }
        events.push_back({key, appends, false});
    }
    return events;
}

// --- persistence -----------------------------------------------------------------

namespace {

constexpr uint8_t kSnapshotVersion = 1;

Bytes seal_secret(const Bytes& plain, const Wallet::SnapshotKey& key) {
    Bytes out(plain.size() + crypto_secretbox_MACBYTES);
    // Single-use snapshot keys; a fixed nonce keeps snapshots byte-stable.
    static const uint8_t nonce[crypto_secretbox_NONCEBYTES] = {0};
    crypto_secretbox_easy(out.data(), plain.data(), plain.size(), nonce,
                          key.data());
    return out;
}

Bytes open_secret(const Bytes& sealed, const Wallet::SnapshotKey& key) {
    if (sealed.size() < crypto_secretbox_MACBYTES)
        throw DecodeError("sealed blob too short");
    Bytes out(sealed.size() - crypto_secretbox_MACBYTES);
    static const uint8_t nonce[crypto_secretbox_NONCEBYTES] = {0};
    if (crypto_secretbox_open_easy(out.data(), sealed.data(), sealed.size(),
                                   nonce, key.data()) != 0)
        throw DecodeError("snapshot key does not open the sealed keys");
    return out;
}

void encode_dynamic(ByteWriter& w, const std::optional<DynamicParams>& dyn) {
    if (!dyn) {
        w.u32(0);
        return;
    }
    w.u32(1);
    w.u64(dyn->difficulty_bits);
    w.u64(dyn->interval);
    w.u64(dyn->max_backlog);
    w.u64(dyn->catchup_rate);
}

std::optional<DynamicParams> decode_dynamic(ByteReader& r) {
    if (r.u32() == 0) return std::nullopt;
    DynamicParams dyn;
    dyn.difficulty_bits = static_cast<unsigned>(r.u64());
    dyn.interval = r.u64();
    dyn.max_backlog = r.u64();
    dyn.catchup_rate = static_cast<unsigned>(r.u64());
    return dyn;
}

}  // namespace

Bytes Wallet::snapshot(const SnapshotKey& key) const {
    ByteWriter w;
    w.u8(kSnapshotVersion);
    w.bytes(wallet_keys_.vk.bytes);
    w.bytes(person_keys_.vk.bytes);

    Bytes secret;
    secret.insert(secret.end(), wallet_keys_.sk.bytes.begin(),
                  wallet_keys_.sk.bytes.end());
    secret.insert(secret.end(), person_keys_.sk.bytes.begin(),
                  person_keys_.sk.bytes.end());
    w.bytes(seal_secret(secret, key));

    id_.person_cert.encode(w);
    id_.wallet_cert.encode(w);
    id_.bank_cert.encode(w);
    w.u64(rpmb_counter_);
    w.u32(static_cast<uint32_t>(consumed_invoices_.size()));
    for (uint64_t s : consumed_invoices_) w.u64(s);

    std::ostringstream rng_state;
    rng_state << rng_;
    w.str(rng_state.str());

    w.u32(static_cast<uint32_t>(coins_.size()));
    for (const auto& [coin_id, rec] : coins_) {
        w.str(coin_id);
        rec.chain.encode(w);
        w.u8(static_cast<uint8_t>(rec.status));
        if (rec.escrow) {
            w.u32(1);
            w.bytes(rec.escrow->first);
            rec.escrow->second.encode(w);
        } else {
            w.u32(0);
        }
        if (rec.standby_repudiation) {
            w.u32(1);
            w.bytes(rec.standby_repudiation->bytes);
        } else {
            w.u32(0);
        }
        encode_dynamic(w, rec.dynamic);
        w.u8(rec.slow ? 1 : 0);
    }

    w.u32(static_cast<uint32_t>(open_invoices_.size()));
    for (const auto& [base, inv] : open_invoices_) {
        w.u64(base);
        w.u64(static_cast<uint64_t>(inv.amount.minor()));
        w.u32(inv.slots);
        w.u32(static_cast<uint32_t>(inv.in_use.size()));
        for (uint64_t s : inv.in_use) w.u64(s);
        w.u8(inv.closed ? 1 : 0);
    }
    return w.take();
}

Wallet Wallet::restore(std::span<const uint8_t> data, const SnapshotKey& key,
                       WalletConfig config, TrustStore trust) {
    ByteReader r(data);
    if (r.u8() != kSnapshotVersion)
        throw DecodeError("unknown snapshot version");

    KeyPair wallet_keys;
    KeyPair person_keys;
    {
        Bytes vk = r.bytes();
        if (vk.size() != kPublicKeySize) throw DecodeError("bad key length");
        std::copy(vk.begin(), vk.end(), wallet_keys.vk.bytes.begin());
        vk = r.bytes();
        if (vk.size() != kPublicKeySize) throw DecodeError("bad key length");
        std::copy(vk.begin(), vk.end(), person_keys.vk.bytes.begin());
        Bytes secret = open_secret(r.bytes(), key);
        if (secret.size() != 2 * kSecretKeySize)
            throw DecodeError("bad sealed key material");
        std::copy(secret.begin(), secret.begin() + kSecretKeySize,
                  wallet_keys.sk.bytes.begin());
        std::copy(secret.begin() + kSecretKeySize, secret.end(),
                  person_keys.sk.bytes.begin());
    }

    HolderIdentity id;
    id.person_cert = Certificate::decode(r);
    id.wallet_cert = Certificate::decode(r);
    id.bank_cert = Certificate::decode(r);

    Wallet w(std::move(config), std::move(wallet_keys), std::move(person_keys),
             std::move(id), std::move(trust), 0);

    w.rpmb_counter_ = r.u64();
    uint32_t n = r.u32();
    for (uint32_t i = 0; i < n; ++i) w.consumed_invoices_.insert(r.u64());

    std::istringstream rng_state(r.str());
    rng_state >> w.rng_;
    if (!rng_state) throw DecodeError("bad generator state");

    n = r.u32();
    for (uint32_t i = 0; i < n; ++i) {
        std::string coin_id = r.str();
        CoinRecord rec;
        rec.chain = CoinChain::decode(r);
        uint8_t status = r.u8();
        if (status > static_cast<uint8_t>(CoinStatus::error_flagged))
            throw DecodeError("bad coin status");
        rec.status = static_cast<CoinStatus>(status);
        if (r.u32() == 1) {
            Bytes nonce = r.bytes();
            Block block = Block::decode(r);
            rec.escrow = std::make_pair(std::move(nonce), std::move(block));
        }
        if (r.u32() == 1) {
            Bytes sig = r.bytes();
            if (sig.size() != kSignatureSize)
                throw DecodeError("bad signature length");
            Signature s;
            std::copy(sig.begin(), sig.end(), s.bytes.begin());
            rec.standby_repudiation = s;
        }
        rec.dynamic = decode_dynamic(r);
        rec.slow = r.u8() != 0;
        w.coins_.emplace(std::move(coin_id), std::move(rec));
    }

    n = r.u32();
    for (uint32_t i = 0; i < n; ++i) {
        uint64_t base = r.u64();
        OpenInvoice inv;
        inv.amount = Amount::from_minor(static_cast<int64_t>(r.u64()));
        inv.slots = r.u32();
        uint32_t used = r.u32();
        for (uint32_t j = 0; j < used; ++j) inv.in_use.insert(r.u64());
        inv.closed = r.u8() != 0;
        w.open_invoices_.emplace(base, std::move(inv));
    }
    r.expect_end();
    return w;
}

}  // namespace offcash
