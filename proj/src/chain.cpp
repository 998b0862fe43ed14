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

#include "offcash/chain.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "offcash/mine.hpp"

namespace offcash {

const char* to_string(FailureCode code) {
    switch (code) {
        case FailureCode::hash_link: return "hash-link";
        case FailureCode::signature: return "signature";
        case FailureCode::certificate: return "certificate";
        case FailureCode::variant: return "variant";
        case FailureCode::value: return "value";
        case FailureCode::counter: return "counter";
        case FailureCode::difficulty: return "difficulty";
        case FailureCode::timestamp: return "timestamp";
    }
    return "?";
}

std::string ValidationReport::summary() const {
    if (valid) return "valid";
    std::ostringstream os;
    os << "invalid:";
    for (const auto& f : failures)
        os << " (" << f.block_index << "," << to_string(f.code) << ")";
    return os.str();
}

namespace {

// Identity of the chain's current holder while walking block by block.
struct WalkState {
    PublicKey person_vk;
    PublicKey wallet_vk;
    bool holder_is_bank = true;  // true until the delivery block
};

/// Classification; nullopt when no variant rule matches.
std::optional<BlockVariant> classify(const Block& b, size_t index) {
    if (b.child_value) {
        if (b.invoice_serial || b.secret_nonce) return std::nullopt;
        if (index == 1) return std::nullopt;  // fork cannot precede delivery
        return BlockVariant::fork;
    }
    if (b.invoice_serial) {
        if (index == 1) return std::nullopt;
        return BlockVariant::transfer;
    }
    if (b.secret_nonce) return std::nullopt;  // secret implies a transfer
    if (index == 1) return BlockVariant::delivery;
    if (b.mined_nonce) return BlockVariant::mined;
    return std::nullopt;
}

bool holder_certs_ok(const Block& b, const TrustStore& trust) {
    if (b.holder_cert.role != CertRole::person) return false;
    if (b.wallet_cert.role != CertRole::wallet) return false;
    if (b.bank_cert.role != CertRole::bank) return false;
    if (!verify_certificate_path(b.holder_cert, &b.bank_cert, trust))
        return false;
    if (!verify_certificate_path(b.wallet_cert, &b.bank_cert, trust))
        return false;
    // Person and wallet certificates must cross-link each other.
    if (!b.holder_cert.linked_vk || !b.wallet_cert.linked_vk) return false;
    if (!(*b.holder_cert.linked_vk == b.wallet_cert.subject_vk)) return false;
    if (!(*b.wallet_cert.linked_vk == b.holder_cert.subject_vk)) return false;
    return true;
}

}  // namespace

uint64_t blocks_behind(const CoinChain& chain, Tick now, Tick interval) {
    if (interval == 0) return 0;
    Tick tip = chain.tip_timestamp();
    if (now <= tip) return 0;
    return (now - tip) / interval;
}

ValidationReport validate_chain(const CoinChain& chain, const TrustStore& trust,
                                const std::optional<DynamicParams>& dynamic,
                                Tick now) {
    ValidationReport report;
    const GenesisBlock& g = chain.genesis;

    // Genesis.
    if (!(block_hash(g) == g.hash)) report.add(0, FailureCode::hash_link);
    if (!verify(g.central_vk, g.hash.bytes, g.central_sig))
        report.add(0, FailureCode::signature);
    if (!trust.trusts(g.central_vk)) report.add(0, FailureCode::certificate);
    if (!verify_certificate_path(g.bank_cert, nullptr, trust) ||
        g.bank_cert.role != CertRole::bank)
        report.add(0, FailureCode::certificate);
    if (!g.value.positive()) report.add(0, FailureCode::value);
    if (g.kind.is_hot()) {
        if (!g.kind.claim_deadline ||
            *g.kind.expiration >= *g.kind.claim_deadline)
            report.add(0, FailureCode::variant);
    } else if (g.kind.claim_deadline) {
        report.add(0, FailureCode::variant);
    }
    if (g.timestamp > now) report.add(0, FailureCode::timestamp);

    WalkState holder{g.bank_cert.subject_vk, g.bank_cert.subject_vk, true};
    Bytes expected_prev = g.signed_hash();
    Tick prev_time = g.timestamp;
    Amount value = g.value;

    for (size_t j = 0; j < chain.blocks.size(); ++j) {
        const Block& b = chain.blocks[j];
        const size_t index = j + 1;
        const bool is_tip = (j + 1 == chain.blocks.size());

        if (b.prev_signed_hash != expected_prev)
            report.add(index, FailureCode::hash_link);

        std::optional<BlockVariant> variant = classify(b, index);
        if (!variant) {
            report.add(index, FailureCode::variant);
            // Without a variant the remaining rules are meaningless;
            // linkage for the rest of the chain still gets checked.
            expected_prev = b.signed_hash();
            prev_time = std::max(prev_time, b.timestamp);
            continue;
        }

        // Hash recomputation. A withheld secret defers the final check to
        // the reveal; the signature over the claimed hash is still binding.
        bool withheld =
            *variant == BlockVariant::transfer && !b.secret_nonce;
        if (withheld && !is_tip) {
            report.add(index, FailureCode::variant);
        } else if (withheld) {
            report.deferred_tip = true;
        } else if (!(block_hash(b) == b.hash)) {
            report.add(index, FailureCode::hash_link);
        }

        if (!holder_certs_ok(b, trust))
            report.add(index, FailureCode::certificate);

        // Holder continuity: mined and fork blocks keep the same holder.
        if (*variant == BlockVariant::mined || *variant == BlockVariant::fork) {
            if (holder.holder_is_bank ||
                !(b.holder_cert.subject_vk == holder.person_vk) ||
                !(b.wallet_cert.subject_vk == holder.wallet_vk))
                report.add(index, FailureCode::variant);
        }

        // Signatures: the previous holder authorizes the block.
        switch (*variant) {
            case BlockVariant::delivery:
                if (!verify(g.bank_cert.subject_vk, b.hash.bytes, b.wallet_sig))
                    report.add(index, FailureCode::signature);
                if (b.person_sig) report.add(index, FailureCode::variant);
                break;
            case BlockVariant::mined:
                if (!verify(holder.wallet_vk, b.hash.bytes, b.wallet_sig))
                    report.add(index, FailureCode::signature);
                if (b.person_sig) report.add(index, FailureCode::variant);
                break;
            case BlockVariant::fork:
            case BlockVariant::transfer:
                if (!verify(holder.wallet_vk, b.hash.bytes, b.wallet_sig))
                    report.add(index, FailureCode::signature);
                if (!b.person_sig)
                    report.add(index, FailureCode::variant);
                else if (!verify(holder.person_vk, b.wallet_sig.bytes,
                                 *b.person_sig))
                    report.add(index, FailureCode::signature);
                break;
        }
        if (b.repudiation_sig) {
            if (*variant != BlockVariant::transfer) {
                report.add(index, FailureCode::variant);
            } else if (!b.person_sig ||
                       !verify(b.holder_cert.subject_vk, b.person_sig->bytes,
                               *b.repudiation_sig)) {
                report.add(index, FailureCode::signature);
            }
        }

        // Value rules.
        if (*variant == BlockVariant::fork) {
            if (g.kind.is_hot()) {
                report.add(index, FailureCode::variant);  // cold coins only
            }
            if (!b.child_value->positive() || !(*b.child_value < value))
                report.add(index, FailureCode::value);
            else
                value = *b.child_value;
        }

        // Hot coins spend only until the expiration date.
        if (g.kind.is_hot() && *variant == BlockVariant::transfer &&
            b.timestamp > *g.kind.expiration)
            report.add(index, FailureCode::timestamp);

        // Dynamic chains: every block after genesis is mined.
        if (dynamic) {
            if (!b.mined_nonce ||
                leading_zero_bits(b.hash) < dynamic->difficulty_bits)
                report.add(index, FailureCode::difficulty);
        }

        if (b.timestamp < prev_time) report.add(index, FailureCode::timestamp);
        if (b.timestamp > now) report.add(index, FailureCode::timestamp);
        prev_time = std::max(prev_time, b.timestamp);

        // Ownership after this block.
        if (*variant == BlockVariant::delivery ||
            (*variant == BlockVariant::transfer && !withheld &&
             !b.repudiation_sig)) {
            holder.person_vk = b.holder_cert.subject_vk;
            holder.wallet_vk = b.wallet_cert.subject_vk;
            holder.holder_is_bank = false;
        }

        expected_prev = b.signed_hash();
    }

    if (dynamic)
        report.blocks_behind = blocks_behind(chain, now, dynamic->interval);
    return report;
}

HolderInfo current_holder(const CoinChain& chain) {
    HolderInfo info{chain.genesis.bank_cert.subject_vk,
                    chain.genesis.bank_cert.subject_vk,
                    HolderStatus::settled};
    for (size_t j = 0; j < chain.blocks.size(); ++j) {
        const Block& b = chain.blocks[j];
        std::optional<BlockVariant> variant = classify(b, j + 1);
        if (!variant)
            throw std::invalid_argument("unclassifiable block in chain");
        const bool is_tip = (j + 1 == chain.blocks.size());
        if (*variant == BlockVariant::transfer) {
            if (!b.secret_nonce) {
                if (!is_tip)
                    throw std::invalid_argument("withheld secret mid-chain");
                info.status = HolderStatus::pending_reveal;
            } else if (b.repudiation_sig) {
                if (is_tip) info.status = HolderStatus::repudiated;
            } else {
                info.person_vk = b.holder_cert.subject_vk;
                info.wallet_vk = b.wallet_cert.subject_vk;
                if (is_tip) info.status = HolderStatus::settled;
            }
        } else if (*variant == BlockVariant::delivery) {
            info.person_vk = b.holder_cert.subject_vk;
            info.wallet_vk = b.wallet_cert.subject_vk;
        }
    }
    return info;
}

const CoinChain* longest_valid_chain(std::span<const CoinChain> candidates,
                                     const TrustStore& trust,
                                     const std::optional<DynamicParams>& dynamic,
                                     Tick now) {
    const CoinChain* best = nullptr;
    for (const CoinChain& c : candidates) {
        ValidationReport r = validate_chain(c, trust, dynamic, now);
        if (!r.valid || r.deferred_tip) continue;
        if (!best) {
            best = &c;
            continue;
        }
        if (c.length() != best->length()) {
            if (c.length() > best->length()) best = &c;
            continue;
        }
        if (c.tip_timestamp() != best->tip_timestamp()) {
            if (c.tip_timestamp() < best->tip_timestamp()) best = &c;
            continue;
        }
        if (!(c.tip_hash() == best->tip_hash())) {
            if (c.tip_hash() < best->tip_hash()) best = &c;
            continue;
        }
        // Same tip hash: the copies differ at most in the repudiation
        // signature, which is not hashed. The repudiated copy carries the
        // beneficiary's own cancellation and wins.
        bool c_rep = !c.blocks.empty() && c.blocks.back().repudiation_sig;
        bool b_rep =
            !best->blocks.empty() && best->blocks.back().repudiation_sig;
        if (c_rep && !b_rep) best = &c;
    }
    return best;
}

CoinChain append_block(const CoinChain& chain, Block block) {
    if (block.prev_signed_hash != chain.tip_signed_hash())
        throw std::invalid_argument("block does not link to the chain tip");
    if (block.timestamp < chain.tip_timestamp())
        throw std::invalid_argument("block timestamp precedes the chain tip");
    CoinChain out = chain;
    out.blocks.push_back(std::move(block));
    return out;
}

namespace {

/// Common scaffold: linkage, timestamp and the holder certificates.
Block start_block(const CoinChain& chain, const HolderIdentity& holder,
                  Tick now) {
    Block b;
    b.prev_signed_hash = chain.tip_signed_hash();
    b.timestamp = now;
    b.holder_cert = holder.person_cert;
    b.wallet_cert = holder.wallet_cert;
    b.bank_cert = holder.bank_cert;
    return b;
}

/// Mines the nonce when requested, then freezes the hash field.
void seal_hash(Block& b, const std::optional<DynamicParams>& dynamic) {
    if (dynamic) {
        b.mined_nonce = 0;
        auto [preimage, offset] = b.preimage_for_mining();
        MineResult mined = mine_nonce(preimage, offset,
                                      dynamic->difficulty_bits);
        b.mined_nonce = mined.nonce;
        b.hash = mined.hash;
    } else {
        b.hash = block_hash(b);
    }
}

}  // namespace

Block make_delivery_block(const CoinChain& chain, const HolderIdentity& to,
                          const KeyPair& bank_keys, Tick now,
                          const std::optional<DynamicParams>& dynamic) {
    Block b = start_block(chain, to, now);
    seal_hash(b, dynamic);
    b.wallet_sig = sign(bank_keys.sk, b.hash.bytes);
    return b;
}

Block make_mined_block(const CoinChain& chain, const HolderKeys& holder,
                       Tick now, const DynamicParams& dynamic) {
    Block b = start_block(chain, holder.id, now);
    seal_hash(b, dynamic);
    b.wallet_sig = sign(holder.wallet_keys.sk, b.hash.bytes);
    return b;
}

Block make_transfer_block(const CoinChain& chain, const HolderKeys& sender,
                          const HolderIdentity& beneficiary,
                          uint64_t invoice_serial, const Bytes& secret_nonce,
                          Tick now,
                          const std::optional<DynamicParams>& dynamic) {
    if (secret_nonce.size() != 16)
        throw std::invalid_argument("secret nonce must be 16 bytes");
    Block b = start_block(chain, beneficiary, now);
    b.invoice_serial = invoice_serial;
    b.secret_nonce = secret_nonce;
    seal_hash(b, dynamic);
    b.wallet_sig = sign(sender.wallet_keys.sk, b.hash.bytes);
    b.person_sig = sign(sender.person_keys.sk, b.wallet_sig.bytes);
    return b;
}

Block withhold_secret(Block block) {
    block.secret_nonce.reset();
    return block;
}

std::string coin_key(const CoinChain& chain) {
    std::string key = chain.genesis.serial;
    for (const Block& b : chain.blocks) {
        if (b.child_value) {
            key += '.';
            key += to_hex(std::span(b.hash.bytes).subspan(0, 8));
        }
    }
    return key;
}

std::pair<CoinChain, CoinChain> fork_chain(
    const CoinChain& chain, Amount amount_a, Amount amount_b,
    const HolderKeys& holder, Tick now,
    const std::optional<DynamicParams>& dynamic) {
    if (chain.genesis.kind.is_hot())
        throw std::invalid_argument("fractioning is limited to cold coins");
    if (!amount_a.positive() || !amount_b.positive())
        throw std::invalid_argument("fork children must carry positive value");
    if (!(amount_a + amount_b == chain.value_in_force()))
        throw std::invalid_argument(
            "fork children must sum to the coin's value");
    HolderInfo h = current_holder(chain);
    if (!(h.person_vk == holder.id.person_cert.subject_vk))
        throw std::invalid_argument("only the current holder may fork");

    auto build = [&](Amount child) {
        Block b = start_block(chain, holder.id, now);
        b.child_value = child;
        seal_hash(b, dynamic);
        b.wallet_sig = sign(holder.wallet_keys.sk, b.hash.bytes);
        b.person_sig = sign(holder.person_keys.sk, b.wallet_sig.bytes);
        return append_block(chain, std::move(b));
    };
    return {build(amount_a), build(amount_b)};
}

}  // namespace offcash
