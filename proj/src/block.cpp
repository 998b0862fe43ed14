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

#include "offcash/block.hpp"

#include <algorithm>
#include <stdexcept>

namespace offcash {

namespace {

constexpr uint8_t kChainMagic[4] = {'O', 'C', 'C', '1'};

Digest read_digest(ByteReader& r) {
    Bytes b = r.bytes();
    if (b.size() != 32) throw DecodeError("bad digest length");
    Digest d;
    std::copy(b.begin(), b.end(), d.bytes.begin());
    return d;
}

Signature read_sig(ByteReader& r) {
    Bytes b = r.bytes();
    if (b.size() != kSignatureSize) throw DecodeError("bad signature length");
    Signature s;
    std::copy(b.begin(), b.end(), s.bytes.begin());
    return s;
}

std::optional<Signature> read_opt_sig(ByteReader& r) {
    std::optional<Bytes> b = r.opt_bytes();
    if (!b) return std::nullopt;
    if (b->size() != kSignatureSize) throw DecodeError("bad signature length");
    Signature s;
    std::copy(b->begin(), b->end(), s.bytes.begin());
    return s;
}

PublicKey read_vk(ByteReader& r) {
    Bytes b = r.bytes();
    if (b.size() != kPublicKeySize) throw DecodeError("bad public key length");
    PublicKey vk;
    std::copy(b.begin(), b.end(), vk.bytes.begin());
    return vk;
}

}  // namespace

const char* to_string(BlockVariant v) {
    switch (v) {
        case BlockVariant::delivery: return "delivery";
        case BlockVariant::mined: return "mined";
        case BlockVariant::fork: return "fork";
        case BlockVariant::transfer: return "transfer";
    }
    return "?";
}

// --- GenesisBlock -----------------------------------------------------------

Bytes GenesisBlock::preimage() const {
    ByteWriter w;
    w.bytes(central_vk.bytes);
    w.str(serial);
    w.u64(static_cast<uint64_t>(value.minor()));
    w.u64(timestamp);
    bank_cert.encode(w);
    w.opt_u64(kind.expiration);
    w.opt_u64(kind.claim_deadline);
    return w.take();
}

Bytes GenesisBlock::signed_hash() const {
    Bytes out(hash.bytes.begin(), hash.bytes.end());
    out.insert(out.end(), central_sig.bytes.begin(), central_sig.bytes.end());
    return out;
}

void GenesisBlock::encode(ByteWriter& w) const {
    w.raw(preimage());
    w.bytes(hash.bytes);
    w.bytes(central_sig.bytes);
}

GenesisBlock GenesisBlock::decode(ByteReader& r) {
    GenesisBlock g;
    g.central_vk = read_vk(r);
    g.serial = r.str();
    if (g.serial.empty()) throw DecodeError("empty serial");
    g.value = Amount::from_minor(static_cast<int64_t>(r.u64()));
    g.timestamp = r.u64();
    g.bank_cert = Certificate::decode(r);
    g.kind.expiration = r.opt_u64();
    g.kind.claim_deadline = r.opt_u64();
    if (g.kind.expiration.has_value() != g.kind.claim_deadline.has_value())
        throw DecodeError("hot coin deadlines must both be present");
    g.hash = read_digest(r);
    g.central_sig = read_sig(r);
    return g;
}

Digest block_hash(const GenesisBlock& g) { return sha256(g.preimage()); }

// --- Block ------------------------------------------------------------------

Bytes Block::preimage() const {
    ByteWriter w;
    w.bytes(prev_signed_hash);
    w.u64(timestamp);
    holder_cert.encode(w);
    wallet_cert.encode(w);
    bank_cert.encode(w);
    if (child_value)
        w.u64(static_cast<uint64_t>(child_value->minor()));
    else
        w.u32(0);
    w.opt_u64(invoice_serial);
    w.opt_u64(mined_nonce);
    w.opt_bytes(secret_nonce);
    return w.take();
}

std::pair<Bytes, size_t> Block::preimage_for_mining() const {
    if (!mined_nonce)
        throw std::logic_error("preimage_for_mining needs mined_nonce set");
    // The nonce payload is the last 8 bytes before the secret-nonce field.
    Bytes bytes = preimage();
    size_t secret_field = 4 + (secret_nonce ? secret_nonce->size() : 0);
    size_t offset = bytes.size() - secret_field - 8;
    return {std::move(bytes), offset};
}

Bytes Block::signed_hash() const {
    Bytes out(hash.bytes.begin(), hash.bytes.end());
    out.insert(out.end(), wallet_sig.bytes.begin(), wallet_sig.bytes.end());
    if (person_sig)
        out.insert(out.end(), person_sig->bytes.begin(),
                   person_sig->bytes.end());
    return out;
}

void Block::encode(ByteWriter& w) const {
    w.raw(preimage());
    w.bytes(hash.bytes);
    w.bytes(wallet_sig.bytes);
    if (person_sig)
        w.bytes(person_sig->bytes);
    else
        w.u32(0);
    if (repudiation_sig)
        w.bytes(repudiation_sig->bytes);
    else
        w.u32(0);
}

Block Block::decode(ByteReader& r) {
    Block b;
    b.prev_signed_hash = r.bytes();
    if (b.prev_signed_hash.empty()) throw DecodeError("empty previous hash");
    b.timestamp = r.u64();
    b.holder_cert = Certificate::decode(r);
    b.wallet_cert = Certificate::decode(r);
    b.bank_cert = Certificate::decode(r);
    std::optional<uint64_t> child = r.opt_u64();
    if (child) b.child_value = Amount::from_minor(static_cast<int64_t>(*child));
    b.invoice_serial = r.opt_u64();
    b.mined_nonce = r.opt_u64();
    b.secret_nonce = r.opt_bytes();
    if (b.secret_nonce && b.secret_nonce->size() != 16)
        throw DecodeError("bad secret nonce length");
    b.hash = read_digest(r);
    b.wallet_sig = read_sig(r);
    b.person_sig = read_opt_sig(r);
    b.repudiation_sig = read_opt_sig(r);
    return b;
}

Digest block_hash(const Block& b) { return sha256(b.preimage()); }

// --- CoinChain --------------------------------------------------------------

Amount CoinChain::value_in_force() const {
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
        if (it->child_value) return *it->child_value;
    return genesis.value;
}

Bytes CoinChain::tip_signed_hash() const {
    return blocks.empty() ? genesis.signed_hash() : blocks.back().signed_hash();
}

Digest CoinChain::tip_hash() const {
    return blocks.empty() ? genesis.hash : blocks.back().hash;
}

Tick CoinChain::tip_timestamp() const {
    return blocks.empty() ? genesis.timestamp : blocks.back().timestamp;
}

void CoinChain::encode(ByteWriter& w) const {
    genesis.encode(w);
    w.u32(static_cast<uint32_t>(blocks.size()));
    for (const Block& b : blocks) b.encode(w);
}

CoinChain CoinChain::decode(ByteReader& r) {
    CoinChain c;
    c.genesis = GenesisBlock::decode(r);
    uint32_t n = r.u32();
    if (n > 1u << 20) throw DecodeError("implausible block count");
    c.blocks.reserve(n);
    for (uint32_t i = 0; i < n; ++i) c.blocks.push_back(Block::decode(r));
    return c;
}

Bytes CoinChain::serialize() const {
    ByteWriter w;
    w.raw(std::span(kChainMagic, 4));
    encode(w);
    return w.take();
}

CoinChain CoinChain::deserialize(std::span<const uint8_t> data) {
    ByteReader r(data);
    Bytes magic = r.raw(4);
    if (!std::equal(magic.begin(), magic.end(), kChainMagic))
        throw DecodeError("not a coin chain file");
    CoinChain c = decode(r);
    r.expect_end();
    return c;
}

GenesisBlock mint_genesis(const KeyPair& central, const Certificate& bank_cert,
                          Amount value, const CoinKind& kind, Tick now,
                          const std::string& serial, Amount threshold) {
    if (!value.positive())
        throw std::invalid_argument("coin value must be positive");
    if (value > threshold)
        throw std::invalid_argument("coin value exceeds the mint threshold");
    if (serial.empty()) throw std::invalid_argument("empty serial");
    if (kind.is_hot()) {
        if (!kind.claim_deadline)
            throw std::invalid_argument("hot coin needs a claim deadline");
        if (*kind.expiration <= now)
            throw std::invalid_argument("hot coin expiration is in the past");
        if (*kind.expiration >= *kind.claim_deadline)
            throw std::invalid_argument(
                "claim deadline must follow the expiration date");
    } else if (kind.claim_deadline) {
        throw std::invalid_argument("cold coin carries no deadlines");
    }

    GenesisBlock g;
    g.central_vk = central.vk;
    g.serial = serial;
    g.value = value;
    g.timestamp = now;
    g.bank_cert = bank_cert;
    g.kind = kind;
    g.hash = block_hash(g);
    g.central_sig = sign(central.sk, g.hash.bytes);
    return g;
}

}  // namespace offcash
