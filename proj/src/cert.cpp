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

#include "offcash/cert.hpp"

#include <algorithm>

namespace offcash {

const char* to_string(CertRole role) {
    switch (role) {
        case CertRole::bank: return "bank";
        case CertRole::wallet: return "wallet";
        case CertRole::person: return "person";
    }
    return "?";
}

Bytes Certificate::signed_bytes() const {
    ByteWriter w;
    w.bytes(subject_vk.bytes);
    if (linked_vk)
        w.bytes(linked_vk->bytes);
    else
        w.u32(0);
    w.u8(static_cast<uint8_t>(role));
    w.bytes(issuer_vk.bytes);
    return w.take();
}

void Certificate::encode(ByteWriter& w) const {
    w.raw(signed_bytes());
    w.bytes(issuer_sig.bytes);
}

static PublicKey read_vk(ByteReader& r) {
    Bytes b = r.bytes();
    if (b.size() != kPublicKeySize) throw DecodeError("bad public key length");
    PublicKey vk;
    std::copy(b.begin(), b.end(), vk.bytes.begin());
    return vk;
}

static Signature read_sig(ByteReader& r) {
    Bytes b = r.bytes();
    if (b.size() != kSignatureSize) throw DecodeError("bad signature length");
    Signature s;
    std::copy(b.begin(), b.end(), s.bytes.begin());
    return s;
}

Certificate Certificate::decode(ByteReader& r) {
    Certificate c;
    c.subject_vk = read_vk(r);
    std::optional<Bytes> linked = r.opt_bytes();
    if (linked) {
        if (linked->size() != kPublicKeySize)
            throw DecodeError("bad linked key length");
        PublicKey vk;
        std::copy(linked->begin(), linked->end(), vk.bytes.begin());
        c.linked_vk = vk;
    }
    uint8_t role = r.u8();
    if (role < 1 || role > 3) throw DecodeError("bad certificate role");
    c.role = static_cast<CertRole>(role);
    c.issuer_vk = read_vk(r);
    c.issuer_sig = read_sig(r);
    return c;
}

bool TrustStore::trusts(const PublicKey& vk) const {
    return std::find(historical_central_vks.begin(),
                     historical_central_vks.end(),
                     vk) != historical_central_vks.end();
}

Certificate issue_certificate(const KeyPair& issuer,
                              const PublicKey& subject_vk,
                              const std::optional<PublicKey>& linked_vk,
                              CertRole role) {
    if (role != CertRole::bank && !linked_vk)
        throw std::invalid_argument(
            "wallet/person certificates require a cross-linked key");
    Certificate c;
    c.subject_vk = subject_vk;
    c.linked_vk = linked_vk;
    c.role = role;
    c.issuer_vk = issuer.vk;
    c.issuer_sig = sign(issuer.sk, c.signed_bytes());
    return c;
}

bool verify_certificate_path(const Certificate& cert,
                             const Certificate* issuer_cert,
                             const TrustStore& trust) {
    if (trust.historical_central_vks.empty()) return false;
    if (!verify(cert.issuer_vk, cert.signed_bytes(), cert.issuer_sig))
        return false;

    if (cert.role == CertRole::bank) {
        return trust.trusts(cert.issuer_vk);
    }

    // wallet/person: cross-link must be present and the issuer must be a
    // bank whose own certificate roots in the trust store.
    if (!cert.linked_vk) return false;
    if (issuer_cert == nullptr) return false;
    if (issuer_cert->role != CertRole::bank) return false;
    if (!(issuer_cert->subject_vk == cert.issuer_vk)) return false;
    return verify_certificate_path(*issuer_cert, nullptr, trust);
}

}  // namespace offcash
