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
#include <vector>

#include "offcash/bytes.hpp"
#include "offcash/sign.hpp"

namespace offcash {

// Three-level chain of trust: central bank signs bank keys, banks sign
// wallet and person keys. Wallet and person certificates cross-link each
// other so a wallet is bound to exactly one authorized user.

enum class CertRole : uint8_t {
    bank = 1,
    wallet = 2,
    person = 3,
};

const char* to_string(CertRole role);

struct Certificate {
    PublicKey subject_vk;
    std::optional<PublicKey> linked_vk;  // cross-link; required for wallet/person
    CertRole role = CertRole::person;
    PublicKey issuer_vk;
    Signature issuer_sig;

    bool operator==(const Certificate&) const = default;

    /// Bytes covered by issuer_sig.
    Bytes signed_bytes() const;
    void encode(ByteWriter& w) const;
    static Certificate decode(ByteReader& r);
};

/// Roots of the chain of trust. Keys rotate; old roots stay in the
/// history so chains signed under a previous central key still verify.
struct TrustStore {
    std::vector<PublicKey> historical_central_vks;  // oldest first

    const PublicKey& current_central_vk() const {
        return historical_central_vks.back();
    }
    bool trusts(const PublicKey& vk) const;

    static TrustStore single(const PublicKey& vk) { return {{vk}}; }
};

Certificate issue_certificate(const KeyPair& issuer,
                              const PublicKey& subject_vk,
                              const std::optional<PublicKey>& linked_vk,
                              CertRole role);

/// Verifies the signature on `cert` and walks the path to a trusted
/// central key. Bank certificates verify directly against the trust
/// store; wallet/person certificates additionally need the issuing
/// bank's certificate. Returns false on any failure.
bool verify_certificate_path(const Certificate& cert,
                             const Certificate* issuer_cert,
                             const TrustStore& trust);

}  // namespace offcash
