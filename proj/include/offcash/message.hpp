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

#include "offcash/wallet.hpp"

namespace offcash {

enum class MsgKind : uint8_t {
    Invoice = 1,
    ChainTransfer = 2,
    Approval = 3,
    Rejection = 4,
    SecretReveal = 5,
    RepudiationDelivery = 6,
    Confirmation = 7,
};

const char* to_string(MsgKind kind);

/// Point-to-point envelope between offline wallets. The payload carries
/// the protocol structure (which embeds the sender's layered signatures);
/// the envelope adds the sender's person key and a signature over
/// kind||payload so transit tampering is evident.
struct Message {
    MsgKind kind = MsgKind::Invoice;
    PublicKey sender_vk;  // sender's person key
    Bytes payload;
    Signature signature;

    Bytes signed_bytes() const;
    Bytes encode() const;
    static Message decode(std::span<const uint8_t> data);
    bool signature_ok() const;
};

Message make_message(MsgKind kind, Bytes payload, const KeyPair& person_keys);

// payload codecs
Bytes encode_payload(const Invoice& v);
Bytes encode_payload(const TransferProposal& v);
Bytes encode_payload(const Approval& v);
Bytes encode_payload(const Rejection& v);
Bytes encode_payload(const SecretReveal& v);
Bytes encode_payload(const RepudiationDelivery& v);
Bytes encode_payload(const Confirmation& v);

template <typename T>
T decode_payload(std::span<const uint8_t> data) {
    ByteReader r(data);
    T v = T::decode(r);
    r.expect_end();
    return v;
}

}  // namespace offcash
