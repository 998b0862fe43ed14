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

#include "offcash/message.hpp"

#include <algorithm>

namespace offcash {

const char* to_string(MsgKind kind) {
    switch (kind) {
        case MsgKind::Invoice: return "Invoice";
        case MsgKind::ChainTransfer: return "ChainTransfer";
        case MsgKind::Approval: return "Approval";
        case MsgKind::Rejection: return "Rejection";
        case MsgKind::SecretReveal: return "SecretReveal";
        case MsgKind::RepudiationDelivery: return "RepudiationDelivery";
        case MsgKind::Confirmation: return "Confirmation";
    }
    return "?";
}

Bytes Message::signed_bytes() const {
    ByteWriter w;
    w.u8(static_cast<uint8_t>(kind));
    w.bytes(payload);
    return w.take();
}

Bytes Message::encode() const {
    ByteWriter w;
    w.u8(static_cast<uint8_t>(kind));
    w.bytes(sender_vk.bytes);
    w.bytes(payload);
    w.bytes(signature.bytes);
    return w.take();
}

Message Message::decode(std::span<const uint8_t> data) {
    ByteReader r(data);
    Message m;
    uint8_t kind = r.u8();
    if (kind < 1 || kind > 7) throw DecodeError("bad message kind");
    m.kind = static_cast<MsgKind>(kind);
    Bytes vk = r.bytes();
    if (vk.size() != kPublicKeySize) throw DecodeError("bad key length");
    std::copy(vk.begin(), vk.end(), m.sender_vk.bytes.begin());
    m.payload = r.bytes();
    Bytes sig = r.bytes();
    if (sig.size() != kSignatureSize) throw DecodeError("bad signature length");
    std::copy(sig.begin(), sig.end(), m.signature.bytes.begin());
    r.expect_end();
    return m;
}

bool Message::signature_ok() const {
    return verify(sender_vk, signed_bytes(), signature);
}

Message make_message(MsgKind kind, Bytes payload, const KeyPair& person_keys) {
    Message m;
    m.kind = kind;
    m.sender_vk = person_keys.vk;
    m.payload = std::move(payload);
    m.signature = sign(person_keys.sk, m.signed_bytes());
    return m;
}

namespace {

template <typename T>
Bytes encode_impl(const T& v) {
    ByteWriter w;
    v.encode(w);
    return w.take();
}

}  // namespace

Bytes encode_payload(const Invoice& v) { return encode_impl(v); }
Bytes encode_payload(const TransferProposal& v) { return encode_impl(v); }
Bytes encode_payload(const Approval& v) { return encode_impl(v); }
Bytes encode_payload(const Rejection& v) { return encode_impl(v); }
Bytes encode_payload(const SecretReveal& v) { return encode_impl(v); }
Bytes encode_payload(const RepudiationDelivery& v) { return encode_impl(v); }
Bytes encode_payload(const Confirmation& v) { return encode_impl(v); }

}  // namespace offcash
