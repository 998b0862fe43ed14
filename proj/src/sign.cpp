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

#include "offcash/sign.hpp"

#include <sodium.h>

#include <mutex>
#include <stdexcept>

namespace offcash {

namespace {

void ensure_sodium() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        if (sodium_init() < 0)
            throw std::runtime_error("libsodium initialization failed");
    });
}

}  // namespace

Seed seed_from_u64(uint64_t n) {
    Seed s{};
    for (int i = 0; i < 8; ++i)
        s[31 - i] = static_cast<uint8_t>(n >> (8 * i));
    return s;
}

KeyPair generate_keypair(const Seed& seed) {
    ensure_sodium();
    static_assert(kSeedSize == crypto_sign_SEEDBYTES);
    static_assert(kPublicKeySize == crypto_sign_PUBLICKEYBYTES);
    static_assert(kSecretKeySize == crypto_sign_SECRETKEYBYTES);
    KeyPair kp;
    crypto_sign_seed_keypair(kp.vk.bytes.data(), kp.sk.bytes.data(),
                             seed.data());
    return kp;
}

Signature sign(const SecretKey& sk, std::span<const uint8_t> message) {
    ensure_sodium();
    Signature sig;
    crypto_sign_detached(sig.bytes.data(), nullptr, message.data(),
                         message.size(), sk.bytes.data());
    return sig;
}

bool verify(const PublicKey& vk, std::span<const uint8_t> message,
            const Signature& sig) {
    ensure_sodium();
    return crypto_sign_verify_detached(sig.bytes.data(), message.data(),
                                       message.size(), vk.bytes.data()) == 0;
}

bool verify(const PublicKey& vk, std::span<const uint8_t> message,
            std::span<const uint8_t> sig_bytes) {
    if (sig_bytes.size() != kSignatureSize) return false;
    Signature sig;
    std::copy(sig_bytes.begin(), sig_bytes.end(), sig.bytes.begin());
    return verify(vk, message, sig);
}

}  // namespace offcash
