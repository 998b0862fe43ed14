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

#include <array>
#include <cstdint>
#include <span>

#include "offcash/bytes.hpp"

namespace offcash {

// Deterministic signature scheme (Ed25519). Same (key, message) always
// yields the same signature, which keeps golden files stable.

constexpr size_t kPublicKeySize = 32;
constexpr size_t kSecretKeySize = 64;
constexpr size_t kSignatureSize = 64;
constexpr size_t kSeedSize = 32;

struct PublicKey {
    std::array<uint8_t, kPublicKeySize> bytes{};
    bool operator==(const PublicKey&) const = default;
    auto operator<=>(const PublicKey&) const = default;
    std::string hex() const { return to_hex(bytes); }
};

struct SecretKey {
    std::array<uint8_t, kSecretKeySize> bytes{};
    bool operator==(const SecretKey&) const = default;
};

struct Signature {
    std::array<uint8_t, kSignatureSize> bytes{};
    bool operator==(const Signature&) const = default;
    std::string hex() const { return to_hex(bytes); }
};

/// Private half never appears in serialized blocks, messages or logs;
/// wallet snapshots seal it separately.
struct KeyPair {
    PublicKey vk;
    SecretKey sk;
};

using Seed = std::array<uint8_t, kSeedSize>;

Seed seed_from_u64(uint64_t n);

KeyPair generate_keypair(const Seed& seed);

Signature sign(const SecretKey& sk, std::span<const uint8_t> message);

/// Returns false on any mismatch or malformed input; never throws.
bool verify(const PublicKey& vk, std::span<const uint8_t> message,
            const Signature& sig);
bool verify(const PublicKey& vk, std::span<const uint8_t> message,
            std::span<const uint8_t> sig_bytes);

}  // namespace offcash
