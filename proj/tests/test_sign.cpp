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

#include <random>
#include <set>

#include "doctest.h"

using namespace offcash;

namespace {

Bytes msg(const std::string& s) { return Bytes(s.begin(), s.end()); }

}  // namespace

TEST_CASE("keypairs are deterministic per seed and distinct across seeds") {
    KeyPair k0 = generate_keypair(seed_from_u64(0));
    KeyPair k0_again = generate_keypair(seed_from_u64(0));
    CHECK(k0.vk == k0_again.vk);
    CHECK(k0.sk == k0_again.sk);

    KeyPair k1 = generate_keypair(seed_from_u64(1));
    CHECK_FALSE(k0.vk == k1.vk);
}

TEST_CASE("1000 random seeds give 1000 distinct verification keys") {
    std::mt19937_64 rng(1234);
    std::set<std::string> vks;
    for (int i = 0; i < 1000; ++i) {
        Seed s;
        for (auto& b : s) b = static_cast<uint8_t>(rng());
        vks.insert(generate_keypair(s).vk.hex());
    }
    CHECK(vks.size() == 1000);
}

TEST_CASE("sign/verify round trip and wrong-key rejection") {
    KeyPair k0 = generate_keypair(seed_from_u64(0));
    KeyPair k1 = generate_keypair(seed_from_u64(1));
    Signature s = sign(k0.sk, msg("abc"));
    CHECK(verify(k0.vk, msg("abc"), s));
    CHECK_FALSE(verify(k1.vk, msg("abc"), s));
    CHECK_FALSE(verify(k0.vk, msg("abd"), s));
    // Deterministic: same key and message, same signature.
    CHECK(sign(k0.sk, msg("abc")) == s);
}

TEST_CASE("every single-bit mutation of a signature fails verification") {
    KeyPair k = generate_keypair(seed_from_u64(2));
    Bytes m = msg("bit flip target");
    Signature s = sign(k.sk, m);
    for (size_t bit = 0; bit < kSignatureSize * 8; ++bit) {
        Signature mutated = s;
        mutated.bytes[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        CHECK_FALSE(verify(k.vk, m, mutated));
    }
}

TEST_CASE("round trip holds over 10000 random seed/message pairs") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 10000; ++i) {
        Seed seed;
        for (auto& b : seed) b = static_cast<uint8_t>(rng());
        KeyPair k = generate_keypair(seed);
        Bytes m(1 + rng() % 100);
        for (auto& b : m) b = static_cast<uint8_t>(rng());
        Signature s = sign(k.sk, m);
        CHECK(verify(k.vk, m, s));
        // single-bit message mutation
        Bytes m2 = m;
        size_t bit = rng() % (m2.size() * 8);
        m2[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        CHECK_FALSE(verify(k.vk, m2, s));
    }
}

TEST_CASE("malformed signature bytes verify as false, never trap") {
    KeyPair k = generate_keypair(seed_from_u64(3));
    CHECK_FALSE(verify(k.vk, msg("x"), Bytes{}));
    CHECK_FALSE(verify(k.vk, msg("x"), Bytes(13, 0xaa)));
    CHECK_FALSE(verify(k.vk, msg("x"), Bytes(64, 0x00)));
}
