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

#include "offcash/mine.hpp"

#include <random>

#include "doctest.h"
#include "fixtures.hpp"

using namespace offcash;
using offcash::testing::World;

TEST_CASE("mine_nonce finds a qualifying nonce and reports its hash") {
    std::mt19937_64 rng(5);
    Bytes preimage(100);
    for (auto& b : preimage) b = static_cast<uint8_t>(rng());
    size_t offset = 40;

    MineResult res = mine_nonce(preimage, offset, 12);
    Bytes check = preimage;
    for (int i = 0; i < 8; ++i)
        check[offset + i] = static_cast<uint8_t>(res.nonce >> (56 - 8 * i));
    Digest d = sha256(check);
    CHECK(d == res.hash);
    CHECK(leading_zero_bits(d) >= 12);
}

TEST_CASE("mining is deterministic") {
    Bytes preimage(64, 0x5a);
    MineResult a = mine_nonce(preimage, 8, 10);
    MineResult b = mine_nonce(preimage, 8, 10);
    CHECK(a.nonce == b.nonce);
    CHECK(a.hash == b.hash);
}

TEST_CASE("difficulty zero accepts the first nonce") {
    Bytes preimage(32, 0);
    MineResult res = mine_nonce(preimage, 0, 0, 17);
    CHECK(res.nonce == 17);
}

TEST_CASE("mined blocks meet difficulty and verify in a chain") {
    World w;
    DynamicParams dyn{12, 10, 360, 4};
    CoinChain chain =
        w.mint_and_deliver(Amount::parse("50.00"), CoinKind::cold(), w.alice,
                           0, "D-1", dyn);
    for (Tick t = 10; t <= 30; t += 10)
        chain = append_block(chain, make_mined_block(chain, w.alice, t, dyn));

    CHECK(chain.blocks.size() == 4);  // delivery + 3 mined
    for (const Block& b : chain.blocks) {
        REQUIRE(b.mined_nonce.has_value());
        CHECK(leading_zero_bits(b.hash) >= dyn.difficulty_bits);
    }
    ValidationReport r = validate_chain(chain, w.trust, dyn, 30);
    CHECK(r.valid);

    // Wrong difficulty flag: the same chain fails.
    DynamicParams hard{40, 10, 360, 4};
    ValidationReport bad = validate_chain(chain, w.trust, hard, 30);
    CHECK_FALSE(bad.valid);
    bool all_difficulty = !bad.failures.empty();
    for (const auto& f : bad.failures)
        all_difficulty = all_difficulty && f.code == FailureCode::difficulty;
    CHECK(all_difficulty);
}

TEST_CASE("dynamic transfer blocks mine over the secret nonce") {
    World w;
    DynamicParams dyn{12, 10, 360, 4};
    CoinChain chain =
        w.mint_and_deliver(Amount::parse("50.00"), CoinKind::cold(), w.alice,
                           0, "D-2", dyn);
    Block t = make_transfer_block(chain, w.alice, w.bob.id, 1, w.nonce16(0x42),
                                  10, dyn);
    CHECK(t.mined_nonce.has_value());
    CHECK(leading_zero_bits(t.hash) >= dyn.difficulty_bits);
    CHECK(block_hash(t) == t.hash);

    // The withheld wire form still exposes the qualifying stored hash.
    Block wire = withhold_secret(t);
    CHECK(leading_zero_bits(wire.hash) >= dyn.difficulty_bits);
}
