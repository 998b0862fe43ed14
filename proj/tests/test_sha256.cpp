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

#include "offcash/sha256.hpp"

#include <random>

#include "doctest.h"

using namespace offcash;

namespace {

Bytes str_bytes(const std::string& s) {
    return Bytes(s.begin(), s.end());
}

}  // namespace

TEST_CASE("sha256 matches the FIPS 180-4 test vectors") {
    CHECK(sha256({}).hex() ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256(str_bytes("abc")).hex() ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256(str_bytes("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmno"
                           "mnopnopq"))
              .hex() ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // One-block boundary cases around the padding split.
    Bytes b55(55, 'a');
    Bytes b56(56, 'a');
    Bytes b64(64, 'a');
    CHECK(sha256(b55).hex() ==
          "9f4390f8d30c2dd92ec9f095b65e2b9ae9b0a925a5258e241c9f1e910f734318");
    CHECK(sha256(b56).hex() ==
          "b35439a4ac6f0948b6d6f9e3c6af0f5f590ce20f1bde7090ef7970686ec6738a");
    CHECK(sha256(b64).hex() ==
          "ffe054fe7ae0cb6dc65c3af9b61d5209f439851db43d0ba5997337df154668eb");
}

TEST_CASE("sha256 streaming equals one-shot across chunk splits") {
    std::mt19937_64 rng(7);
    Bytes data(1000);
    for (auto& b : data) b = static_cast<uint8_t>(rng());
    Digest whole = sha256(data);
    for (size_t split : {0ul, 1ul, 63ul, 64ul, 65ul, 500ul, 999ul, 1000ul}) {
        Sha256 h;
        h.update(std::span(data).subspan(0, split));
        h.update(std::span(data).subspan(split));
        CHECK(h.finish() == whole);
    }
}

TEST_CASE("digest is deterministic and one-bit sensitive") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 10000; ++trial) {
        size_t len = 1 + rng() % 200;
        Bytes data(len);
        for (auto& b : data) b = static_cast<uint8_t>(rng());
        Digest d1 = sha256(data);
        CHECK(sha256(data) == d1);
        Bytes flipped = data;
        size_t bit = rng() % (len * 8);
        flipped[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        CHECK_FALSE(sha256(flipped) == d1);
    }
}

TEST_CASE("batched kernel agrees with the scalar reference") {
    INFO("active backend: ", sha256_backend());
    std::mt19937_64 rng(99);
    // Lengths that cross padding/block boundaries.
    for (size_t len : {0ul, 1ul, 8ul, 55ul, 56ul, 63ul, 64ul, 65ul, 120ul,
                       127ul, 128ul, 129ul, 300ul, 1021ul}) {
        std::vector<Bytes> msgs(8, Bytes(len));
        const uint8_t* ptrs[8];
        for (int i = 0; i < 8; ++i) {
            for (auto& b : msgs[i]) b = static_cast<uint8_t>(rng());
            ptrs[i] = msgs[i].data();
        }
        Digest batched[8];
        Digest reference[8];
        sha256_many(ptrs, len, 8, batched);
        sha256_many_scalar(ptrs, len, 8, reference);
        for (int i = 0; i < 8; ++i) {
            CHECK(batched[i] == reference[i]);
            CHECK(reference[i] == sha256(std::span(msgs[i].data(), len)));
        }
    }
}

TEST_CASE("batched kernel handles partial batches") {
    std::mt19937_64 rng(3);
    for (size_t count : {1ul, 3ul, 7ul, 9ul, 17ul}) {
        std::vector<Bytes> msgs(count, Bytes(77));
        std::vector<const uint8_t*> ptrs(count);
        for (size_t i = 0; i < count; ++i) {
            for (auto& b : msgs[i]) b = static_cast<uint8_t>(rng());
            ptrs[i] = msgs[i].data();
        }
        std::vector<Digest> out(count);
        sha256_many(ptrs.data(), 77, count, out.data());
        for (size_t i = 0; i < count; ++i)
            CHECK(out[i] == sha256(std::span(msgs[i].data(), msgs[i].size())));
    }
}

TEST_CASE("leading_zero_bits") {
    Digest d{};
    CHECK(leading_zero_bits(d) == 256);
    d.bytes[0] = 0x80;
    CHECK(leading_zero_bits(d) == 0);
    d.bytes[0] = 0x01;
    CHECK(leading_zero_bits(d) == 7);
    d.bytes[0] = 0x00;
    d.bytes[1] = 0x10;
    CHECK(leading_zero_bits(d) == 11);
}
