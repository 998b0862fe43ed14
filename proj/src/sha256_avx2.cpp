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

// Eight-lane message-parallel SHA-256. Each 32-bit word of the working
// state holds one lane per vector element, so the round function is the
// scalar algorithm expressed in vector ops. All eight messages must have
// the same length (the mining loop hashes one preimage with eight nonce
// candidates, which guarantees that).

#include "offcash/sha256.hpp"

#if defined(OFFCASH_BUILD_AVX2)

#include <immintrin.h>

#include <cstring>

namespace offcash {

namespace {

alignas(32) constexpr uint32_t kRoundConst[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
    0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
    0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

inline __m256i rotr(__m256i x, int n) {
    return _mm256_or_si256(_mm256_srli_epi32(x, n),
                           _mm256_slli_epi32(x, 32 - n));
}

inline uint32_t load_be32(const uint8_t* p) {
    return (static_cast<uint32_t>(p[0]) << 24) |
           (static_cast<uint32_t>(p[1]) << 16) |
           (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

// One compression round over the 8 lanes; `blocks[lane]` points at that
// lane's 64-byte block.
void compress_x8(__m256i state[8], const uint8_t* const blocks[8]) {
    __m256i w[64];
    for (int t = 0; t < 16; ++t) {
        w[t] = _mm256_set_epi32(
            static_cast<int>(load_be32(blocks[7] + t * 4)),
            static_cast<int>(load_be32(blocks[6] + t * 4)),
            static_cast<int>(load_be32(blocks[5] + t * 4)),
            static_cast<int>(load_be32(blocks[4] + t * 4)),
            static_cast<int>(load_be32(blocks[3] + t * 4)),
            static_cast<int>(load_be32(blocks[2] + t * 4)),
            static_cast<int>(load_be32(blocks[1] + t * 4)),
            static_cast<int>(load_be32(blocks[0] + t * 4)));
    }
    for (int t = 16; t < 64; ++t) {
        __m256i s0 = _mm256_xor_si256(
            _mm256_xor_si256(rotr(w[t - 15], 7), rotr(w[t - 15], 18)),
            _mm256_srli_epi32(w[t - 15], 3));
        __m256i s1 = _mm256_xor_si256(
            _mm256_xor_si256(rotr(w[t - 2], 17), rotr(w[t - 2], 19)),
            _mm256_srli_epi32(w[t - 2], 10));
        w[t] = _mm256_add_epi32(_mm256_add_epi32(w[t - 16], s0),
                                _mm256_add_epi32(w[t - 7], s1));
    }

    __m256i a = state[0], b = state[1], c = state[2], d = state[3];
    __m256i e = state[4], f = state[5], g = state[6], h = state[7];
    for (int t = 0; t < 64; ++t) {
        __m256i S1 =
            _mm256_xor_si256(_mm256_xor_si256(rotr(e, 6), rotr(e, 11)), rotr(e, 25));
        __m256i ch = _mm256_xor_si256(_mm256_and_si256(e, f),
                                      _mm256_andnot_si256(e, g));
        __m256i t1 = _mm256_add_epi32(
            _mm256_add_epi32(_mm256_add_epi32(h, S1), ch),
            _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(kRoundConst[t])),
                             w[t]));
        __m256i S0 =
            _mm256_xor_si256(_mm256_xor_si256(rotr(a, 2), rotr(a, 13)), rotr(a, 22));
        __m256i maj = _mm256_xor_si256(
            _mm256_xor_si256(_mm256_and_si256(a, b), _mm256_and_si256(a, c)),
            _mm256_and_si256(b, c));
        __m256i t2 = _mm256_add_epi32(S0, maj);
        h = g;
        g = f;
        f = e;
        e = _mm256_add_epi32(d, t1);
        d = c;
        c = b;
        b = a;
        a = _mm256_add_epi32(t1, t2);
    }
    state[0] = _mm256_add_epi32(state[0], a);
    state[1] = _mm256_add_epi32(state[1], b);
    state[2] = _mm256_add_epi32(state[2], c);
    state[3] = _mm256_add_epi32(state[3], d);
    state[4] = _mm256_add_epi32(state[4], e);
    state[5] = _mm256_add_epi32(state[5], f);
    state[6] = _mm256_add_epi32(state[6], g);
    state[7] = _mm256_add_epi32(state[7], h);
}

}  // namespace

void sha256_x8_avx2(const uint8_t* const* msgs, size_t len, Digest* out) {
    __m256i state[8];
    static constexpr uint32_t kInit[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372,
                                          0xa54ff53a, 0x510e527f, 0x9b05688c,
                                          0x1f83d9ab, 0x5be0cd19};
    for (int i = 0; i < 8; ++i) state[i] = _mm256_set1_epi32(static_cast<int>(kInit[i]));

    const uint8_t* blocks[8];
    size_t offset = 0;
    while (len - offset >= 64) {
        for (int lane = 0; lane < 8; ++lane) blocks[lane] = msgs[lane] + offset;
        compress_x8(state, blocks);
        offset += 64;
    }

    // Padding: identical for all lanes since lengths are equal.
    size_t rem = len - offset;
    uint8_t tail[8][128];
    size_t tail_len = (rem >= 56) ? 128 : 64;
    uint64_t bit_len = static_cast<uint64_t>(len) * 8;
    for (int lane = 0; lane < 8; ++lane) {
        if (rem > 0) std::memcpy(tail[lane], msgs[lane] + offset, rem);
        tail[lane][rem] = 0x80;
        std::memset(tail[lane] + rem + 1, 0, tail_len - rem - 1);
        for (int i = 0; i < 8; ++i)
            tail[lane][tail_len - 8 + i] =
                static_cast<uint8_t>(bit_len >> (56 - 8 * i));
    }
    for (size_t b = 0; b < tail_len; b += 64) {
        for (int lane = 0; lane < 8; ++lane) blocks[lane] = tail[lane] + b;
        compress_x8(state, blocks);
    }

    alignas(32) uint32_t lanes[8];
    for (int word = 0; word < 8; ++word) {
        _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), state[word]);
        for (int lane = 0; lane < 8; ++lane) {
            uint32_t v = lanes[lane];
            out[lane].bytes[word * 4] = static_cast<uint8_t>(v >> 24);
            out[lane].bytes[word * 4 + 1] = static_cast<uint8_t>(v >> 16);
            out[lane].bytes[word * 4 + 2] = static_cast<uint8_t>(v >> 8);
            out[lane].bytes[word * 4 + 3] = static_cast<uint8_t>(v);
        }
    }
}

}  // namespace offcash

#endif  // OFFCASH_BUILD_AVX2
