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

#include <cstring>

namespace offcash {

namespace {

constexpr std::array<uint32_t, 64> kRoundConst = {
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

constexpr std::array<uint32_t, 8> kInitState = {0x6a09e667, 0xbb67ae85,
                                                0x3c6ef372, 0xa54ff53a,
                                                0x510e527f, 0x9b05688c,
                                                0x1f83d9ab, 0x5be0cd19};

inline uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

void compress(std::array<uint32_t, 8>& state, const uint8_t* block) {
    uint32_t w[64];
    for (int t = 0; t < 16; ++t) {
        w[t] = (static_cast<uint32_t>(block[t * 4]) << 24) |
               (static_cast<uint32_t>(block[t * 4 + 1]) << 16) |
               (static_cast<uint32_t>(block[t * 4 + 2]) << 8) |
               static_cast<uint32_t>(block[t * 4 + 3]);
    }
    for (int t = 16; t < 64; ++t) {
        uint32_t s0 = rotr(w[t - 15], 7) ^ rotr(w[t - 15], 18) ^ (w[t - 15] >> 3);
        uint32_t s1 = rotr(w[t - 2], 17) ^ rotr(w[t - 2], 19) ^ (w[t - 2] >> 10);
        w[t] = w[t - 16] + s0 + w[t - 7] + s1;
    }

    uint32_t a = state[0], b = state[1], c = state[2], d = state[3];
    uint32_t e = state[4], f = state[5], g = state[6], h = state[7];
    for (int t = 0; t < 64; ++t) {
        uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
        uint32_t ch = (e & f) ^ (~e & g);
        uint32_t t1 = h + S1 + ch + kRoundConst[t] + w[t];
        uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
        uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
        uint32_t t2 = S0 + maj;
        h = g;
        g = f;
        f = e;
        e = d + t1;
        d = c;
        c = b;
        b = a;
        a = t1 + t2;
    }
    state[0] += a;
    state[1] += b;
    state[2] += c;
    state[3] += d;
    state[4] += e;
    state[5] += f;
    state[6] += g;
    state[7] += h;
}

}  // namespace

Sha256::Sha256() : state_(kInitState) {}

void Sha256::update(std::span<const uint8_t> data) {
    if (data.empty()) return;
    total_len_ += data.size();
    size_t offset = 0;
    if (block_fill_ > 0) {
        size_t take = std::min(data.size(), block_.size() - block_fill_);
        std::memcpy(block_.data() + block_fill_, data.data(), take);
        block_fill_ += take;
        offset = take;
        if (block_fill_ == block_.size()) {
            compress(state_, block_.data());
            block_fill_ = 0;
        }
    }
    while (data.size() - offset >= 64) {
        compress(state_, data.data() + offset);
        offset += 64;
    }
    if (offset < data.size()) {
        std::memcpy(block_.data(), data.data() + offset, data.size() - offset);
        block_fill_ = data.size() - offset;
    }
}

Digest Sha256::finish() {
    uint64_t bit_len = total_len_ * 8;
    block_[block_fill_++] = 0x80;
    if (block_fill_ > 56) {
        std::memset(block_.data() + block_fill_, 0, 64 - block_fill_);
        compress(state_, block_.data());
        block_fill_ = 0;
    }
    std::memset(block_.data() + block_fill_, 0, 56 - block_fill_);
    for (int i = 0; i < 8; ++i)
        block_[56 + i] = static_cast<uint8_t>(bit_len >> (56 - 8 * i));
    compress(state_, block_.data());

    Digest d;
    for (int i = 0; i < 8; ++i) {
        d.bytes[i * 4] = static_cast<uint8_t>(state_[i] >> 24);
        d.bytes[i * 4 + 1] = static_cast<uint8_t>(state_[i] >> 16);
        d.bytes[i * 4 + 2] = static_cast<uint8_t>(state_[i] >> 8);
        d.bytes[i * 4 + 3] = static_cast<uint8_t>(state_[i]);
    }
    return d;
}

Digest sha256(std::span<const uint8_t> data) {
    Sha256 h;
    h.update(data);
    return h.finish();
}

unsigned leading_zero_bits(const Digest& d) {
    unsigned n = 0;
    for (uint8_t b : d.bytes) {
        if (b == 0) {
            n += 8;
            continue;
        }
        for (int bit = 7; bit >= 0; --bit) {
            if (b & (1u << bit)) return n;
            ++n;
        }
    }
    return n;
}

void sha256_many_scalar(const uint8_t* const* msgs, size_t len, size_t count,
                        Digest* out) {
    for (size_t i = 0; i < count; ++i)
        out[i] = sha256(std::span(msgs[i], len));
}

}  // namespace offcash
