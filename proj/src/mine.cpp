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

#include <stdexcept>

namespace offcash {

namespace {

constexpr size_t kLanes = 8;

void put_nonce(uint8_t* at, uint64_t nonce) {
    for (int i = 0; i < 8; ++i)
        at[i] = static_cast<uint8_t>(nonce >> (56 - 8 * i));
}

}  // namespace

MineResult mine_nonce(const Bytes& preimage, size_t nonce_offset,
                      unsigned difficulty_bits, uint64_t start_nonce) {
    if (nonce_offset + 8 > preimage.size())
        throw std::invalid_argument("nonce offset outside preimage");
    if (difficulty_bits > 255)
        throw std::invalid_argument("unusable difficulty");

    Bytes lanes[kLanes];
    const uint8_t* ptrs[kLanes];
    for (size_t i = 0; i < kLanes; ++i) {
        lanes[i] = preimage;
        ptrs[i] = lanes[i].data();
    }

    Digest digests[kLanes];
    MineResult res;
    uint64_t nonce = start_nonce;
    for (;;) {
        for (size_t i = 0; i < kLanes; ++i)
            put_nonce(lanes[i].data() + nonce_offset, nonce + i);
        sha256_many(ptrs, preimage.size(), kLanes, digests);
        res.attempts += kLanes;
        for (size_t i = 0; i < kLanes; ++i) {
            if (leading_zero_bits(digests[i]) >= difficulty_bits) {
                res.nonce = nonce + i;
                res.hash = digests[i];
                return res;
            }
        }
        nonce += kLanes;
    }
}

}  // namespace offcash
