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

#include "offcash/bytes.hpp"
#include "offcash/sha256.hpp"

namespace offcash {

struct MineResult {
    uint64_t nonce = 0;
    Digest hash;
    uint64_t attempts = 0;
};

/// Searches nonces from `start_nonce` upward until the digest of the
/// preimage has at least `difficulty_bits` leading zero bits. The eight
/// big-endian nonce payload bytes live at `nonce_offset` and are
/// rewritten per candidate; batches of candidates go through
/// sha256_many(), so the search runs on the widest kernel available.
MineResult mine_nonce(const Bytes& preimage, size_t nonce_offset,
                      unsigned difficulty_bits, uint64_t start_nonce = 0);

}  // namespace offcash
