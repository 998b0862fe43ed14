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
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "offcash/bytes.hpp"

namespace offcash {

/// 256-bit digest. Rendered as 64 lowercase hex characters in all text
/// formats.
struct Digest {
    std::array<uint8_t, 32> bytes{};

    bool operator==(const Digest&) const = default;
    auto operator<=>(const Digest&) const = default;
    std::string hex() const { return to_hex(bytes); }
};

/// FIPS 180-4 SHA-256, scalar reference path.
Digest sha256(std::span<const uint8_t> data);

/// Streaming form for callers that hash composed buffers.
class Sha256 {
public:
    Sha256();
    void update(std::span<const uint8_t> data);
    Digest finish();

private:
    std::array<uint32_t, 8> state_;
    std::array<uint8_t, 64> block_;
    size_t block_fill_ = 0;
    uint64_t total_len_ = 0;
};

// Number of leading zero bits of the digest, MSB of bytes[0] first.
// This is the proof-of-work difficulty metric.
unsigned leading_zero_bits(const Digest& d);

// ---------------------------------------------------------------------------
// Batched hashing.
//
// Hashes `count` equal-length messages. The scalar kernel is the reference;
// on x86 with AVX2 an 8-lane kernel processes the messages in parallel. The
// two paths are equivalence-tested; selection happens once at runtime.
// ---------------------------------------------------------------------------

using Sha256ManyFn = void (*)(const uint8_t* const* msgs, size_t len,
                              size_t count, Digest* out);

void sha256_many_scalar(const uint8_t* const* msgs, size_t len, size_t count,
                        Digest* out);

#if defined(OFFCASH_BUILD_AVX2)
// Exactly 8 lanes; callers go through sha256_many().
void sha256_x8_avx2(const uint8_t* const* msgs, size_t len, Digest* out);
#endif

/// Batched digest over `count` messages of identical length, using the
/// widest kernel the CPU supports.
void sha256_many(const uint8_t* const* msgs, size_t len, size_t count,
                 Digest* out);

/// Name of the kernel sha256_many() dispatches to ("scalar" or "avx2").
const char* sha256_backend();

}  // namespace offcash
