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

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace offcash {

using Bytes = std::vector<uint8_t>;

std::string to_hex(std::span<const uint8_t> data);
Bytes from_hex(const std::string& hex);

/// Thrown when serialized input cannot be decoded (truncation, bad
/// lengths, bad tags). Callers that must not trap catch this and fail
/// the surrounding check instead.
class DecodeError : public std::runtime_error {
public:
    explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

// Canonical wire encoding used for every hashed, signed or persisted
// structure: each field is length-prefixed (u32 big-endian count) and
// integers are big-endian. Absent optional fields encode as length 0.
class ByteWriter {
public:
    void u8(uint8_t v);
    void u32(uint32_t v);
    void u64(uint64_t v);
    void bytes(std::span<const uint8_t> data);
    void str(const std::string& s);
    void opt_u64(const std::optional<uint64_t>& v);
    void opt_bytes(const std::optional<Bytes>& v);
    void raw(std::span<const uint8_t> data);  // no length prefix

    const Bytes& data() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    uint8_t u8();
    uint32_t u32();
    uint64_t u64();
    Bytes bytes();
    std::string str();
    std::optional<uint64_t> opt_u64();
    std::optional<Bytes> opt_bytes();
    Bytes raw(size_t n);

    bool at_end() const { return pos_ == data_.size(); }
    void expect_end() const;

private:
    void need(size_t n) const;
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

}  // namespace offcash
