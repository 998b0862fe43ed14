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

#include "offcash/bytes.hpp"

namespace offcash {

static const char* kHexDigits = "0123456789abcdef";

std::string to_hex(std::span<const uint8_t> data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0f]);
    }
    return out;
}

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Bytes from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw DecodeError("hex string has odd length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw DecodeError("invalid hex digit");
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

void ByteWriter::u8(uint8_t v) {
    u32(1);
    buf_.push_back(v);
}

void ByteWriter::u32(uint32_t v) {
    buf_.push_back(static_cast<uint8_t>(v >> 24));
    buf_.push_back(static_cast<uint8_t>(v >> 16));
    buf_.push_back(static_cast<uint8_t>(v >> 8));
    buf_.push_back(static_cast<uint8_t>(v));
}

void ByteWriter::u64(uint64_t v) {
    u32(8);
    for (int shift = 56; shift >= 0; shift -= 8)
        buf_.push_back(static_cast<uint8_t>(v >> shift));
}

void ByteWriter::bytes(std::span<const uint8_t> data) {
    u32(static_cast<uint32_t>(data.size()));
    buf_.insert(buf_.end(), data.begin(), data.end());
}

void ByteWriter::str(const std::string& s) {
    bytes(std::span(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
}

void ByteWriter::opt_u64(const std::optional<uint64_t>& v) {
    if (v)
        u64(*v);
    else
        u32(0);
}

void ByteWriter::opt_bytes(const std::optional<Bytes>& v) {
    if (v)
        bytes(*v);
    else
        u32(0);
}

void ByteWriter::raw(std::span<const uint8_t> data) {
    buf_.insert(buf_.end(), data.begin(), data.end());
}

void ByteReader::need(size_t n) const {
    if (data_.size() - pos_ < n) throw DecodeError("truncated input");
}

uint8_t ByteReader::u8() {
    uint32_t len = u32();
    if (len != 1) throw DecodeError("bad u8 length");
    need(1);
    return data_[pos_++];
}

uint32_t ByteReader::u32() {
    need(4);
    uint32_t v = (static_cast<uint32_t>(data_[pos_]) << 24) |
                 (static_cast<uint32_t>(data_[pos_ + 1]) << 16) |
                 (static_cast<uint32_t>(data_[pos_ + 2]) << 8) |
                 static_cast<uint32_t>(data_[pos_ + 3]);
    pos_ += 4;
    return v;
}

uint64_t ByteReader::u64() {
    uint32_t len = u32();
    if (len != 8) throw DecodeError("bad u64 length");
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += 8;
    return v;
}

Bytes ByteReader::bytes() {
    uint32_t len = u32();
    need(len);
    Bytes out(data_.begin() + static_cast<ptrdiff_t>(pos_),
              data_.begin() + static_cast<ptrdiff_t>(pos_ + len));
    pos_ += len;
    return out;
}

std::string ByteReader::str() {
    Bytes b = bytes();
    return std::string(b.begin(), b.end());
}

std::optional<uint64_t> ByteReader::opt_u64() {
    uint32_t len = u32();
    if (len == 0) return std::nullopt;
    if (len != 8) throw DecodeError("bad optional u64 length");
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += 8;
    return v;
}

std::optional<Bytes> ByteReader::opt_bytes() {
    uint32_t len = u32();
    if (len == 0) return std::nullopt;
    need(len);
    Bytes out(data_.begin() + static_cast<ptrdiff_t>(pos_),
              data_.begin() + static_cast<ptrdiff_t>(pos_ + len));
    pos_ += len;
    return out;
}

Bytes ByteReader::raw(size_t n) {
    need(n);
    Bytes out(data_.begin() + static_cast<ptrdiff_t>(pos_),
              data_.begin() + static_cast<ptrdiff_t>(pos_ + n));
    pos_ += n;
    return out;
}

void ByteReader::expect_end() const {
    if (!at_end()) throw DecodeError("trailing bytes after structure");
}

}  // namespace offcash
