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

#include "offcash/repstring.hpp"

#include <zlib.h>

#include <algorithm>

namespace offcash {

namespace {

// RFC 4648 base-32 alphabet; no padding (the length is carried by the
// payload framing, which is its own integrity check).
constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ234567";

std::string base32_encode(const Bytes& data) {
    std::string out;
    uint32_t acc = 0;
    int bits = 0;
    for (uint8_t b : data) {
        acc = (acc << 8) | b;
        bits += 8;
        while (bits >= 5) {
            out.push_back(kAlphabet[(acc >> (bits - 5)) & 0x1f]);
            bits -= 5;
        }
    }
    if (bits > 0) out.push_back(kAlphabet[(acc << (5 - bits)) & 0x1f]);
    return out;
}

Bytes base32_decode(const std::string& text) {
    Bytes out;
    uint32_t acc = 0;
    int bits = 0;
    for (char c : text) {
        const char* pos = std::char_traits<char>::find(kAlphabet, 32, c);
        if (pos == nullptr) throw DecodeError("invalid base-32 character");
        acc = (acc << 5) | static_cast<uint32_t>(pos - kAlphabet);
        bits += 5;
        if (bits >= 8) {
            out.push_back(static_cast<uint8_t>((acc >> (bits - 8)) & 0xff));
            bits -= 8;
        }
    }
    // Leftover bits are padding and must be zero.
    if (bits > 0 && (acc & ((1u << bits) - 1)) != 0)
        throw DecodeError("nonzero base-32 padding");
    return out;
}

uint32_t checksum(const Bytes& data) {
    return static_cast<uint32_t>(
        crc32(0L, data.data(), static_cast<uInt>(data.size())));
}

}  // namespace

std::string export_repudiation_string(const Repudiation& rep) {
    ByteWriter w;
    w.str(rep.serial);
    w.bytes(rep.signature.bytes);
    Bytes payload = w.take();
    uint32_t crc = checksum(payload);
    ByteWriter framed;
    framed.raw(payload);
    framed.u32(crc);
    return base32_encode(framed.take());
}

Repudiation import_repudiation_string(const std::string& text) {
    if (text.empty()) throw DecodeError("empty repudiation string");
    Bytes data = base32_decode(text);
    if (data.size() < 4) throw DecodeError("repudiation string too short");
    Bytes payload(data.begin(), data.end() - 4);
    uint32_t stored = (static_cast<uint32_t>(data[data.size() - 4]) << 24) |
                      (static_cast<uint32_t>(data[data.size() - 3]) << 16) |
                      (static_cast<uint32_t>(data[data.size() - 2]) << 8) |
                      static_cast<uint32_t>(data[data.size() - 1]);
    if (checksum(payload) != stored)
        throw DecodeError("repudiation string checksum mismatch");

    ByteReader r(payload);
    Repudiation rep;
    rep.serial = r.str();
    Bytes sig = r.bytes();
    if (rep.serial.empty() || sig.size() != kSignatureSize)
        throw DecodeError("malformed repudiation payload");
    std::copy(sig.begin(), sig.end(), rep.signature.bytes.begin());
    r.expect_end();
    return rep;
}

}  // namespace offcash
