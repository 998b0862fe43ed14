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

#include <string>

#include "offcash/bytes.hpp"
#include "offcash/sign.hpp"

namespace offcash {

/// A receiver's pre-signed cancellation for one coin, in a form a person
/// can read off a screen and type back in: base-32 text with a CRC-32
/// suffix, so any single-character transcription slip is caught.
struct Repudiation {
    std::string serial;
    Signature signature;  // beneficiary's signature over the sender's
    bool operator==(const Repudiation&) const = default;
};

std::string export_repudiation_string(const Repudiation& rep);

/// Throws DecodeError on bad alphabet, length, or checksum.
Repudiation import_repudiation_string(const std::string& text);

}  // namespace offcash
