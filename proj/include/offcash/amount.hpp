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
#include <string>

namespace offcash {

/// Coin value in minor units (two fractional digits). Exact integer
/// arithmetic so fork conservation holds to the cent.
class Amount {
public:
    constexpr Amount() = default;
    static constexpr Amount from_minor(int64_t minor) { return Amount(minor); }
    static Amount parse(const std::string& text);  // "100", "100.5", "100.50"

    constexpr int64_t minor() const { return minor_; }
    std::string str() const;  // always two decimals: "100.00"

    constexpr bool positive() const { return minor_ > 0; }

    friend constexpr Amount operator+(Amount a, Amount b) {
        return Amount(a.minor_ + b.minor_);
    }
    friend constexpr Amount operator-(Amount a, Amount b) {
        return Amount(a.minor_ - b.minor_);
    }
    Amount& operator+=(Amount b) { minor_ += b.minor_; return *this; }
    Amount& operator-=(Amount b) { minor_ -= b.minor_; return *this; }
    auto operator<=>(const Amount&) const = default;

private:
    explicit constexpr Amount(int64_t minor) : minor_(minor) {}
    int64_t minor_ = 0;
};

}  // namespace offcash
