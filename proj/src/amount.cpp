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

#include "offcash/amount.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace offcash {

Amount Amount::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty amount");
    size_t pos = 0;
    bool negative = false;
    if (text[pos] == '-') {
        negative = true;
        ++pos;
    }
    int64_t whole = 0;
    size_t digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        whole = whole * 10 + (text[pos] - '0');
        ++pos;
        ++digits;
    }
    if (digits == 0) throw std::invalid_argument("bad amount: " + text);
    int64_t frac = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        size_t frac_digits = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (frac_digits < 2) frac = frac * 10 + (text[pos] - '0');
            ++pos;
            ++frac_digits;
        }
        if (frac_digits == 0 || frac_digits > 2)
            throw std::invalid_argument("amounts carry at most two decimals: " +
                                        text);
        if (frac_digits == 1) frac *= 10;
    }
    if (pos != text.size()) throw std::invalid_argument("bad amount: " + text);
    int64_t minor = whole * 100 + frac;
    return Amount::from_minor(negative ? -minor : minor);
}

std::string Amount::str() const {
    int64_t m = minor_;
    const char* sign = "";
    if (m < 0) {
        sign = "-";
        m = -m;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", sign,
                  static_cast<long long>(m / 100),
                  static_cast<long long>(m % 100));
    return buf;
}

}  // namespace offcash
