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

namespace offcash {

namespace {

bool have_avx2() {
#if defined(OFFCASH_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const bool g_use_avx2 = have_avx2();

}  // namespace

const char* sha256_backend() { return g_use_avx2 ? "avx2" : "scalar"; }

void sha256_many(const uint8_t* const* msgs, size_t len, size_t count,
                 Digest* out) {
#if defined(OFFCASH_BUILD_AVX2)
    if (g_use_avx2) {
        size_t i = 0;
        for (; i + 8 <= count; i += 8) sha256_x8_avx2(msgs + i, len, out + i);
        if (i < count) sha256_many_scalar(msgs + i, len, count - i, out + i);
        return;
    }
#endif
    sha256_many_scalar(msgs, len, count, out);
}

}  // namespace offcash
