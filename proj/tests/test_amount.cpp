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

#include "doctest.h"

using namespace offcash;

TEST_CASE("amount parsing") {
    CHECK(Amount::parse("100").minor() == 10000);
    CHECK(Amount::parse("100.5").minor() == 10050);
    CHECK(Amount::parse("100.50").minor() == 10050);
    CHECK(Amount::parse("0.01").minor() == 1);
    CHECK(Amount::parse("-3.25").minor() == -325);
    CHECK_THROWS(Amount::parse(""));
    CHECK_THROWS(Amount::parse("1.234"));
    CHECK_THROWS(Amount::parse("1."));
    CHECK_THROWS(Amount::parse("abc"));
    CHECK_THROWS(Amount::parse("1.00x"));
}

TEST_CASE("amount formatting always shows two decimals") {
    CHECK(Amount::parse("100").str() == "100.00");
    CHECK(Amount::parse("0.10").str() == "0.10");
    CHECK(Amount::from_minor(1).str() == "0.01");
    CHECK(Amount::from_minor(-10050).str() == "-100.50");
}

TEST_CASE("exact arithmetic") {
    Amount a = Amount::parse("60.00");
    Amount b = Amount::parse("40.00");
    CHECK(a + b == Amount::parse("100.00"));
    CHECK(Amount::parse("100.00") - a == b);
    CHECK(a > b);
    CHECK(Amount::parse("0.00").positive() == false);
    CHECK(a.positive());
}
