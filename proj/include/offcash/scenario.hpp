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

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "offcash/amount.hpp"
#include "offcash/chain.hpp"
#include "offcash/message.hpp"

namespace offcash {

struct ChannelConfig {
    double drop_prob = 0.0;
    double duplicate_prob = 0.0;
    double tamper_prob = 0.0;
    Tick delay_min = 1;
    Tick delay_max = 1;
};

enum class FaultAction : uint8_t { none, drop, tamper, duplicate };

const char* to_string(FaultAction a);

/// One-shot fault applied to the next message of the given kind.
struct FaultDirective {
    MsgKind kind = MsgKind::Invoice;
    FaultAction action = FaultAction::none;
    bool spent = false;
};

struct ActorSpec {
    std::string name;
    Amount balance;
};

struct ScenarioStep {
    Tick t = 0;
    std::string op;
    std::map<std::string, std::string> args;

    const std::string& arg(const std::string& key) const;
    std::string arg_or(const std::string& key, const std::string& fallback) const;
};

/// Parsed scenario file: actors, balances, scripted steps, channel fault
/// knobs and the clock seed. Grammar (one directive per line, # comments):
///
///   seed = 42
///   horizon = 600
///   drop_prob = 0.25            duplicate_prob / tamper_prob likewise
///   delay_min = 1               delay_max = 3
///   timeout = 30                handshake timeout in ticks
///   difficulty = 12             interval = 10
///   max_backlog = 360           catchup = 4
///   threshold = 500.00          invoice_slots = 8
///   actor alice balance=100.00
///   fault Approval drop
///   step t=5 pay from=alice to=bob amount=60.00
struct Scenario {
    uint64_t seed = 1;
    Tick horizon = 600;
    ChannelConfig channel;
    std::vector<FaultDirective> faults;
    std::vector<ActorSpec> actors;
    std::vector<ScenarioStep> steps;

    Tick approval_timeout = 30;
    DynamicParams dynamic{12, 10, 360, 4};
    Amount threshold = Amount::parse("500.00");
    uint32_t invoice_slots = 8;

    static Scenario parse(std::istream& in);
    static Scenario parse_string(const std::string& text);
    static Scenario parse_file(const std::string& path);
};

}  // namespace offcash
