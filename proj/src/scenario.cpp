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

#include "offcash/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace offcash {

const char* to_string(FaultAction a) {
    switch (a) {
        case FaultAction::none: return "none";
        case FaultAction::drop: return "drop";
        case FaultAction::tamper: return "tamper";
        case FaultAction::duplicate: return "duplicate";
    }
    return "?";
}

const std::string& ScenarioStep::arg(const std::string& key) const {
    auto it = args.find(key);
    if (it == args.end())
        throw std::runtime_error("step '" + op + "' at t=" + std::to_string(t) +
                                 " is missing argument '" + key + "'");
    return it->second;
}

std::string ScenarioStep::arg_or(const std::string& key,
                                 const std::string& fallback) const {
    auto it = args.find(key);
    return it == args.end() ? fallback : it->second;
}

namespace {

[[noreturn]] void fail(size_t line_no, const std::string& what) {
    throw std::runtime_error("scenario line " + std::to_string(line_no) + ": " +
                             what);
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) tokens.push_back(tok);
    return tokens;
}

uint64_t parse_u64(const std::string& s, size_t line_no) {
    try {
        size_t pos = 0;
        uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) fail(line_no, "bad integer '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        fail(line_no, "bad integer '" + s + "'");
    }
}

double parse_prob(const std::string& s, size_t line_no) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size() || v < 0.0 || v > 1.0)
            fail(line_no, "probability out of range '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        fail(line_no, "bad probability '" + s + "'");
    }
}

MsgKind parse_kind(const std::string& s, size_t line_no) {
    for (uint8_t k = 1; k <= 7; ++k)
        if (s == to_string(static_cast<MsgKind>(k)))
            return static_cast<MsgKind>(k);
    fail(line_no, "unknown message kind '" + s + "'");
}

std::pair<std::string, std::string> split_kv(const std::string& tok,
                                             size_t line_no) {
    size_t eq = tok.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 > tok.size())
        fail(line_no, "expected key=value, got '" + tok + "'");
    return {tok.substr(0, eq), tok.substr(eq + 1)};
}

}  // namespace

Scenario Scenario::parse(std::istream& in) {
    Scenario sc;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (size_t hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::vector<std::string> tokens = tokenize(line);
        if (tokens.empty()) continue;

        if (tokens.size() == 3 && tokens[1] == "=") {
            const std::string& key = tokens[0];
            const std::string& value = tokens[2];
            if (key == "seed") sc.seed = parse_u64(value, line_no);
            else if (key == "horizon") sc.horizon = parse_u64(value, line_no);
            else if (key == "drop_prob")
                sc.channel.drop_prob = parse_prob(value, line_no);
            else if (key == "duplicate_prob")
                sc.channel.duplicate_prob = parse_prob(value, line_no);
            else if (key == "tamper_prob")
                sc.channel.tamper_prob = parse_prob(value, line_no);
            else if (key == "delay_min")
                sc.channel.delay_min = parse_u64(value, line_no);
            else if (key == "delay_max")
                sc.channel.delay_max = parse_u64(value, line_no);
            else if (key == "timeout")
                sc.approval_timeout = parse_u64(value, line_no);
            else if (key == "difficulty")
                sc.dynamic.difficulty_bits =
                    static_cast<unsigned>(parse_u64(value, line_no));
            else if (key == "interval")
                sc.dynamic.interval = parse_u64(value, line_no);
            else if (key == "max_backlog")
                sc.dynamic.max_backlog = parse_u64(value, line_no);
            else if (key == "catchup")
                sc.dynamic.catchup_rate =
                    static_cast<unsigned>(parse_u64(value, line_no));
            else if (key == "threshold") sc.threshold = Amount::parse(value);
            else if (key == "invoice_slots")
                sc.invoice_slots = static_cast<uint32_t>(parse_u64(value, line_no));
            else
                fail(line_no, "unknown setting '" + key + "'");
            continue;
        }

        if (tokens[0] == "actor") {
            if (tokens.size() != 3) fail(line_no, "actor NAME balance=AMOUNT");
            ActorSpec spec;
            spec.name = tokens[1];
            auto [k, v] = split_kv(tokens[2], line_no);
            if (k != "balance") fail(line_no, "actor NAME balance=AMOUNT");
            spec.balance = Amount::parse(v);
            sc.actors.push_back(std::move(spec));
            continue;
        }

        if (tokens[0] == "fault") {
            if (tokens.size() != 3) fail(line_no, "fault KIND ACTION");
            FaultDirective fd;
            fd.kind = parse_kind(tokens[1], line_no);
            if (tokens[2] == "drop") fd.action = FaultAction::drop;
            else if (tokens[2] == "tamper") fd.action = FaultAction::tamper;
            else if (tokens[2] == "duplicate")
                fd.action = FaultAction::duplicate;
            else
                fail(line_no, "unknown fault action '" + tokens[2] + "'");
            sc.faults.push_back(fd);
            continue;
        }

        if (tokens[0] == "step") {
            if (tokens.size() < 3) fail(line_no, "step t=N OP [k=v ...]");
            auto [tk, tv] = split_kv(tokens[1], line_no);
            if (tk != "t") fail(line_no, "step t=N OP [k=v ...]");
            ScenarioStep step;
            step.t = parse_u64(tv, line_no);
            step.op = tokens[2];
            for (size_t i = 3; i < tokens.size(); ++i) {
                auto [k, v] = split_kv(tokens[i], line_no);
                step.args[k] = v;
            }
            sc.steps.push_back(std::move(step));
            continue;
        }

        fail(line_no, "unrecognized directive '" + tokens[0] + "'");
    }

    if (sc.channel.delay_max < sc.channel.delay_min)
        throw std::runtime_error("scenario: delay_max < delay_min");
    std::stable_sort(sc.steps.begin(), sc.steps.end(),
                     [](const ScenarioStep& a, const ScenarioStep& b) {
                         return a.t < b.t;
                     });
    return sc;
}

Scenario Scenario::parse_string(const std::string& text) {
    std::istringstream is(text);
    return parse(is);
}

Scenario Scenario::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    return parse(in);
}

}  // namespace offcash
