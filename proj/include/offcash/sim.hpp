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

#include "offcash/institutions.hpp"
#include "offcash/scenario.hpp"

namespace offcash {

// Deterministic discrete-event run of one scenario: offline wallets talk
// over a fault-injecting channel, the bank and central bank answer online
// calls synchronously. Identical (scenario, seed) pairs produce identical
// event logs byte for byte.

struct LogLine {
    Tick t = 0;
    std::string actor;
    std::string event;
    std::string detail;

    std::string render() const;
};

struct EventLog {
    std::vector<LogLine> lines;
    void add(Tick t, std::string actor, std::string event, std::string detail);
    std::string render() const;
};

enum class SenderState : uint8_t {
    Idle, Proposed, AwaitApproval, Revealed, Done, TimedOut, Repudiated,
};
enum class ReceiverState : uint8_t {
    Invoiced, Evaluating, Approved, AwaitReveal, Owned, RepudiationSent,
};

const char* to_string(SenderState s);
const char* to_string(ReceiverState s);

struct SenderSession {
    uint64_t base = 0;
    std::string payer;
    std::string payee;
    SenderState state = SenderState::Idle;
    Tick deadline = 0;
};

struct ReceiverSession {
    uint64_t base = 0;
    std::string payer;
    std::string payee;
    ReceiverState state = ReceiverState::Invoiced;
    Tick deadline = 0;
};

struct RecordedMessage {
    std::string from;
    std::string to;
    Bytes bytes;
};

class Simulation {
public:
    explicit Simulation(Scenario scenario);

    /// Drives the run to the scenario horizon.
    void run();

    const EventLog& log() const { return log_; }
    const Scenario& scenario() const { return scenario_; }

    Wallet* wallet(const std::string& name);
    const Wallet* wallet(const std::string& name) const;
    bool wallet_lost(const std::string& name) const;
    Bank& bank() { return bank_; }
    CentralBank& central() { return central_; }
    const Bank& bank() const { return bank_; }
    const CentralBank& central() const { return central_; }

    const std::vector<SenderSession>& sender_sessions() const {
        return sender_sessions_;
    }
    const std::vector<ReceiverSession>& receiver_sessions() const {
        return receiver_sessions_;
    }
    const std::vector<RecordedMessage>& recorded() const { return record_; }

    /// Sum of all customer balances at setup; tokens plus outstanding
    /// face value stays at this figure throughout a run.
    Amount initial_money() const { return initial_money_; }

    // adversary API (scripted steps use these too)
    void adversary_replay(size_t recorded_index, Tick at);
    void adversary_clone(const std::string& source, const std::string& name);

private:
    struct Actor {
        Wallet wallet;
        bool lost = false;
        std::vector<std::pair<Tick, Tick>> blackouts;  // [from, to)
        std::set<std::string> handled_invoices;

        explicit Actor(Wallet w) : wallet(std::move(w)) {}
        bool blacked_out(Tick t) const;
    };
    struct Delivery {
        std::string from;
        std::string to;
        Bytes bytes;
    };
    struct Timer {
        enum class Kind : uint8_t { sender_timeout, receiver_timeout };
        Kind kind;
        std::string actor;
        uint64_t base;
    };

    Actor& actor_at(const std::string& name);
    Wallet& wallet_at(const std::string& name);
    SenderSession* sender_session(const std::string& payer, uint64_t base);
    ReceiverSession* receiver_session(const std::string& payee, uint64_t base);

    void execute_step(const ScenarioStep& step, Tick now);
    void send(const std::string& from, const std::string& to, MsgKind kind,
              Bytes payload, Tick now);
    void schedule_delivery(Delivery d, Tick at);
    void deliver(const Delivery& d, Tick now);
    void fire_timer(const Timer& timer, Tick now);
    void mine_all(Tick now);
    void burn_owned(const std::string& name, const std::string& key, Tick now,
                    bool slow);
    std::optional<FaultAction> scripted_fault(MsgKind kind);

    void on_invoice(const std::string& to, const Message& m, Tick now);
    void on_chain_transfer(const std::string& to, const Message& m, Tick now);
    void on_approval(const std::string& to, const Message& m, Tick now);
    void on_rejection(const std::string& to, const Message& m, Tick now);
    void on_secret_reveal(const std::string& to, const Message& m, Tick now);
    void on_repudiation(const std::string& to, const Message& m, Tick now);
    void on_confirmation(const std::string& to, const Message& m, Tick now);

    Scenario scenario_;
    CentralBank central_;
    Bank bank_;
    KeyPair manufacturer_;
    std::map<std::string, Actor> actors_;
    EventLog log_;
    std::mt19937_64 rng_;
    uint64_t seq_ = 0;
    std::map<std::pair<Tick, uint64_t>, Delivery> pending_deliveries_;
    std::map<std::pair<Tick, uint64_t>, Timer> pending_timers_;
    std::vector<SenderSession> sender_sessions_;
    std::vector<ReceiverSession> receiver_sessions_;
    std::vector<RecordedMessage> record_;
    Amount initial_money_;
    bool ran_ = false;
};

/// Convenience wrapper: build, run, return.
Simulation run_scenario(Scenario scenario);

}  // namespace offcash
