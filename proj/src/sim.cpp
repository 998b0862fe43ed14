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

#include "offcash/sim.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace offcash {

std::string LogLine::render() const {
    return "t=" + std::to_string(t) + " actor=" + actor + " event=" + event +
           " detail=" + detail;
}

void EventLog::add(Tick t, std::string actor, std::string event,
                   std::string detail) {
    lines.push_back({t, std::move(actor), std::move(event), std::move(detail)});
}

std::string EventLog::render() const {
    std::string out;
    for (const LogLine& line : lines) {
        out += line.render();
        out += '\n';
    }
    return out;
}

const char* to_string(SenderState s) {
    switch (s) {
        case SenderState::Idle: return "Idle";
        case SenderState::Proposed: return "Proposed";
        case SenderState::AwaitApproval: return "AwaitApproval";
        case SenderState::Revealed: return "Revealed";
        case SenderState::Done: return "Done";
        case SenderState::TimedOut: return "TimedOut";
        case SenderState::Repudiated: return "Repudiated";
    }
    return "?";
}

const char* to_string(ReceiverState s) {
    switch (s) {
        case ReceiverState::Invoiced: return "Invoiced";
        case ReceiverState::Evaluating: return "Evaluating";
        case ReceiverState::Approved: return "Approved";
        case ReceiverState::AwaitReveal: return "AwaitReveal";
        case ReceiverState::Owned: return "Owned";
        case ReceiverState::RepudiationSent: return "RepudiationSent";
    }
    return "?";
}

namespace {

// Stable per-name seeds: actor keys do not depend on the channel seed, so
// golden logs survive seed sweeps.
uint64_t name_seed(const std::string& name, uint64_t salt) {
    Bytes data(name.begin(), name.end());
    data.push_back(0);
    data.push_back(static_cast<uint8_t>(salt));
    Digest d = sha256(data);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | d.bytes[i];
    return v;
}

constexpr uint64_t kCentralSeed = 0x01;
constexpr uint64_t kBankSeed = 0x02;
constexpr uint64_t kManufacturerSeed = 0x03;

}  // namespace

bool Simulation::Actor::blacked_out(Tick t) const {
    for (const auto& [from, to] : blackouts)
        if (t >= from && t < to) return true;
    return false;
}

Simulation::Simulation(Scenario scenario)
    : scenario_(std::move(scenario)),
      central_(kCentralSeed,
               CentralBank::Config{scenario_.threshold, 16, 30 * kTicksPerDay,
                                   7 * kTicksPerDay}),
      bank_(central_, kBankSeed,
            generate_keypair(seed_from_u64(kManufacturerSeed)).vk),
      manufacturer_(generate_keypair(seed_from_u64(kManufacturerSeed))),
      rng_(scenario_.seed) {
    WalletConfig wallet_config{scenario_.approval_timeout,
                               scenario_.invoice_slots, scenario_.dynamic};
    for (const ActorSpec& spec : scenario_.actors) {
        KeyPair wallet_keys =
            generate_keypair(seed_from_u64(name_seed(spec.name, 1)));
        KeyPair person_keys =
            generate_keypair(seed_from_u64(name_seed(spec.name, 2)));
        Signature attestation =
            sign(manufacturer_.sk, wallet_keys.vk.bytes);
        HolderIdentity id =
            bank_.provision(wallet_keys.vk, attestation, person_keys.vk);
        Wallet w(wallet_config, wallet_keys, person_keys, id, central_.trust(),
                 scenario_.seed ^ name_seed(spec.name, 3));
        bank_.fund_customer(person_keys.vk, spec.balance);
        initial_money_ += spec.balance;
        actors_.emplace(spec.name, Actor(std::move(w)));
    }
    central_.open_reserve(bank_.keys().vk, initial_money_);
}

Simulation::Actor& Simulation::actor_at(const std::string& name) {
    auto it = actors_.find(name);
    if (it == actors_.end())
        throw std::runtime_error("unknown actor: " + name);
    return it->second;
}

Wallet& Simulation::wallet_at(const std::string& name) {
    return actor_at(name).wallet;
}

Wallet* Simulation::wallet(const std::string& name) {
    auto it = actors_.find(name);
    return it == actors_.end() ? nullptr : &it->second.wallet;
}

const Wallet* Simulation::wallet(const std::string& name) const {
    auto it = actors_.find(name);
    return it == actors_.end() ? nullptr : &it->second.wallet;
}

bool Simulation::wallet_lost(const std::string& name) const {
    auto it = actors_.find(name);
    return it != actors_.end() && it->second.lost;
}

SenderSession* Simulation::sender_session(const std::string& payer,
                                          uint64_t base) {
    for (SenderSession& s : sender_sessions_)
        if (s.payer == payer && s.base == base) return &s;
    return nullptr;
}

ReceiverSession* Simulation::receiver_session(const std::string& payee,
                                              uint64_t base) {
    for (ReceiverSession& s : receiver_sessions_)
        if (s.payee == payee && s.base == base) return &s;
    return nullptr;
}

// --- channel -----------------------------------------------------------------

std::optional<FaultAction> Simulation::scripted_fault(MsgKind kind) {
    for (FaultDirective& fd : scenario_.faults) {
        if (fd.spent || fd.kind != kind) continue;
        fd.spent = true;
        return fd.action;
    }
    return std::nullopt;
}

void Simulation::schedule_delivery(Delivery d, Tick at) {
    pending_deliveries_.emplace(std::make_pair(at, seq_++), std::move(d));
}

void Simulation::send(const std::string& from, const std::string& to,
                      MsgKind kind, Bytes payload, Tick now) {
    Message m = make_message(kind, std::move(payload),
                             wallet_at(from).holder_keys().person_keys);
    Bytes bytes = m.encode();
    record_.push_back({from, to, bytes});
    log_.add(now, from, "send",
             "kind=" + std::string(to_string(kind)) + ",to=" + to +
                 ",msg=" + std::to_string(record_.size() - 1));

    bool duplicate = false;
    if (std::optional<FaultAction> fault = scripted_fault(kind)) {
        switch (*fault) {
            case FaultAction::none:
                break;
            case FaultAction::drop:
                log_.add(now, "channel", "fault",
                         "action=drop,kind=" + std::string(to_string(kind)));
                return;
            case FaultAction::tamper: {
                size_t pos = rng_() % bytes.size();
                bytes[pos] ^= 0x01;
                log_.add(now, "channel", "fault",
                         "action=tamper,kind=" + std::string(to_string(kind)) +
                             ",byte=" + std::to_string(pos));
                break;
            }
            case FaultAction::duplicate:
                duplicate = true;
                log_.add(now, "channel", "fault",
                         "action=duplicate,kind=" +
                             std::string(to_string(kind)));
                break;
        }
    }

    auto roll = [&](double prob) {
        if (prob <= 0.0) return false;
        if (prob >= 1.0) return true;
        return (static_cast<double>(rng_() >> 11) / 9007199254740992.0) < prob;
    };
    if (roll(scenario_.channel.drop_prob)) {
        log_.add(now, "channel", "drop",
                 "kind=" + std::string(to_string(kind)) + ",to=" + to);
        return;
    }
    if (roll(scenario_.channel.tamper_prob)) {
        size_t pos = rng_() % bytes.size();
        bytes[pos] ^= 0x01;
        log_.add(now, "channel", "tamper",
                 "kind=" + std::string(to_string(kind)) +
                     ",byte=" + std::to_string(pos));
    }
    if (roll(scenario_.channel.duplicate_prob)) duplicate = true;

    Tick span = scenario_.channel.delay_max - scenario_.channel.delay_min;
    Tick delay = scenario_.channel.delay_min + (span ? rng_() % (span + 1) : 0);
    schedule_delivery({from, to, bytes}, now + delay);
    if (duplicate) {
        Tick dup_delay =
            scenario_.channel.delay_min + (span ? rng_() % (span + 1) : 0);
        log_.add(now, "channel", "duplicate",
                 "kind=" + std::string(to_string(kind)) + ",to=" + to);
        schedule_delivery({from, to, bytes}, now + dup_delay);
    }
}

void Simulation::adversary_replay(size_t recorded_index, Tick at) {
    if (recorded_index >= record_.size())
        throw std::runtime_error("no recorded message " +
                                 std::to_string(recorded_index));
    const RecordedMessage& rm = record_[recorded_index];
    schedule_delivery({rm.from, rm.to, rm.bytes}, at);
}

void Simulation::adversary_clone(const std::string& source,
                                 const std::string& name) {
    if (actors_.count(name))
        throw std::runtime_error("actor already exists: " + name);
    Actor copy(actor_at(source).wallet.clone_storage());
    actors_.emplace(name, std::move(copy));
}

// --- message handlers -----------------------------------------------------------

void Simulation::deliver(const Delivery& d, Tick now) {
    auto it = actors_.find(d.to);
    if (it == actors_.end() || it->second.lost) {
        log_.add(now, d.to, "undeliverable", "from=" + d.from);
        return;
    }
    Message m;
    try {
        m = Message::decode(d.bytes);
    } catch (const DecodeError& e) {
        log_.add(now, d.to, "invalid_message", std::string("reason=") + e.what());
        return;
    }
    log_.add(now, d.to, "recv",
             "kind=" + std::string(to_string(m.kind)) + ",from=" + d.from);

    // Transfer proposals are evaluated on their own merits (every block is
    // signed); the other kinds need a sound envelope.
    if (m.kind != MsgKind::ChainTransfer && !m.signature_ok()) {
        log_.add(now, d.to, "invalid_signature",
                 "kind=" + std::string(to_string(m.kind)));
        return;
    }

    switch (m.kind) {
        case MsgKind::Invoice: on_invoice(d.to, m, now); break;
        case MsgKind::ChainTransfer: on_chain_transfer(d.to, m, now); break;
        case MsgKind::Approval: on_approval(d.to, m, now); break;
        case MsgKind::Rejection: on_rejection(d.to, m, now); break;
        case MsgKind::SecretReveal: on_secret_reveal(d.to, m, now); break;
        case MsgKind::RepudiationDelivery: on_repudiation(d.to, m, now); break;
        case MsgKind::Confirmation: on_confirmation(d.to, m, now); break;
    }
}

void Simulation::on_invoice(const std::string& to, const Message& m, Tick now) {
    Invoice invoice;
    try {
        invoice = decode_payload<Invoice>(m.payload);
    } catch (const DecodeError& e) {
        log_.add(now, to, "invalid_message", std::string("reason=") + e.what());
        return;
    }
    Actor& payer = actor_at(to);
    std::string invoice_id = invoice.beneficiary_cert.subject_vk.hex() + "/" +
                             std::to_string(invoice.base_invoice_serial);
    if (!payer.handled_invoices.insert(invoice_id).second) {
        log_.add(now, to, "ignored", "duplicate_invoice");
        return;
    }

    // The invoice names the beneficiary; find the matching actor for
    // session bookkeeping.
    std::string payee;
    for (const auto& [name, actor] : actors_)
        if (actor.wallet.person_vk() == invoice.beneficiary_cert.subject_vk)
            payee = name;

    TransferProposal proposal;
    try {
        proposal = payer.wallet.prepare_payment(invoice, now);
    } catch (const std::exception& e) {
        log_.add(now, to, "payment_failed", std::string("reason=") + e.what());
        return;
    }
    log_.add(now, to, "prepared",
             "base=" + std::to_string(proposal.base_invoice_serial) +
                 ",coins=" + std::to_string(proposal.chains.size()));

    SenderSession session;
    session.base = proposal.base_invoice_serial;
    session.payer = to;
    session.payee = payee;
    session.state = SenderState::Proposed;
    session.deadline = now + scenario_.approval_timeout;
    sender_sessions_.push_back(session);
    pending_timers_.emplace(
        std::make_pair(session.deadline, seq_++),
        Timer{Timer::Kind::sender_timeout, to, session.base});

    send(to, payee, MsgKind::ChainTransfer, encode_payload(proposal), now);
    sender_session(to, session.base)->state = SenderState::AwaitApproval;
}

void Simulation::on_chain_transfer(const std::string& to, const Message& m,
                                   Tick now) {
    TransferProposal proposal;
    try {
        proposal = decode_payload<TransferProposal>(m.payload);
    } catch (const DecodeError& e) {
        log_.add(now, to, "invalid_message", std::string("reason=") + e.what());
        return;
    }
    Actor& payee = actor_at(to);
    ReceiverSession* session =
        receiver_session(to, proposal.base_invoice_serial);
    if (session && session->state == ReceiverState::Invoiced)
        session->state = ReceiverState::Evaluating;

    std::string payer = session ? session->payer : std::string();
    if (payer.empty()) {
        // Fall back to the chain's announced sender.
        for (const auto& [name, actor] : actors_)
            if (!proposal.chains.empty() &&
                !proposal.chains[0].blocks.empty() &&
                actor.wallet.person_vk() ==
                    current_holder(proposal.chains[0]).person_vk)
                payer = name;
    }

    auto result = payee.wallet.receive_proposal(proposal, now);
    if (std::holds_alternative<Approval>(result)) {
        const Approval& approval = std::get<Approval>(result);
        log_.add(now, to, "approved",
                 "base=" + std::to_string(approval.base_invoice_serial) +
                     ",coins=" + std::to_string(proposal.chains.size()));
        if (session && (session->state == ReceiverState::Evaluating ||
                        session->state == ReceiverState::Invoiced)) {
            session->state = ReceiverState::AwaitReveal;
            session->deadline = now + scenario_.approval_timeout;
            pending_timers_.emplace(
                std::make_pair(session->deadline, seq_++),
                Timer{Timer::Kind::receiver_timeout, to, session->base});
        }
        if (!payer.empty())
            send(to, payer, MsgKind::Approval, encode_payload(approval), now);
    } else {
        const Rejection& rejection = std::get<Rejection>(result);
        std::string codes;
        for (FailureCode c : rejection.codes)
            codes += std::string(codes.empty() ? "" : "+") + to_string(c);
        log_.add(now, to, "rejected",
                 "base=" + std::to_string(rejection.base_invoice_serial) +
                     ",codes=" + (codes.empty() ? "none" : codes));
        if (session && (session->state == ReceiverState::Evaluating ||
                        session->state == ReceiverState::Invoiced))
            session->state = ReceiverState::RepudiationSent;
        if (!payer.empty())
            send(to, payer, MsgKind::Rejection, encode_payload(rejection), now);
    }
}

void Simulation::on_approval(const std::string& to, const Message& m,
                             Tick now) {
    Approval approval;
    try {
        approval = decode_payload<Approval>(m.payload);
    } catch (const DecodeError& e) {
        log_.add(now, to, "invalid_message", std::string("reason=") + e.what());
        return;
    }
    SenderSession* session = sender_session(to, approval.base_invoice_serial);
    if (!session || session->state != SenderState::AwaitApproval) {
        log_.add(now, to, "ignored",
                 "kind=Approval,base=" +
                     std::to_string(approval.base_invoice_serial));
        return;
    }
    std::optional<SecretReveal> reveal =
        wallet_at(to).reveal_secret(approval, now);
    if (!reveal) {
        log_.add(now, to, "ignored", "kind=Approval,reason=verification");
        return;
    }
    session->state = SenderState::Revealed;
    log_.add(now, to, "revealed",
             "base=" + std::to_string(approval.base_invoice_serial));
    send(to, session->payee, MsgKind::SecretReveal, encode_payload(*reveal),
         now);
}

void Simulation::on_rejection(const std::string& to, const Message& m,
                              Tick now) {
    Rejection rejection;
    try {
        rejection = decode_payload<Rejection>(m.payload);
    } catch (const DecodeError& e) {
        log_.add(now, to, "invalid_message", std::string("reason=") + e.what());
        return;
    }
    SenderSession* session = sender_session(to, rejection.base_invoice_serial);
    if (!session || session->state != SenderState::AwaitApproval) {
        log_.add(now, to, "ignored",
                 "kind=Rejection,base=" +
                     std::to_string(rejection.base_invoice_serial));
        return;
    }
    if (wallet_at(to).handle_rejection(rejection)) {
        session->state = SenderState::TimedOut;
        log_.add(now, to, "transfer_burned",
                 "base=" + std::to_string(rejection.base_invoice_serial) +
                     ",reason=rejection");
    } else {
        log_.add(now, to, "ignored", "kind=Rejection,reason=verification");
    }
}

void Simulation::on_secret_reveal(const std::string& to, const Message& m,
                                  Tick now) {
    SecretReveal reveal;
    try {
        reveal = decode_payload<SecretReveal>(m.payload);
    } catch (const DecodeError& e) {
        log_.add(now, to, "invalid_message", std::string("reason=") + e.what());
        return;
    }
    ReceiverSession* session = receiver_session(to, reveal.base_invoice_serial);
    if (!session || session->state != ReceiverState::AwaitReveal) {
        log_.add(now, to, "ignored",
                 "kind=SecretReveal,base=" +
                     std::to_string(reveal.base_invoice_serial));
        return;
    }
    auto result = wallet_at(to).finalize_receive(reveal, now);
    if (!result) {
        log_.add(now, to, "ignored", "kind=SecretReveal,reason=verification");
        return;
    }
    if (std::holds_alternative<Confirmation>(*result)) {
        session->state = ReceiverState::Owned;
        const Confirmation& conf = std::get<Confirmation>(*result);
        log_.add(now, to, "coins_owned",
                 "base=" + std::to_string(reveal.base_invoice_serial) +
                     ",total=" + wallet_at(to).owned_total().str());
        send(to, session->payer, MsgKind::Confirmation, encode_payload(conf),
             now);
    } else {
        session->state = ReceiverState::RepudiationSent;
        const RepudiationDelivery& delivery =
            std::get<RepudiationDelivery>(*result);
        log_.add(now, to, "reveal_mismatch",
                 "base=" + std::to_string(reveal.base_invoice_serial));
        send(to, session->payer, MsgKind::RepudiationDelivery,
             encode_payload(delivery), now);
    }
}

void Simulation::on_repudiation(const std::string& to, const Message& m,
                                Tick now) {
    RepudiationDelivery delivery;
    try {
        delivery = decode_payload<RepudiationDelivery>(m.payload);
    } catch (const DecodeError& e) {
        log_.add(now, to, "invalid_message", std::string("reason=") + e.what());
        return;
    }
    Wallet& w = wallet_at(to);
    size_t applied = 0;
    for (const auto& [key, rep] : delivery.repudiations)
        if (w.apply_repudiation(key, rep.signature)) ++applied;
    log_.add(now, to, "repudiation_applied",
             "base=" + std::to_string(delivery.base_invoice_serial) +
                 ",coins=" + std::to_string(applied));
    SenderSession* session = sender_session(to, delivery.base_invoice_serial);
    if (session && applied > 0 && session->state == SenderState::Revealed)
        session->state = SenderState::Repudiated;
}

void Simulation::on_confirmation(const std::string& to, const Message& m,
                                 Tick now) {
    Confirmation conf;
    try {
        conf = decode_payload<Confirmation>(m.payload);
    } catch (const DecodeError& e) {
        log_.add(now, to, "invalid_message", std::string("reason=") + e.what());
        return;
    }
    SenderSession* session = sender_session(to, conf.base_invoice_serial);
    if (!session || session->state != SenderState::Revealed) {
        log_.add(now, to, "ignored",
                 "kind=Confirmation,base=" +
                     std::to_string(conf.base_invoice_serial));
        return;
    }
    session->state = SenderState::Done;
    log_.add(now, to, "settled",
             "base=" + std::to_string(conf.base_invoice_serial));
}

void Simulation::fire_timer(const Timer& timer, Tick now) {
    if (timer.kind == Timer::Kind::sender_timeout) {
        SenderSession* session = sender_session(timer.actor, timer.base);
        if (!session || session->state != SenderState::AwaitApproval) return;
        if (wallet_at(timer.actor).abort_payment(timer.base)) {
            session->state = SenderState::TimedOut;
            log_.add(now, timer.actor, "transfer_burned",
                     "base=" + std::to_string(timer.base) + ",reason=timeout");
        }
        return;
    }
    ReceiverSession* session = receiver_session(timer.actor, timer.base);
    if (!session || session->state != ReceiverState::AwaitReveal) return;
    std::optional<RepudiationDelivery> delivery =
        wallet_at(timer.actor).expire_incoming(timer.base);
    if (!delivery) return;
    session->state = ReceiverState::RepudiationSent;
    log_.add(now, timer.actor, "reveal_timeout",
             "base=" + std::to_string(timer.base));
    send(timer.actor, session->payer, MsgKind::RepudiationDelivery,
         encode_payload(*delivery), now);
}

// --- scripted steps ---------------------------------------------------------------

void Simulation::burn_owned(const std::string& name, const std::string& key,
                            Tick now, bool slow) {
    Actor& actor = actor_at(name);
    std::vector<std::string> keys;
    if (!key.empty()) {
        keys.push_back(key);
    } else {
        for (const auto& [k, rec] : actor.wallet.coins())
            if (rec.status == CoinStatus::owned) keys.push_back(k);
    }
    for (const std::string& k : keys) {
        const CoinRecord* rec = actor.wallet.coin(k);
        if (!rec || rec->status != CoinStatus::owned) {
            log_.add(now, name, "burn_rejected", "key=" + k + ",reason=status");
            continue;
        }
        const PublicKey& vk = actor.wallet.person_vk();
        Bytes challenge = central_.burn_challenge(vk);
        ByteWriter w;
        w.bytes(challenge);
        w.str(rec->chain.genesis.serial);
        Signature proof =
            sign(actor.wallet.holder_keys().person_keys.sk, w.data());
        try {
            Amount credited =
                bank_.redeem(central_, rec->chain, vk, proof, now, slow);
            actor.wallet.remove_coin(k);
            log_.add(now, name, slow ? "slow_collected" : "burn",
                     "key=" + k + ",credit=" + credited.str() +
                         ",balance=" + bank_.token_balance(vk).str());
        } catch (const std::exception& e) {
            log_.add(now, name, "burn_rejected",
                     "key=" + k + ",reason=" + e.what());
        }
    }
}

void Simulation::execute_step(const ScenarioStep& step, Tick now) {
    if (step.op == "cash_out") {
        const std::string& name = step.arg("actor");
        Actor& actor = actor_at(name);
        CashOutOptions options;
        std::optional<DynamicParams> wallet_dyn;
        options.hot = step.arg_or("kind", "cold") == "hot";
        if (auto it = step.args.find("expires"); it != step.args.end())
            options.expiration = std::stoull(it->second);
        if (auto it = step.args.find("claim"); it != step.args.end())
            options.claim_deadline = std::stoull(it->second);
        if (auto it = step.args.find("dynamic"); it != step.args.end()) {
            DynamicParams dyn = scenario_.dynamic;
            dyn.difficulty_bits = static_cast<unsigned>(std::stoul(it->second));
            options.dynamic = dyn;
            wallet_dyn = dyn;
        }
        try {
            std::vector<CoinChain> chains =
                bank_.cash_out(central_, actor.wallet.identity(),
                               Amount::parse(step.arg("amount")), now, options);
            for (CoinChain& chain : chains) {
                std::string serial = chain.genesis.serial;
                Amount value = chain.genesis.value;
                actor.wallet.add_owned_coin(std::move(chain), wallet_dyn);
                log_.add(now, name, "cash_out",
                         "serial=" + serial + ",value=" + value.str() +
                             ",kind=" + (options.hot ? "hot" : "cold"));
            }
        } catch (const std::exception& e) {
            log_.add(now, name, "cash_out_rejected",
                     std::string("reason=") + e.what());
        }
        return;
    }
    if (step.op == "pay") {
        const std::string& payer = step.arg("from");
        const std::string& payee = step.arg("to");
        Actor& payee_actor = actor_at(payee);
        uint32_t slots = static_cast<uint32_t>(
            std::stoul(step.arg_or("slots",
                                   std::to_string(scenario_.invoice_slots))));
        Invoice invoice = payee_actor.wallet.create_invoice(
            Amount::parse(step.arg("amount")), slots, now);
        ReceiverSession session;
        session.base = invoice.base_invoice_serial;
        session.payer = payer;
        session.payee = payee;
        session.state = ReceiverState::Invoiced;
        receiver_sessions_.push_back(session);
        log_.add(now, payee, "invoice",
                 "base=" + std::to_string(invoice.base_invoice_serial) +
                     ",amount=" + invoice.amount.str() + ",payer=" + payer);
        send(payee, payer, MsgKind::Invoice, encode_payload(invoice), now);
        return;
    }
    if (step.op == "upload") {
        const std::string& name = step.arg("actor");
        Actor& actor = actor_at(name);
        for (const auto& [key, chain] : actor.wallet.uploadable_chains()) {
            UploadOutcome outcome = central_.upload_chain(chain, now);
            log_.add(now, name, "upload",
                     "key=" + key +
                         ",accepted=" + (outcome.accepted ? "yes" : "no") +
                         (outcome.conflict ? ",conflict=yes" : "") +
                         ",detail=" + outcome.detail);
            if (outcome.accepted) actor.wallet.mark_uploaded(key);
        }
        return;
    }
    if (step.op == "burn") {
        burn_owned(step.arg("actor"), step.arg_or("key", ""), now, false);
        return;
    }
    if (step.op == "collect_slow") {
        burn_owned(step.arg("actor"), step.arg_or("key", ""), now, true);
        return;
    }
    if (step.op == "resolve_claims") {
        const std::string& serial = step.arg("serial");
        try {
            std::optional<PublicKey> owner =
                central_.resolve_claims(bank_, serial, now);
            log_.add(now, "central", "claim_resolved",
                     "serial=" + serial + ",owner=" +
                         (owner ? owner->hex().substr(0, 16) : "parked"));
        } catch (const std::exception& e) {
            log_.add(now, "central", "claim_rejected",
                     "serial=" + serial + ",reason=" + e.what());
        }
        return;
    }
    if (step.op == "blackout") {
        const std::string& name = step.arg("actor");
        Tick until = std::stoull(step.arg("until"));
        actor_at(name).blackouts.emplace_back(now, until);
        log_.add(now, name, "blackout", "until=" + std::to_string(until));
        return;
    }
    if (step.op == "clone") {
        adversary_clone(step.arg("actor"), step.arg("as"));
        log_.add(now, step.arg("as"), "adversary_clone",
                 "source=" + step.arg("actor"));
        return;
    }
    if (step.op == "lose_wallet") {
        const std::string& name = step.arg("actor");
        actor_at(name).lost = true;
        log_.add(now, name, "wallet_lost", "");
        return;
    }
    if (step.op == "flag_error") {
        const std::string& name = step.arg("actor");
        try {
            actor_at(name).wallet.flag_error(step.arg("key"));
            log_.add(now, name, "error_flagged", "key=" + step.arg("key"));
        } catch (const std::exception& e) {
            log_.add(now, name, "flag_rejected",
                     std::string("reason=") + e.what());
        }
        return;
    }
    if (step.op == "qr") {
        // Out-of-band hand-off of the repudiation strings (the QR path);
        // round-trips through the printable encoding.
        const std::string& from = step.arg("from");
        const std::string& to = step.arg("to");
        Actor& source = actor_at(from);
        Actor& target = actor_at(to);
        for (const Repudiation& rep :
             source.wallet.exportable_repudiations()) {
            std::string text = export_repudiation_string(rep);
            Repudiation imported = import_repudiation_string(text);
            bool ok = target.wallet.apply_repudiation(imported.serial,
                                                      imported.signature);
            log_.add(now, to, "qr_repudiation",
                     "key=" + imported.serial +
                         ",applied=" + (ok ? "yes" : "no"));
        }
        return;
    }
    if (step.op == "replay") {
        size_t index = std::stoull(step.arg("msg"));
        adversary_replay(index, now);
        log_.add(now, "adversary", "replay", "msg=" + std::to_string(index));
        return;
    }
    throw std::runtime_error("unknown scenario op: " + step.op);
}

void Simulation::mine_all(Tick now) {
    for (auto& [name, actor] : actors_) {
        if (actor.lost || actor.blacked_out(now)) continue;
        for (const MineEvent& ev : actor.wallet.mine_tick(now)) {
            if (ev.marked_slow)
                log_.add(now, name, "slow_coin", "key=" + ev.key);
            else
                log_.add(now, name, "mined",
                         "key=" + ev.key +
                             ",blocks=" + std::to_string(ev.appended));
        }
    }
}

void Simulation::run() {
    if (ran_) throw std::logic_error("simulation already ran");
    ran_ = true;
    size_t next_step = 0;
    for (Tick t = 0; t <= scenario_.horizon; ++t) {
        while (next_step < scenario_.steps.size() &&
               scenario_.steps[next_step].t <= t) {
            execute_step(scenario_.steps[next_step], t);
            ++next_step;
        }
        // Deliveries and timers interleave in schedule order, including
        // same-tick sends triggered by a handler.
        for (;;) {
            bool has_delivery = !pending_deliveries_.empty() &&
                                pending_deliveries_.begin()->first.first <= t;
            bool has_timer = !pending_timers_.empty() &&
                             pending_timers_.begin()->first.first <= t;
            if (!has_delivery && !has_timer) break;
            bool pick_delivery = has_delivery;
            if (has_delivery && has_timer)
                pick_delivery = pending_deliveries_.begin()->first.second <
                                pending_timers_.begin()->first.second;
            if (pick_delivery) {
                Delivery d = std::move(pending_deliveries_.begin()->second);
                pending_deliveries_.erase(pending_deliveries_.begin());
                deliver(d, t);
            } else {
                Timer timer = pending_timers_.begin()->second;
                pending_timers_.erase(pending_timers_.begin());
                fire_timer(timer, t);
            }
        }
        mine_all(t);
    }
}

Simulation run_scenario(Scenario scenario) {
    Simulation sim(std::move(scenario));
    sim.run();
    return sim;
}

}  // namespace offcash
