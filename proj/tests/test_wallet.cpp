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

#include "offcash/wallet.hpp"

#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "offcash/message.hpp"

using namespace offcash;
using offcash::testing::World;

namespace {

struct Pair {
    World w;
    Wallet alice;
    Wallet bob;

    Pair()
        : alice(WalletConfig{}, w.alice.wallet_keys, w.alice.person_keys,
                w.alice.id, w.trust, 101),
          bob(WalletConfig{}, w.bob.wallet_keys, w.bob.person_keys, w.bob.id,
              w.trust, 202) {}

    void fund_alice(const std::string& serial, const char* value,
                    std::optional<DynamicParams> dyn = std::nullopt) {
        alice.add_owned_coin(w.mint_and_deliver(Amount::parse(value),
                                                CoinKind::cold(), w.alice, 0,
                                                serial, dyn),
                            dyn);
    }
};

std::string single_owned_key(const Wallet& w) {
    for (const auto& [key, rec] : w.coins())
        if (rec.status == CoinStatus::owned) return key;
    return {};
}

}  // namespace

TEST_CASE("create_invoice reserves disjoint counter ranges") {
    Pair p;
    Invoice a = p.bob.create_invoice(Amount::parse("60.00"), 1, 5);
    CHECK(a.base_invoice_serial == 0);
    CHECK(p.bob.rpmb_counter() == 1);
    Invoice b = p.bob.create_invoice(Amount::parse("10.00"), 4, 6);
    CHECK(b.base_invoice_serial == 1);
    CHECK(p.bob.rpmb_counter() == 5);

    CHECK_THROWS(p.bob.create_invoice(Amount::parse("0"), 1, 7));

    // 100 invoices, no overlapping ranges
    uint64_t prev_end = 5;
    for (int i = 0; i < 100; ++i) {
        Invoice inv = p.bob.create_invoice(Amount::parse("1.00"), 3, 10);
        CHECK(inv.base_invoice_serial == prev_end);
        prev_end = inv.base_invoice_serial + inv.coin_slots;
    }
    CHECK(p.bob.rpmb_counter() == prev_end);
}

TEST_CASE("payment with exact match skips the fork") {
    Pair p;
    p.fund_alice("C-1", "100.00");
    Invoice inv = p.bob.create_invoice(Amount::parse("100.00"), 1, 5);
    TransferProposal proposal = p.alice.prepare_payment(inv, 10);
    CHECK(proposal.chains.size() == 1);
    CHECK(proposal.chains[0].blocks.back().is_transfer());
    CHECK(proposal.chains[0].value_in_force() == Amount::parse("100.00"));
    // no fork block anywhere
    for (const Block& b : proposal.chains[0].blocks) CHECK_FALSE(b.is_fork());
}

TEST_CASE("payment forks one cold coin for exact change") {
    Pair p;
    p.fund_alice("C-1", "100.00");
    Invoice inv = p.bob.create_invoice(Amount::parse("60.00"), 1, 5);
    TransferProposal proposal = p.alice.prepare_payment(inv, 10);

    REQUIRE(proposal.chains.size() == 1);
    CHECK(proposal.chains[0].value_in_force() == Amount::parse("60.00"));
    // the 40 remainder stays owned
    CHECK(p.alice.owned_total() == Amount::parse("40.00"));
    // escrowed coin is pending
    size_t pending = 0;
    for (const auto& [key, rec] : p.alice.coins())
        if (rec.status == CoinStatus::pending_outgoing) ++pending;
    CHECK(pending == 1);
}

TEST_CASE("the proposal withholds every secret nonce byte") {
    Pair p;
    p.fund_alice("C-1", "100.00");
    Invoice inv = p.bob.create_invoice(Amount::parse("60.00"), 1, 5);
    TransferProposal proposal = p.alice.prepare_payment(inv, 10);

    // escrowed nonce must not appear in the encoded proposal
    Bytes wire = encode_payload(proposal);
    for (const auto& [key, rec] : p.alice.coins()) {
        if (!rec.escrow) continue;
        const Bytes& nonce = rec.escrow->first;
        auto found = std::search(wire.begin(), wire.end(), nonce.begin(),
                                 nonce.end());
        CHECK(found == wire.end());
    }
    for (const CoinChain& c : proposal.chains)
        CHECK_FALSE(c.blocks.back().secret_nonce.has_value());
}

TEST_CASE("insufficient funds and hot-coin fractioning are rejected") {
    Pair p;
    Invoice inv = p.bob.create_invoice(Amount::parse("60.00"), 1, 5);
    CHECK_THROWS_WITH_AS(p.alice.prepare_payment(inv, 10),
                         "insufficient funds", std::invalid_argument);

    // only a hot 100 available for a 60 invoice
    p.alice.add_owned_coin(p.w.mint_and_deliver(Amount::parse("100.00"),
                                                CoinKind::hot(1000, 2000),
                                                p.w.alice, 0, "H-1"));
    Invoice inv2 = p.bob.create_invoice(Amount::parse("60.00"), 1, 5);
    CHECK_THROWS_AS(p.alice.prepare_payment(inv2, 10), std::invalid_argument);
}

TEST_CASE("full handshake: approve, reveal, finalize") {
    Pair p;
    p.fund_alice("C-1", "100.00");
    Invoice inv = p.bob.create_invoice(Amount::parse("60.00"), 1, 5);
    TransferProposal proposal = p.alice.prepare_payment(inv, 10);

    auto response = p.bob.receive_proposal(proposal, 11);
    REQUIRE(std::holds_alternative<Approval>(response));
    Approval approval = std::get<Approval>(response);

    auto reveal = p.alice.reveal_secret(approval, 12);
    REQUIRE(reveal.has_value());

    auto outcome = p.bob.finalize_receive(*reveal, 13);
    REQUIRE(outcome.has_value());
    REQUIRE(std::holds_alternative<Confirmation>(*outcome));

    CHECK(p.bob.owned_total() == Amount::parse("60.00"));
    CHECK(p.bob.consumed_invoices().size() == 1);
    // sender keeps the transferred chain for upload
    auto uploadable = p.alice.uploadable_chains();
    REQUIRE(uploadable.size() == 1);
    CHECK(current_holder(uploadable[0].second).person_vk == p.bob.person_vk());
    // receiver's standby repudiation is gone
    CHECK(p.bob.exportable_repudiations().empty());
}

TEST_CASE("replayed proposal is rejected with a counter failure") {
    Pair p;
    p.fund_alice("C-1", "100.00");
    Invoice inv = p.bob.create_invoice(Amount::parse("60.00"), 1, 5);
    TransferProposal proposal = p.alice.prepare_payment(inv, 10);

    auto first = p.bob.receive_proposal(proposal, 11);
    REQUIRE(std::holds_alternative<Approval>(first));
    auto replay = p.bob.receive_proposal(proposal, 12);
    REQUIRE(std::holds_alternative<Rejection>(replay));
    const Rejection& rej = std::get<Rejection>(replay);
    CHECK(std::find(rej.codes.begin(), rej.codes.end(), FailureCode::counter) !=
          rej.codes.end());

    // also after settling
    auto reveal = p.alice.reveal_secret(std::get<Approval>(first), 12);
    p.bob.finalize_receive(*reveal, 13);
    auto replay2 = p.bob.receive_proposal(proposal, 14);
    REQUIRE(std::holds_alternative<Rejection>(replay2));
}

TEST_CASE("receive_proposal rejects a whole payment when one coin fails") {
    Pair p;
    p.fund_alice("C-1", "50.00");
    p.fund_alice("C-2", "50.00");
    Invoice inv = p.bob.create_invoice(Amount::parse("100.00"), 4, 5);
    TransferProposal proposal = p.alice.prepare_payment(inv, 10);
    REQUIRE(proposal.chains.size() == 2);

    // corrupt the second chain's certificate
    proposal.chains[1].blocks[0].holder_cert.subject_vk.bytes[3] ^= 1;
    auto response = p.bob.receive_proposal(proposal, 11);
    REQUIRE(std::holds_alternative<Rejection>(response));
    // nothing pending at the receiver
    for (const auto& [key, rec] : p.bob.coins())
        CHECK(rec.status != CoinStatus::pending_incoming);
}

TEST_CASE("wrong nonce triggers the standby repudiation") {
    Pair p;
    p.fund_alice("C-1", "60.00");
    Invoice inv = p.bob.create_invoice(Amount::parse("60.00"), 1, 5);
    TransferProposal proposal = p.alice.prepare_payment(inv, 10);
    Approval approval =
        std::get<Approval>(p.bob.receive_proposal(proposal, 11));
    SecretReveal reveal = *p.alice.reveal_secret(approval, 12);

    // tamper the nonce
    reveal.nonces[0].second[0] ^= 0xff;
    reveal.sig = DualSig{};  // signature now broken too
    // re-sign under alice to isolate the hash check
    reveal.sig.wallet_sig =
        sign(p.w.alice.wallet_keys.sk, reveal.core_bytes());
    reveal.sig.person_sig =
        sign(p.w.alice.person_keys.sk, reveal.sig.wallet_sig.bytes);

    auto outcome = p.bob.finalize_receive(reveal, 13);
    REQUIRE(outcome.has_value());
    REQUIRE(std::holds_alternative<RepudiationDelivery>(*outcome));
    const RepudiationDelivery& delivery =
        std::get<RepudiationDelivery>(*outcome);
    REQUIRE(delivery.repudiations.size() == 1);

    // an attacker's signature is rejected first
    const auto& [key, rep] = delivery.repudiations[0];
    Signature forged = rep.signature;
    forged.bytes[0] ^= 1;
    CHECK_FALSE(p.alice.apply_repudiation(key, forged));
    KeyPair attacker = generate_keypair(seed_from_u64(0x666));
    const CoinRecord* pending = p.alice.coin(key);
    REQUIRE(pending != nullptr);
    Signature wrong_key = sign(
        attacker.sk, pending->chain.blocks.back().person_sig->bytes);
    CHECK_FALSE(p.alice.apply_repudiation(key, wrong_key));

    // applying the genuine one returns the coin to alice
    CHECK(p.alice.apply_repudiation(key, rep.signature));
    CHECK(p.alice.owned_total() == Amount::parse("60.00"));
    const CoinRecord* rec = p.alice.coin(key);
    REQUIRE(rec != nullptr);
    CHECK(current_holder(rec->chain).person_vk == p.alice.person_vk());
    CHECK(current_holder(rec->chain).status == HolderStatus::repudiated);

    // idempotent
    CHECK(p.alice.apply_repudiation(key, rep.signature));
    // receiver never owned and still has the exportable string
    CHECK(p.bob.owned_total() == Amount{});
    CHECK_FALSE(p.bob.exportable_repudiations().empty());
}

TEST_CASE("a hot coin is refused once its expiration passed") {
    Pair p;
    p.alice.add_owned_coin(p.w.mint_and_deliver(Amount::parse("60.00"),
                                                CoinKind::hot(100, 200),
                                                p.w.alice, 0, "H-1"));
    Invoice inv = p.bob.create_invoice(Amount::parse("60.00"), 1, 50);
    TransferProposal proposal = p.alice.prepare_payment(inv, 90);

    // receiver evaluates after the expiration date
    auto response = p.bob.receive_proposal(proposal, 150);
    REQUIRE(std::holds_alternative<Rejection>(response));
    const Rejection& rej = std::get<Rejection>(response);
    CHECK(std::find(rej.codes.begin(), rej.codes.end(),
                    FailureCode::timestamp) != rej.codes.end());

    // and the sender itself cannot spend it after expiry
    p.alice.abort_payment(inv.base_invoice_serial);
    Invoice late = p.bob.create_invoice(Amount::parse("60.00"), 1, 150);
    CHECK_THROWS_WITH_AS(p.alice.prepare_payment(late, 150),
                         "insufficient funds", std::invalid_argument);
}

TEST_CASE("forged approval reveals nothing") {
    Pair p;
    p.fund_alice("C-1", "60.00");
    Invoice inv = p.bob.create_invoice(Amount::parse("60.00"), 1, 5);
    TransferProposal proposal = p.alice.prepare_payment(inv, 10);
    Approval approval =
        std::get<Approval>(p.bob.receive_proposal(proposal, 11));

    SUBCASE("wrong signer") {
        Approval forged = approval;
        forged.sig.wallet_sig =
            sign(p.w.carol.wallet_keys.sk, forged.core_bytes());
        forged.sig.person_sig =
            sign(p.w.carol.person_keys.sk, forged.sig.wallet_sig.bytes);
        CHECK_FALSE(p.alice.reveal_secret(forged, 12).has_value());
    }
    SUBCASE("unknown payment") {
        Approval stray = approval;
        stray.base_invoice_serial = 999;
        CHECK_FALSE(p.alice.reveal_secret(stray, 12).has_value());
    }
    SUBCASE("wrong digest") {
        Approval wrong = approval;
        wrong.proposal_digest.bytes[0] ^= 1;
        wrong.sig = DualSig{
            sign(p.w.bob.wallet_keys.sk, wrong.core_bytes()),
            Signature{}};
        wrong.sig.person_sig =
            sign(p.w.bob.person_keys.sk, wrong.sig.wallet_sig.bytes);
        CHECK_FALSE(p.alice.reveal_secret(wrong, 12).has_value());
    }
    // the genuine approval still works afterwards
    CHECK(p.alice.reveal_secret(approval, 13).has_value());
}

TEST_CASE("rejection and timeout burn the escrowed transfer block") {
    Pair p;
    p.fund_alice("C-1", "60.00");
    Invoice inv = p.bob.create_invoice(Amount::parse("60.00"), 1, 5);
    TransferProposal proposal = p.alice.prepare_payment(inv, 10);

    SUBCASE("explicit rejection") {
        // bob rejects out of band (say, his review declined the chain)
        Rejection rej;
        rej.base_invoice_serial = inv.base_invoice_serial;
        rej.codes = {FailureCode::certificate};
        rej.sig.wallet_sig = sign(p.w.bob.wallet_keys.sk, rej.core_bytes());
        rej.sig.person_sig =
            sign(p.w.bob.person_keys.sk, rej.sig.wallet_sig.bytes);
        CHECK(p.alice.handle_rejection(rej));
    }
    SUBCASE("timeout") { CHECK(p.alice.abort_payment(inv.base_invoice_serial)); }

    CHECK(p.alice.owned_total() == Amount::parse("60.00"));
    for (const auto& [key, rec] : p.alice.coins()) {
        CHECK(rec.status == CoinStatus::owned);
        CHECK_FALSE(rec.escrow.has_value());
    }
    // after the burn there is nothing to reveal
    Approval late;
    late.base_invoice_serial = inv.base_invoice_serial;
    CHECK_FALSE(p.alice.reveal_secret(late, 99).has_value());
}

TEST_CASE("flag_error blocks upload until the repudiation lands") {
    Pair p;
    p.fund_alice("C-1", "60.00");
    Invoice inv = p.bob.create_invoice(Amount::parse("60.00"), 1, 5);
    TransferProposal proposal = p.alice.prepare_payment(inv, 10);
    Approval approval =
        std::get<Approval>(p.bob.receive_proposal(proposal, 11));
    p.alice.reveal_secret(approval, 12);

    auto uploadable = p.alice.uploadable_chains();
    REQUIRE(uploadable.size() == 1);
    const std::string key = uploadable[0].first;

    p.alice.flag_error(key);
    CHECK(p.alice.uploadable_chains().empty());

    // repudiation releases the coin back to owned
    auto delivery = p.bob.expire_incoming(inv.base_invoice_serial);
    REQUIRE(delivery.has_value());
    REQUIRE_FALSE(delivery->repudiations.empty());
    CHECK(p.alice.apply_repudiation(key, delivery->repudiations[0].second.signature));
    CHECK(p.alice.coin(key)->status == CoinStatus::owned);

    // flagging an owned coin is rejected
    CHECK_THROWS_AS(p.alice.flag_error(key), std::invalid_argument);
}

TEST_CASE("mining follows the schedule and marks slow coins") {
    Pair p;
    DynamicParams dyn{8, 10, 5, 4};  // low difficulty, tiny backlog
    p.fund_alice("D-1", "50.00", dyn);
    std::string key = single_owned_key(p.alice);

    // 30 ticks at interval 10: exactly 3 blocks
    size_t mined = 0;
    for (Tick t = 1; t <= 30; ++t)
        for (const MineEvent& ev : p.alice.mine_tick(t)) mined += ev.appended;
    CHECK(mined == 3);
    const CoinRecord* rec = p.alice.coin(key);
    CHECK(rec->chain.blocks.size() == 4);  // delivery + 3 mined
    for (size_t i = 1; i < rec->chain.blocks.size(); ++i)
        CHECK(leading_zero_bits(rec->chain.blocks[i].hash) >=
              dyn.difficulty_bits);
    // block count never exceeds schedule + 1
    CHECK(rec->chain.blocks.size() <= 30 / dyn.interval + 2);

    SUBCASE("short blackout catches up at the faster pace") {
        // no mine_tick calls for 5 intervals, then power returns
        std::vector<MineEvent> events = p.alice.mine_tick(80);
        REQUIRE(events.size() == 1);
        CHECK(events[0].appended == 5);
        CHECK_FALSE(events[0].marked_slow);
        CHECK(blocks_behind(p.alice.coin(key)->chain, 80, dyn.interval) == 0);
    }
    SUBCASE("blackout past the backlog marks the coin slow") {
        std::vector<MineEvent> events = p.alice.mine_tick(200);
        REQUIRE(events.size() == 1);
        CHECK(events[0].marked_slow);
        CHECK(p.alice.coin(key)->slow);
        // a slow coin cannot pay
        Invoice inv = p.bob.create_invoice(Amount::parse("50.00"), 1, 201);
        CHECK_THROWS_AS(p.alice.prepare_payment(inv, 201),
                        std::invalid_argument);
    }
}

TEST_CASE("snapshot/restore keeps the counter and coins") {
    Pair p;
    p.fund_alice("C-1", "100.00");
    p.bob.create_invoice(Amount::parse("60.00"), 3, 5);
    Invoice inv = p.bob.create_invoice(Amount::parse("60.00"), 2, 6);
    p.alice.prepare_payment(inv, 10);  // leaves escrowed state behind

    Wallet::SnapshotKey key{};
    key[0] = 42;

    SUBCASE("receiver counter survives") {
        Bytes snap = p.bob.snapshot(key);
        Wallet back = Wallet::restore(snap, key, WalletConfig{}, p.w.trust);
        CHECK(back.rpmb_counter() == p.bob.rpmb_counter());
        CHECK(back.person_vk() == p.bob.person_vk());
        // byte-stable snapshot of the restored wallet
        CHECK(back.snapshot(key) == snap);
    }
    SUBCASE("sender escrow survives") {
        Bytes snap = p.alice.snapshot(key);
        Wallet back = Wallet::restore(snap, key, WalletConfig{}, p.w.trust);
        size_t escrows = 0;
        for (const auto& [k, rec] : back.coins())
            if (rec.escrow) ++escrows;
        CHECK(escrows == 1);
        CHECK(back.owned_total() == p.alice.owned_total());
    }
    SUBCASE("wrong key fails closed") {
        Bytes snap = p.alice.snapshot(key);
        Wallet::SnapshotKey wrong{};
        CHECK_THROWS_AS(
            Wallet::restore(snap, wrong, WalletConfig{}, p.w.trust),
            DecodeError);
    }
}

TEST_CASE("re-provisioning keeps the counter") {
    Pair p;
    p.bob.create_invoice(Amount::parse("5.00"), 7, 1);
    uint64_t counter = p.bob.rpmb_counter();
    KeyPair new_person = generate_keypair(seed_from_u64(0xBB));
    HolderIdentity id = p.w.bob.id;
    id.person_cert = issue_certificate(p.w.bank, new_person.vk,
                                       p.w.bob.wallet_keys.vk,
                                       CertRole::person);
    id.wallet_cert = issue_certificate(p.w.bank, p.w.bob.wallet_keys.vk,
                                       new_person.vk, CertRole::wallet);
    p.bob.update_identity(new_person, id);
    CHECK(p.bob.rpmb_counter() == counter);
    CHECK(p.bob.person_vk() == new_person.vk);
}
