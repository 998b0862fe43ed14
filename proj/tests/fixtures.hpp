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

#include "offcash/chain.hpp"

namespace offcash::testing {

// One central bank, one bank, three provisioned customers, fixed seeds.
// Everything derived from here is bit-stable across runs, which the
// golden-file tests rely on.
struct World {
    KeyPair central = generate_keypair(seed_from_u64(0x01));
    KeyPair bank = generate_keypair(seed_from_u64(0x02));
    TrustStore trust = TrustStore::single(central.vk);
    Certificate bank_cert =
        issue_certificate(central, bank.vk, std::nullopt, CertRole::bank);

    HolderKeys alice = customer(0x0a, 0x0b);
    HolderKeys bob = customer(0x0c, 0x0d);
    HolderKeys carol = customer(0x0e, 0x0f);

    HolderKeys customer(uint64_t wallet_seed, uint64_t person_seed) const {
        HolderKeys h;
        h.wallet_keys = generate_keypair(seed_from_u64(wallet_seed));
        h.person_keys = generate_keypair(seed_from_u64(person_seed));
        h.id.person_cert = issue_certificate(bank, h.person_keys.vk,
                                             h.wallet_keys.vk, CertRole::person);
        h.id.wallet_cert = issue_certificate(bank, h.wallet_keys.vk,
                                             h.person_keys.vk, CertRole::wallet);
        h.id.bank_cert = bank_cert;
        return h;
    }

    CoinChain mint_and_deliver(Amount value, const CoinKind& kind,
                               const HolderKeys& to, Tick now,
                               const std::string& serial,
                               const std::optional<DynamicParams>& dyn =
                                   std::nullopt) const {
        CoinChain chain;
        chain.genesis = mint_genesis(central, bank_cert, value, kind, now,
                                     serial, Amount::parse("500.00"));
        return append_block(chain,
                            make_delivery_block(chain, to.id, bank, now, dyn));
    }

    Bytes nonce16(uint8_t fill) const { return Bytes(16, fill); }
};

}  // namespace offcash::testing
