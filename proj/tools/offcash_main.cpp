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

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "offcash/sim.hpp"

namespace {

using namespace offcash;

// Exit codes: 0 success, 1 verification failure, 2 usage/input error.

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    std::string s = os.str();
    return Bytes(s.begin(), s.end());
}

TrustStore read_trust(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trust file: " + path);
    TrustStore trust;
    std::string line;
    while (std::getline(in, line)) {
        if (size_t hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream is(line);
        std::string hex;
        if (!(is >> hex)) continue;
        Bytes raw = from_hex(hex);
        if (raw.size() != kPublicKeySize)
            throw std::runtime_error("trust file: bad key length");
        PublicKey vk;
        std::copy(raw.begin(), raw.end(), vk.bytes.begin());
        trust.historical_central_vks.push_back(vk);
    }
    if (trust.historical_central_vks.empty())
        throw std::runtime_error("trust file names no keys");
    return trust;
}

std::string describe_block(const CoinChain& chain, size_t index) {
    std::ostringstream os;
    if (index == 0) {
        const GenesisBlock& g = chain.genesis;
        os << "block 0 (genesis)\n";
        os << "  serial: " << g.serial << "\n";
        os << "  value: " << g.value.str() << "\n";
        os << "  kind: " << (g.kind.is_hot() ? "hot" : "cold") << "\n";
        if (g.kind.is_hot()) {
            os << "  expiration: " << *g.kind.expiration << "\n";
            os << "  claim_deadline: " << *g.kind.claim_deadline << "\n";
        }
        os << "  timestamp: " << g.timestamp << "\n";
        os << "  central_vk: " << g.central_vk.hex() << "\n";
        os << "  bank: " << g.bank_cert.subject_vk.hex() << "\n";
        os << "  hash: " << g.hash.hex() << "\n";
        os << "  central_sig: " << g.central_sig.hex() << "\n";
        return os.str();
    }
    const Block& b = chain.blocks[index - 1];
    const char* variant = b.is_fork()       ? "fork"
                          : b.is_transfer() ? "transfer"
                          : index == 1      ? "delivery"
                                            : "mined";
    os << "block " << index << " (" << variant << ")\n";
    os << "  timestamp: " << b.timestamp << "\n";
    os << "  holder: " << b.holder_cert.subject_vk.hex() << "\n";
    os << "  wallet: " << b.wallet_cert.subject_vk.hex() << "\n";
    os << "  bank: " << b.bank_cert.subject_vk.hex() << "\n";
    if (b.child_value) os << "  child_value: " << b.child_value->str() << "\n";
    if (b.invoice_serial) os << "  invoice_serial: " << *b.invoice_serial << "\n";
    if (b.mined_nonce) os << "  mined_nonce: " << *b.mined_nonce << "\n";
    if (b.is_transfer())
        os << "  secret_nonce: "
           << (b.secret_nonce ? to_hex(*b.secret_nonce) : "(withheld)") << "\n";
    os << "  prev_signed_hash: " << to_hex(b.prev_signed_hash) << "\n";
    os << "  hash: " << b.hash.hex() << "\n";
    os << "  wallet_sig: " << b.wallet_sig.hex() << "\n";
    if (b.person_sig) os << "  person_sig: " << b.person_sig->hex() << "\n";
    if (b.repudiation_sig)
        os << "  repudiation_sig: " << b.repudiation_sig->hex() << "\n";
    return os.str();
}

int cmd_run(const std::string& scenario_path, std::optional<uint64_t> seed,
            bool registry_dump) {
    Scenario scenario = Scenario::parse_file(scenario_path);
    if (seed) scenario.seed = *seed;
    Simulation sim = run_scenario(std::move(scenario));
    if (registry_dump)
        std::cout << sim.central().registry_dump();
    else
        std::cout << sim.log().render();
    return 0;
}

int cmd_verify(const std::string& chain_path, const std::string& trust_path,
               std::optional<unsigned> difficulty, Tick interval,
               uint64_t max_backlog, std::optional<Tick> now) {
    CoinChain chain = CoinChain::deserialize(read_file(chain_path));
    TrustStore trust = read_trust(trust_path);
    std::optional<DynamicParams> dynamic;
    if (difficulty) dynamic = DynamicParams{*difficulty, interval, max_backlog, 4};
    Tick at = now.value_or(chain.tip_timestamp());
    ValidationReport report = validate_chain(chain, trust, dynamic, at);
    std::cout << "chain " << chain.genesis.serial << " length "
              << chain.length() << ": " << report.summary() << "\n";
    if (report.deferred_tip)
        std::cout << "note: transfer tip awaits its secret nonce\n";
    if (dynamic)
        std::cout << "blocks_behind " << report.blocks_behind << "\n";
    return report.valid ? 0 : 1;
}

int cmd_inspect(const std::string& chain_path) {
    CoinChain chain = CoinChain::deserialize(read_file(chain_path));
    for (size_t i = 0; i < chain.length(); ++i)
        std::cout << describe_block(chain, i) << "\n";
    std::cout << "value_in_force: " << chain.value_in_force().str() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"offcash: offline coin chains, wallets and protocol runs"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string chain_path;
    std::string trust_path;
    std::optional<uint64_t> seed;
    std::optional<unsigned> difficulty;
    std::optional<Tick> now;
    Tick interval = 10;
    uint64_t max_backlog = 360;

    CLI::App* run = app.add_subcommand("run", "run a scenario, print the event log");
    run->add_option("--scenario", scenario_path, "scenario file")->required();
    run->add_option("--seed", seed, "override the scenario seed");

    CLI::App* verify = app.add_subcommand("verify", "validate a chain file");
    verify->add_option("--chain", chain_path, "chain file")->required();
    verify->add_option("--trust", trust_path, "trust file (central keys)")
        ->required();
    verify->add_option("--difficulty", difficulty,
                       "dynamic chain difficulty in bits");
    verify->add_option("--interval", interval, "mining interval in ticks");
    verify->add_option("--max-backlog", max_backlog,
                       "slow-coin threshold in intervals");
    verify->add_option("--now", now, "validation time (default: tip time)");

    CLI::App* inspect = app.add_subcommand("inspect", "dump a chain file");
    inspect->add_option("--chain", chain_path, "chain file")->required();

    CLI::App* registry = app.add_subcommand(
        "registry", "run a scenario, print the final registry");
    registry->add_option("--scenario", scenario_path, "scenario file")
        ->required();
    registry->add_option("--seed", seed, "override the scenario seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(scenario_path, seed, false);
        if (verify->parsed())
            return cmd_verify(chain_path, trust_path, difficulty, interval,
                              max_backlog, now);
        if (inspect->parsed()) return cmd_inspect(chain_path);
        if (registry->parsed()) return cmd_run(scenario_path, seed, true);
    } catch (const offcash::DecodeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;  // a corrupt chain is a verification failure
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
