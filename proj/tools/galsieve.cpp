// galsieve: command-line driver for the experiment tables.
//
//   galsieve duke --height 20 --ell 5,7 --budget 500 --format json
//   galsieve equidist --primes 101,1009 --ell 2,3,5 --shards 8
//
// Exit codes: 0 success, 2 configuration error, 3 invariant violation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "galsieve/experiments.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kInternalError = 3;

struct Config {
    std::string subcommand;
    std::vector<std::int64_t> height;
    std::vector<std::uint64_t> ell = galsieve::kDefaultElls;
    std::uint64_t budget = galsieve::kDefaultBudget;
    std::vector<std::uint64_t> primes;
    std::size_t shards = 1;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
};

nlohmann::ordered_json config_json(const Config& c) {
    nlohmann::ordered_json j;
    j["subcommand"] = c.subcommand;
    j["height"] = c.height;
    j["ell"] = c.ell;
    j["budget"] = c.budget;
    j["primes"] = c.primes;
    j["seed"] = c.seed;
    j["format"] = c.format;
    return j;
}

void add_options(CLI::App* sub, Config& c) {
    sub->add_option("--height", c.height, "height bound(s) x")->delimiter(',');
    sub->add_option("--ell", c.ell, "primes ell")->delimiter(',');
    sub->add_option("--budget", c.budget, "largest prime p consulted per curve")->check(CLI::PositiveNumber);
    sub->add_option("--primes", c.primes, "primes p for equidist")->delimiter(',');
    sub->add_option("--shards", c.shards, "number of work shards")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "seed for randomized probes");
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

std::int64_t single_height(const Config& c, std::int64_t fallback) {
    if (c.height.empty()) return fallback;
    if (c.height.size() != 1) throw CLI::ValidationError("--height", "expects a single value here");
    return c.height.front();
}

galsieve::Table run(Config& c) {
    using namespace galsieve;
    for (auto x : c.height)
        if (x < 1) throw CLI::ValidationError("--height", "bounds must be positive");
    if (c.subcommand == "duke") return cmd_duke(single_height(c, 10), c.ell, c.budget, c.shards);
    if (c.subcommand == "blcount") {
        if (c.height.empty()) c.height = {5, 10, 20, 40};
        return cmd_blcount(c.height, c.ell, c.budget, c.shards);
    }
    if (c.subcommand == "tx") return cmd_tx(single_height(c, 10), c.budget, c.shards);
    if (c.subcommand == "equidist") {
        if (c.primes.empty()) c.primes = {101, 1009};
        return cmd_equidist(c.primes, c.ell, c.shards);
    }
    if (c.subcommand == "derangement") return cmd_derangement(c.ell, c.seed);
    if (c.height.empty()) c.height = {10, 20, 50};
    return cmd_sieve(c.height);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Galois image, sieve and equidistribution experiments"};
    app.require_subcommand(1);
    Config c;
    for (const char* name : {"duke", "blcount", "tx", "equidist", "derangement", "sieve"})
        add_options(app.add_subcommand(name), c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }
    c.subcommand = app.get_subcommands().front()->get_name();

    try {
        const auto table = run(c);
        std::ofstream file;
        if (!c.out.empty()) {
            file.open(c.out, std::ios::binary);
            if (!file) {
                std::cerr << "cannot open " << c.out << "\n";
                return kConfigError;
            }
        }
        std::ostream& os = c.out.empty() ? std::cout : file;
        if (c.format == "json") {
            galsieve::write_json(os, table, config_json(c));
        } else {
            galsieve::write_csv(os, table);
            galsieve::write_summary_lines(std::cerr, table);
        }
        return 0;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kConfigError;
    } catch (const galsieve::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kInternalError;
    } catch (const galsieve::HasseViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kInternalError;
    } catch (const galsieve::CapExceeded& e) {
        std::cerr << e.what() << "\n";
        return kInternalError;
    } catch (const galsieve::Error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    }
}
