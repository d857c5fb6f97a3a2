// dftool: verify, develop and search (v,k,1) difference families over
// finite abelian groups, and check the Steiner property of developed
// designs.
//
// Exit codes: 0 = verified/found, 1 = verification failed / not found,
// 2 = usage or parse error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "steiner/design.hpp"
#include "steiner/family.hpp"
#include "steiner/fixtures.hpp"
#include "steiner/group.hpp"
#include "steiner/search.hpp"

using nlohmann::json;
using namespace steiner;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw Error("failed writing '" + path + "'");
}

void write_json(const std::string& path, const json& doc) {
    if (path.empty()) return;
    write_file(path, doc.dump(2) + "\n");
}

// common per-command output switches
struct OutputMode {
    bool machine = false;
    std::string json_path;
};

void add_output_flags(CLI::App* sub, OutputMode& mode) {
    sub->add_flag("--machine", mode.machine, "print stable key=value lines instead of prose");
    sub->add_option("--json", mode.json_path, "also write a JSON certificate to this file");
}

// family input: a file path or an embedded fixture name
struct FamilyInput {
    std::string path;
    std::string fixture_name;

    bool valid() const { return path.empty() != fixture_name.empty(); }

    std::string description() const { return fixture_name.empty() ? path : fixture_name; }

    DifferenceFamily load() const {
        if (!fixture_name.empty()) return fixture(fixture_name).family;
        try {
            return parse_family(read_file(path));
        } catch (const ParseError& e) {
            throw ParseError(path + ": " + e.what());
        }
    }
};

void add_family_input(CLI::App* sub, FamilyInput& input) {
    sub->add_option("input", input.path, "family file");
    sub->add_option("--fixture", input.fixture_name, "use an embedded fixture instead of a file");
}

int require_valid_input(const FamilyInput& input) {
    if (input.valid()) return kExitOk;
    std::cerr << "error: give exactly one of <input> or --fixture\n";
    return kExitUsage;
}

std::string factor_list(const GroupSpec& spec) {
    std::string out;
    for (std::uint32_t n : spec.factors()) {
        if (!out.empty()) out += ',';
        out += std::to_string(n);
    }
    return out;
}

// ---- verify-family ---------------------------------------------------------

struct VerifyFamilyArgs {
    FamilyInput input;
    OutputMode out;
};

int cmd_verify_family(const VerifyFamilyArgs& args) {
    if (int rc = require_valid_input(args.input)) return rc;
    DifferenceFamily family = args.input.load();
    Lambda1Report report = verify_lambda1(family);
    const std::uint32_t v = family.spec().order();
    const std::uint32_t covered = report.covered_once(v);

    if (args.out.machine) {
        std::cout << "input=" << args.input.description() << "\n"
                  << "group=" << family.spec().to_string() << "\n"
                  << "v=" << v << "\n"
                  << "k=" << family.k() << "\n"
                  << "base_blocks=" << family.block_count() << "\n"
                  << "divisibility_ok=" << report.divisibility_ok << "\n"
                  << "covered_once=" << covered << "\n"
                  << "missing_count=" << report.missing.size() << "\n"
                  << "repeated_count=" << report.repeated.size() << "\n"
                  << "is_family=" << report.is_family << "\n";
    } else {
        std::cout << "family: " << args.input.description() << ": group "
                  << family.spec().to_string() << ", v=" << v << ", k=" << family.k()
                  << ", b=" << family.block_count() << "\n";
        if (report.is_family) {
            std::cout << "lambda1: OK (" << covered << "/" << v - 1
                      << " differences covered exactly once)\n";
        } else {
            std::cout << "lambda1: FAIL (" << covered << "/" << v - 1
                      << " differences covered exactly once; missing " << report.missing.size()
                      << ", repeated " << report.repeated.size() << ", divisibility "
                      << (report.divisibility_ok ? "ok" : "violated") << ")\n";
        }
    }

    if (!args.out.json_path.empty()) {
        json repeated = json::array();
        for (const auto& [index, count] : report.repeated)
            repeated.push_back({{"index", index}, {"count", count}});
        write_json(args.out.json_path,
                   json{{"command", "verify-family"},
                        {"input", args.input.description()},
                        {"group", family.spec().to_string()},
                        {"v", v},
                        {"k", family.k()},
                        {"base_blocks", family.block_count()},
                        {"divisibility_ok", report.divisibility_ok},
                        {"covered_once", covered},
                        {"missing", report.missing},
                        {"repeated", repeated},
                        {"is_family", report.is_family}});
    }
    return report.is_family ? kExitOk : kExitFailed;
}

// ---- develop ---------------------------------------------------------------

struct DevelopArgs {
    FamilyInput input;
    std::string out_path;
    OutputMode out;
};

int cmd_develop(const DevelopArgs& args) {
    if (int rc = require_valid_input(args.input)) return rc;
    DifferenceFamily family = args.input.load();
    const std::uint32_t v = family.spec().order();

    if (family.difference_pair_count() != v - 1) {
        std::cerr << "cannot develop: b*k*(k-1) = " << family.difference_pair_count()
                  << " does not equal v-1 = " << v - 1 << "\n";
        return kExitFailed;
    }

    Design design = develop(family);
    write_file(args.out_path, format_design(design));

    if (args.out.machine) {
        std::cout << "group=" << family.spec().to_string() << "\n"
                  << "v=" << design.v() << "\n"
                  << "k=" << design.k() << "\n"
                  << "base_blocks=" << family.block_count() << "\n"
                  << "design_blocks=" << design.block_count() << "\n"
                  << "duplicate_translates=" << design.duplicate_translates() << "\n"
                  << "out=" << args.out_path << "\n";
    } else {
        std::cout << "v=" << design.v() << " k=" << design.k() << " b=" << design.block_count()
                  << "\n"
                  << "wrote " << design.block_count() << " blocks to " << args.out_path << "\n";
        if (design.duplicate_translates() > 0)
            std::cout << "note: " << design.duplicate_translates()
                      << " duplicate translates merged (family is not lambda=1)\n";
    }

    write_json(args.out.json_path, json{{"command", "develop"},
                                        {"input", args.input.description()},
                                        {"group", family.spec().to_string()},
                                        {"v", design.v()},
                                        {"k", design.k()},
                                        {"base_blocks", family.block_count()},
                                        {"design_blocks", design.block_count()},
                                        {"duplicate_translates", design.duplicate_translates()},
                                        {"out", args.out_path}});
    return kExitOk;
}

// ---- verify-design ----------------------------------------------------------

struct VerifyDesignArgs {
    std::string path;
    OutputMode out;
};

int cmd_verify_design(const VerifyDesignArgs& args) {
    Design design = [&] {
        try {
            return parse_design(read_file(args.path));
        } catch (const ParseError& e) {
            throw ParseError(args.path + ": " + e.what());
        }
    }();

    PairCoverageReport report = pair_coverage(design);
    std::vector<std::uint32_t> repl = point_replication(design);
    std::uint32_t repl_min = 0, repl_max = 0;
    if (!repl.empty()) {
        repl_min = *std::min_element(repl.begin(), repl.end());
        repl_max = *std::max_element(repl.begin(), repl.end());
    }
    const std::uint64_t pairs_total =
        static_cast<std::uint64_t>(design.v()) * (design.v() - 1) / 2;
    const std::uint64_t pairs_once =
        report.histogram.count(1) ? report.histogram.at(1) : 0;

    if (args.out.machine) {
        std::cout << "input=" << args.path << "\n"
                  << "v=" << design.v() << "\n"
                  << "k=" << design.k() << "\n"
                  << "blocks=" << design.block_count() << "\n"
                  << "pairs_total=" << pairs_total << "\n"
                  << "pairs_once=" << pairs_once << "\n";
        for (const auto& [mult, count] : report.histogram)
            std::cout << "hist_" << mult << "=" << count << "\n";
        std::cout << "repl_min=" << repl_min << "\n"
                  << "repl_max=" << repl_max << "\n"
                  << "is_steiner=" << report.is_steiner << "\n";
    } else {
        std::cout << "design: " << args.path << ": v=" << design.v() << ", k=" << design.k()
                  << ", blocks=" << design.block_count() << "\n"
                  << "pairs covered once: " << pairs_once << "/" << pairs_total << "\n";
        std::cout << "coverage histogram:";
        for (const auto& [mult, count] : report.histogram)
            std::cout << " " << mult << "->" << count;
        std::cout << "\n";
        if (repl_min == repl_max)
            std::cout << "replication: uniform r=" << repl_min << "\n";
        else
            std::cout << "replication: min=" << repl_min << ", max=" << repl_max
                      << " (non-uniform)\n";
        std::cout << "steiner: " << (report.is_steiner ? "OK" : "FAIL") << "\n";
        if (!report.is_steiner && !report.offending_pairs.empty()) {
            std::cout << "offending pairs (showing up to 5):";
            std::size_t shown = 0;
            for (const auto& p : report.offending_pairs) {
                if (++shown > 5) {
                    std::cout << " ...";
                    break;
                }
                std::cout << " (" << p.a << "," << p.b << ")x" << p.multiplicity;
            }
            std::cout << "\n";
        }
    }

    if (!args.out.json_path.empty()) {
        json hist = json::object();
        for (const auto& [mult, count] : report.histogram)
            hist[std::to_string(mult)] = count;
        json offenders = json::array();
        for (const auto& p : report.offending_pairs)
            offenders.push_back({{"a", p.a}, {"b", p.b}, {"multiplicity", p.multiplicity}});
        write_json(args.out.json_path, json{{"command", "verify-design"},
                                            {"input", args.path},
                                            {"v", design.v()},
                                            {"k", design.k()},
                                            {"blocks", design.block_count()},
                                            {"pairs_total", pairs_total},
                                            {"pairs_once", pairs_once},
                                            {"histogram", hist},
                                            {"replication_min", repl_min},
                                            {"replication_max", repl_max},
                                            {"offending_pairs", offenders},
                                            {"is_steiner", report.is_steiner}});
    }
    return report.is_steiner ? kExitOk : kExitFailed;
}

// ---- search ------------------------------------------------------------------

struct SearchArgs {
    std::string group;
    std::uint32_t k = 0;
    std::uint32_t blocks = 0;
    std::uint64_t seed = SearchConfig::kDefaultSeed;
    std::uint64_t restarts = 10000;
    double time_limit_seconds = 60.0;
    std::uint64_t nodes_per_restart = 100000;
    bool no_shuffle = false;
    unsigned workers = 1;
    std::string out_path;
    OutputMode out;
};

int cmd_search(const SearchArgs& args) {
    SearchConfig cfg{.spec = GroupSpec::parse(args.group),
                     .k = args.k,
                     .block_count = args.blocks,
                     .seed = args.seed,
                     .max_restarts = args.restarts,
                     .time_limit = std::chrono::milliseconds(
                         static_cast<long long>(std::llround(args.time_limit_seconds * 1000.0))),
                     .candidate_shuffle = !args.no_shuffle,
                     .max_nodes_per_restart = args.nodes_per_restart,
                     .workers = args.workers};

    SearchOutcome outcome = search_difference_family(cfg);
    const bool found = outcome.found.has_value();

    std::string family_text;
    if (found) {
        family_text = format_family(*outcome.found);
        if (!args.out_path.empty()) write_file(args.out_path, family_text);
    }

    if (args.out.machine) {
        std::cout << "group=" << cfg.spec.to_string() << "\n"
                  << "v=" << cfg.spec.order() << "\n"
                  << "k=" << cfg.k << "\n"
                  << "blocks=" << cfg.block_count << "\n"
                  << "seed=" << cfg.seed << "\n"
                  << "shuffle=" << cfg.candidate_shuffle << "\n"
                  << "workers=" << cfg.workers << "\n"
                  << "found=" << found << "\n"
                  << "terminated_by=" << to_string(outcome.terminated_by) << "\n"
                  << "restarts_used=" << outcome.restarts_used << "\n"
                  << "nodes_expanded=" << outcome.nodes_expanded << "\n";
        if (found && !args.out_path.empty()) std::cout << "out=" << args.out_path << "\n";
    } else {
        std::cout << "search: group " << cfg.spec.to_string() << ", v=" << cfg.spec.order()
                  << ", k=" << cfg.k << ", b=" << cfg.block_count << ", seed=" << cfg.seed
                  << "\n"
                  << "result: " << to_string(outcome.terminated_by)
                  << " (restarts_used=" << outcome.restarts_used
                  << ", nodes_expanded=" << outcome.nodes_expanded << ")\n";
        if (found && !args.out_path.empty())
            std::cout << "wrote family to " << args.out_path << "\n";
    }
    if (found && args.out_path.empty()) std::cout << family_text;
    // wall-clock stays off stdout so identical runs emit identical bytes
    std::cerr << "elapsed: " << outcome.elapsed.count() << " ms\n";

    if (!args.out.json_path.empty()) {
        json doc{{"command", "search"},
                 {"group", cfg.spec.to_string()},
                 {"v", cfg.spec.order()},
                 {"k", cfg.k},
                 {"blocks", cfg.block_count},
                 {"seed", cfg.seed},
                 {"shuffle", cfg.candidate_shuffle},
                 {"workers", cfg.workers},
                 {"found", found},
                 {"terminated_by", to_string(outcome.terminated_by)},
                 {"restarts_used", outcome.restarts_used},
                 {"nodes_expanded", outcome.nodes_expanded}};
        if (found) doc["family"] = family_text;
        if (found && !args.out_path.empty()) doc["out"] = args.out_path;
        write_json(args.out.json_path, doc);
    }
    return found ? kExitOk : kExitFailed;
}

// ---- info --------------------------------------------------------------------

struct InfoArgs {
    std::string group;
    std::vector<std::uint64_t> params;
    OutputMode out;
};

int cmd_info(const InfoArgs& args) {
    if (args.group.empty() == args.params.empty()) {
        std::cerr << "error: give exactly one of --group or --params\n";
        return kExitUsage;
    }

    if (!args.group.empty()) {
        GroupSpec spec = GroupSpec::parse(args.group);
        if (args.out.machine) {
            std::cout << "group=" << spec.to_string() << "\n"
                      << "order=" << spec.order() << "\n"
                      << "factors=" << factor_list(spec) << "\n"
                      << "labels_supported=" << spec.labels_supported() << "\n";
        } else {
            std::cout << "group " << spec.to_string() << ": order " << spec.order()
                      << ", factors " << factor_list(spec) << "\n";
        }
        write_json(args.out.json_path, json{{"command", "info"},
                                            {"group", spec.to_string()},
                                            {"order", spec.order()},
                                            {"factors", spec.factors()},
                                            {"labels_supported", spec.labels_supported()}});
        return kExitOk;
    }

    DesignParams params = design_params(args.params[0], args.params[1]);
    if (args.out.machine) {
        std::cout << "v=" << params.v << "\n"
                  << "k=" << params.k << "\n"
                  << "feasible=" << params.feasible << "\n";
        if (params.feasible)
            std::cout << "b=" << *params.b << "\n"
                      << "r=" << *params.r << "\n";
    } else {
        std::cout << "v=" << params.v << " k=" << params.k << ": ";
        if (params.feasible)
            std::cout << "b=" << *params.b << " r=" << *params.r << " feasible\n";
        else
            std::cout << "infeasible (2-design divisibility fails)\n";
    }
    json doc{{"command", "info"},
             {"v", params.v},
             {"k", params.k},
             {"feasible", params.feasible}};
    if (params.feasible) {
        doc["b"] = *params.b;
        doc["r"] = *params.r;
    }
    write_json(args.out.json_path, doc);
    return kExitOk;
}

// ---- fixtures ------------------------------------------------------------------

struct FixturesArgs {
    std::string name;
    std::string out_path;
    std::string export_dir;
    OutputMode out;
};

int cmd_fixtures(const FixturesArgs& args) {
    if (!args.export_dir.empty()) {
        std::filesystem::create_directories(args.export_dir);
        for (const std::string& name : list_fixtures()) {
            const FixtureEntry& entry = fixture(name);
            write_file((std::filesystem::path(args.export_dir) / (name + ".df")).string(),
                       std::string(entry.text));
        }
        std::cout << "wrote " << list_fixtures().size() << " family files to "
                  << args.export_dir << "\n";
        return kExitOk;
    }

    if (!args.name.empty()) {
        const FixtureEntry& entry = fixture(args.name);
        if (args.out_path.empty()) {
            std::cout << entry.text;
        } else {
            write_file(args.out_path, std::string(entry.text));
            std::cout << "wrote " << entry.name << " to " << args.out_path << "\n";
        }
        return kExitOk;
    }

    for (const std::string& name : list_fixtures()) {
        const FixtureEntry& entry = fixture(name);
        if (args.out.machine)
            std::cout << "fixture=" << entry.name << " group=" << entry.group.to_string()
                      << " v=" << entry.v << " k=" << entry.k
                      << " base_blocks=" << entry.family.block_count() << "\n";
        else
            std::cout << entry.name << "  group=" << entry.group.to_string() << " v=" << entry.v
                      << " k=" << entry.k << " b=" << entry.family.block_count() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"(v,k,1) difference families and Steiner 2-designs over finite abelian groups"};
    app.require_subcommand(1);

    VerifyFamilyArgs verify_family_args;
    CLI::App* verify_family_cmd =
        app.add_subcommand("verify-family", "check the lambda=1 difference family property");
    add_family_input(verify_family_cmd, verify_family_args.input);
    add_output_flags(verify_family_cmd, verify_family_args.out);

    DevelopArgs develop_args;
    CLI::App* develop_cmd =
        app.add_subcommand("develop", "develop a family into a block design file");
    add_family_input(develop_cmd, develop_args.input);
    develop_cmd->add_option("--out", develop_args.out_path, "design file to write")->required();
    add_output_flags(develop_cmd, develop_args.out);

    VerifyDesignArgs verify_design_args;
    CLI::App* verify_design_cmd = app.add_subcommand(
        "verify-design", "check the Steiner pair-coverage property of a design file");
    verify_design_cmd->add_option("input", verify_design_args.path, "design file")->required();
    add_output_flags(verify_design_cmd, verify_design_args.out);

    SearchArgs search_args;
    CLI::App* search_cmd =
        app.add_subcommand("search", "randomized-restart backtracking search for a family");
    search_cmd->add_option("--group", search_args.group, "group spec, e.g. Z13")->required();
    search_cmd->add_option("--k", search_args.k, "block size")->required();
    search_cmd->add_option("--blocks", search_args.blocks, "number of base blocks")->required();
    search_cmd->add_option("--seed", search_args.seed, "RNG seed (default 1)");
    search_cmd->add_option("--restarts", search_args.restarts, "restart budget (default 10000)");
    search_cmd->add_option("--time-limit", search_args.time_limit_seconds,
                           "wall-clock limit in seconds (default 60)");
    search_cmd->add_option("--nodes-per-restart", search_args.nodes_per_restart,
                           "DFS node budget per restart, 0 = unlimited (default 100000)");
    search_cmd->add_flag("--no-shuffle", search_args.no_shuffle,
                         "deterministic exhaustive candidate order");
    search_cmd->add_option("--workers", search_args.workers,
                           "concurrent restart workers (default 1; >1 drops determinism)");
    search_cmd->add_option("--out", search_args.out_path, "family file to write when found");
    add_output_flags(search_cmd, search_args.out);

    InfoArgs info_args;
    CLI::App* info_cmd = app.add_subcommand("info", "group orders and 2-design parameters");
    info_cmd->add_option("--group", info_args.group, "group spec to describe");
    info_cmd->add_option("--params", info_args.params, "v k: report b, r and feasibility")
        ->expected(2);
    add_output_flags(info_cmd, info_args.out);

    FixturesArgs fixtures_args;
    CLI::App* fixtures_cmd =
        app.add_subcommand("fixtures", "list or export the embedded published families");
    fixtures_cmd->add_option("--name", fixtures_args.name, "fixture to export");
    fixtures_cmd->add_option("--out", fixtures_args.out_path,
                             "file to write the named fixture to");
    fixtures_cmd->add_option("--export-dir", fixtures_args.export_dir,
                             "write every fixture to this directory");
    add_output_flags(fixtures_cmd, fixtures_args.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*verify_family_cmd) return cmd_verify_family(verify_family_args);
        if (*develop_cmd) return cmd_develop(develop_args);
        if (*verify_design_cmd) return cmd_verify_design(verify_design_args);
        if (*search_cmd) return cmd_search(search_args);
        if (*info_cmd) return cmd_info(info_args);
        if (*fixtures_cmd) return cmd_fixtures(fixtures_args);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
