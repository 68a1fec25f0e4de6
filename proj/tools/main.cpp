#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qsr/random_instance.hpp"
#include "qsr/scenario_io.hpp"

namespace {

using nlohmann::json;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// exit 2 wrapper for anything the file or scenario layer rejects
std::optional<qsr::Scenario> load_scenario(const std::string& path,
                                           const qsr::CalculusRegistry& reg) {
    std::optional<std::string> text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read '" << path << "'\n";
        return std::nullopt;
    }
    try {
        return qsr::parse_scenario(*text, reg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << path << ": " << e.what() << "\n";
        return std::nullopt;
    }
}

json domain_record(const qsr::Scenario& sc, const qsr::TupleDomain& td) {
    const qsr::AspectDecl* decl = sc.find_aspect(td.aspect);
    json rec;
    rec["aspect"] = td.aspect;
    rec["time"] = td.time;
    json objs = json::array();
    for (int o : td.objects) objs.push_back(sc.objects[o]);
    rec["objects"] = std::move(objs);
    json rels = json::array();
    for (int v : td.domain) rels.push_back(decl->symbol(v));
    rec["relations"] = std::move(rels);
    if (decl->set_valued) {
        rec["set_lower"] = decl->dir->set_name(td.set_lower);
        rec["set_upper"] = decl->dir->set_name(td.set_upper);
    }
    return rec;
}

int cmd_check(const std::string& path, bool as_json, const qsr::CalculusRegistry& reg) {
    std::optional<qsr::Scenario> sc = load_scenario(path, reg);
    if (!sc) return 2;
    qsr::CheckResult res;
    try {
        res = qsr::check(*sc);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (as_json) {
        json out;
        out["command"] = "check";
        out["verdict"] = res.inconsistent ? "inconsistent" : "fixpoint";
        if (!res.inconsistent) {
            json doms = json::array();
            for (const qsr::TupleDomain& td : res.domains)
                doms.push_back(domain_record(*sc, td));
            out["domains"] = std::move(doms);
        }
        std::cout << out.dump(2) << "\n";
        return res.inconsistent ? 1 : 0;
    }
    if (res.inconsistent) {
        std::cout << "INCONSISTENT\n";
        return 1;
    }
    for (const qsr::TupleDomain& td : res.domains) {
        const qsr::AspectDecl* decl = sc->find_aspect(td.aspect);
        std::cout << "rel " << td.aspect;
        for (int o : td.objects) std::cout << " " << sc->objects[o];
        if (sc->time_steps > 1) std::cout << " @" << td.time;
        std::cout << " {";
        for (int v : td.domain) std::cout << " " << decl->symbol(v);
        std::cout << " }\n";
    }
    return 0;
}

// the input scenario with its restrictions replaced by one atomic choice
qsr::Scenario atomized(const qsr::Scenario& sc, const std::vector<qsr::AtomicEntry>& entries) {
    qsr::Scenario atom = sc;
    atom.restrictions.clear();
    for (const qsr::AtomicEntry& e : entries) {
        qsr::Restriction r;
        r.aspect = e.aspect;
        r.objects = e.objects;
        r.allowed = qsr::Bits::single(e.relation);
        r.time = sc.time_steps == 1 ? -1 : e.time;
        atom.restrictions.push_back(std::move(r));
    }
    return atom;
}

json entry_records(const qsr::Scenario& sc, const std::vector<qsr::AtomicEntry>& entries) {
    json arr = json::array();
    for (const qsr::AtomicEntry& e : entries) {
        const qsr::AspectDecl* decl = sc.find_aspect(e.aspect);
        json rec;
        rec["aspect"] = e.aspect;
        rec["time"] = e.time;
        json objs = json::array();
        for (int o : e.objects) objs.push_back(sc.objects[o]);
        rec["objects"] = std::move(objs);
        rec["relation"] = decl->symbol(e.relation);
        arr.push_back(std::move(rec));
    }
    return arr;
}

int cmd_decide(const std::string& path, bool all, bool as_json,
               const qsr::CalculusRegistry& reg) {
    std::optional<qsr::Scenario> sc = load_scenario(path, reg);
    if (!sc) return 2;
    try {
        if (!all) {
            qsr::DecideResult res = qsr::decide(*sc);
            if (as_json) {
                json out;
                out["command"] = "decide";
                out["verdict"] = res.consistent ? "consistent" : "inconsistent";
                if (res.consistent) out["entries"] = entry_records(*sc, res.entries);
                std::cout << out.dump(2) << "\n";
            } else if (res.consistent) {
                std::cout << qsr::emit_scenario(atomized(*sc, res.entries));
            }
            return res.consistent ? 0 : 1;
        }
        long count = 0;
        json scenarios = json::array();
        count = qsr::decide_all(*sc, [&](const qsr::DecideResult& res) {
            if (as_json) {
                scenarios.push_back(entry_records(*sc, res.entries));
            } else {
                std::cout << "# scenario " << (scenarios.size() + 1) << "\n"
                          << qsr::emit_scenario(atomized(*sc, res.entries)) << "\n";
                scenarios.push_back(nullptr); // only the count matters here
            }
            return true;
        });
        if (as_json) {
            json out;
            out["command"] = "decide";
            out["all"] = true;
            out["verdict"] = count > 0 ? "consistent" : "inconsistent";
            out["count"] = count;
            out["scenarios"] = std::move(scenarios);
            std::cout << out.dump(2) << "\n";
        } else if (count > 0) {
            std::cout << "# total " << count << "\n";
        }
        return count > 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

struct TableCheck {
    std::string name;
    std::vector<std::string> violations;
};

void expect(TableCheck& c, bool ok, const std::string& msg) {
    if (!ok) c.violations.push_back(msg);
}

std::vector<TableCheck> run_table_checks(const qsr::CalculusRegistry& reg) {
    std::vector<TableCheck> checks;

    auto binary_check = [&](const qsr::Calculus& c, int rels, long triples) {
        TableCheck tc{c.name, qsr::validate_calculus(c)};
        expect(tc, c.size() == rels,
               "expected " + std::to_string(rels) + " relations, found " +
                   std::to_string(c.size()));
        expect(tc, c.triple_count() == triples,
               "expected " + std::to_string(triples) + " composition triples, found " +
                   std::to_string(c.triple_count()));
        checks.push_back(std::move(tc));
    };
    binary_check(reg.rcc8(), 8, 193);
    binary_check(reg.size(), 3, 13);
    binary_check(reg.pointcd(), 9, 169);

    {
        TableCheck tc{reg.cyc().name, qsr::validate_ternary_calculus(reg.cyc())};
        expect(tc, reg.cyc().size() == 24,
               "expected 24 relations, found " + std::to_string(reg.cyc().size()));
        expect(tc, reg.cyc().triple_count() == 208,
               "expected 208 composition triples, found " +
                   std::to_string(reg.cyc().triple_count()));
        checks.push_back(std::move(tc));
    }
    {
        TableCheck tc{"dirsets", {}};
        expect(tc, reg.direction().valid_sets.size() == 218,
               "expected 218 valid sets, found " +
                   std::to_string(reg.direction().valid_sets.size()));
        checks.push_back(std::move(tc));
    }
    {
        const qsr::LinkTable& lt = *reg.link("topo_size");
        TableCheck tc{lt.name, {}};
        expect(tc, lt.tuples.size() == 14,
               "expected 14 pairs, found " + std::to_string(lt.tuples.size()));
        checks.push_back(std::move(tc));
    }
    {
        const qsr::LinkTable& lt = *reg.link("topo_dir");
        TableCheck tc{lt.name, {}};
        expect(tc, lt.tuples.size() == 979,
               "expected 979 pairs, found " + std::to_string(lt.tuples.size()));
        checks.push_back(std::move(tc));
    }
    {
        const qsr::NeighbourTable& nt = *reg.neighbour("rcc8_step");
        TableCheck tc{nt.name, {}};
        expect(tc, nt.pairs.size() == 26,
               "expected 26 pairs, found " + std::to_string(nt.pairs.size()));
        checks.push_back(std::move(tc));
    }
    return checks;
}

int cmd_validate_tables(bool as_json, const qsr::CalculusRegistry& reg) {
    std::vector<TableCheck> checks = run_table_checks(reg);
    bool all_ok = true;
    for (const TableCheck& tc : checks) all_ok = all_ok && tc.violations.empty();

    if (as_json) {
        json out;
        out["command"] = "validate-tables";
        out["ok"] = all_ok;
        json arr = json::array();
        for (const TableCheck& tc : checks) {
            json rec;
            rec["name"] = tc.name;
            rec["ok"] = tc.violations.empty();
            rec["violations"] = tc.violations;
            arr.push_back(std::move(rec));
        }
        out["checks"] = std::move(arr);
        std::cout << out.dump(2) << "\n";
    } else {
        for (const TableCheck& tc : checks) {
            if (tc.violations.empty()) {
                std::cout << tc.name << ": ok\n";
            } else {
                std::cout << tc.name << ": " << tc.violations.size() << " violation(s)\n";
                for (const std::string& v : tc.violations)
                    std::cout << "  " << v << "\n";
            }
        }
        std::cout << (all_ok ? "all tables valid\n" : "violations found\n");
    }
    return all_ok ? 0 : 1;
}

int cmd_verify(int instances, int max_n, std::uint64_t seed, bool as_json,
               const qsr::CalculusRegistry& reg) {
    qsr::RandomStream rng(seed);
    int pc_equal = 0;
    int de_total = 0, de_agree = 0;
    std::vector<std::string> mismatches;

    for (int i = 0; i < instances; ++i) {
        int n = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_n - 2)));
        qsr::BinaryNetwork net = qsr::random_network(reg.rcc8(), n, rng);
        qsr::PcGacReport rep = qsr::compare_pc_gac(net);
        if (rep.equal) {
            ++pc_equal;
        } else {
            mismatches.push_back("instance " + std::to_string(i) + " (n=" +
                                 std::to_string(n) + "): " + rep.detail);
        }
        if (n <= 4) {
            ++de_total;
            bool by_enum = qsr::enumerate_atomic(net);
            bool by_decide = qsr::decide(qsr::to_scenario(net)).consistent;
            if (by_enum == by_decide) {
                ++de_agree;
            } else {
                mismatches.push_back("instance " + std::to_string(i) + " (n=" +
                                     std::to_string(n) + "): decide=" +
                                     (by_decide ? "consistent" : "inconsistent") +
                                     " enumerate=" + (by_enum ? "consistent" : "inconsistent"));
            }
        }
    }
    bool ok = pc_equal == instances && de_agree == de_total;

    if (as_json) {
        json out;
        out["command"] = "verify";
        out["instances"] = instances;
        out["max_n"] = max_n;
        out["seed"] = seed;
        out["pc_gac_equal"] = pc_equal;
        out["pc_gac_total"] = instances;
        out["decide_enum_agree"] = de_agree;
        out["decide_enum_total"] = de_total;
        out["mismatches"] = mismatches;
        out["ok"] = ok;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "verify instances=" << instances << " max_n=" << max_n
                  << " seed=" << seed << "\n";
        std::cout << "pc_gac " << pc_equal << "/" << instances << " equal\n";
        std::cout << "decide_enum " << de_agree << "/" << de_total << " agree\n";
        for (const std::string& m : mismatches) std::cout << "mismatch: " << m << "\n";
        std::cout << (ok ? "ok\n" : "FAIL\n");
    }
    return ok ? 0 : 1;
}

std::string dirsets_text(const qsr::DirectionUniverse& d) {
    std::string out = "tiles";
    for (const std::string& s : d.symbols) out += " " + s;
    out += "\nsets " + std::to_string(d.valid_sets.size()) + "\n";
    for (std::uint16_t mask : d.valid_sets) out += d.set_name(mask) + "\n";
    return out;
}

int cmd_derive(const std::string& what, const std::string& out_path, bool as_json,
               const qsr::CalculusRegistry& reg) {
    std::string text;
    if (what == "cyc") text = qsr::emit_ternary_calculus(reg.cyc());
    else if (what == "size") text = qsr::emit_calculus(reg.size());
    else if (what == "pointcd") text = qsr::emit_calculus(reg.pointcd());
    else text = dirsets_text(reg.direction());

    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out || !(out << text) || !out.flush()) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return 2;
        }
        if (as_json) {
            json rec;
            rec["command"] = "derive";
            rec["table"] = what;
            rec["out"] = out_path;
            std::cout << rec.dump(2) << "\n";
        }
        return 0;
    }
    if (as_json) {
        json rec;
        rec["command"] = "derive";
        rec["table"] = what;
        rec["text"] = text;
        std::cout << rec.dump(2) << "\n";
    } else {
        std::cout << text;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qualitative spatial reasoning over relation variables"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    std::string check_path;
    CLI::App* check_cmd = app.add_subcommand("check", "propagate a scenario to fixpoint");
    check_cmd->add_option("file", check_path, "scenario file")->required();

    std::string decide_path;
    bool decide_all_flag = false;
    CLI::App* decide_cmd = app.add_subcommand("decide", "search for atomic scenarios");
    decide_cmd->add_option("file", decide_path, "scenario file")->required();
    decide_cmd->add_flag("--all", decide_all_flag, "stream every atomic scenario");

    CLI::App* validate_cmd =
        app.add_subcommand("validate-tables", "check the shipped calculus tables");

    int instances = 100;
    int max_n = 8;
    std::uint64_t seed = 1;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "cross-validate propagation against the oracle");
    verify_cmd->add_option("--instances", instances, "random instances to run")
        ->check(CLI::Range(0, 1000000));
    verify_cmd->add_option("--max-n", max_n, "largest object count")
        ->check(CLI::Range(3, 16));
    verify_cmd->add_option("--seed", seed, "random seed");

    std::string derive_what;
    std::string derive_out;
    CLI::App* derive_cmd = app.add_subcommand("derive", "emit a derived table");
    derive_cmd->add_option("table", derive_what, "cyc, size, pointcd, or dirsets")
        ->required()
        ->check(CLI::IsMember({"cyc", "size", "pointcd", "dirsets"}));
    derive_cmd->add_option("--out", derive_out, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // 0 covers --help
    }

    qsr::CalculusRegistry reg;
    if (app.got_subcommand(check_cmd)) return cmd_check(check_path, as_json, reg);
    if (app.got_subcommand(decide_cmd))
        return cmd_decide(decide_path, decide_all_flag, as_json, reg);
    if (app.got_subcommand(validate_cmd)) return cmd_validate_tables(as_json, reg);
    if (app.got_subcommand(verify_cmd))
        return cmd_verify(instances, max_n, seed, as_json, reg);
    if (app.got_subcommand(derive_cmd))
        return cmd_derive(derive_what, derive_out, as_json, reg);
    return 2;
}
