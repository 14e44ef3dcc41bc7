#pragma once

// Command dispatch for the semistar tool, separated from argument parsing
// so it can be driven directly from tests.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semistar/engine.hpp"
#include "semistar/error.hpp"
#include "semistar/hasse.hpp"
#include "semistar/oracle.hpp"
#include "semistar/polynomial.hpp"
#include "semistar/spectrum.hpp"

namespace semistar::cli {

enum class Format { text, json, dot };

struct RunConfig {
    std::string command;  // validate | count | poly | hasse | supports | oracle-check
    std::string input;    // path, or "-" for standard input
    Format format = Format::text;
    bool smstar = false;  // poly: (semi)star instead of semistar
    std::vector<SymbolicOmega> vars;
    std::vector<SymbolicEpsilon> eps;
    std::string target = "semistar";  // hasse: semistar | fstar:<branch id> | tree
    Limits limits;
};

struct RunResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

enum ExitCode : int { kOk = 0, kInvalid = 1, kBound = 2, kInput = 3, kMismatch = 4 };

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"validate", "count", "poly", "hasse", "supports", "oracle-check"};
    return names;
}

/// "id" or "id=name".
inline std::pair<std::string, std::string> split_binding(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) return {s, ""};
    return {s.substr(0, eq), s.substr(eq + 1)};
}

namespace detail {

inline std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string counts_text(const Counts& c) {
    std::ostringstream out;
    out << "semistar " << c.semistar << "\nfstar " << c.fstar << "\nsmstar " << c.smstar << "\nstar " << c.star
        << '\n';
    return out.str();
}

inline nlohmann::json counts_json(const Counts& c) {
    using semistar::detail::integer_to_json;
    return {{"semistar", integer_to_json(c.semistar)},
            {"fstar", integer_to_json(c.fstar)},
            {"smstar", integer_to_json(c.smstar)},
            {"star", integer_to_json(c.star)}};
}

inline RunResult run_validate(const RunConfig& cfg, const SpectrumTree& t) {
    const auto m = standard_decomposition(t).size();
    if (cfg.format == Format::json) {
        return {kOk, nlohmann::json{{"valid", true}, {"nodes", t.size()}, {"branches", m}}.dump(2) + "\n", ""};
    }
    return {kOk, "valid: " + std::to_string(t.size()) + " nodes, " + std::to_string(m) + " branches\n", ""};
}

inline RunResult run_count(const RunConfig& cfg, const SpectrumTree& t) {
    const auto c = count_all(t, cfg.limits);
    if (cfg.format == Format::json) return {kOk, counts_json(c).dump(2) + "\n", ""};
    return {kOk, counts_text(c), ""};
}

inline RunResult run_poly(const RunConfig& cfg, const SpectrumTree& t) {
    auto vars = cfg.vars;
    if (vars.empty()) {
        for (Index c : standard_decomposition(t)) vars.push_back({t.id(c), ""});
    }
    const auto p = cfg.smstar ? smstar_polynomial(t, vars, cfg.eps, cfg.limits)
                              : semistar_polynomial(t, vars, cfg.limits);
    if (cfg.format == Format::json) return {kOk, to_json(p).dump(2) + "\n", ""};
    return {kOk, p.to_string() + "\n", ""};
}

inline RunResult run_hasse(const RunConfig& cfg, const SpectrumTree& t) {
    if (cfg.target == "tree") {
        if (cfg.format == Format::json) return {kOk, to_json(t).dump(2) + "\n", ""};
        return {kOk, to_dot(t), ""};
    }
    FlaggedPoset f;
    std::vector<std::string> labels;
    if (cfg.target == "semistar") {
        const auto s = semistar_poset(t, cfg.limits);
        f = s.flagged_poset(cfg.limits);
        labels = semistar_labels(s);
    } else if (cfg.target.rfind("fstar:", 0) == 0) {
        const Index c = t.index_of(cfg.target.substr(6));
        if (t.parent(c) != SpectrumTree::root()) {
            throw UnknownNodeError("'" + cfg.target.substr(6) + "' is not a child of the root");
        }
        f = fstar_poset(branch_subtree(t, c), cfg.limits);
        for (Index i = 0; i < f.size(); ++i) labels.push_back(std::to_string(i));
    } else {
        throw UnknownNodeError("unknown hasse target '" + cfg.target + "'");
    }
    if (cfg.format == Format::json) return {kOk, hasse_json(f, &labels).dump(2) + "\n", ""};
    return {kOk, hasse_dot(f, &labels), ""};
}

inline RunResult run_supports(const RunConfig& cfg, const SpectrumTree& t) {
    const auto supports = enumerate_supports(t, cfg.limits);
    if (cfg.format == Format::json) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& s : supports) list.push_back(s.elements());
        return {kOk,
                nlohmann::json{{"branches", standard_decomposition(t).size()}, {"count", supports.size()}, {"supports", list}}
                        .dump(2) +
                    "\n",
                ""};
    }
    std::ostringstream out;
    out << supports.size() << " supports\n";
    for (const auto& s : supports) out << support_label(s) << '\n';
    return {kOk, out.str(), ""};
}

inline RunResult run_oracle_check(const RunConfig& cfg, const SpectrumTree& t) {
    const auto engine = count_all(t, cfg.limits);
    const auto [brute_semistar, brute_smstar] = oracle::brute_semistar_count(t);
    struct Row {
        std::string name;
        Integer engine;
        Integer reference;
    };
    std::vector<Row> rows{{"semistar", engine.semistar, brute_semistar}, {"smstar", engine.smstar, brute_smstar}};
    const auto poset = semistar_poset(t, cfg.limits);
    rows.push_back({"semistar (poset size)", Integer(poset.size()), brute_semistar});
    rows.push_back({"smstar (flag count)", Integer(poset.flag_count()), brute_smstar});

    bool all = true;
    std::ostringstream text;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& r : rows) {
        const bool ok = r.engine == r.reference;
        all = all && ok;
        text << (ok ? "PASS " : "FAIL ") << r.name << ": engine " << r.engine << ", oracle " << r.reference << '\n';
        list.push_back({{"check", r.name},
                        {"engine", semistar::detail::integer_to_json(r.engine)},
                        {"oracle", semistar::detail::integer_to_json(r.reference)},
                        {"pass", ok}});
    }
    const int code = all ? kOk : kMismatch;
    if (cfg.format == Format::json) return {code, nlohmann::json{{"pass", all}, {"checks", list}}.dump(2) + "\n", ""};
    return {code, text.str(), ""};
}

}  // namespace detail

/// Runs one command. Exit codes: 0 success, 1 invalid tree, 2 enumeration
/// bound exceeded, 3 unreadable input or unknown node, 4 oracle mismatch.
inline RunResult run(const RunConfig& cfg) {
    RunResult invalid;
    try {
        const auto raw = parse_tree_json(detail::read_input(cfg.input));
        SpectrumTree t;
        try {
            t = validate(raw);
        } catch (const ValidationError& e) {
            if (cfg.format == Format::json) {
                invalid.out = nlohmann::json{{"valid", false}, {"issues", e.issues()}}.dump(2) + "\n";
            }
            for (const auto& issue : e.issues()) invalid.err += "invalid tree: " + issue + "\n";
            invalid.exit_code = kInvalid;
            return invalid;
        }
        if (cfg.command == "validate") return detail::run_validate(cfg, t);
        if (cfg.command == "count") return detail::run_count(cfg, t);
        if (cfg.command == "poly") return detail::run_poly(cfg, t);
        if (cfg.command == "hasse") return detail::run_hasse(cfg, t);
        if (cfg.command == "supports") return detail::run_supports(cfg, t);
        if (cfg.command == "oracle-check") return detail::run_oracle_check(cfg, t);
        return {kInput, "", "unknown command '" + cfg.command + "'\n"};
    } catch (const EnumerationLimitError& e) {
        return {kBound, "", std::string("bound exceeded: ") + e.what() + "\n"};
    } catch (const ParseError& e) {
        return {kInput, "", std::string("input error: ") + e.what() + "\n"};
    } catch (const UnknownNodeError& e) {
        return {kInput, "", std::string("unknown node: ") + e.what() + "\n"};
    } catch (const PreconditionError& e) {
        return {kInput, "", std::string("bad request: ") + e.what() + "\n"};
    }
}

}  // namespace semistar::cli
