#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semistar/cli.hpp"

int main(int argc, char** argv) {
    using namespace semistar;
    cli::RunConfig cfg;
    cfg.limits = Limits::from_environment();

    CLI::App app{"Count and export semistar and star operations of semilocal Prufer domains"};
    app.require_subcommand(1);

    std::string format = "text";
    std::vector<std::string> vars;
    std::vector<std::string> eps;
    const std::map<std::string, cli::Format> formats{
        {"text", cli::Format::text}, {"json", cli::Format::json}, {"dot", cli::Format::dot}};

    for (const auto& name : cli::commands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("tree", cfg.input, "spectral tree JSON file, or - for stdin")->required();
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json", "dot"}));
        sub->add_option("--max-branches", cfg.limits.max_branches, "largest branch count accepted");
        sub->add_option("--max-maps", cfg.limits.max_maps, "largest map list enumerated per component");
        sub->add_option("--max-elements", cfg.limits.max_elements, "largest semistar poset enumerated");
        if (name == "poly") {
            auto* kind = sub->add_option_group("kind");
            kind->add_flag("--semistar", [&](std::int64_t) { cfg.smstar = false; }, "count semistar operations");
            kind->add_flag("--smstar", [&](std::int64_t) { cfg.smstar = true; }, "count (semi)star operations");
            kind->require_option(0, 1);
            sub->add_option("--var", vars, "root child whose omega becomes a variable: id or id=name");
            sub->add_option("--eps", eps, "leaf whose epsilon becomes a variable: id or id=name");
        }
        if (name == "hasse") {
            cfg.target = "semistar";
            sub->add_option("--target", cfg.target, "semistar, fstar:<branch id> or tree");
        }
        sub->callback([&cfg, name] { cfg.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kInput;
    }

    cfg.format = formats.at(format);
    if (cfg.command == "hasse" && format == "text") cfg.format = cli::Format::dot;
    for (const auto& v : vars) {
        auto [id, var] = cli::split_binding(v);
        cfg.vars.push_back({id, var});
    }
    for (const auto& v : eps) {
        auto [id, var] = cli::split_binding(v);
        cfg.eps.push_back({id, var});
    }

    const auto result = cli::run(cfg);
    std::cout << result.out;
    std::cerr << result.err;
    return result.exit_code;
}
