// cycalc: cycles, Weil divisors and flat pullbacks on fixture files.
//
// Exit codes: 0 all pass, 1 a failed verdict or operation, 2 usage or
// parse error, 3 internal invariant violation.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cycalc/verify.hpp"

namespace fs = std::filesystem;
using namespace cycalc;

namespace {

struct Flags {
    std::string order = "grevlex";
    bool json = false;
    bool stable = false;
    bool trace = false;
    std::optional<std::uint64_t> seed;
    std::string check = "all";
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Calls body(fixture) with the fixture parsed over its declared field.
template <class Body>
auto with_fixture(const std::string& path, Body&& body) {
    auto content = slurp(path);
    auto spec = scan_field(content);
    auto name = fs::path(path).stem().string();
    if (spec.kind == FieldKind::Rationals) return body(parse_fixture(content, Rationals{}, name));
    return body(parse_fixture(content, PrimeField(spec.characteristic), name));
}

/// Files named directly, plus every *.fix inside named directories, sorted.
std::vector<std::string> expand(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (const auto& a : args) {
        if (fs::is_directory(a)) {
            std::vector<std::string> found;
            for (const auto& e : fs::directory_iterator(a))
                if (e.path().extension() == ".fix") found.push_back(e.path().string());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(a);
        }
    }
    return out;
}

int run_query(const Flags& fl, const std::string& path, std::vector<std::string> cmd) {
    CommandOptions opt;
    if (fl.order == "lex") opt.order = MonomialOrder::lex();
    else if (fl.order != "grevlex") throw parse_error("--order must be grevlex or lex");
    opt.trace = fl.trace;
    auto lines = with_fixture(path, [&](const auto& fx) { return run_command(fx, cmd, opt); });
    if (fl.json) {
        nlohmann::ordered_json j{{"command", text::join(cmd, " ")}, {"fixture", fs::path(path).stem().string()}, {"output", lines}};
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& l : lines) std::cout << l << "\n";
    }
    return 0;
}

int run_verify(const Flags& fl, const std::vector<std::string>& paths) {
    VerifyOptions opt;
    opt.selector = parse_selector(fl.check);
    opt.seed = fl.seed;
    int code = 0;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : expand(paths)) {
        VerifyReport rep;
        try {
            rep = with_fixture(p, [&](const auto& fx) { return run_checks(fx, opt); });
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Internal) throw;
            throw Error(e.kind(), p + ": " + e.what());
        }
        code = std::max(code, rep.exit_code());
        if (fl.json) arr.push_back(render_json(rep, fl.stable));
        else std::cout << render_text(rep, fl.stable);
    }
    if (fl.json) std::cout << (arr.size() == 1 ? arr[0] : arr).dump(2) << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cycalc: algebraic cycles, divisors and flat pullbacks on affine schemes"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags fl;
    std::uint64_t seed = 0;
    int budget = 0;
    app.add_option("--order", fl.order, "monomial order for gb: grevlex or lex");
    app.add_flag("--json", fl.json, "JSON output");
    app.add_flag("--stable", fl.stable, "omit timing fields");
    app.add_flag("--trace", fl.trace, "per-component detail (div, length)");
    auto* seed_opt = app.add_option("--seed", seed, "randomised glue sweep over each cover");
    auto* budget_opt = app.add_option("--budget", budget, "splitting-candidate budget for decompositions");

    std::string fixture, a1, a2;
    std::vector<std::string> fixtures;
    std::vector<std::string> cmd;
    auto query = [&](const std::string& name, const std::string& help, std::vector<std::string> argnames) {
        auto* sc = app.add_subcommand(name, help);
        sc->add_option("fixture", fixture, "fixture file")->required();
        if (argnames.size() > 0) sc->add_option(argnames[0], a1)->required();
        if (argnames.size() > 1) sc->add_option(argnames[1], a2)->required();
        sc->callback([&, name, n = argnames.size()] {
            cmd = {name};
            if (n > 0) cmd.push_back(a1);
            if (n > 1) cmd.push_back(a2);
        });
    };
    query("gb", "reduced Groebner basis of an ideal", {"ideal"});
    query("components", "minimal primes with provenance", {"scheme"});
    query("fund", "fundamental cycle", {"scheme"});
    query("length", "length of the local ring at a minimal prime", {"scheme", "prime"});
    query("div", "Weil divisor of a meromorphic function", {"scheme", "mero"});
    query("glue", "glue a local cycle datum", {"datum"});
    query("pullback", "flat pullback of a cycle", {"map", "cycle"});
    auto* verify = app.add_subcommand("verify", "run identity checks over fixtures");
    verify->add_option("fixtures", fixtures, "fixture files or directories")->required();
    verify->add_option("--check", fl.check, "all, or a comma list of check ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (*seed_opt) fl.seed = seed;
    if (*budget_opt) {
        if (budget <= 0) {
            std::cerr << "error: --budget must be positive\n";
            return 2;
        }
        split_candidate_budget() = budget;
    }

    try {
        if (verify->parsed()) return run_verify(fl, fixtures);
        return run_query(fl, fixture, cmd);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::Parse: return 2;
            case ErrorKind::Internal: return 3;
            case ErrorKind::Math: return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
