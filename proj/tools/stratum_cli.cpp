// Command-line front end for the stratum library: evaluate expressions of
// the definability language to certified approximations under per-level
// step budgets, inspect levels and number classes, run the calculus and
// topology operations, and exercise the extension machinery.
//
// Exit codes: 0 success; 1 domain error (parse failure, apartness not
// witnessed, domain violation, missing sign change, dominance violation,
// out-of-interval choice, open expression, unsupported node, bad config);
// 2 step budget exceeded; 3 honest "unknown" (no separation found, no gap
// found) — a result, not an error, but distinguishable for scripting.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "stratum/stratum.hpp"

namespace {

using namespace stratum;

struct CliConfig {
    FuelBudget budget;
    std::uint32_t default_precision = 16;
    std::uint32_t apartness_bound = 64;
};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    if (s.empty()) throw Error("config: empty value for " + what);
    std::uint64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw Error("config: " + what + " must be a nonnegative integer");
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

/// Exact rational from CLI text: '-'? digits ('/' digits)?.
Rational parse_cli_rational(const std::string& text, const std::string& what) {
    const std::string s = trim(text);
    std::size_t i = 0;
    bool negative = false;
    if (i < s.size() && s[i] == '-') {
        negative = true;
        ++i;
    }
    auto digits = [&](const char* part) {
        std::string d;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') d += s[i++];
        if (d.empty()) throw Error(what + ": expected " + part + " in '" + text + "'");
        return BigInt(d);
    };
    BigInt num = digits("digits");
    BigInt den = 1;
    if (i < s.size() && s[i] == '/') {
        ++i;
        den = digits("a denominator");
        if (den == 0) throw Error(what + ": zero denominator in '" + text + "'");
    }
    if (i != s.size()) throw Error(what + ": trailing characters in '" + text + "'");
    Rational q(num, den);
    return negative ? Rational(0) - q : q;
}

CliConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open " + path);
    CliConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error("config: line " + std::to_string(lineno) + " is not key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "default_precision") {
            cfg.default_precision = static_cast<std::uint32_t>(parse_u64(value, key));
        } else if (key == "apartness_bound") {
            cfg.apartness_bound = static_cast<std::uint32_t>(parse_u64(value, key));
        } else if (key.rfind("budget.", 0) == 0) {
            const std::size_t dot = key.find('.', 7);
            if (dot == std::string::npos) throw Error("config: bad key " + key);
            const std::uint32_t lvl =
                static_cast<std::uint32_t>(parse_u64(key.substr(7, dot - 7), "budget level"));
            const std::string field = key.substr(dot + 1);
            BudgetRule rule = cfg.budget.rule_for(Level(lvl));
            if (field == "constant") {
                rule.constant = parse_u64(value, key);
            } else if (field == "exponent") {
                rule.exponent = static_cast<std::uint32_t>(parse_u64(value, key));
            } else {
                throw Error("config: unknown budget field " + field);
            }
            cfg.budget.set_rule(Level(lvl), rule);
        } else {
            throw Error("config: unknown key " + key);
        }
    }
    return cfg;
}

std::size_t decimal_digits_for(std::uint32_t k) {
    // enough digits that the printed decimal resolves 2^-k: ceil(k log10 2) + 1
    return static_cast<std::size_t>((static_cast<std::uint64_t>(k) * 30103 + 99999) / 100000) + 1;
}

std::string value_line(const Rational& q, std::uint32_t k, Level level) {
    return "value=" + q.to_decimal(decimal_digits_for(k)) + " error<=2^-" + std::to_string(k) +
           " rational=" + q.str() + " level=" + std::to_string(level.index);
}

/// Metered approximation at precision k under the per-level budget.
int run_metered(const FractalReal& x, std::uint32_t k, const CliConfig& cfg) {
    const BigInt limit = budget_for(cfg.budget, x.level(), k);
    const MeteredResult res = metered_approx(x, k, cfg.budget);
    if (!res.value) {
        std::cout << "budget-exceeded level=" << x.level().index << " k=" << k
                  << " steps=" << res.consumed << " budget=" << limit.str() << "\n";
        return 2;
    }
    std::cout << value_line(*res.value, k, x.level()) << " steps=" << res.consumed
              << " budget=" << limit.str() << "\n";
    return 0;
}

int run_hb_demo(bool use_pi) {
    std::vector<RationalVector> basis{unit_vector(2, 0)};
    std::vector<FractalReal> values{embed_rational(Rational(1), Level(0))};
    LinearFunctional f(basis, values, Level(0));
    std::vector<FractalReal> weights{sqrt2(), use_pi ? constant_pi()
                                              : embed_rational(Rational(2), Level(0))};
    const Level p_level = use_pi ? Level(2) : Level(1);
    SublinearFunctional p = SublinearFunctional::weighted_l1(weights, p_level);

    const RationalVector v = unit_vector(2, 1);
    const AdmissibleInterval box = admissible_interval(f, p, v);
    std::cout << "admissible_lo=" << box.lo.approx(16).to_decimal(5)
              << " admissible_hi=" << box.hi.approx(16).to_decimal(5) << " precision=2^-16\n";

    const LinearFunctional g = extend(f, p, {ExtensionStep::midpoint(v)});
    std::cout << "choice=" << g.values()[1].approx(16).str() << "\n";
    std::cout << "extension_level=" << g.level().index << "\n";

    std::vector<RationalVector> samples;
    for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; ++b) {
            if (a == 0 && b == 0) continue;
            samples.push_back(RationalVector({Rational(a), Rational(b)}));
        }
    }
    const DominationReport rep = verify_domination(g, p, samples, 16);
    if (rep.verified) {
        std::cout << "domination=verified samples=" << samples.size() << "\n";
        return 0;
    }
    std::cout << "domination=violated at=" << rep.violated_at->str() << "\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stratum: exact level-tagged real arithmetic with step budgets"};
    app.require_subcommand(1);
    app.fallthrough(); // accept global options after the subcommand too

    std::string config_path;
    app.add_option("--config", config_path, "configuration file (key = value lines)");

    std::string expr_text, expr2_text, body_text;
    std::string from_text, to_text, at_text, x0_text, eps_text = "1/64";
    std::uint32_t k_opt = 0;
    bool k_given = false;
    std::uint32_t hint = 64;
    std::uint64_t enum_count = 25, enum_start = 0;
    std::uint32_t cover_m = 8;
    bool scoped = false, use_pi = false;

    auto add_k = [&](CLI::App* sub) {
        sub->add_option("-k,--precision", k_opt, "target precision 2^-k")
            ->check(CLI::Range(0u, 4000000u))
            ->each([&](const std::string&) { k_given = true; });
    };

    CLI::App* cmd_approx = app.add_subcommand("approx", "evaluate a closed expression");
    cmd_approx->add_option("expr", expr_text, "expression")->required();
    add_k(cmd_approx);

    CLI::App* cmd_level = app.add_subcommand("level", "infer the level of an expression");
    cmd_level->add_option("expr", expr_text, "expression")->required();

    CLI::App* cmd_classify =
        app.add_subcommand("classify", "infer the number class of a closed expression");
    cmd_classify->add_option("expr", expr_text, "expression")->required();

    CLI::App* cmd_diff = app.add_subcommand("diff", "derivative of a body at a point");
    cmd_diff->add_option("body", body_text, "body in x")->required();
    cmd_diff->add_option("--at", at_text, "evaluation point (expression)")->required();
    add_k(cmd_diff);

    CLI::App* cmd_integrate = app.add_subcommand("integrate", "definite integral of a body");
    cmd_integrate->add_option("body", body_text, "body in x")->required();
    cmd_integrate->add_option("--from", from_text, "lower bound (rational)")->required();
    cmd_integrate->add_option("--to", to_text, "upper bound (rational)")->required();
    add_k(cmd_integrate);

    CLI::App* cmd_min = app.add_subcommand("min", "minimum of a body on [from, to]");
    cmd_min->add_option("body", body_text, "body in x")->required();
    cmd_min->add_option("--from", from_text, "lower endpoint (rational)")->required();
    cmd_min->add_option("--to", to_text, "upper endpoint (rational)")->required();
    add_k(cmd_min);

    CLI::App* cmd_separate =
        app.add_subcommand("separate", "find disjoint intervals around two reals");
    cmd_separate->add_option("expr", expr_text, "first expression")->required();
    cmd_separate->add_option("expr2", expr2_text, "second expression")->required();
    cmd_separate->add_option("--hint", hint, "maximum precision to try");

    CLI::App* cmd_measure =
        app.add_subcommand("measure", "cheap interval cover of a point's approximants");
    cmd_measure->add_option("expr", expr_text, "expression")->required();
    cmd_measure->add_option("--eps", eps_text, "total cover length (rational)");
    cmd_measure->add_option("-m,--intervals", cover_m, "number of intervals");

    CLI::App* cmd_hb = app.add_subcommand(
        "hb-extend", "extend f(e1)=1 on span(e1) in Q^2 under a weighted l1 bound");
    cmd_hb->add_flag("--pi", use_pi, "use weights (sqrt2, pi) instead of (sqrt2, 2)");

    CLI::App* cmd_gap =
        app.add_subcommand("gap", "certificate that x0 does not minimize a body");
    cmd_gap->add_option("body", body_text, "body in x")->required();
    cmd_gap->add_option("--from", from_text, "lower endpoint (rational)")->required();
    cmd_gap->add_option("--to", to_text, "upper endpoint (rational)")->required();
    cmd_gap->add_option("--x0", x0_text, "reference point (rational)")->required();
    add_k(cmd_gap);

    CLI::App* cmd_enum = app.add_subcommand("enum", "enumerate canonical terms");
    cmd_enum->add_option("-n,--count", enum_count, "how many terms");
    cmd_enum->add_option("--start", enum_start, "first index");
    cmd_enum->add_flag("--scoped", scoped, "enumerate bodies (with the variable)");

    CLI11_PARSE(app, argc, argv);

    try {
        const CliConfig cfg = config_path.empty() ? CliConfig{} : load_config(config_path);
        const std::uint32_t k = k_given ? k_opt : cfg.default_precision;

        if (cmd_approx->parsed()) {
            const ExprPtr e = parse_expression(expr_text);
            return run_metered(eval_expr(e, cfg.apartness_bound), k, cfg);
        }
        if (cmd_level->parsed()) {
            std::cout << "level=" << infer_level(parse_expression(expr_text)).index << "\n";
            return 0;
        }
        if (cmd_classify->parsed()) {
            const NumberClass c = classify(parse_expression(expr_text));
            std::cout << "class=" << c.str() << " level=" << c.level.index << "\n";
            return 0;
        }
        if (cmd_diff->parsed()) {
            const std::string composed = "deriv(" + body_text + "; " + at_text + ")";
            const ExprPtr e = parse_expression(composed);
            return run_metered(eval_expr(e, cfg.apartness_bound), k, cfg);
        }
        if (cmd_integrate->parsed()) {
            const std::string composed =
                "integral(" + body_text + "; " + from_text + "; " + to_text + ")";
            const ExprPtr e = parse_expression(composed);
            return run_metered(eval_expr(e, cfg.apartness_bound), k, cfg);
        }
        if (cmd_min->parsed()) {
            const std::string composed =
                "min_on(" + body_text + "; " + from_text + "; " + to_text + ")";
            const ExprPtr e = parse_expression(composed);
            const int rc = run_metered(eval_expr(e, cfg.apartness_bound), k, cfg);
            if (rc != 0) return rc;
            const ExprPtr body = parse_expression(composed)->a;
            const MinWitness w =
                min_on_witness(*body, parse_cli_rational(from_text, "--from"),
                               parse_cli_rational(to_text, "--to"), k, cfg.apartness_bound);
            std::cout << "witness=" << w.at.str() << "\n";
            return 0;
        }
        if (cmd_separate->parsed()) {
            const FractalReal x = eval_expr(parse_expression(expr_text), cfg.apartness_bound);
            const FractalReal y = eval_expr(parse_expression(expr2_text), cfg.apartness_bound);
            const auto sep = separate(x, y, hint);
            if (!sep) {
                std::cout << "separated=unknown hint=" << hint << "\n";
                return 3;
            }
            std::cout << "separated=true precision=" << sep->precision << " x_in=("
                      << sep->around_x.lo.str() << ", " << sep->around_x.hi.str() << ") y_in=("
                      << sep->around_y.lo.str() << ", " << sep->around_y.hi.str() << ")\n";
            return 0;
        }
        if (cmd_measure->parsed()) {
            const FractalReal x = eval_expr(parse_expression(expr_text), cfg.apartness_bound);
            const Rational eps = parse_cli_rational(eps_text, "--eps");
            const CoverBound cover = canonical_point_cover(x, eps, cover_m);
            std::cout << "cover_total=" << outer_measure_upper(cover.cover).str()
                      << " intervals=" << cover.cover.size() << " eps=" << eps.str() << "\n";
            for (const RationalInterval& iv : cover.cover) {
                std::cout << "  (" << iv.lo.str() << ", " << iv.hi.str() << ")\n";
            }
            return 0;
        }
        if (cmd_hb->parsed()) return run_hb_demo(use_pi);
        if (cmd_gap->parsed()) {
            const ExprPtr body = parse_expression(body_text);
            const auto cert = gap_certificate(
                *body, parse_cli_rational(from_text, "--from"),
                parse_cli_rational(to_text, "--to"), parse_cli_rational(x0_text, "--x0"), k,
                cfg.apartness_bound);
            if (!cert) {
                std::cout << "gap=none k=" << k << "\n";
                return 3;
            }
            std::cout << "gap=" << cert->gap.str() << " witness=" << cert->witness.str()
                      << " precision=" << cert->precision << " level=" << cert->level.index
                      << "\n";
            return 0;
        }
        if (cmd_enum->parsed()) {
            for (std::uint64_t i = enum_start; i < enum_start + enum_count; ++i) {
                const ExprPtr e = scoped ? enumerate_scoped_terms(i) : enumerate_terms(i);
                std::cout << "i=" << i << " expr=" << print_expr(e) << "\n";
            }
            return 0;
        }
        return 1;
    } catch (const stratum::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::domain_error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
