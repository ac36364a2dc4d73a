// End-to-end checks of the command-line tool: frozen output lines, exit
// codes (0 ok, 1 error, 2 budget exceeded, 3 honest unknown), config
// handling, and run-to-run determinism of step counts.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#ifndef STRATUM_CLI_PATH
#error "STRATUM_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
    std::string out;
    int code = -1;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(STRATUM_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[512];
    while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    RunResult r;
    r.out = out;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

// writes a config file into the test temp directory; removed on destruction
class TempConfig {
public:
    explicit TempConfig(const std::string& body) {
        path_ = (std::filesystem::temp_directory_path() /
                 ("stratum_cli_test_" + std::to_string(counter_++) + ".conf"))
                    .string();
        std::ofstream f(path_);
        f << body;
    }
    ~TempConfig() { std::filesystem::remove(path_); }
    const std::string& path() const { return path_; }

private:
    static inline int counter_ = 0;
    std::string path_;
};

} // namespace

TEST_CASE("approx prints the full certified value line") {
    auto r = run_cli("approx \"root(x^2 - 2; 1; 2)\" -k 20");
    CHECK(r.code == 0);
    CHECK(r.out ==
          "value=1.41421341 error<=2^-20 rational=5931641/4194304 level=1 "
          "steps=192 budget=3200000\n");

    auto e = run_cli("approx \"e\" -k 12");
    CHECK(e.code == 0);
    CHECK(e.out ==
          "value=2.71825 error<=2^-12 rational=685/252 level=2 steps=15 "
          "budget=429981696\n");
}

TEST_CASE("identical invocations print identical bytes") {
    const std::string cmd = "approx \"min_on(x^2 - x; 0; 1)\" -k 5";
    auto first = run_cli(cmd);
    auto second = run_cli(cmd);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);
    CHECK(first.out ==
          "value=-0.250 error<=2^-5 rational=-1/4 level=1 steps=1841 budget=3125\n");
}

TEST_CASE("level and classify report inference results") {
    auto lvl = run_cli("level \"liouville(2) + pi\"");
    CHECK(lvl.code == 0);
    CHECK(lvl.out == "level=3\n");

    auto t = run_cli("classify \"e + 1\"");
    CHECK(t.code == 0);
    CHECK(t.out == "class=transcendental level=2\n");

    auto u = run_cli("classify \"e * pi\"");
    CHECK(u.code == 0);
    CHECK(u.out == "class=unknown level=2\n");
}

TEST_CASE("calculus subcommands run the composed binder expressions") {
    auto d = run_cli("diff \"x^2\" --at 1/2 -k 8");
    CHECK(d.code == 0);
    CHECK(d.out ==
          "value=1.0004 error<=2^-8 rational=2049/2048 level=1 steps=144 "
          "budget=32768\n");

    auto i = run_cli("integrate \"x^2\" --from 0 --to 1 -k 10");
    CHECK(i.code == 0);
    CHECK(i.out ==
          "value=0.33321 error<=2^-10 rational=5593088/16785409 level=1 "
          "steps=32782 budget=100000\n");

    auto m = run_cli("min \"x^2 - x\" --from 0 --to 1 -k 5");
    CHECK(m.code == 0);
    CHECK(m.out ==
          "value=-0.250 error<=2^-5 rational=-1/4 level=1 steps=1841 budget=3125\n"
          "witness=1/2\n");
}

TEST_CASE("budget exhaustion aborts one step past the limit with code 2") {
    auto m = run_cli("min \"x^2 - x\" --from 0 --to 1 -k 13");
    CHECK(m.code == 2);
    CHECK(m.out == "budget-exceeded level=1 k=13 steps=371294 budget=371293\n");

    auto i = run_cli("integrate \"x^2\" --from 0 --to 1 -k 15");
    CHECK(i.code == 2);
    CHECK(i.out == "budget-exceeded level=1 k=15 steps=759376 budget=759375\n");
}

TEST_CASE("config files adjust budgets and default precision") {
    TempConfig cfg("budget.1.constant = 100000\n# comment line\ndefault_precision = 8\n");

    // raised level-1 budget admits the k = 13 minimization
    auto m = run_cli("min \"x^2 - x\" --from 0 --to 1 -k 13 --config " + cfg.path());
    CHECK(m.code == 0);
    CHECK(m.out ==
          "value=-0.25000 error<=2^-13 rational=-1/4 level=1 steps=458809 "
          "budget=37129300000\nwitness=1/2\n");

    // default_precision applies when -k is absent; position of --config is free
    auto e = run_cli("--config " + cfg.path() + " approx \"e\"");
    CHECK(e.code == 0);
    CHECK(e.out ==
          "value=2.7166 error<=2^-8 rational=163/60 level=2 steps=11 "
          "budget=16777216\n");
    auto e2 = run_cli("approx \"e\" --config " + cfg.path());
    CHECK(e2.out == e.out);

    TempConfig bad("bogus_key = 3\n");
    auto b = run_cli("approx \"e\" --config " + bad.path());
    CHECK(b.code == 1);
    CHECK(b.out == "error: config: unknown key bogus_key\n");

    auto missing = run_cli("approx \"e\" --config /nonexistent_stratum.conf");
    CHECK(missing.code == 1);
    CHECK(missing.out == "error: config: cannot open /nonexistent_stratum.conf\n");
}

TEST_CASE("separation emits frozen windows or an honest unknown") {
    auto s = run_cli("separate \"root(x^2 - 2; 1; 2)\" \"3/2\"");
    CHECK(s.code == 0);
    CHECK(s.out ==
          "separated=true precision=5 x_in=(177/128, 185/128) y_in=(47/32, 49/32)\n");

    auto same = run_cli("separate \"e\" \"e\" --hint 12");
    CHECK(same.code == 3);
    CHECK(same.out == "separated=unknown hint=12\n");
}

TEST_CASE("gap certificates print their data or decline with code 3") {
    auto g = run_cli("gap \"x^2 - 2*x + 1\" --from 0 --to 2 --x0 9/10 -k 10");
    CHECK(g.code == 0);
    CHECK(g.out == "gap=1/128 witness=1 precision=10 level=1\n");

    auto none = run_cli("gap \"x^2 - 2*x + 1\" --from 0 --to 2 --x0 1 -k 10");
    CHECK(none.code == 3);
    CHECK(none.out == "gap=none k=10\n");
}

TEST_CASE("measure lists the canonical cover with its exact total") {
    auto m = run_cli("measure \"pi\" --eps 1/16 -m 4");
    CHECK(m.code == 0);
    CHECK(m.out ==
          "cover_total=1/16 intervals=4 eps=1/16\n"
          "  (485717/152960, 488107/152960)\n"
          "  (485717/152960, 488107/152960)\n"
          "  (35939303/11472000, 36118553/11472000)\n"
          "  (35939303/11472000, 36118553/11472000)\n");

    auto d = run_cli("measure \"pi\" -m 2"); // default eps is 1/64
    CHECK(d.code == 0);
    CHECK(d.out.starts_with("cover_total=1/64 intervals=2 eps=1/64\n"
                            "  (972629/305920, 975019/305920)\n"));
}

TEST_CASE("functional extension demos print interval, choice, level, check") {
    auto flat = run_cli("hb-extend");
    CHECK(flat.code == 0);
    CHECK(flat.out ==
          "admissible_lo=-2.00000 admissible_hi=2.00000 precision=2^-16\n"
          "choice=0\nextension_level=2\ndomination=verified samples=24\n");

    auto curved = run_cli("hb-extend --pi");
    CHECK(curved.code == 0);
    CHECK(curved.out ==
          "admissible_lo=-3.14159 admissible_hi=3.14159 precision=2^-16\n"
          "choice=0\nextension_level=3\ndomination=verified samples=24\n");
}

TEST_CASE("term enumeration is stable across flags") {
    auto head = run_cli("enum -n 3");
    CHECK(head.code == 0);
    CHECK(head.out == "i=0 expr=0\ni=1 expr=0/1\ni=2 expr=e\n");

    auto offset = run_cli("enum -n 1 --start 13");
    CHECK(offset.out == "i=13 expr=1\n");

    auto scoped = run_cli("enum -n 3 --scoped");
    CHECK(scoped.out == "i=0 expr=0\ni=1 expr=0/1\ni=2 expr=x\n");
}

TEST_CASE("failures report reasons on stderr with exit code 1") {
    auto open = run_cli("approx \"x + 1\"");
    CHECK(open.code == 1);
    CHECK(open.out == "error: open-expression: the variable is not bound at top level\n");

    auto apart = run_cli("approx \"1/(2 - 2)\"");
    CHECK(apart.code == 1);
    CHECK(apart.out ==
          "error: apartness-not-witnessed: divisor not separated from zero up to 2^-64\n");

    auto parse = run_cli("approx \"x +\"");
    CHECK(parse.code == 1);
    CHECK(parse.out == "error: parse error at byte 4: expected an expression\n");

    auto bracket = run_cli("approx \"root(x^2 + 1; 0; 1)\"");
    CHECK(bracket.code == 1);
    CHECK(bracket.out == "error: no-sign-change: p(0) = 1, p(1) = 2\n");
}
