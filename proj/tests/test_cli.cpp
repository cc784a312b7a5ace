#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, bool merge_stderr = false, const std::string& env = "")
{
    std::string cmd = env + (env.empty() ? "" : " ") + std::string(MODSET_CLI_PATH) + " " + args +
                      (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, got);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

bool contains(const std::string& hay, const std::string& needle)
{
    return hay.find(needle) != std::string::npos;
}

// scratch directory for generated family files, unique per test process
const std::filesystem::path& scratch()
{
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("modset_cli_" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_family(const std::string& name, const std::string& text)
{
    auto path = scratch() / name;
    std::ofstream(path) << text;
    return path.string();
}

} // namespace

TEST_CASE("bound subcommand")
{
    CHECK(run_cli("--plain bound main3 --n 5 --q 2 --k 2").out == "6\n");
    CHECK(run_cli("--plain bound bfks --n 10 --s 3 --alpha 2").out == "D=4 bound=386\n");
    CHECK(run_cli("--plain bound dfs --n 4 --s 1").out == "5\n");
    CHECK(run_cli("--plain bound main4 --n 6 --q 3 --k 2 --t 1").out == "15\n");

    SECTION("hypothesis violations exit 2 with a message")
    {
        RunResult r = run_cli("--plain bound xy2 --n 5 --s 1 --b 2 --q 4", true);
        CHECK(r.code == 2);
        CHECK(contains(r.out, "C(b, s)"));
        CHECK(run_cli("--plain bound main3 --n 5 --q 6 --k 2").code == 2);
        CHECK(run_cli("--plain bound main3 --n 5 --k 2").code == 2); // missing --q
        CHECK(run_cli("--plain bound nosuch --n 5").code == 2);
    }

    SECTION("usage errors exit 2, help exits 0")
    {
        CHECK(run_cli("--plain bound main3 --zzz 1").code == 2);
        CHECK(run_cli("--plain frobnicate").code == 2);
        CHECK(run_cli("--plain").code == 2); // a subcommand is required
        CHECK(run_cli("--help").code == 0);
    }
}

TEST_CASE("check subcommand")
{
    std::string odd = write_family("odd.json",
                                   R"({"n":3,"q":2,"L":[0],"k":2,"sets":[[1],[2],[3]]})");

    SECTION("passing family")
    {
        RunResult r = run_cli("--plain check " + odd);
        CHECK(r.code == 0);
        CHECK(r.out == "PASS avoiding\nPASS kwise\nPASS\n");
    }

    SECTION("violating family names the offending tuple")
    {
        std::string bad = write_family(
            "bad.json", R"({"n":5,"q":2,"L":[0],"k":2,"sets":[[1,2,3],[3,4,5]]})");
        RunResult r = run_cli("--plain check " + bad);
        CHECK(r.code == 2);
        CHECK(contains(r.out, "PASS avoiding"));
        CHECK(contains(r.out, "FAIL kwise"));
        CHECK(contains(r.out, "#1"));
        CHECK(contains(r.out, "#2"));
    }

    SECTION("malformed documents exit 3")
    {
        std::string dup = write_family(
            "dup.json", R"({"n":3,"q":2,"L":[0],"k":2,"sets":[[1],[1]]})");
        RunResult r = run_cli("--plain check " + dup, true);
        CHECK(r.code == 3);
        CHECK(contains(r.out, "duplicate"));
        CHECK(run_cli("--plain check " + write_family("junk.json", "{oops")).code == 3);
        CHECK(run_cli("--plain check /does/not/exist.json").code == 3);
    }

    SECTION("explicit predicate selection")
    {
        std::string diff = write_family(
            "diff.json", R"({"n":4,"q":2,"L":[1],"k":2,"sets":[[1],[2]]})");
        RunResult r = run_cli("--plain check --differencing " + diff);
        CHECK(r.code == 0);
        CHECK(r.out == "PASS differencing\nPASS\n");
    }

    SECTION("size window checked when t is present")
    {
        std::string win = write_family(
            "win.json", R"({"n":3,"q":3,"L":[0],"k":2,"t":1,"sets":[[1]]})");
        RunResult r = run_cli("--plain check " + win);
        CHECK(r.code == 2);
        CHECK(contains(r.out, "FAIL size-window"));
    }

    SECTION("shipped samples stay valid")
    {
        std::string data = MODSET_DATA_DIR;
        CHECK(run_cli("--plain check " + data + "/oddtown.json").code == 0);
        CHECK(run_cli("--plain check " + data + "/disjoint_pairs.json").code == 0);
    }
}

TEST_CASE("certify subcommand")
{
    std::string odd = write_family("codd.json",
                                   R"({"n":3,"q":2,"L":[0],"k":2,"sets":[[1],[2],[3]]})");

    SECTION("certificate with verdict")
    {
        RunResult r = run_cli("--plain certify " + odd);
        CHECK(r.code == 0);
        CHECK(contains(r.out, "\"m\": 3"));
        CHECK(contains(r.out, "\"triangular_ok\": true"));
        CHECK(contains(r.out, "verdict: ok"));
    }

    SECTION("byte-deterministic with --plain")
    {
        RunResult a = run_cli("--plain certify " + odd);
        RunResult b = run_cli("--plain certify " + odd);
        CHECK(a.out == b.out);
    }

    SECTION("empty family certifies trivially")
    {
        std::string empty =
            write_family("cempty.json", R"({"n":2,"q":2,"L":[0],"k":2,"sets":[]})");
        RunResult r = run_cli("--plain certify " + empty);
        CHECK(r.code == 0);
        CHECK(contains(r.out, "\"m\": 0"));
    }

    SECTION("combined report for a windowed family")
    {
        std::string data = MODSET_DATA_DIR;
        RunResult r = run_cli("--plain certify " + data + "/disjoint_pairs.json");
        CHECK(r.code == 0);
        CHECK(contains(r.out, "\"combined\""));
        CHECK(contains(r.out, "\"combined_full\": true"));
    }

    SECTION("--out writes the document to a file")
    {
        auto out = (scratch() / "cert.json").string();
        RunResult r = run_cli("--plain certify " + odd + " --out " + out);
        CHECK(r.code == 0);
        CHECK(contains(r.out, "wrote "));
        std::ifstream in(out);
        std::string body((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        CHECK(contains(body, "\"verdict\": \"ok\""));
    }

    SECTION("hypothesis violations exit 2")
    {
        std::string bad = write_family(
            "cbad.json", R"({"n":3,"q":2,"L":[0],"k":2,"sets":[[1,2],[2,3]]})");
        CHECK(run_cli("--plain certify " + bad).code == 2);
    }
}

TEST_CASE("separator subcommand")
{
    SECTION("canonical polynomial for q=2")
    {
        RunResult r = run_cli("--plain separator --q 2 --L 0");
        CHECK(r.code == 0);
        CHECK(contains(r.out, "F_L = 2 - C(x,1)"));
        CHECK(contains(r.out, "separated = true (exact)"));
        CHECK(contains(r.out, "max val outside = 0"));
    }

    SECTION("minimal-degree search stays within the cap")
    {
        RunResult r = run_cli("--plain separator --q 4 --L 1 --search 2 3");
        CHECK(r.code == 0);
        CHECK(contains(r.out, "degree = 1"));
        CHECK(contains(r.out, "degree cap D = 1 (within cap)"));
        CHECK(contains(r.out, "separated = true"));
    }

    SECTION("exhausted search is inconclusive, not an error")
    {
        RunResult r = run_cli("--plain separator --q 4 --L 1 --search 0 1");
        CHECK(r.code == 0);
        CHECK(contains(r.out, "inconclusive"));
    }

    SECTION("improper L exits 2")
    {
        CHECK(run_cli("--plain separator --q 2 --L 0,1").code == 2);
        CHECK(run_cli("--plain separator --q 6 --L 0").code == 2);
    }
}

TEST_CASE("search subcommand")
{
    SECTION("maximum family with witness")
    {
        RunResult r = run_cli("--plain search --n 4 --q 2 --L 0");
        CHECK(r.code == 0);
        CHECK(contains(r.out, "max_size = 4"));
        CHECK(contains(r.out, "exhaustive = true"));
        CHECK(contains(r.out, "witness = {1} {2} {3} {4}"));
    }

    SECTION("empirical m")
    {
        RunResult r = run_cli("--plain search --n 4 --q 2 --empirical-s 1");
        CHECK(r.code == 0);
        CHECK(contains(r.out, "m(4,1,2) = 4"));
    }

    SECTION("conjecture probe")
    {
        RunResult r = run_cli("--plain search --n 4 --q 2 --L 0 --residues 1");
        CHECK(r.code == 0);
        CHECK(contains(r.out, "CONSISTENT"));
        CHECK(contains(r.out, "bound = 4"));
    }

    SECTION("environment budget forces a lower-bound result")
    {
        RunResult r = run_cli("--plain search --n 6 --q 2 --L 0", false,
                              "MODSET_NODE_BUDGET=2");
        CHECK(r.code == 0);
        CHECK(contains(r.out, "exhaustive = false"));

        RunResult bad = run_cli("--plain search --n 4 --q 2 --L 0", true,
                                "MODSET_NODE_BUDGET=potato");
        CHECK(bad.code == 2);

        // an explicit --budget wins over the environment
        RunResult full = run_cli("--plain search --n 6 --q 2 --L 0 --budget 100000", false,
                                 "MODSET_NODE_BUDGET=2");
        CHECK(contains(full.out, "exhaustive = true"));
    }

    SECTION("main4 mode needs --t")
    {
        CHECK(run_cli("--plain search --n 4 --q 3 --L 0 --mode main4").code == 2);
        RunResult r = run_cli("--plain search --n 4 --q 3 --L 0 --mode main4 --t 1");
        CHECK(r.code == 0);
    }
}

TEST_CASE("sweep subcommand")
{
    SECTION("empty grid prints only the header")
    {
        RunResult r = run_cli("--plain sweep --q 2 --n-max 0");
        CHECK(r.code == 0);
        CHECK(r.out == "n,q,L,k,mode,max_size,bound_name,bound_value,exhaustive,nodes\n");
    }

    SECTION("small grid is deterministic and satisfies every bound")
    {
        RunResult a = run_cli("--plain sweep --q 2 --n-max 4");
        RunResult b = run_cli("--plain sweep --q 2 --n-max 4");
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        // header + 2 residue sets x 4 ground sizes
        CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 9);
        CHECK(contains(a.out, "4,2,0,2,pairwise,4,main3,5,true,"));
    }

    SECTION("--out writes the CSV to a file")
    {
        auto csv = (scratch() / "sweep.csv").string();
        RunResult r = run_cli("--plain sweep --q 2 --n-max 2 --out " + csv);
        CHECK(r.code == 0);
        CHECK(contains(r.out, "wrote "));
        std::ifstream in(csv);
        std::string body((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        CHECK(contains(body, "n,q,L,k,mode"));
        CHECK(contains(body, "1,2,0,2,pairwise,1,main3,"));
    }

    SECTION("windowed modes add labeled rows")
    {
        RunResult r = run_cli("--plain sweep --q 3 --n-max 2 --modes main4");
        CHECK(r.code == 0);
        CHECK(contains(r.out, "main4:t=1"));
        CHECK(contains(r.out, "main4:t=2"));
    }
}

TEST_CASE("header line appears only without --plain")
{
    RunResult with_header = run_cli("bound main3 --n 5 --q 2 --k 2");
    CHECK(contains(with_header.out, "# modset "));
    CHECK(contains(with_header.out, "6\n"));
    RunResult plain = run_cli("--plain bound main3 --n 5 --q 2 --k 2");
    CHECK_FALSE(contains(plain.out, "#"));
}
