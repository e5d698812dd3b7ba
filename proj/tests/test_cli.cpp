#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

// Runs the installed command-line tool as a child process.

namespace {

namespace fs = std::filesystem;

int run(const std::string& args)
{
    const std::string cmd = std::string(TRICOMI_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture(const std::string& args, int* code = nullptr)
{
    const std::string cmd = std::string(TRICOMI_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) {
        out.append(buf, got);
    }
    const int status = pclose(pipe);
    if (code != nullptr) {
        *code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    return out;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir()
{
    const fs::path d = fs::temp_directory_path() / ("tricomi_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("exponents example")
    {
        int code = 0;
        const std::string out = capture("exponents --m 0 --n 3", &code);
        CHECK(code == 0);
        CHECK(out.find("\"p_crit\": 2.41421356237") != std::string::npos);
    }

    TEST_CASE("exit codes")
    {
        int code = 0;
        const std::string out = capture("exponents --no-such-flag 1", &code);
        CHECK(code == 2);
        CHECK(out.find("--no-such-flag") != std::string::npos);
        CHECK(run("exponents --set bogus=1") == 2);
        CHECK(run("exponents --n 2.5") == 2);
        CHECK(run("exponents --m 0 --n 1") == 3);
        CHECK(run("iterate --m 1 --n 2 --p 3 --mode subcritical") == 3);
        CHECK(run("frobnicate") == 2);
        CHECK(run("report") == 5);
    }

    TEST_CASE("censored-only scan still writes its records")
    {
        const fs::path d = scratch_dir();
        const fs::path out = d / "censored.csv";
        CHECK(run("scan --eps_list 0.01,0.02 --t_max 0.5 --dx 8e-3 -o " + out.string()) == 4);
        const std::string text = slurp(out);
        CHECK(text.find("0.01,nan,true") != std::string::npos);
        fs::remove_all(d);
    }

    TEST_CASE("output directory from the environment")
    {
        const fs::path d = scratch_dir();
        const std::string cmd = "TRICOMI_OUTPUT_DIR=" + d.string() + " " + TRICOMI_CLI_PATH +
                                " exponents -o sub/e.json >/dev/null 2>&1";
        CHECK(std::system(cmd.c_str()) == 0);
        CHECK(fs::exists(d / "sub" / "e.json"));
        fs::remove_all(d);
    }

    TEST_CASE("report merges checks and lists gaps")
    {
        const fs::path d = scratch_dir();
        const std::string e = (d / "e.json").string();
        const std::string it = (d / "it.json").string();
        const std::string s = (d / "summary.json").string();
        REQUIRE(run("exponents -o " + e) == 0);
        REQUIRE(run("iterate -f json -o " + it) == 0);
        CHECK(run("report --require exponents.gamma_at_root,iterate.scaling_slope -o " + s + " " + e + " " + it) == 0);
        std::string text = slurp(s);
        CHECK(text.find("\"status\": \"pass\"") != std::string::npos);

        // partial pipeline: the default key set is not covered
        CHECK(run("report -o " + s + " " + e) == 5);
        text = slurp(s);
        CHECK(text.find("\"status\": \"incomplete\"") != std::string::npos);
        CHECK(text.find("scan.slope") != std::string::npos);

        CHECK(run("report --require none -o " + s + " " + e + " " + (d / "absent.json").string()) == 5);

        // a failing check flips the overall status
        std::ofstream(d / "bad.json") << R"({"subcommand": "scan", "checks": {"slope": {"value": 0.5, "limit": 0.2, "pass": false}}})";
        CHECK(run("report --require none -o " + s + " " + e + " " + (d / "bad.json").string()) == 0);
        text = slurp(s);
        CHECK(text.find("\"status\": \"fail\"") != std::string::npos);
        CHECK(text.find("\"scan.slope\"") != std::string::npos);
        fs::remove_all(d);
    }

    TEST_CASE("identical invocations give identical bytes")
    {
        const fs::path d = scratch_dir();
        for (const std::string args : {"iterate --m 1 --n 2 --p crit", "simulate --dx 8e-3 --eps 1.2",
                                       "testfun --t_points 4 --refine false"}) {
            CHECK(run(args + " -o " + (d / "a.out").string()) == 0);
            CHECK(run(args + " -o " + (d / "b.out").string()) == 0);
            CHECK(slurp(d / "a.out") == slurp(d / "b.out"));
        }
        fs::remove_all(d);
    }
}
