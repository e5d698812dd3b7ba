#include <doctest.h>

#include "config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

using namespace cli;

namespace {

Config sample()
{
    return Config("scan", {{"m", "1", Kind::Real, "", {}},
                           {"n", "1", Kind::Integer, "", {}},
                           {"p", "2", Kind::Real, "", {"crit"}},
                           {"nonlinear", "true", Kind::Flag, "", {}},
                           {"eps_list", "auto", Kind::RealList, "", {"auto"}}});
}

std::string temp_file(const std::string& name, const std::string& text)
{
    const auto dir = std::filesystem::temp_directory_path() / ("tricomi_cfg_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const std::string path = (dir / name).string();
    std::ofstream(path) << text;
    return path;
}

} // namespace

TEST_SUITE("cli_config")
{
    TEST_CASE("defaults and typed access")
    {
        Config c = sample();
        CHECK(c.real("m") == 1.0);
        CHECK(c.integer("n") == 1);
        CHECK(c.flag("nonlinear"));
        CHECK(c.has_word("eps_list", "auto"));
        c.set("p", "crit", "test");
        CHECK(c.has_word("p", "crit"));
        c.set("eps_list", "0.5, 0.25", "test");
        CHECK(c.reals("eps_list") == std::vector<double>{0.5, 0.25});
    }

    TEST_CASE("values are canonicalized")
    {
        Config c = sample();
        c.set("m", "1.50", "test");
        c.set("nonlinear", "off", "test");
        const auto r = c.resolved();
        CHECK(r[0].second == "1.5");
        CHECK(r[3].second == "false");
    }

    TEST_CASE("bad values and unknown keys")
    {
        Config c = sample();
        CHECK_THROWS_AS(c.set("mm", "1", "test"), ConfigError);
        CHECK_THROWS_AS(c.set("n", "1.5", "test"), ConfigError);
        CHECK_THROWS_AS(c.set("m", "abc", "test"), ConfigError);
        CHECK_THROWS_AS(c.set("m", "nan", "test"), ConfigError);
        CHECK_THROWS_AS(c.set("nonlinear", "maybe", "test"), ConfigError);
    }

    TEST_CASE("sectioned files")
    {
        const std::string path = temp_file(".ini", "m = 2 # inline comment\n[simulate]\nm = 7\n[scan]\nn = 3\n");
        Config c = sample();
        c.load_file(path, {"simulate", "scan"});
        CHECK(c.real("m") == 2.0);
        CHECK(c.integer("n") == 3);
        std::remove(path.c_str());

        const std::string bad = temp_file(".ini", "[scan]\nq = 1\n");
        Config d = sample();
        CHECK_THROWS_WITH_AS(d.load_file(bad, {"scan"}), doctest::Contains("unknown key 'q'"), ConfigError);
        std::remove(bad.c_str());

        const std::string sect = temp_file(".ini", "[nope]\n");
        CHECK_THROWS_AS(d.load_file(sect, {"scan"}), ConfigError);
        std::remove(sect.c_str());
    }

    TEST_CASE("JSON outputs are valid configs")
    {
        const std::string path = temp_file(".json", R"({"subcommand": "scan", "config": {"m": 0.5, "n": 2, "p": "crit", "nonlinear": false}})");
        Config c = sample();
        c.load_file(path, {"scan"});
        CHECK(c.real("m") == 0.5);
        CHECK(c.integer("n") == 2);
        CHECK(c.has_word("p", "crit"));
        CHECK(!c.flag("nonlinear"));
        std::remove(path.c_str());
    }

    TEST_CASE("number formatting")
    {
        CHECK(fmt12(1.0 / 3.0) == "0.333333333333");
        CHECK(fmt12(-0.0) == "0");
        CHECK(fmt12(1e300 * 1e10) == "inf");
        CHECK(shortest(0.3) == "0.3");
        CHECK(shortest(1e-9) == "1e-09");
    }
}
