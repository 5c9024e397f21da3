#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout only
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(FLP_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) {
        out.append(buf.data(), got);
    }
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json run_json(const std::string& args) {
    auto r = run_cli(args + " --json");
    REQUIRE(r.exit_code == 0);
    return json::parse(r.output);
}

}  // namespace

TEST_CASE("optimal-vector golden values") {
    auto u = run_json(R"(optimal-vector --dist '{"kind":"uniform","lo":0,"hi":1}' -k 2)");
    CHECK(u["v"][0].get<double>() == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(u["v"][1].get<double>() == doctest::Approx(0.75).epsilon(1e-7));
    CHECK(u["cost"].get<double>() == doctest::Approx(0.125).epsilon(1e-8));

    auto e = run_json(R"(optimal-vector --dist '{"kind":"exponential","rate":1}' -k 2)");
    CHECK(e["v"][0].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(e["v"][1].get<double>() == doctest::Approx(5.0 / 6.0).epsilon(1e-6));
    CHECK(e["y"][0].get<double>() == doctest::Approx(std::log(1.5)).epsilon(1e-6));
    CHECK(e["y"][1].get<double>() == doctest::Approx(std::log(6.0)).epsilon(1e-6));

    auto g = run_json(R"(project --dist '{"kind":"gaussian","mean":0,"std":1}' -k 1)");
    CHECK(g["y"][0].get<double>() == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(g["cost"].get<double>() ==
          doctest::Approx(std::sqrt(2.0 / 3.14159265358979323846)).epsilon(1e-7));
}

TEST_CASE("simulate echoes the seed and is deterministic") {
    std::string args =
        R"(simulate --dist '{"kind":"uniform","lo":0,"hi":1}' --v 0.5 -k 1 -n 51 --trials 20 --seed 42)";
    auto a = run_json(args);
    auto b = run_json(args);
    CHECK(a["seed"].get<std::uint64_t>() == 42);
    CHECK(a.dump() == b.dump());
    CHECK(a["ratio"].get<double>() >= 1.0);
}

TEST_CASE("mechanism reports both placements") {
    auto r = run_json(
        R"(mechanism --dist '{"kind":"uniform","lo":0,"hi":1}' --v 0.25,0.75 -n 21 --seed 9)");
    CHECK(r["facilities"].size() == 2);
    CHECK(r["mechanism_cost"].get<double>() >= r["optimal_cost"].get<double>() - 1e-15);
}

TEST_CASE("config file supplies parameters and flags override it") {
    namespace fs = std::filesystem;
    auto cfg_path = fs::temp_directory_path() / "flp_cli_cfg.json";
    {
        std::ofstream out(cfg_path);
        out << R"({"distribution":{"kind":"uniform","lo":0,"hi":1},
                   "v":[0.5],"k":1,"n":31,"trials":10,"seed":7})";
    }
    auto from_cfg = run_json("simulate --config " + cfg_path.string());
    CHECK(from_cfg["seed"].get<std::uint64_t>() == 7);
    CHECK(from_cfg["n"].get<int>() == 31);

    auto overridden = run_json("simulate --config " + cfg_path.string() + " --seed 8");
    CHECK(overridden["seed"].get<std::uint64_t>() == 8);
    CHECK(from_cfg.dump() != overridden.dump());
    fs::remove(cfg_path);
}

TEST_CASE("converge writes the CSV table") {
    namespace fs = std::filesystem;
    auto csv_path = fs::temp_directory_path() / "flp_cli_conv.csv";
    auto r = run_json(
        R"(converge --dist '{"kind":"uniform","lo":0,"hi":1}' --v 0.5 -k 1 --n-schedule 25,100 --trials 20 --seed 3 --csv )" +
        csv_path.string());
    CHECK(r["points"].size() == 2);
    std::ifstream in(csv_path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,ratio,deviation,se_ratio");
    fs::remove(csv_path);
}

TEST_CASE("configuration errors exit with code 2") {
    CHECK(run_cli(R"(simulate --dist '{"kind":"uniform","lo":0,"hi":1}' --v 0.5 -n 10 --trials 0)")
              .exit_code == 2);
    CHECK(run_cli(R"(optimal-vector --dist '{"kind":"zeta"}' -k 2)").exit_code == 2);
    CHECK(run_cli(R"(optimal-vector --dist '{"kind":"uniform","lo":0,"hi":1}' -k 2 --bogus)")
              .exit_code == 2);
    CHECK(run_cli("simulate --trials 5 -n 10 --v 0.5").exit_code == 2);  // no --dist
}
