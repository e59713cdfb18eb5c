#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliRun run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int seq = 0;
    const std::string tag = std::to_string(++seq);
    const std::string out_path = "cli_stdout_" + tag + ".txt";
    const std::string err_path = "cli_stderr_" + tag + ".txt";
    const std::string cmd = env_prefix + "\"" + RL_CLI_PATH + "\" " + args +
                            " >" + out_path + " 2>" + err_path;
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

const std::string u5_table = std::string("table:") + RL_DATA_DIR + "/uniform5.csv";

} // namespace

TEST_CASE("density prints the closed-form value") {
    const auto r = run_cli("density --dist uniform:0,1 --n 2 --point 0.5,0.2,0.9");
    CHECK(r.code == 0);
    CHECK(r.out == "4.0\n");

    const auto t = run_cli("density --dist " + u5_table + " --n 2 --point 3,2,5");
    CHECK(t.code == 0);
    CHECK(t.out == "0.05\n");
}

TEST_CASE("density usage and method errors") {
    CHECK(run_cli("density --n 2 --point 0.5,0.2,0.9").code == 2);
    CHECK(run_cli("density --dist uniform:0,1 --n 2 --point 0.5,0.2").code == 2);
    const auto closed4 = run_cli(
        "density --dist exp:1 --n 4 --point 1.0,0.7,0.4,0.2,1.5,2.0,3.0 --method closed");
    CHECK(closed4.code == 2);
}

TEST_CASE("density beyond the closed forms is flagged experimental") {
    const auto r = run_cli(
        "density --dist exp:1 --n 4 --point 1.0,0.7,0.4,0.2,1.5,2.0,3.0 --method generated");
    CHECK(r.code == 0);
    CHECK(r.err.find("experimental") != std::string::npos);
    CHECK(std::stod(r.out) > 0.0);
}

TEST_CASE("orderings listing") {
    const auto r = run_cli("orderings --n 3");
    CHECK(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "count 6");
    CHECK(lines[1] == "O1 UULL");
    CHECK(lines[2] == "O2 ULLU");
    CHECK(lines[3] == "O3 ULUL");
    CHECK(lines[4] == "O4 LULU");
    CHECK(lines[5] == "O5 LUUL");
    CHECK(lines[6] == "O6 LLUU");

    const auto big = run_cli("orderings --n 5");
    CHECK(big.code == 0);
    const auto big_lines = lines_of(big.out);
    REQUIRE(big_lines.size() == 71);
    CHECK(big_lines[0] == "count 70");
    CHECK(big_lines[1] == "LLLLUUUU");

    CHECK(run_cli("orderings --n 1").code == 2);
}

TEST_CASE("orderings term dump") {
    const auto r = run_cli("orderings --n 3 --emit-terms --kind discrete");
    REQUIRE(r.code == 0);
    const auto pos = r.out.find('[');
    REQUIRE(pos != std::string::npos);
    const json terms = json::parse(r.out.substr(pos));
    REQUIRE(terms.size() == 6);
    for (const auto& term : terms) {
        REQUIRE(term["denominators"].size() == 4);
        const auto& tie = term["denominators"][0];
        CHECK(tie["lower"] == "x");
        CHECK(tie["upper"] == "x");
        CHECK(tie["lower_open"] == false);
        CHECK(tie["upper_open"] == false);
    }

    const auto c = run_cli("orderings --n 3 --emit-terms --kind continuous");
    const json cont = json::parse(c.out.substr(c.out.find('[')));
    for (const auto& term : cont) {
        REQUIRE(term["denominators"].size() == 3);
        for (const auto& g : term["denominators"]) {
            CHECK(g["lower_open"] == true);
            CHECK(g["upper_open"] == true);
        }
    }
}

TEST_CASE("verify subcommand reports and exit codes") {
    const std::string report = "cli_verify_report.json";
    const auto r = run_cli("verify oracle --dist " + u5_table + " --out " + report);
    CHECK(r.code == 0);
    CHECK(r.out.find("suite oracle") != std::string::npos);
    const json j = json::parse(slurp(report));
    CHECK(j["schema"] == 1);
    CHECK(j["tool_version"] == "1.0.0");
    CHECK(j["suite"] == "oracle");
    CHECK(j["pass"] == true);
    CHECK(j["checks"].size() == 13);
    const std::string echo = j["command"];
    CHECK(echo.find("verify oracle") != std::string::npos);
    CHECK(j.contains("timing"));
    std::remove(report.c_str());

    CHECK(run_cli("verify generator --n 2 --dist exp:1").code == 0);
    CHECK(run_cli("verify bogus --dist exp:1").code == 2);
}

TEST_CASE("aborted verify still writes a report") {
    const std::string report = "cli_aborted_report.json";
    const auto r = run_cli("verify oracle --dist uniform:0,1 --out " + report);
    CHECK(r.code == 2); // discrete-only suite on a continuous model
    const json j = json::parse(slurp(report));
    CHECK(j["pass"] == false);
    REQUIRE(j["checks"].size() == 1);
    CHECK(j["checks"][0]["check_id"] == "suite_aborted");
    std::remove(report.c_str());
}

TEST_CASE("simulate argument and statistics errors") {
    CHECK(run_cli("simulate --dist exp:1 --records 3 --runs 0").code == 2);
    CHECK(run_cli("simulate --dist uniform:0,1 --records 2 --runs 200 --fit 2,2").code == 3);
}

TEST_CASE("simulate reruns reproduce the report byte for byte") {
    const std::string report = "cli_sim_report.json";
    const std::string cmd = "simulate --dist uniform:0,1 --records 2 --runs 5000 "
                            "--seed 11 --out " + report;
    REQUIRE(run_cli(cmd).code == 0);
    json first = json::parse(slurp(report));
    REQUIRE(run_cli(cmd).code == 0);
    json second = json::parse(slurp(report));
    first.erase("timing");
    second.erase("timing");
    CHECK(first.dump() == second.dump());
    CHECK(first["runs"] == 5000);
    CHECK(first["completed"].get<std::uint64_t>() +
              first["censored"].get<std::uint64_t>() ==
          5000);
    std::remove(report.c_str());
}

TEST_CASE("simulate worker count does not change the report") {
    const std::string report = "cli_threads_report.json";
    const std::string cmd = "simulate --dist exp:1 --records 2 --runs 3000 "
                            "--seed 5 --out " + report;
    REQUIRE(run_cli(cmd, "RECORD_LAWS_THREADS=1 ").code == 0);
    json one = json::parse(slurp(report));
    REQUIRE(run_cli(cmd, "RECORD_LAWS_THREADS=4 ").code == 0);
    json four = json::parse(slurp(report));
    one.erase("timing");
    four.erase("timing");
    CHECK(one.dump() == four.dump());
    std::remove(report.c_str());
}

TEST_CASE("simulate trace export") {
    const std::string csv = "cli_traces.csv";
    const auto r = run_cli("simulate --dist uniform:0,1 --records 2 --runs 300 "
                           "--seed 2 --export " + csv);
    REQUIRE(r.code == 0);
    const auto rows = lines_of(slurp(csv));
    REQUIRE(rows.size() > 200);
    CHECK(rows[0] == "run_id,ordering,y2,x,z2,u2,l2,draws");
    std::remove(csv.c_str());
}
