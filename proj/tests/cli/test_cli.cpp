// Runs the nnph binary end to end on the fixtures.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = NNPH_FIXTURE_DIR;
const std::string kCli = NNPH_CLI;

struct Run {
    int code;
    std::string err;
};

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("nnph_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Run run(const std::string& args, const fs::path& dir) {
    const auto err = dir / "stderr.txt";
    const int status = std::system((kCli + " " + args + " 2> " + err.string()).c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("graph -> ph -> vec on a valid network") {
    const auto dir = scratch("valid");
    REQUIRE(run("graph " + q(kFixtures / "two_layer.json") + " -o " + q(dir / "g.tsv"), dir).code == 0);
    CHECK(slurp(dir / "g.tsv").rfind("# vertices=8\n", 0) == 0);
    CHECK(fs::exists(dir / "g.tsv.config.json"));

    REQUIRE(run("ph " + q(dir / "g.tsv") + " -o " + q(dir / "d.csv"), dir).code == 0);
    const auto diagram = slurp(dir / "d.csv");
    CHECK(diagram.rfind("degree,birth,death\n", 0) == 0);
    CHECK(diagram.find("inf") == std::string::npos);  // capped

    for (const char* kind : {"heat", "silhouette", "landscape"}) {
        const auto stem = dir / kind;
        REQUIRE(run("vec " + q(dir / "d.csv") + " --kind " + kind + " -o " + q(stem), dir).code == 0);
        CHECK(fs::exists(stem.string() + ".json"));
        CHECK(fs::exists(stem.string() + ".h0.csv"));
        CHECK(fs::exists(stem.string() + ".h3.csv"));
    }
}

TEST_CASE("network without biases is accepted") {
    const auto dir = scratch("nobias");
    CHECK(run("graph " + q(kFixtures / "no_bias.json") + " -o " + q(dir / "g.tsv"), dir).code == 0);
}

TEST_CASE("NaN weight is rejected with its line and column") {
    const auto dir = scratch("nan");
    const auto r = run("graph " + q(kFixtures / "nan_weight.json") + " -o " + q(dir / "g.tsv"), dir);
    CHECK(r.code == 1);
    CHECK(r.err.find("nan_weight.json:4:") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "g.tsv"));
}

TEST_CASE("inconsistent layer shapes are an input error") {
    const auto dir = scratch("chain");
    CHECK(run("graph " + q(kFixtures / "bad_chain.json") + " -o " + q(dir / "g.tsv"), dir).code == 1);
}

TEST_CASE("empty graph gives empty diagrams") {
    const auto dir = scratch("empty");
    REQUIRE(run("ph " + q(kFixtures / "empty.tsv") + " -o " + q(dir / "d.csv"), dir).code == 0);
    CHECK(slurp(dir / "d.csv") == "degree,birth,death\n");
}

TEST_CASE("single edge: one finite and one capped component") {
    const auto dir = scratch("edge");
    REQUIRE(run("ph " + q(kFixtures / "single_edge.tsv") + " -o " + q(dir / "d.csv") + " --raw-output " +
                    q(dir / "raw.csv"),
                dir)
                .code == 0);
    CHECK(slurp(dir / "d.csv") == "degree,birth,death\n0,0,0.2\n0,0,1\n");
    CHECK(slurp(dir / "raw.csv") == "degree,birth,death\n0,0,0.2\n0,0,inf\n");
}

TEST_CASE("out-of-range edge weight is an input error") {
    const auto dir = scratch("badweight");
    const auto r = run("ph " + q(kFixtures / "bad_weight.tsv") + " -o " + q(dir / "d.csv"), dir);
    CHECK(r.code == 1);
    CHECK(r.err.find("bad_weight.tsv:2") != std::string::npos);
}

TEST_CASE("reruns are byte-identical") {
    const auto dir = scratch("rerun");
    for (const char* tag : {"a", "b"}) {
        const auto sub = dir / tag;
        fs::create_directories(sub);
        REQUIRE(run("graph " + q(kFixtures / "two_layer.json") + " -o " + q(sub / "g.tsv"), dir).code == 0);
        REQUIRE(run("ph " + q(sub / "g.tsv") + " -o " + q(sub / "d.csv") + " --workers 2", dir).code == 0);
        REQUIRE(run("vec " + q(sub / "d.csv") + " --kind heat -o " + q(sub / "v"), dir).code == 0);
        REQUIRE(run("dist x=" + q(sub / "d.csv") + " y=" + q(sub / "v.json") + " -o " + q(sub / "m"), dir).code == 0);
    }
    for (const char* f : {"g.tsv", "d.csv", "v.h0.csv", "v.h1.csv", "v.json", "m.mean.csv", "m.json", "d.csv.config.json"})
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
}

TEST_CASE("one diagram gives a 1x1 zero matrix") {
    const auto dir = scratch("one");
    REQUIRE(run("ph " + q(kFixtures / "single_edge.tsv") + " -o " + q(dir / "d.csv"), dir).code == 0);
    REQUIRE(run("dist only=" + q(dir / "d.csv") + " -o " + q(dir / "m"), dir).code == 0);
    CHECK(slurp(dir / "m.mean.csv") == "0\n");
    CHECK(slurp(dir / "m.std.csv") == "0\n");
    const auto manifest = nlohmann::json::parse(slurp(dir / "m.json"));
    CHECK(manifest["labels"] == nlohmann::json::array({"only"}));
    CHECK(manifest["measure"] == "heat");
}

TEST_CASE("vectorizations on different grids cannot be compared") {
    const auto dir = scratch("grids");
    REQUIRE(run("ph " + q(kFixtures / "single_edge.tsv") + " -o " + q(dir / "d.csv"), dir).code == 0);
    REQUIRE(run("vec " + q(dir / "d.csv") + " -o " + q(dir / "a"), dir).code == 0);
    REQUIRE(run("vec " + q(dir / "d.csv") + " --resolution 50 -o " + q(dir / "b"), dir).code == 0);
    CHECK(run("dist a=" + q(dir / "a.json") + " b=" + q(dir / "b.json") + " -o " + q(dir / "m"), dir).code == 1);
}

TEST_CASE("explicit flags override the config file") {
    const auto dir = scratch("config");
    {
        std::ofstream(dir / "cfg.json") << R"({"eta": 0.5, "infinity_cap": 2.0})";
    }
    REQUIRE(run("ph " + q(kFixtures / "single_edge.tsv") + " -o " + q(dir / "d.csv") + " --config " +
                    q(dir / "cfg.json") + " --infinity-cap 3",
                dir)
                .code == 0);
    // eta 0.5 drops the 0.2 bar, the flag wins over the file for the cap.
    CHECK(slurp(dir / "d.csv") == "degree,birth,death\n0,0,3\n");
    const auto resolved = nlohmann::json::parse(slurp(dir / "d.csv.config.json"));
    CHECK(resolved["eta"] == 0.5);
    CHECK(resolved["infinity_cap"] == 3.0);
}

TEST_CASE("matrix over a manifest and the permuted-copy baseline comparison") {
    const auto dir = scratch("matrix");
    {
        nlohmann::json m;
        m["experiments"] = {
            {{"label", "net"}, {"runs", {(kFixtures / "two_layer.json").string(),
                                         (kFixtures / "permuted_two_layer.json").string()}}},
            {{"label", "small"}, {"runs", {(kFixtures / "one_to_one.json").string()}}}};
        std::ofstream(dir / "m.json") << m.dump();
    }
    REQUIRE(run("matrix " + q(dir / "m.json") + " -o " + q(dir / "out/x") + " --measures heat,landscape --ppm",
                dir)
                .code == 0);
    const auto mean = slurp(dir / "out/x.heat.mean.csv");
    CHECK(mean.rfind("0,", 0) == 0);  // permuted copies are at distance zero
    CHECK(slurp(dir / "out/x.heat.mean.ppm").rfind("P6\n16 16\n255\n", 0) == 0);  // 8 px per cell
    CHECK(fs::exists(dir / "out/x.config.json"));

    // Baselines need equal sizes.
    CHECK(run("matrix " + q(dir / "m.json") + " -o " + q(dir / "y") + " --measures norm1", dir).code == 1);

    REQUIRE(run("compare-baseline " + q(kFixtures / "two_layer.json") + " --permute-seed 3 -o " +
                    q(dir / "cmp.json"),
                dir)
                .code == 0);
    const auto report = nlohmann::json::parse(slurp(dir / "cmp.json"));
    CHECK(report["norm1"].get<double>() > 0.0);
    CHECK(report["frobenius"].get<double>() > 0.0);
    CHECK(report["heat"].get<double>() == 0.0);
    CHECK(report["silhouette"].get<double>() == 0.0);
    CHECK(report["landscape"].get<double>() == 0.0);
}

TEST_CASE("usage errors exit with 1") {
    const auto dir = scratch("usage");
    CHECK(run("", dir).code == 1);
    CHECK(run("frobnicate", dir).code == 1);
    CHECK(run("ph", dir).code == 1);
    CHECK(run("ph " + q(kFixtures / "single_edge.tsv") + " -o " + q(dir / "d.csv") + " --eta -1", dir).code == 1);
    CHECK(run("graph " + q(dir / "missing.json") + " -o " + q(dir / "g.tsv"), dir).code == 1);
    CHECK(run("--help > /dev/null", dir).code == 0);
}

TEST_CASE("19 experiments with 5 runs each give 19x19 matrices") {
    const auto dir = scratch("nineteen");
    REQUIRE(run("graph " + q(kFixtures / "two_layer.json") + " -o " + q(dir / "g.tsv"), dir).code == 0);
    REQUIRE(run("ph " + q(dir / "g.tsv") + " -o " + q(dir / "d.csv"), dir).code == 0);
    std::string args;
    for (int e = 1; e <= 19; ++e)
        for (int r = 0; r < 5; ++r) args += " e" + std::to_string(e) + "=" + q(dir / "d.csv");
    REQUIRE(run("dist" + args + " --measure silhouette -o " + q(dir / "m"), dir).code == 0);
    for (const char* f : {"m.mean.csv", "m.std.csv"}) {
        std::istringstream rows(slurp(dir / f));
        int n = 0;
        for (std::string line; std::getline(rows, line); ++n)
            CHECK(std::count(line.begin(), line.end(), ',') == 18);
        CHECK(n == 19);
    }
    CHECK(nlohmann::json::parse(slurp(dir / "m.json"))["size"] == 19);
}
