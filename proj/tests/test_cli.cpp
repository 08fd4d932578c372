#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "pricescale_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Result run(const std::string& args) {
    const auto out = workdir() / "stdout.txt";
    const auto err = workdir() / "stderr.txt";
    const std::string cmd = std::string("\"") + PRICESCALE_CLI + "\" " + args + " >\"" + out.string() +
                            "\" 2>\"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    Result r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string path_arg(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage and help") {
    CHECK(run("--help").status == 0);
    CHECK(run("").status == 1);
    CHECK(run("frobnicate").status == 1);
    CHECK(run("synth").status == 1);  // --kind is required
    CHECK(run("analyze --set nodot=1 -i x.csv").status == 1);
    const auto dump = run("analyze --dump-config --set dfa.scale_min=16");
    CHECK(dump.status == 0);
    CHECK(dump.out.find("scale_min = 16") != std::string::npos);
}

TEST_CASE("synth output is byte-identical for a fixed seed") {
    const auto a = workdir() / "rw_a.csv";
    const auto b = workdir() / "rw_b.csv";
    REQUIRE(run("synth -k random-walk -n 500 --seed 7 -o " + path_arg(a)).status == 0);
    REQUIRE(run("synth -k random-walk -n 500 --seed 7 -o " + path_arg(b)).status == 0);
    const auto text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(text.rfind("timestamp,price\n", 0) == 0);
    const auto to_stdout = run("synth -k random-walk -n 500 --seed 7");
    CHECK(to_stdout.out == text);
}

TEST_CASE("invalid Hurst index is rejected") {
    const auto r = run("synth -k fbm -p hurst=1.2 -n 256 -o " + path_arg(workdir() / "bad.csv"));
    CHECK(r.status != 0);
    CHECK(r.err.find("Hurst") != std::string::npos);
    CHECK(run("synth -k fbm -p hurts=0.5").status == 1);
}

TEST_CASE("spike train round trip shows rise-then-fall dominance") {
    const auto csv = workdir() / "spikes.csv";
    const auto out = workdir() / "spike_run";
    REQUIRE(run("synth -k spike-train -n 4000 --seed 3 -o " + path_arg(csv)).status == 0);
    const auto r = run("analyze -i " + path_arg(csv) + " -o " + path_arg(out) +
                       " --market spikes --set increments.scales=1,12");
    INFO(r.err);
    REQUIRE(r.status == 0);
    std::ifstream in(out / "report.json");
    const auto doc = nlohmann::json::parse(in);
    CHECK(doc["market_id"] == "spikes");
    CHECK(doc["series"].size() == 3);
    const auto& s = doc["series"][0]["increments"][0]["scenarios"];
    CHECK(s["dominant"] == "I");
    CHECK(s["IV"] == 0);

    // three runs compared side by side
    const auto rep = run("report " + path_arg(out) + " " + path_arg(out / "report.json") + " " +
                         path_arg(out) + " --format csv");
    REQUIRE(rep.status == 0);
    std::istringstream lines(rep.out);
    std::string header;
    std::getline(lines, header);
    CHECK(std::count(header.begin(), header.end(), ',') == 3);
    const auto single = run("report " + path_arg(out));
    CHECK(single.status == 0);
    CHECK(single.out.find("all.alpha_mean") != std::string::npos);
}

TEST_CASE("gapped input with the fail policy") {
    const auto csv = workdir() / "gapped.csv";
    {
        std::ofstream f(csv);
        f << "timestamp,price\n";
        for (int h = 0; h < 300; ++h) {
            if (h == 150) continue;
            f << "2020-01-" << (h / 24 + 1 < 10 ? "0" : "") << (h / 24 + 1) << "T"
              << (h % 24 < 10 ? "0" : "") << (h % 24) << ":00:00Z," << 40.0 + (h % 7) << "\n";
        }
    }
    const auto r = run("analyze -i " + path_arg(csv) + " -o " + path_arg(workdir() / "gap_run") +
                       " --gap-policy fail");
    CHECK(r.status == 2);
    CHECK(r.err.find("timeseries-core") != std::string::npos);
    // default policy fills the hour
    CHECK(run("analyze -i " + path_arg(csv) + " -o " + path_arg(workdir() / "gap_ok")).status == 0);
}

TEST_CASE("missing input file is a data error") {
    CHECK(run("analyze -i " + path_arg(workdir() / "absent.csv") + " -o " +
              path_arg(workdir() / "absent_run"))
              .status == 2);
    CHECK(run("report " + path_arg(workdir() / "absent.json")).status == 2);
}

}  // TEST_SUITE
