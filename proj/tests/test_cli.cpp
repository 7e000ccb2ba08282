#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "compsize/io.hpp"

using namespace compsize;
using nlohmann::json;

namespace {

struct CliResult {
    int status = -1;
    std::string out;
    std::string err;
};

std::filesystem::path temp_path(const std::string& tag) {
    static int counter = 0;
    return std::filesystem::temp_directory_path() /
           ("compsize-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) +
            "-" + tag);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

CliResult run_cli(const std::string& args) {
    const char* bin = std::getenv("COMPSIZE_CLI");
    REQUIRE_MESSAGE(bin != nullptr, "COMPSIZE_CLI must point at the built binary");
    const auto outp = temp_path("stdout"), errp = temp_path("stderr");
    const std::string cmd = std::string("\"") + bin + "\" " + args + " > " + outp.string() +
                            " 2> " + errp.string();
    const int rc = std::system(cmd.c_str());
    CliResult r;
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(outp);
    r.err = slurp(errp);
    std::filesystem::remove(outp);
    std::filesystem::remove(errp);
    return r;
}

std::filesystem::path write_file(const std::string& tag, const std::string& body) {
    const auto p = temp_path(tag);
    std::ofstream f(p);
    f << body;
    return p;
}

std::size_t count_lines(const std::string& text, char first) {
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] == first) ++n;
    return n;
}

}  // namespace

TEST_CASE("help exits cleanly") {
    CHECK(run_cli("--help").status == 0);
    CHECK(run_cli("compute --help").status == 0);
}

TEST_CASE("compute emits one csv row per size") {
    const auto r = run_cli("compute --family exponential --lambda 1.05 -N 1000 --format csv");
    CHECK(r.status == 0);
    std::istringstream in(r.out);
    std::string line;
    std::size_t rows = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (line == "n,w,log_w") {
            header = true;
        } else if (!line.empty() && line[0] != '#') {
            ++rows;
        }
    }
    CHECK(header);
    CHECK(rows == 1000);
}

TEST_CASE("the one-node component is the isolated-node probability") {
    const auto pmf = write_file("pmf.txt", "0 0.125\n1 0.5\n2 0.375\n");
    const auto r = run_cli("compute --pmf-file " + pmf.string() + " -N 1");
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["w"].size() == 1);
    CHECK(j["w"][0].get<double>() == 0.125);
    std::filesystem::remove(pmf);
}

TEST_CASE("bad family parameters exit 2 with a machine-readable error") {
    const auto r = run_cli("compute --family geometric --p 1.5");
    CHECK(r.status == 2);
    CHECK(r.out.empty());
    const json e = json::parse(r.err);
    CHECK(e["error"] == "invalid_parameter");
    CHECK(e.contains("message"));
}

TEST_CASE("missing family parameter is reported by flag name") {
    const auto r = run_cli("compute --family exponential");
    CHECK(r.status == 2);
    const json e = json::parse(r.err);
    CHECK(e["error"] == "missing_parameter");
    CHECK(e["message"].get<std::string>().find("--lambda") != std::string::npos);
}

TEST_CASE("identical invocations write byte-identical files") {
    const auto f1 = temp_path("det1.json"), f2 = temp_path("det2.json");
    const std::string base = "compute --family geometric --p 0.4 -N 200 --out ";
    CHECK(run_cli(base + f1.string()).status == 0);
    CHECK(run_cli(base + f2.string()).status == 0);
    const std::string b1 = slurp(f1), b2 = slurp(f2);
    CHECK(!b1.empty());
    CHECK(b1 == b2);
    std::filesystem::remove(f1);
    std::filesystem::remove(f2);
}

TEST_CASE("quiet mode keeps both streams clean when writing to a file") {
    const auto f = temp_path("quiet.csv");
    const auto r = run_cli("compute --family geometric --p 0.4 -N 20 --format csv -q --out " +
                           f.string());
    CHECK(r.status == 0);
    CHECK(r.out.empty());
    CHECK(r.err.empty());
    // without -q the note lands on stderr, never on stdout
    const auto noisy = run_cli("compute --family geometric --p 0.4 -N 20 --out " + f.string());
    CHECK(noisy.out.empty());
    CHECK(noisy.err.find("wrote") != std::string::npos);
    std::filesystem::remove(f);
}

TEST_CASE("csv and json carry bit-identical values") {
    const auto fc = temp_path("series.csv"), fj = temp_path("series.json");
    CHECK(run_cli("compute --family exponential --lambda 1.3 -N 80 --format csv -q --out " +
                  fc.string())
              .status == 0);
    CHECK(run_cli("compute --family exponential --lambda 1.3 -N 80 --format json -q --out " +
                  fj.string())
              .status == 0);
    const auto a = read_size_series(fc.string());
    const auto b = read_size_series(fj.string());
    REQUIRE(a.w.size() == b.w.size());
    for (std::size_t n = 1; n < a.w.size(); ++n) {
        CHECK(a.w[n] == b.w[n]);
        CHECK(a.log_w[n] == b.log_w[n]);
    }
    std::filesystem::remove(fc);
    std::filesystem::remove(fj);
}

TEST_CASE("computed series tracks the exact family form") {
    const auto r =
        run_cli("compare --family exponential --lambda 1.05 -N 300 --against closed-form");
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["max_relative_deviation"].get<double>() <= 1e-10);
    CHECK(j["against"] == "closed-form");
}

TEST_CASE("a saved series compares back with zero deviation") {
    const auto f = temp_path("roundtrip.csv");
    CHECK(run_cli("compute --family geometric --p 0.5 -N 50 --format csv -q --out " + f.string())
              .status == 0);
    const auto r = run_cli("compare --family geometric --p 0.5 -N 50 --against series-file "
                           "--series-file " +
                           f.string());
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["max_relative_deviation"].get<double>() == 0.0);
    std::filesystem::remove(f);
}

TEST_CASE("classification names the regime and its constants") {
    const auto r = run_cli("classify --family geometric --p 0.7");
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["case"] == "A");
    CHECK(j["branch"] == "negative");
    CHECK(j["constants"].contains("C1"));
    CHECK(j["constants"].contains("C2"));
    CHECK_FALSE(j.contains("eta"));  // no annotated power tail
    CHECK_FALSE(j.contains("intermediate"));
}

TEST_CASE("heavy-tail classification reports the transient exponent") {
    const auto r = run_cli("classify --family powerlaw --beta 2.6 --s1 8.3e-5");
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["case"] == "F");
    CHECK(j["branch"] == "positive");
    CHECK(j["eta"].is_null());  // supercritical: no finite-component power law
    REQUIRE(j.contains("intermediate"));
    CHECK(j["intermediate"]["exponent"].get<double>() == doctest::Approx(-1.6).epsilon(1e-12));
    CHECK(j["intermediate"]["switch_point"].get<double>() > 1e6);
}

TEST_CASE("subcritical annotated tail exposes eta") {
    // beta = 6 with a small scale keeps theta negative
    const auto r = run_cli("classify --family powerlaw --beta 6 --s 1.0 --ktrunc 20000");
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["case"] == "B");
    CHECK(j["branch"] == "negative");
    CHECK(j["eta"].get<double>() == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("too-heavy tails produce a density report and exit 3") {
    const auto r = run_cli("asymptote --family powerlaw --beta 1 --s 0.5 -N 10000");
    CHECK(r.status == 3);
    const json j = json::parse(r.out);
    CHECK(j["density"] == "dense");
    CHECK(j["expected_edges"].get<double>() > 0.0);
    const json e = json::parse(r.err);
    CHECK(e["error"] == "unclassifiable");

    const auto semi = run_cli("classify --family powerlaw --beta 1.7 --s 0.5 -N 10000");
    CHECK(semi.status == 3);
    CHECK(json::parse(semi.out)["density"] == "semi_dense");
}

TEST_CASE("asymptote evaluates its series from n = 3") {
    const auto r = run_cli("asymptote --family geometric --p 0.5 -N 12");
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["case"] == "A");
    REQUIRE(j["n"].size() == 10);
    CHECK(j["n"][0] == 3);
    CHECK(j["asymptote"][0].get<double>() > 0.0);
}

TEST_CASE("sampling a dimer gas puts every node in a pair") {
    const auto pmf = write_file("dimer.txt", "1 1.0\n");
    const auto r = run_cli("sample --pmf-file " + pmf.string() + " -N 1000 -R 2 --seed 5");
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["N"] == 1000);
    CHECK(j["odd_fixups"] == 0);
    CHECK(j["giant_hat"] == 0.0);
    // w_hat rows are [n, estimate, se]
    CHECK(j["w_hat"][1][0] == 2);
    CHECK(j["w_hat"][1][1].get<double>() == 1.0);
    std::filesystem::remove(pmf);
}

TEST_CASE("odd node counts are repaired and reported") {
    const auto pmf = write_file("odd.txt", "1 1.0\n");
    const auto r = run_cli("sample --pmf-file " + pmf.string() + " -N 999 -R 1 --seed 5");
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["odd_fixups"] == 1);
    std::filesystem::remove(pmf);
}

TEST_CASE("giant fraction: certain for three-regular, absent when subcritical") {
    const auto pmf = write_file("cubic.txt", "3 1.0\n");
    const auto big = run_cli("giant --pmf-file " + pmf.string() + " -N 200");
    CHECK(big.status == 0);
    const json j = json::parse(big.out);
    CHECK(j["giant_fraction"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    std::filesystem::remove(pmf);

    const auto none = run_cli("giant --family geometric --p 0.75 -N 400");
    CHECK(none.status == 0);
    const json k = json::parse(none.out);
    CHECK(k["giant_fraction"].get<double>() < 1e-6);
    CHECK(k["theta"].get<double>() < 0.0);
    CHECK(k["method"] == "asymptote_tail");
}

TEST_CASE("nonsense slope windows are refused") {
    const auto r = run_cli("compare --family geometric --p 0.5 -N 50 --window 5 2");
    CHECK(r.status == 2);
    const json e = json::parse(r.err);
    CHECK(e["error"] == "invalid_parameter");
}

TEST_CASE("unknown flags exit 2") {
    const auto r = run_cli("compute --family geometric --p 0.5 --frobnicate");
    CHECK(r.status == 2);
    CHECK(json::parse(r.err)["error"] == "invalid_parameter");
}

TEST_CASE("closed form rejects families without one") {
    const auto r = run_cli("closed-form --family powerlaw --beta 3.5 --s 1");
    CHECK(r.status == 2);
    CHECK(json::parse(r.err)["error"] == "missing_parameter");
}

TEST_CASE("the circulating binomial variant diverges from the derived one") {
    const auto derived = run_cli("closed-form --family binomial --kmax 2 --c 0.5 -N 6");
    const auto printed =
        run_cli("closed-form --family binomial --kmax 2 --c 0.5 -N 6 --as-printed");
    REQUIRE(derived.status == 0);
    REQUIRE(printed.status == 0);
    const json a = json::parse(derived.out), b = json::parse(printed.out);
    // they disagree already at n = 2
    CHECK(a["w"][1].get<double>() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(b["w"][1].get<double>() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("density report also has a csv form") {
    const auto r = run_cli("classify --family powerlaw --beta 1.5 --s 0.5 --format csv");
    CHECK(r.status == 3);
    CHECK(count_lines(r.out, '#') == 1);
    CHECK(r.out.find("# compsize-density-v1") == 0);
    CHECK(r.out.find("density,semi_dense") != std::string::npos);
}
