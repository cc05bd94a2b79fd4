#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "carnot/cli.hpp"

using namespace carnot;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "carnot_acf");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "carnot_acf_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(CliConstruct, EngelCertificate) {
    const Outcome r = run({"construct", "--group", "engel", "--b", "1", "--p", "0", "--q", "1/2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    const CarnotGroup g = make_engel();
    EXPECT_EQ(parse_poly(doc["u"].get<std::string>(), g.weights),
              parse_poly("x2 + 1/2*x1^2*x2 - 1/6*x2^3 - 1/2*x1*y", g.weights));
    EXPECT_TRUE(contains(r.err, "certificate: PASS"));
}

TEST(CliConstruct, WritesFileAndSummary) {
    const auto path = scratch("h1.json");
    const Outcome r = run({"construct", "--group", "heisenberg:1", "--b", "1", "--p", "1", "--q", "1", "--out", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "certificate: PASS"));
    const auto doc = nlohmann::json::parse(slurp(path));
    EXPECT_EQ(doc["certificate"]["harmonic"], true);
    EXPECT_EQ(doc["u"], "x2 - 2*x1*y - 1/3*x2^3");
}

TEST(CliConstruct, DomainErrors) {
    EXPECT_EQ(run({"construct", "--group", "euclidean:3", "--b", "1", "--p", "0", "--q", "1/2"}).code, 2);
    EXPECT_EQ(run({"construct", "--group", "heisenberg:1", "--b", "0"}).code, 2);
    EXPECT_EQ(run({"construct", "--group", "heisenberg:1", "--p", "0", "--q", "0"}).code, 2);
    EXPECT_EQ(run({"construct", "--group", "heisenberg:1", "--b", "0.5"}).code, 1);
    EXPECT_EQ(run({"construct", "--group", "nosuchgroup"}).code, 1);
    EXPECT_EQ(run({"construct", "--group", "heisenberg:1", "--bogus"}).code, 1);
}

TEST(CliConstruct, GroupFile) {
    const Outcome r = run({"construct", "--group", std::string(CARNOT_DATA_DIR) + "/engel_fields.json", "--q", "1/2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "\"c2\": \"-1/2\""));
}

TEST(CliCheck, EngelPolynomials) {
    const Outcome u = run({"check", "--group", "engel", "x2 + 1/2*x1^2*x2 - 1/6*x2^3 - 1/2*x1*y"});
    ASSERT_EQ(u.code, 0) << u.err;
    EXPECT_TRUE(contains(u.out, "harmonic: yes"));
    EXPECT_TRUE(contains(u.out, "degree 1: x2"));
    const Outcome p5 = run({"check", "--group", "engel", "x1*y^2 - 2*y*x1^2*x2 + 2*t*x1*x2 + 1/2*x1^3*x2^2 + x1^2*x2^3"});
    ASSERT_EQ(p5.code, 0);
    EXPECT_TRUE(contains(p5.out, "harmonic: no"));
    EXPECT_TRUE(contains(p5.out, "intrinsic-odd: yes"));
}

TEST(CliCheck, ParseErrors) {
    const Outcome r = run({"check", "--group", "engel", "x1 +"});
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.err, "SyntaxError"));
    EXPECT_TRUE(contains(r.err, "4"));
    EXPECT_EQ(run({"check", "--group", "engel", "z9"}).code, 1);
    EXPECT_EQ(run({"check", "--group", "engel"}).code, 1);
}

TEST(CliNumeric, EngelIsUnsupported) {
    for (const char* cmd : {"phi", "coeffs", "jay"}) {
        const Outcome r = run({cmd, "--group", "engel", "--samples", "1000"});
        EXPECT_EQ(r.code, 3) << cmd;
        EXPECT_TRUE(contains(r.err, "not explicit")) << r.err;
    }
}

TEST(CliNumeric, CoeffsVerdict) {
    const Outcome r = run({"coeffs", "--group", "heisenberg:1", "--b", "1", "--p", "0", "--q", "1/2", "--samples", "200000"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.starts_with("name,estimate,stderr\na0,"));
    EXPECT_EQ(count_lines(r.out), 5);
    EXPECT_TRUE(contains(r.err, "verdict: Phi decreasing on (0, r*)"));
}

TEST(CliNumeric, PhiCsvAndDeterminism) {
    const std::vector<std::string> args{"phi",   "--group",   "heisenberg:1", "--samples", "50000", "--seed",
                                        "7",     "--steps",   "6",            "--rmax",    "1.2",   "--precision",
                                        "12"};
    const Outcome a = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_TRUE(a.out.starts_with("r,phi,stderr,phi_quartic,quartic_stderr\n"));
    EXPECT_EQ(count_lines(a.out), 7);
    EXPECT_EQ(run(args).out, a.out);
    std::vector<std::string> threaded = args;
    threaded.insert(threaded.end(), {"--workers", "3"});
    EXPECT_EQ(run(threaded).out, a.out);
}

TEST(CliNumeric, PolarizedInputIsMapped) {
    const Outcome r = run({"phi", "--group", "heisenberg:1:polarized", "--samples", "20000", "--steps", "3", "--rmax", "1"});
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST(CliNumeric, PhiWithoutQuarticSplit) {
    const Outcome r = run({"phi", "--group", "heisenberg:1", "--u", "x2 + x1^2", "--samples", "20000", "--steps", "3",
                       "--rmax", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, ",,\n"));
    EXPECT_EQ(run({"phi", "--group", "heisenberg:1", "--u", "x2 + x1^2", "--samples", "1000"}).code, 1);
}

TEST(CliNumeric, JayOutputAndGnuplot) {
    const auto csv = scratch("jay.csv");
    const auto gp = scratch("jay.gp");
    const Outcome r = run({"jay", "--group", "heisenberg:1", "--samples", "50000", "--steps", "5", "--out", csv.string(),
                       "--gnuplot", gp.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(slurp(csv).starts_with("r,J,J_stderr,I_plus,I_plus_stderr,I_minus,I_minus_stderr\n"));
    EXPECT_TRUE(contains(r.out, "|I+ - I-| < 3 stderr at"));
    EXPECT_TRUE(contains(slurp(gp), csv.string()));
}

TEST(CliNumeric, UFromCertificate) {
    const auto cert = scratch("cert.json");
    ASSERT_EQ(run({"construct", "--group", "heisenberg:1", "--q", "1/2", "--out", cert.string()}).code, 0);
    const Outcome a = run({"coeffs", "--group", "heisenberg:1", "--u", cert.string(), "--samples", "20000"});
    const Outcome b = run({"coeffs", "--group", "heisenberg:1", "--samples", "20000"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
}

TEST(CliEuclidOrtho, PassAndErrors) {
    const Outcome ok = run({"euclid-ortho", "--n", "3", "--ph", "x1", "--pk", "x1^3 - 3*x1*x2^2", "--samples", "200000"});
    ASSERT_EQ(ok.code, 0) << ok.err;
    EXPECT_TRUE(contains(ok.out, "PASS"));
    EXPECT_EQ(run({"euclid-ortho", "--n", "3", "--ph", "x1^2", "--pk", "x1"}).code, 2);
    EXPECT_EQ(run({"euclid-ortho", "--n", "3", "--ph", "x1", "--pk", "x2"}).code, 2);
    EXPECT_EQ(run({"euclid-ortho", "--n", "3", "--ph", "x1 + x1*x2", "--pk", "x2"}).code, 2);
}

TEST(CliDetCheck, Reports) {
    const Outcome one = run({"det-check", "--alpha", "0,0,1,0", "--b", "2"});
    EXPECT_EQ(one.code, 0);
    EXPECT_TRUE(contains(one.out, "det A_b = -576"));
    EXPECT_TRUE(contains(one.out, "-72 b^3 (a_1^2 - a_2^1) = -576"));
    const Outcome singular = run({"det-check", "--alpha", "1,2,2,3", "--b", "1"});
    EXPECT_TRUE(contains(singular.out, "SINGULAR"));
    const Outcome random = run({"det-check", "--random", "50", "--seed", "3"});
    EXPECT_TRUE(contains(random.out, "det == -72 b^3 (a_1^2 - a_2^1): 50"));
    EXPECT_EQ(run({"det-check", "--alpha", "1,2,3"}).code, 1);
}

TEST(CliUsage, HelpAndMissingCommand) {
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({}).code, 1);
}
