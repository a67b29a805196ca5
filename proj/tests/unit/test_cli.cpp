#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gsf/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("gsf_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

Run run(const std::string& args, const fs::path& dir, const std::string& env = "") {
    const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = env + " '" + std::string(GSF_CLI_PATH) + "' " + args + " > '" + out.string() + "' 2> '" +
                            err.string() + "'";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

}  // namespace

TEST_CASE("verify reproduces the explicit soliton battery") {
    const fs::path d = scratch("verify");
    const Run r = run("verify --out-dir '" + d.string() + "'", d);
    CAPTURE(r.out);
    CAPTURE(r.err);
    CHECK(r.code == 0);
}

TEST_CASE("unbounded regime is refused with exit 3 and a threshold message") {
    const fs::path d = scratch("regime");
    const Run r = run("solve --model kawahara --b -1 --p 10 --lambda 1 --out-dir '" + d.string() + "'", d);
    CHECK(r.code == 3);
    const gsf::Json j = gsf::Json::parse(r.err);
    CHECK(j["error"]["kind"] == "RegimeRefusal");
    CHECK(j["error"]["exit_code"] == 3);
    CHECK(j["error"]["message"].get<std::string>().find("p >= 9") != std::string::npos);
}

TEST_CASE("repeated solves are byte-identical and export recovers lambda") {
    const fs::path d = scratch("determinism");
    const std::string env = "GSF_THREADS=1 SOURCE_DATE_EPOCH=1000000000";
    const std::string args = "solve --model kawahara --b 1 --p 2 --lambda 1.5 --n 256 --length 40 --out-dir '" +
                             d.string() + "' --prefix ";
    REQUIRE(run(args + "a", d, env).code == 0);
    REQUIRE(run(args + "b", d, env).code == 0);
    const std::string a = slurp(d / "a.gsfw"), b = slurp(d / "b.gsfw");
    CHECK(!a.empty());
    CHECK(a == b);
    CHECK(gsf::decode_wave(a).timestamp == "2001-09-09T01:46:40Z");

    const Run ex = run("export --input '" + (d / "a.gsfw").string() + "' --format csv --out-dir '" + d.string() +
                           "' --prefix e",
                       d);
    REQUIRE(ex.code == 0);
    const gsf::Json j = gsf::Json::parse(ex.out);
    const double lh = j["lambda_header"], lr = j["lambda_recomputed"];
    CHECK(std::fabs(lh - 1.5) < 1e-12 * 1.5);
    CHECK(std::fabs(lr - lh) < 1e-12 * lh);
    CHECK(slurp(d / "e.csv").rfind("x,phi\n", 0) == 0);
}

TEST_CASE("parse errors exit 5 with a JSON error on stderr") {
    const fs::path d = scratch("parse");
    std::ofstream(d / "bad.cfg") << "model.p = 3\ngrid.n = lots\n";
    const Run r = run("solve --config '" + (d / "bad.cfg").string() + "' --out-dir '" + d.string() + "'", d);
    CHECK(r.code == 5);
    const gsf::Json j = gsf::Json::parse(r.err);
    CHECK(j["error"]["kind"] == "Parse");
    CHECK(j["error"]["message"].get<std::string>().find("bad.cfg:2") != std::string::npos);

    const Run unknown = run("solve --set model.zzz=1 --out-dir '" + d.string() + "'", d);
    CHECK(unknown.code == 5);
    CHECK(run("frobnicate", d).code == 5);
}

TEST_CASE("stability of a stable wave with --expect-stable exits 0") {
    const fs::path d = scratch("stability");
    const Run r = run("stability --model kawahara --b 1 --p 2 --lambda 2 --n 256 --length 60 --expect-stable "
                      "--out-dir '" + d.string() + "'",
                      d);
    CAPTURE(r.err);
    CHECK(r.code == 0);
    const gsf::Json j = gsf::Json::parse(slurp(d / "gsf_stability.json"));
    CHECK(j.dump().find("Stable") != std::string::npos);
}

TEST_CASE("sweep writes its report and CSV") {
    const fs::path d = scratch("sweep");
    const Run r = run("sweep --model kawahara --b 1 --p 2 --n 256 --length 60 --lambdas 1,2,3,4 --plot --out-dir '" +
                          d.string() + "'",
                      d);
    CHECK(r.code == 0);
    CHECK(fs::exists(d / "gsf_sweep.csv"));
    CHECK(fs::exists(d / "gsf_m.dat"));
    const gsf::Json j = gsf::Json::parse(slurp(d / "gsf_sweep.json"));
    CHECK(j["report"].contains("all_pass"));
    CHECK(j["rows"].size() == 4);
}

TEST_CASE("probe subcommand runs the GNS family") {
    const fs::path d = scratch("probe");
    const Run r = run("probe --model kawahara --b 1 --p 3 --probe gns --family kawahara --eps 0.01,0.05,0.1 --out-dir '" +
                          d.string() + "'",
                      d);
    CAPTURE(r.err);
    CHECK(r.code == 0);
    CHECK(r.out.find("unbounded") != std::string::npos);
}
