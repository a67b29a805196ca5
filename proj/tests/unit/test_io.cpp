#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "gsf/errors.hpp"
#include "gsf/io.hpp"

using namespace gsf;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Io;
}

std::string error_message(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

const Wave& sample_wave() {
    static const Wave w =
        normalized_gradient_flow(ModelSpec(Kawahara{1.0, 2.0}), make_grid(1, 256, 40.0), 1.5, SolveConfig{});
    return w;
}

}  // namespace

TEST_CASE("configuration defaults") {
    RunConfig c;
    CHECK(c.model().tag() == ModelSpec(Kawahara{}).tag());
    CHECK(c.grid()->n() == 512);
    CHECK(c.task_lambda() == doctest::Approx(4.0 / std::sqrt(5.0)));
    CHECK(c.lambdas.size() == 10);
    CHECK(c.warm_start);
}

TEST_CASE("configuration file parsing") {
    RunConfig c;
    std::istringstream in(
        "# comment line\n"
        "model.variant = mixed\n"
        "model.epsilon = 1\n"
        "model.p = 3   # trailing comment\n"
        "model.dim = 2\n"
        "\n"
        "grid.n = 128\n"
        "grid.length = 30\n"
        "solve.max_iters = 1234\n"
        "task.lambdas = 1, 2, 3, 4\n"
        "task.expect_stable = true\n");
    parse_config(c, in, "run.cfg");
    const ModelSpec m = c.model();
    CHECK(m.dim() == 2);
    CHECK(m.p() == 3.0);
    CHECK(m.symbol(1.0, 0.0) == doctest::Approx(1.0 - 1.0));
    CHECK(c.grid()->n() == 128);
    CHECK(c.solve.max_iters == 1234);
    CHECK(c.lambdas == std::vector<double>{1, 2, 3, 4});
    CHECK(c.expect_stable);
}

TEST_CASE("configuration errors carry the line number") {
    RunConfig c;
    std::istringstream bad_value("model.p = 3\ngrid.n = banana\n");
    CHECK(kind_of([&] { parse_config(c, bad_value, "run.cfg"); }) == ErrorKind::Parse);
    std::istringstream again("model.p = 3\ngrid.n = banana\n");
    CHECK(error_message([&] { parse_config(c, again, "run.cfg"); }).find("run.cfg:2") != std::string::npos);

    std::istringstream unknown("model.q = 3\n");
    const std::string msg = error_message([&] { parse_config(c, unknown, "x.cfg"); });
    CHECK(msg.find("x.cfg:1") != std::string::npos);
    CHECK(msg.find("model.q") != std::string::npos);

    std::istringstream no_eq("model.p 3\n");
    CHECK(kind_of([&] { parse_config(c, no_eq, "x.cfg"); }) == ErrorKind::Parse);
    CHECK(kind_of([&] { apply_assignment(c, "task.parallel=0"); }) == ErrorKind::Parse);
    CHECK(kind_of([&] { load_config(c, "/nonexistent/run.cfg"); }) == ErrorKind::Io);
    apply_assignment(c, "task.omega=0.3");
    CHECK(c.omega == 0.3);
}

TEST_CASE("wave files round-trip byte for byte") {
    const Wave& w = sample_wave();
    const std::string bytes = encode_wave(w, "2020-01-01T00:00:00Z");
    CHECK(bytes.compare(0, 4, "GSFW") == 0);
    const LoadedWave back = decode_wave(bytes);
    CHECK(back.timestamp == "2020-01-01T00:00:00Z");
    for (std::size_t i = 0; i < w.field.size(); ++i) CHECK(back.wave.field[i] == w.field[i]);
    CHECK(back.wave.lambda == w.lambda);
    CHECK(back.wave.omega == w.omega);
    CHECK(back.wave.model.tag() == w.model.tag());
    CHECK(encode_wave(back.wave, back.timestamp) == bytes);

    // Invariants recomputed from the stored samples match the header.
    CHECK(std::fabs(norm_sq(back.wave.field) - back.wave.lambda) < 1e-12 * back.wave.lambda);
    CHECK(std::fabs(omega_from_field(back.wave.model, back.wave.field) - back.wave.omega) <
          1e-12 * std::fabs(back.wave.omega));
}

TEST_CASE("wave header layout") {
    const std::string bytes = encode_wave(sample_wave(), "2020-01-01T00:00:00Z");
    const LoadedWave back = decode_wave(bytes);
    std::string prev;
    for (auto it = back.header.begin(); it != back.header.end(); ++it) {
        CHECK(prev < it.key());
        prev = it.key();
    }
    for (const char* key : {"model", "grid", "lambda", "omega", "energy", "el_residual_sup", "el_residual_l2",
                            "solver", "iterations", "grad_norm", "termination", "timestamp", "content_hash"})
        CHECK(back.header.contains(key));
    CHECK(back.header["content_hash"].get<std::string>().rfind("sha256:", 0) == 0);
    CHECK(back.header["solver"] == "GradientFlow");
}

TEST_CASE("corrupted wave files are rejected") {
    const std::string good = encode_wave(sample_wave(), "2020-01-01T00:00:00Z");
    std::string bad_magic = good;
    bad_magic[0] = 'X';
    CHECK(kind_of([&] { decode_wave(bad_magic); }) == ErrorKind::Parse);
    std::string flipped = good;
    flipped[flipped.size() - 3] ^= 0x10;
    CHECK(error_message([&] { decode_wave(flipped); }).find("hash") != std::string::npos);
    CHECK(kind_of([&] { decode_wave(good.substr(0, good.size() - 8)); }) == ErrorKind::Parse);
    CHECK(kind_of([&] { decode_wave("GS"); }) == ErrorKind::Parse);
}

TEST_CASE("save and load through the filesystem") {
    const auto dir = std::filesystem::temp_directory_path() / "gsf_test_io";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "w.gsfw").string();
    save_wave(path, sample_wave(), "2021-06-01T12:00:00Z");
    const LoadedWave back = load_wave(path);
    CHECK(back.wave.lambda == sample_wave().lambda);
    CHECK(kind_of([&] { load_wave((dir / "missing.gsfw").string()); }) == ErrorKind::Io);
    std::filesystem::remove_all(dir);
}

TEST_CASE("timestamps honour SOURCE_DATE_EPOCH") {
    ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
    CHECK(current_timestamp() == "1970-01-02T00:00:00Z");
    ::unsetenv("SOURCE_DATE_EPOCH");
    CHECK(current_timestamp().size() == 20);
}

TEST_CASE("sha256 of a known string") {
    const std::string s = "abc";
    CHECK(sha256_hex(s.data(), s.size()) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("CSV and plot writers") {
    std::ostringstream os;
    write_wave_csv(os, sample_wave().field);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,phi");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 256);

    std::ostringstream plot;
    write_plot_data(plot, {1.0, 2.0}, {3.0, 4.0});
    CHECK(plot.str().find("1 3") != std::string::npos);
}

TEST_CASE("JSON reports") {
    const Json s = wave_summary(sample_wave());
    CHECK(s.contains("regime"));
    CHECK(s["model"]["variant"] == "kawahara");
    const Json g = to_json(sample_wave().field.grid());
    CHECK(g["n"] == 256);
}
