#include "gsf/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gsf/errors.hpp"

namespace gsf {

// -------------------------------------------------------------------- config

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& where, const std::string& key, const std::string& msg) {
    throw Error(ErrorKind::Parse, where + ": " + key + ": " + msg);
}

double parse_real(const std::string& v, const std::string& where, const std::string& key) {
    double out = 0.0;
    const char* end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, out);
    if (v.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(out))
        bad(where, key, "expected a real number, got '" + v + "'");
    return out;
}

int parse_int(const std::string& v, const std::string& where, const std::string& key) {
    int out = 0;
    const char* s = v.data();
    if (!v.empty() && v[0] == '+') ++s;
    const char* end = v.data() + v.size();
    const auto res = std::from_chars(s, end, out);
    if (v.empty() || res.ec != std::errc() || res.ptr != end) bad(where, key, "expected an integer, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& v, const std::string& where, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad(where, key, "expected a boolean, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, const std::string& where, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(trim(item), where, key));
    if (out.empty()) bad(where, key, "expected a comma-separated list");
    return out;
}

double positive(double x, const std::string& where, const std::string& key) {
    if (!(x > 0.0)) bad(where, key, "must be positive");
    return x;
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& key, const std::string& value, const std::string& where) {
    const std::string& v = value;
    auto real = [&] { return parse_real(v, where, key); };
    auto integer = [&] { return parse_int(v, where, key); };
    auto boolean = [&] { return parse_bool(v, where, key); };

    if (key == "model.variant") {
        if (v != "kawahara" && v != "mixed" && v != "laplacian")
            bad(where, key, "expected kawahara, mixed or laplacian, got '" + v + "'");
        c.variant = v;
    } else if (key == "model.b") {
        c.b = real();
    } else if (key == "model.epsilon") {
        const int e = integer();
        if (e != 1 && e != -1) bad(where, key, "must be +1 or -1");
        c.epsilon = e;
    } else if (key == "model.bmag") {
        c.bmag = real();
        if (c.bmag < 0.0) bad(where, key, "must be non-negative");
    } else if (key == "model.p") {
        c.p = real();
        if (!(*c.p > 1.0)) bad(where, key, "must exceed 1");
    } else if (key == "model.dim") {
        c.dim = integer();
        if (*c.dim != 1 && *c.dim != 2) bad(where, key, "must be 1 or 2");
    } else if (key == "grid.n") {
        c.n = integer();
        if (*c.n < 64 || (*c.n & (*c.n - 1)) != 0) bad(where, key, "must be a power of two >= 64");
    } else if (key == "grid.length") {
        c.length = positive(real(), where, key);
    } else if (key == "grid.dealias") {
        c.dealias = boolean();
    } else if (key == "solve.max_iters") {
        c.solve.max_iters = integer();
    } else if (key == "solve.step0") {
        c.solve.step0 = positive(real(), where, key);
    } else if (key == "solve.grad_tol") {
        c.solve.grad_tol = positive(real(), where, key);
    } else if (key == "solve.energy_stall_tol") {
        c.solve.energy_stall_tol = positive(real(), where, key);
    } else if (key == "solve.stall_window") {
        c.solve.stall_window = integer();
    } else if (key == "solve.seed_profile") {
        try {
            c.solve.seed_profile = seed_from_string(v);
        } catch (const Error& e) {
            bad(where, key, e.what());
        }
    } else if (key == "solve.seed_width") {
        c.solve.seed_width = positive(real(), where, key);
    } else if (key == "solve.center_after") {
        c.solve.center_after = boolean();
    } else if (key == "solve.force") {
        c.solve.force = boolean();
    } else if (key == "solve.collapse_scale") {
        c.solve.collapse_scale = positive(real(), where, key);
    } else if (key == "task.lambda") {
        c.lambda = positive(real(), where, key);
    } else if (key == "task.omega") {
        c.omega = real();
    } else if (key == "task.lambdas") {
        c.lambdas = parse_list(v, where, key);
    } else if (key == "task.eps") {
        c.eps = parse_list(v, where, key);
        for (double e : c.eps) positive(e, where, key);
    } else if (key == "task.probe") {
        if (v != "scaling" && v != "gns") bad(where, key, "expected scaling or gns");
        c.probe = v;
    } else if (key == "task.family") {
        if (v != "isotropic" && v != "anisotropic" && v != "kawahara")
            bad(where, key, "expected isotropic, anisotropic or kawahara");
        c.family = v;
    } else if (key == "task.expect_stable") {
        c.expect_stable = boolean();
    } else if (key == "task.block_check") {
        c.block_check = boolean();
    } else if (key == "task.warm_start") {
        c.warm_start = boolean();
    } else if (key == "task.parallel") {
        c.parallel = integer();
        if (c.parallel < 1) bad(where, key, "must be at least 1");
    } else if (key == "task.input") {
        c.input = v;
    } else if (key == "output.dir") {
        c.out_dir = v;
    } else if (key == "output.prefix") {
        c.prefix = v;
    } else if (key == "output.format") {
        if (v != "json" && v != "csv" && v != "plot") bad(where, key, "expected json, csv or plot");
        c.format = v;
    } else if (key == "output.plot") {
        c.plot = boolean();
    } else {
        bad(where, key, "unknown key");
    }
}

void apply_assignment(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Parse, "--set: expected key=value, got '" + assignment + "'");
    apply_setting(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), "--set");
}

void parse_config(RunConfig& cfg, std::istream& in, const std::string& source) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::Parse, where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw Error(ErrorKind::Parse, where + ": empty key");
        apply_setting(cfg, key, trim(line.substr(eq + 1)), where);
    }
}

void load_config(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config file '" + path + "'");
    parse_config(cfg, in, path);
}

ModelSpec RunConfig::model() const {
    if (variant == "kawahara") {
        if (dim && *dim != 1) throw Error(ErrorKind::InvalidArgument, "the Kawahara model is one-dimensional");
        Kawahara m;
        if (b) m.b = *b;
        if (p) m.p = *p;
        return ModelSpec(m);
    }
    if (variant == "mixed") {
        MixedNLS m;
        m.epsilon = epsilon;
        m.bmag = bmag;
        if (p) m.p = *p;
        if (dim) m.dim = *dim;
        return ModelSpec(m);
    }
    LaplacianNLS m;
    if (b) m.b = *b;
    if (p) m.p = *p;
    if (dim) m.dim = *dim;
    return ModelSpec(m);
}

GridPtr RunConfig::grid() const {
    const int d = model().dim();
    return make_grid(d, n.value_or(d == 1 ? 512 : 64), length.value_or(default_box_length(d)), dealias);
}

double RunConfig::task_lambda() const { return lambda > 0.0 ? lambda : explicit_soliton_lambda(); }

// ---------------------------------------------------------------- wave files

std::string sha256_hex(const void* data, std::size_t bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data, bytes, md, &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorKind::Io, "SHA-256 computation failed");
    std::ostringstream os;
    os << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << int(md[i]);
    return os.str();
}

std::string current_timestamp() {
    std::time_t t = std::time(nullptr);
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        const long long v = std::strtoll(sde, &end, 10);
        if (end && *end == '\0' && end != sde) t = std::time_t(v);
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put_le(std::string& out, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(const std::string& in, std::size_t pos) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, in.data() + pos, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

ModelSpec model_from_json(const Json& j) {
    const std::string v = j.at("variant").get<std::string>();
    if (v == "kawahara") return ModelSpec(Kawahara{j.at("b").get<double>(), j.at("p").get<double>()});
    if (v == "mixed")
        return ModelSpec(MixedNLS{j.at("epsilon").get<int>(), j.at("bmag").get<double>(), j.at("p").get<double>(),
                                  j.at("dim").get<int>()});
    if (v == "laplacian")
        return ModelSpec(LaplacianNLS{j.at("b").get<double>(), j.at("p").get<double>(), j.at("dim").get<int>()});
    throw Error(ErrorKind::Parse, "unknown model variant '" + v + "' in wave header");
}

}  // namespace

std::string encode_wave(const Wave& w, const std::string& timestamp) {
    const SpectralGrid& g = w.field.grid();
    std::string payload;
    payload.reserve(w.field.size() * 8);
    for (double v : w.field.values()) put_le<double>(payload, v);

    nlohmann::json h;  // std::map keys: sorted output
    h["model"] = nlohmann::json::parse(to_json(w.model).dump());
    h["grid"] = nlohmann::json::parse(to_json(g).dump());
    h["lambda"] = w.lambda;
    h["omega"] = w.omega;
    h["energy"] = w.energy;
    h["el_residual_sup"] = w.el_residual_sup;
    h["el_residual_l2"] = w.el_residual_l2;
    h["solver"] = to_string(w.solver);
    h["iterations"] = w.stats.iterations;
    h["grad_norm"] = w.stats.grad_norm;
    h["termination"] = w.stats.termination;
    h["timestamp"] = timestamp;
    h["content_hash"] = "sha256:" + sha256_hex(payload.data(), payload.size());
    const std::string header = h.dump();

    std::string out(kWaveMagic, 4);
    put_le<std::uint16_t>(out, kWaveVersion);
    put_le<std::uint32_t>(out, std::uint32_t(header.size()));
    out += header;
    out += payload;
    return out;
}

LoadedWave decode_wave(const std::string& bytes) {
    if (bytes.size() < 10 || std::memcmp(bytes.data(), kWaveMagic, 4) != 0)
        throw Error(ErrorKind::Parse, "not a wave file (bad magic)");
    const auto version = get_le<std::uint16_t>(bytes, 4);
    if (version != kWaveVersion) throw Error(ErrorKind::Parse, "unsupported wave file version " + std::to_string(version));
    const auto hlen = get_le<std::uint32_t>(bytes, 6);
    if (bytes.size() < 10 + std::size_t(hlen)) throw Error(ErrorKind::Parse, "truncated wave header");

    LoadedWave out;
    try {
        out.header = Json::parse(bytes.substr(10, hlen));
        const Json& gj = out.header.at("grid");
        const int dim = gj.at("dim").get<int>();
        const int n = gj.at("n").get<int>();
        const auto len = gj.at("length").get<std::vector<double>>();
        if (len.size() != std::size_t(dim)) throw Error(ErrorKind::Parse, "grid length list does not match dim");
        const GridPtr grid = make_grid(dim, n, {len[0], dim == 2 ? len[1] : len[0]}, gj.at("dealias").get<bool>());

        const std::size_t off = 10 + hlen;
        if (bytes.size() - off != grid->size() * 8)
            throw Error(ErrorKind::Parse, "payload size does not match the grid");
        const std::string hash = "sha256:" + sha256_hex(bytes.data() + off, bytes.size() - off);
        if (hash != out.header.at("content_hash").get<std::string>())
            throw Error(ErrorKind::Parse, "content hash mismatch");
        std::vector<double> vals(grid->size());
        for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = get_le<double>(bytes, off + 8 * i);

        Wave& w = out.wave;
        w.model = model_from_json(out.header.at("model"));
        w.field = RealField(grid, std::move(vals));
        w.lambda = out.header.at("lambda").get<double>();
        w.omega = out.header.at("omega").get<double>();
        w.energy = out.header.at("energy").get<double>();
        w.el_residual_sup = out.header.at("el_residual_sup").get<double>();
        w.el_residual_l2 = out.header.at("el_residual_l2").get<double>();
        w.solver = solver_from_string(out.header.at("solver").get<std::string>());
        w.stats.iterations = out.header.at("iterations").get<int>();
        w.stats.grad_norm = out.header.at("grad_norm").get<double>();
        w.stats.termination = out.header.at("termination").get<std::string>();
        out.timestamp = out.header.at("timestamp").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("malformed wave header: ") + e.what());
    }
    return out;
}

void save_wave(const std::string& path, const Wave& wave, const std::string& timestamp) {
    write_text_file(path, encode_wave(wave, timestamp));
}

LoadedWave load_wave(const std::string& path) { return decode_wave(read_text_file(path)); }

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ------------------------------------------------------------------- reports

Json to_json(const ModelSpec& m) {
    Json j;
    j["variant"] = m.name();
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Kawahara>) {
                j["b"] = v.b;
                j["p"] = v.p;
                j["dim"] = 1;
            } else if constexpr (std::is_same_v<T, MixedNLS>) {
                j["epsilon"] = v.epsilon;
                j["bmag"] = v.bmag;
                j["p"] = v.p;
                j["dim"] = v.dim;
            } else {
                j["b"] = v.b;
                j["p"] = v.p;
                j["dim"] = v.dim;
            }
        },
        m.variant());
    return j;
}

Json to_json(const SpectralGrid& g) {
    Json j;
    j["dim"] = g.dim();
    j["n"] = g.n();
    Json len = Json::array();
    for (int a = 0; a < g.dim(); ++a) len.push_back(g.length(a));
    j["length"] = len;
    j["dealias"] = g.dealias();
    return j;
}

Json wave_summary(const Wave& w) {
    Json j;
    j["model"] = to_json(w.model);
    j["grid"] = to_json(w.field.grid());
    j["lambda"] = w.lambda;
    j["omega"] = w.omega;
    j["energy"] = w.energy;
    j["el_residual_sup"] = w.el_residual_sup;
    j["el_residual_l2"] = w.el_residual_l2;
    j["solver"] = to_string(w.solver);
    j["iterations"] = w.stats.iterations;
    j["grad_norm"] = w.stats.grad_norm;
    j["termination"] = w.stats.termination;
    j["regime"] = to_string(validity_regime(w.model, w.lambda));
    return j;
}

Json to_json(const StabilityReport& r) {
    Json j;
    j["model"] = r.model_tag;
    j["verdict"] = to_string(r.verdict);
    j["n_lplus"] = r.n_lplus;
    if (r.n_lminus) {
        j["n_lminus"] = *r.n_lminus;
        j["lminus_near_zero"] = r.lminus_near_zero;
        j["lminus_kernel_alignment"] = r.lminus_kernel_alignment;
    }
    j["vk_index"] = r.vk_index;
    j["vk_projection_defect"] = r.vk_defect;
    j["k_r"] = r.k_r;
    j["k_c"] = r.k_c;
    j["max_real_part"] = r.max_real_part;
    j["spectral_radius"] = r.spectral_radius;
    j["stab_tol"] = r.stab_tol;
    j["essential_edge"] = r.essential_edge;
    if (r.d_matrix.size() > 0) {
        Json d = Json::array();
        for (Eigen::Index i = 0; i < r.d_matrix.rows(); ++i) {
            Json row = Json::array();
            for (Eigen::Index k = 0; k < r.d_matrix.cols(); ++k) row.push_back(r.d_matrix(i, k));
            d.push_back(row);
        }
        j["d_matrix"] = d;
        j["n_d"] = r.n_d;
    }
    if (r.index) {
        Json x;
        x["n_l"] = r.index->n_l;
        x["n_d"] = r.index->n_d;
        x["k_r"] = r.index->k_r;
        x["k_c"] = r.index->k_c;
        x["k_i_minus"] = r.index->k_i_minus;
        x["applicable"] = r.index->applicable;
        x["balanced"] = r.index->balanced;
        x["cross_block_max"] = r.index->cross_block_max;
        j["index"] = x;
    }
    if (r.block_check) {
        j["block_check"] = {{"max_rel_diff", r.block_check->max_rel_diff}, {"compared", r.block_check->compared}};
    }
    j["notes"] = r.notes;
    return j;
}

Json to_json(const PohozaevResult& r) {
    Json j;
    j["r1"] = r.r1;
    j["r2"] = r.r2;
    j["r3"] = r.r3;
    j["raw"] = {r.raw1, r.raw2, r.raw3};
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
    j["A"] = r.parts.quartic;
    j["B"] = r.parts.second;
    j["C"] = r.parts.nonlinear;
    j["D"] = r.parts.mass;
    return j;
}

Json to_json(const GnsReport& r) {
    Json j;
    Json rows = Json::array();
    for (const GnsRow& g : r.rows) rows.push_back({{"eps", g.eps}, {"ratio", g.ratio}, {"n", g.n}});
    j["rows"] = rows;
    j["small_eps_slope"] = r.small_eps_slope;
    j["predicted_slope"] = r.predicted_slope;
    j["unbounded"] = r.unbounded;
    return j;
}

Json to_json(const std::vector<ScalingRow>& rows) {
    Json a = Json::array();
    for (const ScalingRow& r : rows)
        a.push_back({{"eps", r.eps},
                     {"closed_form", r.closed_form},
                     {"spectral", r.spectral},
                     {"resolved", r.resolved},
                     {"dominant", r.dominant}});
    return a;
}

Json to_json(const PropertyReport& r) {
    Json j;
    j["all_pass"] = r.all_pass();
    Json checks = Json::array();
    for (const PropertyCheck& c : r.checks)
        checks.push_back({{"id", c.id},
                          {"description", c.description},
                          {"status", to_string(c.status)},
                          {"worst", c.worst},
                          {"tolerance", c.tolerance},
                          {"detail", c.detail}});
    j["checks"] = checks;
    return j;
}

Json to_json(const SweepRow& r) {
    Json j;
    j["lambda"] = r.lambda;
    j["ok"] = r.ok;
    if (!r.ok) {
        j["error"] = r.error;
        return j;
    }
    j["m"] = r.m;
    j["omega"] = r.omega;
    j["lp_norm_p1"] = r.lp_norm_p1;
    j["quartic"] = r.quartic;
    j["second"] = r.second;
    j["el_residual_sup"] = r.el_residual_sup;
    j["el_residual_l2"] = r.el_residual_l2;
    j["grad_norm"] = r.grad_norm;
    j["iterations"] = r.iterations;
    return j;
}

void write_wave_csv(std::ostream& os, const RealField& f) {
    const SpectralGrid& g = f.grid();
    os << std::setprecision(17);
    if (g.dim() == 1) {
        os << "x,phi\n";
        for (int i = 0; i < g.n(); ++i) os << g.coordinate(0, i) << ',' << f[std::size_t(i)] << '\n';
    } else {
        os << "x,y,phi\n";
        for (int i = 0; i < g.n(); ++i)
            for (int k = 0; k < g.n(); ++k)
                os << g.coordinate(0, i) << ',' << g.coordinate(1, k) << ',' << f[std::size_t(i) * g.n() + k] << '\n';
    }
}

void write_plot_data(std::ostream& os, const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "plot columns differ in length");
    os << std::setprecision(17);
    for (std::size_t i = 0; i < x.size(); ++i) os << x[i] << ' ' << y[i] << '\n';
}

}  // namespace gsf
