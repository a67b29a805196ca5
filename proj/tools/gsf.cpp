// gsf: command-line front end for the normalized-wave toolkit.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gsf/diagnostics.hpp"
#include "gsf/errors.hpp"
#include "gsf/io.hpp"
#include "gsf/kernels.hpp"
#include "gsf/linops.hpp"
#include "gsf/minimize.hpp"
#include "gsf/stability.hpp"

using namespace gsf;

namespace {

enum Exit { kOk = 0, kInternal = 1, kNonConvergence = 2, kRegime = 3, kUnstable = 4, kIo = 5 };

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::NonConvergence:
        case ErrorKind::Collapse:
        case ErrorKind::ZeroMinimizer:
        case ErrorKind::SymbolNotPositive:
        case ErrorKind::NonFinite: return kNonConvergence;
        case ErrorKind::RegimeRefusal: return kRegime;
        case ErrorKind::Parse:
        case ErrorKind::Io:
        case ErrorKind::InvalidArgument:
        case ErrorKind::GridMismatch: return kIo;
        default: return kInternal;
    }
}

int report_error(const std::string& kind, const std::string& msg, int code) {
    Json j;
    j["error"] = {{"kind", kind}, {"message", msg}, {"exit_code", code}};
    std::cerr << j.dump() << std::endl;
    return code;
}

struct Cli {
    std::string config;
    std::vector<std::string> sets;
    // Convenience flags, applied after --config and before --set.
    std::string model, family, probe, format, input, out_dir, prefix;
    std::optional<double> b, p, lambda, omega, length;
    std::optional<int> dim, epsilon, n, parallel;
    std::string lambdas, eps;
    bool force = false, expect_stable = false, block_check = false, plot = false, cold = false;
};

RunConfig build_config(const Cli& c) {
    RunConfig cfg;
    if (!c.config.empty()) load_config(cfg, c.config);
    auto set = [&](const std::string& k, const std::string& v) { apply_setting(cfg, k, v, "--flag"); };
    auto num = [](double v) {
        std::ostringstream os;
        os << std::setprecision(17) << v;
        return os.str();
    };
    if (!c.model.empty()) set("model.variant", c.model);
    if (c.b) set("model.b", num(*c.b));
    if (c.p) set("model.p", num(*c.p));
    if (c.dim) set("model.dim", std::to_string(*c.dim));
    if (c.epsilon) set("model.epsilon", std::to_string(*c.epsilon));
    if (c.n) set("grid.n", std::to_string(*c.n));
    if (c.length) set("grid.length", num(*c.length));
    if (c.lambda) set("task.lambda", num(*c.lambda));
    if (c.omega) set("task.omega", num(*c.omega));
    if (!c.lambdas.empty()) set("task.lambdas", c.lambdas);
    if (!c.eps.empty()) set("task.eps", c.eps);
    if (!c.probe.empty()) set("task.probe", c.probe);
    if (!c.family.empty()) set("task.family", c.family);
    if (c.parallel) set("task.parallel", std::to_string(*c.parallel));
    if (!c.input.empty()) set("task.input", c.input);
    if (!c.format.empty()) set("output.format", c.format);
    if (!c.out_dir.empty()) set("output.dir", c.out_dir);
    if (!c.prefix.empty()) set("output.prefix", c.prefix);
    if (c.force) cfg.solve.force = true;
    if (c.expect_stable) cfg.expect_stable = true;
    if (c.block_check) cfg.block_check = true;
    if (c.plot) cfg.plot = true;
    if (c.cold) cfg.warm_start = false;
    for (const std::string& s : c.sets) apply_assignment(cfg, s);
    return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& suffix) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / (cfg.prefix + suffix)).string();
}

void emit(const RunConfig& cfg, const std::string& suffix, const Json& j) {
    const std::string text = j.dump(2) + "\n";
    write_text_file(out_path(cfg, suffix), text);
    std::cout << text;
}

Wave input_or_solve(const RunConfig& cfg) {
    if (!cfg.input.empty()) return load_wave(cfg.input).wave;
    return normalized_gradient_flow(cfg.model(), cfg.grid(), cfg.task_lambda(), cfg.solve);
}

// ---------------------------------------------------------------- commands

int cmd_solve(const RunConfig& cfg) {
    const ModelSpec model = cfg.model();
    const Wave w = normalized_gradient_flow(model, cfg.grid(), cfg.task_lambda(), cfg.solve);
    save_wave(out_path(cfg, ".gsfw"), w);
    Json j = wave_summary(w);
    j["pohozaev"] = to_json(pohozaev_residuals(w));
    j["virial"] = virial_residual(w);
    emit(cfg, "_solve.json", j);
    return kOk;
}

int cmd_petviashvili(const RunConfig& cfg) {
    const Wave w = petviashvili(cfg.model(), cfg.grid(), cfg.omega, cfg.solve);
    save_wave(out_path(cfg, ".gsfw"), w);
    emit(cfg, "_petviashvili.json", wave_summary(w));
    return kOk;
}

int cmd_stability(const RunConfig& cfg) {
    const Wave w = input_or_solve(cfg);
    const LinearizedPair pair = assemble(w.model, w);
    NlsOptions opt;
    opt.block_check = cfg.block_check;
    const StabilityReport r = analyze_stability(w, pair, opt);
    Json j;
    j["wave"] = wave_summary(w);
    j["stability"] = to_json(r);
    emit(cfg, "_stability.json", j);
    if (cfg.plot) {
        std::vector<double> re, im;
        for (const auto& z : r.eigenvalues) {
            re.push_back(z.real());
            im.push_back(z.imag());
        }
        std::ofstream os(out_path(cfg, "_spectrum.dat"));
        write_plot_data(os, re, im);
    }
    if (cfg.expect_stable && r.verdict == Verdict::Unstable) return kUnstable;
    return kOk;
}

int cmd_sweep(const RunConfig& cfg) {
    SweepConfig sc;
    sc.solve = cfg.solve;
    sc.parallel = cfg.parallel;
    sc.warm_start = cfg.warm_start && cfg.parallel <= 1;
    const SweepResult res = sweep(cfg.model(), cfg.grid(), cfg.lambdas, sc);
    {
        std::ofstream os(out_path(cfg, "_sweep.csv"));
        if (!os) throw Error(ErrorKind::Io, "cannot write sweep CSV");
        write_sweep_csv(os, res.rows);
    }
    Json j;
    j["model"] = to_json(cfg.model());
    Json rows = Json::array();
    for (const SweepRow& r : res.rows) rows.push_back(to_json(r));
    j["rows"] = rows;
    j["report"] = to_json(res.report);
    emit(cfg, "_sweep.json", j);
    if (cfg.plot) {
        std::vector<double> l, m, w;
        for (const SweepRow& r : res.rows)
            if (r.ok) {
                l.push_back(r.lambda);
                m.push_back(r.m);
                w.push_back(r.omega);
            }
        std::ofstream om(out_path(cfg, "_m.dat")), ow(out_path(cfg, "_omega.dat"));
        write_plot_data(om, l, m);
        write_plot_data(ow, l, w);
    }
    return kOk;
}

int cmd_probe(const RunConfig& cfg) {
    Json j;
    if (cfg.probe == "gns") {
        GnsFamilySpec spec{gns_form_from_string(cfg.family), cfg.eps};
        j["gns"] = to_json(gns_probe(cfg.model(), spec));
    } else {
        const Wave w = input_or_solve(cfg);
        const ScalingFamily fam = cfg.family == "anisotropic" ? ScalingFamily::Anisotropic : ScalingFamily::Isotropic;
        j["wave"] = wave_summary(w);
        j["scaling"] = to_json(scaling_probe(w.model, w.field, cfg.eps, fam));
    }
    emit(cfg, "_probe.json", j);
    return kOk;
}

int cmd_verify(const RunConfig& cfg) {
    const GridPtr grid = make_grid(1, 1024, 120.0);
    const RealField phi0 = explicit_soliton(grid);
    Json checks = Json::array();
    bool ok = true;
    auto check = [&](const std::string& name, double value, double limit, bool pass) {
        checks.push_back({{"check", name}, {"value", value}, {"limit", limit}, {"pass", pass}});
        ok = ok && pass;
    };
    for (const ModelSpec& m : {ModelSpec(MixedNLS{-1, 1.0, 3.0, 1}), ModelSpec(Kawahara{-1.0, 3.0})}) {
        const ResidualNorms r = el_residual(m, phi0, kExplicitSolitonOmega);
        check(m.tag() + " residual sup", r.sup, 1e-8, r.sup < 1e-8);
        const double w = omega_from_field(m, phi0);
        check(m.tag() + " |omega - 0.16|", std::fabs(w - kExplicitSolitonOmega), 1e-9, std::fabs(w - kExplicitSolitonOmega) < 1e-9);
    }
    const double lam = norm_sq(phi0);
    check("|lambda - 4/sqrt(5)|", std::fabs(lam - explicit_soliton_lambda()), 1e-9, std::fabs(lam - explicit_soliton_lambda()) < 1e-9);

    // Stability of the exact wave on a grid small enough for dense eigensolves.
    const ModelSpec kw(Kawahara{-1.0, 3.0});
    const GridPtr small = make_grid(1, 256, 60.0);
    const Wave w = make_wave(kw, explicit_soliton(small), SolverKind::Imported);
    const StabilityReport r = analyze_stability(w, assemble(kw, w));
    check("n(L+)", r.n_lplus, 1, r.n_lplus == 1);
    check("vk_index", r.vk_index, 0.0, r.vk_index < 0.0);
    check("verdict Stable", r.max_real_part, r.stab_tol, r.verdict == Verdict::Stable);

    Json j;
    j["all_pass"] = ok;
    j["checks"] = checks;
    j["stability"] = to_json(r);
    emit(cfg, "_verify.json", j);
    return ok ? kOk : kUnstable;
}

int cmd_export(const RunConfig& cfg) {
    if (cfg.input.empty()) throw Error(ErrorKind::InvalidArgument, "export needs --input");
    const LoadedWave lw = load_wave(cfg.input);
    if (cfg.format == "csv") {
        std::ofstream os(out_path(cfg, ".csv"));
        if (!os) throw Error(ErrorKind::Io, "cannot write CSV");
        write_wave_csv(os, lw.wave.field);
    } else if (cfg.format == "plot") {
        if (lw.wave.field.grid().dim() != 1) throw Error(ErrorKind::InvalidArgument, "plot export is one-dimensional");
        std::vector<double> x, y(lw.wave.field.values());
        for (int i = 0; i < lw.wave.field.grid().n(); ++i) x.push_back(lw.wave.field.grid().coordinate(0, i));
        std::ofstream os(out_path(cfg, ".dat"));
        write_plot_data(os, x, y);
    } else {
        Json j = wave_summary(lw.wave);
        j["timestamp"] = lw.timestamp;
        j["content_hash"] = lw.header.at("content_hash");
        j["field"] = lw.wave.field.values();
        write_text_file(out_path(cfg, ".json"), j.dump() + "\n");
    }
    Json s;
    s["exported"] = cfg.input;
    s["format"] = cfg.format;
    s["lambda_header"] = lw.wave.lambda;
    s["lambda_recomputed"] = norm_sq(lw.wave.field);
    std::cout << s.dump(2) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    kernels::configure_threads_from_env();
    CLI::App app{"Normalized waves for fourth-order dispersive models"};
    app.require_subcommand(1);
    Cli c;

    auto common = [&](CLI::App* s) {
        s->add_option("--config", c.config, "Config file (key = value, dotted keys)");
        s->add_option("--set", c.sets, "Override a config key: key=value (repeatable)");
        s->add_option("--model", c.model, "kawahara | mixed | laplacian");
        s->add_option("--b", c.b, "Second-order coefficient (Kawahara, Laplacian)");
        s->add_option("--p", c.p, "Nonlinearity power");
        s->add_option("--dim", c.dim, "Spatial dimension (NLS)");
        s->add_option("--epsilon", c.epsilon, "Sign of the mixed term (+1 or -1)");
        s->add_option("--n", c.n, "Grid points per axis");
        s->add_option("--length", c.length, "Box length per axis");
        s->add_option("--out-dir", c.out_dir, "Output directory");
        s->add_option("--prefix", c.prefix, "Output file prefix");
    };

    CLI::App* solve = app.add_subcommand("solve", "Normalized gradient flow at fixed mass");
    common(solve);
    solve->add_option("--lambda", c.lambda, "Mass constraint");
    solve->add_flag("--force", c.force, "Proceed in the unbounded-energy regime");

    CLI::App* pet = app.add_subcommand("petviashvili", "Petviashvili iteration at fixed omega");
    common(pet);
    pet->add_option("--omega", c.omega, "Wave speed / frequency");

    CLI::App* stab = app.add_subcommand("stability", "Linearized spectrum and index criteria");
    common(stab);
    stab->add_option("--input", c.input, "Wave file (otherwise solve at --lambda)");
    stab->add_option("--lambda", c.lambda, "Mass constraint");
    stab->add_flag("--expect-stable", c.expect_stable, "Exit 4 when the verdict is Unstable");
    stab->add_flag("--block-check", c.block_check, "Cross-check NLS spectra against the 2N block");
    stab->add_flag("--plot", c.plot, "Write eigenvalue scatter data");

    CLI::App* sw = app.add_subcommand("sweep", "m(lambda), omega(lambda) sweep with property checks");
    common(sw);
    sw->add_option("--lambdas", c.lambdas, "Comma-separated masses");
    sw->add_option("--parallel", c.parallel, "Concurrent cold-started rows");
    sw->add_flag("--cold", c.cold, "Disable warm starts");
    sw->add_flag("--plot", c.plot, "Write m and omega plot data");

    CLI::App* pr = app.add_subcommand("probe", "Scaling-family and GNS probes");
    common(pr);
    pr->add_option("--probe", c.probe, "scaling | gns");
    pr->add_option("--family", c.family, "isotropic | anisotropic | kawahara");
    pr->add_option("--eps", c.eps, "Comma-separated scale parameters");
    pr->add_option("--input", c.input, "Wave file for the scaling probe");
    pr->add_option("--lambda", c.lambda, "Mass for the scaling probe when solving");

    CLI::App* ver = app.add_subcommand("verify", "Exact-soliton battery");
    ver->add_option("--out-dir", c.out_dir, "Output directory");
    ver->add_option("--prefix", c.prefix, "Output file prefix");

    CLI::App* ex = app.add_subcommand("export", "Convert a wave file");
    ex->add_option("--input", c.input, "Wave file")->required();
    ex->add_option("--format", c.format, "csv | json | plot");
    ex->add_option("--out-dir", c.out_dir, "Output directory");
    ex->add_option("--prefix", c.prefix, "Output file prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("Parse", e.what(), kIo);
    }

    try {
        const RunConfig cfg = build_config(c);
        if (solve->parsed()) return cmd_solve(cfg);
        if (pet->parsed()) return cmd_petviashvili(cfg);
        if (stab->parsed()) return cmd_stability(cfg);
        if (sw->parsed()) return cmd_sweep(cfg);
        if (pr->parsed()) return cmd_probe(cfg);
        if (ver->parsed()) return cmd_verify(cfg);
        if (ex->parsed()) return cmd_export(cfg);
    } catch (const Error& e) {
        return report_error(to_string(e.kind()), e.what(), exit_code(e.kind()));
    } catch (const std::filesystem::filesystem_error& e) {
        return report_error("Io", e.what(), kIo);
    } catch (const std::exception& e) {
        return report_error("Internal", e.what(), kInternal);
    }
    return kInternal;
}
