#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gsf/diagnostics.hpp"
#include "gsf/minimize.hpp"
#include "gsf/models.hpp"
#include "gsf/stability.hpp"

namespace gsf {

using Json = nlohmann::ordered_json;

// Flat key = value configuration with dotted section keys. '#' starts a comment.
//
//   model.variant   kawahara | mixed | laplacian        (kawahara)
//   model.b         real; Kawahara and Laplacian         (variant default)
//   model.epsilon   +1 | -1; mixed only                  (-1)
//   model.bmag      |b| >= 0; mixed only                 (1)
//   model.p         real > 1                             (variant default)
//   model.dim       1 | 2; NLS variants                  (variant default)
//   grid.n          power of two >= 64                   (512 in 1D, 64 in 2D)
//   grid.length     real > 0                             (80 in 1D, 40 in 2D)
//   grid.dealias    bool                                 (false)
//   solve.*         SolveConfig fields, seed_profile, seed_width, force
//   task.lambda     real                                 (4/sqrt 5)
//   task.omega      real                                 (0.16)
//   task.lambdas    comma list                           (0.5,1,...,5)
//   task.eps        comma list                           (0.01,0.1,1)
//   task.probe      scaling | gns                        (scaling)
//   task.family     isotropic | anisotropic | kawahara   (isotropic)
//   task.expect_stable, task.block_check, task.warm_start   bool
//   task.parallel   integer >= 1                         (1)
//   task.input      wave file path
//   output.dir, output.prefix, output.format (json | csv | plot), output.plot (bool)
struct RunConfig {
    std::string variant = "kawahara";
    std::optional<double> b, p;
    int epsilon = -1;
    double bmag = 1.0;
    std::optional<int> dim;

    std::optional<int> n;
    std::optional<double> length;
    bool dealias = false;

    SolveConfig solve;

    double lambda = 0.0;  // 0 selects 4/sqrt(5)
    double omega = kExplicitSolitonOmega;
    std::vector<double> lambdas{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
    std::vector<double> eps{0.01, 0.1, 1.0};
    std::string probe = "scaling";
    std::string family = "isotropic";
    bool expect_stable = false;
    bool block_check = false;
    bool warm_start = true;
    int parallel = 1;
    std::string input;

    std::string out_dir = ".";
    std::string prefix = "gsf";
    std::string format = "json";
    bool plot = false;

    ModelSpec model() const;
    GridPtr grid() const;
    double task_lambda() const;
};

// Apply one key/value pair. `where` prefixes error messages (e.g. "run.cfg:12").
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where);
// "key=value" from the command line.
void apply_assignment(RunConfig& cfg, const std::string& assignment);
void parse_config(RunConfig& cfg, std::istream& in, const std::string& source);
void load_config(RunConfig& cfg, const std::string& path);

// ---------------------------------------------------------------- wave files

inline constexpr char kWaveMagic[4] = {'G', 'S', 'F', 'W'};
inline constexpr std::uint16_t kWaveVersion = 1;

struct LoadedWave {
    Wave wave;
    Json header;
    std::string timestamp;
};

std::string sha256_hex(const void* data, std::size_t bytes);
// UTC ISO-8601; SOURCE_DATE_EPOCH overrides the clock when set.
std::string current_timestamp();

std::string encode_wave(const Wave& wave, const std::string& timestamp);
LoadedWave decode_wave(const std::string& bytes);
void save_wave(const std::string& path, const Wave& wave, const std::string& timestamp = current_timestamp());
LoadedWave load_wave(const std::string& path);

// ------------------------------------------------------------------- reports

Json to_json(const ModelSpec& m);
Json to_json(const SpectralGrid& g);
Json wave_summary(const Wave& w);
Json to_json(const StabilityReport& r);
Json to_json(const PohozaevResult& r);
Json to_json(const GnsReport& r);
Json to_json(const std::vector<ScalingRow>& rows);
Json to_json(const PropertyReport& r);
Json to_json(const SweepRow& r);

void write_wave_csv(std::ostream& os, const RealField& f);
void write_plot_data(std::ostream& os, const std::vector<double>& x, const std::vector<double>& y);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace gsf
