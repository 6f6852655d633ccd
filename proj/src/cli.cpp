#include "oamsim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "oamsim/hologram.hpp"
#include "oamsim/io.hpp"

namespace oamsim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---- JSON reading -------------------------------------------------------

std::string join_key(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    require_object(j, path);
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(join_key(path, key), "unknown key");
    }
}

template <class T>
void read(const json& j, const std::string& path, const char* key, T& dst) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    const std::string name = join_key(path, key);
    if constexpr (std::is_same_v<T, int>) {
        if (!it->is_number_integer()) throw ConfigError(name, "expected an integer");
        const auto v = it->get<long long>();
        if (v < -1000000 || v > 1000000) throw ConfigError(name, "integer out of range");
        dst = static_cast<int>(v);
    } else if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) throw ConfigError(name, "expected a number");
        dst = it->get<double>();
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw ConfigError(name, "expected a string");
        dst = it->get<std::string>();
    }
}

void read_optional(const json& j, const std::string& path, const char* key, std::optional<double>& dst) {
    if (!j.contains(key)) return;
    double v = 0.0;
    read(j, path, key, v);
    dst = v;
}

template <class T>
void read_list(const json& j, const std::string& path, const char* key, std::vector<T>& dst) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    const std::string name = join_key(path, key);
    if (!it->is_array()) throw ConfigError(name, "expected an array");
    std::vector<T> out;
    for (std::size_t i = 0; i < it->size(); ++i) {
        const json& e = (*it)[i];
        const std::string en = name + "[" + std::to_string(i) + "]";
        if constexpr (std::is_same_v<T, int>) {
            if (!e.is_number_integer()) throw ConfigError(en, "expected an integer");
            out.push_back(e.get<int>());
        } else {
            if (!e.is_number()) throw ConfigError(en, "expected a number");
            out.push_back(e.get<double>());
        }
    }
    dst = std::move(out);
}

cplx read_complex(const json& e, const std::string& name) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        return {e[0].get<double>(), e[1].get<double>()};
    }
    throw ConfigError(name, "expected a number or a [re, im] pair");
}

Point2 read_point(const json& e, const std::string& name) {
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        return {e[0].get<double>(), e[1].get<double>()};
    }
    throw ConfigError(name, "expected an [x, y] pair");
}

FilterModel parse_model(const std::string& s, const std::string& key) {
    if (s == "wave_optics") return FilterModel::wave_optics;
    if (s == "first_order") return FilterModel::first_order;
    throw ConfigError(key, "expected \"wave_optics\" or \"first_order\", got \"" + s + "\"");
}

void set_factor(std::vector<LossFactor>& factors, const std::string& name, double value) {
    for (auto& f : factors) {
        if (f.name == name) {
            f.value = value;
            return;
        }
    }
    factors.push_back({name, value});
}

void apply_json(const json& root, RunConfig& c) {
    reject_unknown(root, "", {"grid", "beam", "state", "filters", "lg", "hologram", "conservation", "scan",
                              "budget", "output_dir", "seed"});
    if (root.contains("grid")) {
        const json& g = root["grid"];
        reject_unknown(g, "grid", {"n", "extent"});
        read(g, "grid", "n", c.samples);
        read_optional(g, "grid", "extent", c.extent);
    }
    if (root.contains("beam")) {
        const json& b = root["beam"];
        reject_unknown(b, "beam", {"waist", "signal_wavelength", "pump_wavelength"});
        read(b, "beam", "waist", c.waist);
        read(b, "beam", "signal_wavelength", c.signal_wavelength);
        read(b, "beam", "pump_wavelength", c.pump_wavelength);
    }
    if (root.contains("state")) {
        const json& s = root["state"];
        reject_unknown(s, "state", {"pump_l", "L", "amplitudes"});
        read(s, "state", "pump_l", c.pump_l);
        read(s, "state", "L", c.state_L);
        if (s.contains("amplitudes")) {
            const json& a = s["amplitudes"];
            if (!a.is_array()) throw ConfigError("state.amplitudes", "expected an array");
            c.amplitudes.clear();
            for (std::size_t i = 0; i < a.size(); ++i) {
                c.amplitudes.push_back(read_complex(a[i], "state.amplitudes[" + std::to_string(i) + "]"));
            }
        }
    }
    if (root.contains("filters")) {
        const json& f = root["filters"];
        reject_unknown(f, "filters", {"fiber_waist", "truncation", "line_density", "blaze_depth",
                                      "first_order_efficiency", "aperture", "model"});
        read_optional(f, "filters", "fiber_waist", c.fiber_waist);
        read(f, "filters", "truncation", c.truncation);
        read(f, "filters", "line_density", c.line_density);
        read(f, "filters", "blaze_depth", c.blaze_depth);
        read(f, "filters", "first_order_efficiency", c.first_order_efficiency);
        read(f, "filters", "aperture", c.aperture);
        std::string model;
        read(f, "filters", "model", model);
        if (!model.empty()) c.model = parse_model(model, "filters.model");
    }
    if (root.contains("lg")) {
        const json& l = root["lg"];
        reject_unknown(l, "lg", {"l", "p"});
        read(l, "lg", "l", c.lg_l);
        read(l, "lg", "p", c.lg_p);
    }
    if (root.contains("hologram")) {
        const json& h = root["hologram"];
        reject_unknown(h, "hologram", {"delta_m", "offset"});
        read(h, "hologram", "delta_m", c.hologram_delta_m);
        if (h.contains("offset")) c.hologram_offset = read_point(h["offset"], "hologram.offset");
    }
    if (root.contains("conservation")) {
        const json& k = root["conservation"];
        reject_unknown(k, "conservation", {"l1", "l2", "mean_pairs"});
        read_list(k, "conservation", "l1", c.l1_list);
        read_list(k, "conservation", "l2", c.l2_list);
        read(k, "conservation", "mean_pairs", c.mean_pairs);
    }
    if (root.contains("scan")) {
        const json& s = root["scan"];
        reject_unknown(s, "scan", {"shifts", "raster_points", "raster_half_width", "delta_m", "relative_phase"});
        read_list(s, "scan", "shifts", c.shifts);
        read(s, "scan", "raster_points", c.raster_points);
        read(s, "scan", "raster_half_width", c.raster_half_width);
        read(s, "scan", "delta_m", c.scan_delta_m);
        read(s, "scan", "relative_phase", c.relative_phase);
    }
    if (root.contains("budget")) {
        const json& b = root["budget"];
        require_object(b, "budget");
        std::vector<LossFactor> factors;
        for (const auto& [name, value] : b.items()) {
            if (!value.is_number()) throw ConfigError("budget." + name, "expected a number");
            factors.push_back({name, value.get<double>()});
        }
        c.budget = std::move(factors);
    }
    read(root, "", "output_dir", c.output_dir);
    if (root.contains("seed")) {
        const json& s = root["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
            throw ConfigError("seed", "expected a non-negative integer");
        }
        c.seed = s.get<std::uint64_t>();
    }
}

// ---- Validation ---------------------------------------------------------

void check(bool ok, const char* key, const std::string& message) {
    if (!ok) throw ConfigError(key, message);
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

} // namespace

RunConfig parse_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
    RunConfig c;
    apply_json(root, c);
    return c;
}

void RunConfig::validate() const {
    check(samples >= 16 && samples <= 4096 && samples % 2 == 0, "grid.n", "must be an even integer in [16, 4096]");
    check(positive(waist), "beam.waist", "must be positive");
    const double ext = extent.value_or(SetupConfig::kExtentInWaists * waist);
    check(positive(ext), "grid.extent", "must be positive");
    check(positive(signal_wavelength), "beam.signal_wavelength", "must be positive");
    check(positive(pump_wavelength), "beam.pump_wavelength", "must be positive");
    check(!fiber_waist || positive(*fiber_waist), "filters.fiber_waist", "must be positive");
    check(truncation >= 0 && truncation <= 32, "filters.truncation", "must lie in [0, 32]");
    check(positive(line_density), "filters.line_density", "must be positive");
    const double nyquist = 0.5 * samples / ext;
    check(line_density <= nyquist, "filters.line_density",
          "first-order carrier exceeds the grid Nyquist frequency " + io::format_number(nyquist));
    check(blaze_depth > 0.0 && blaze_depth <= kTwoPi + 1e-12, "filters.blaze_depth", "must lie in (0, 2pi]");
    check(first_order_efficiency >= 0.0 && first_order_efficiency <= 1.0, "filters.first_order_efficiency",
          "must lie in [0, 1]");
    check(positive(aperture), "filters.aperture", "must be positive");

    check(state_L >= 0 && state_L <= truncation - std::abs(pump_l), "state.L",
          "must lie in [0, filters.truncation - |state.pump_l|]");
    check(amplitudes.empty() || amplitudes.size() == static_cast<std::size_t>(2 * state_L + 1),
          "state.amplitudes", "expected 2L+1 entries");
    if (!amplitudes.empty()) {
        double total = 0.0;
        for (const cplx& a : amplitudes) total += std::norm(a);
        check(total > 0.0 && std::isfinite(total), "state.amplitudes", "must be finite and not all zero");
    }

    check(lg_p >= 0, "lg.p", "must be >= 0");
    check(std::abs(lg_l) <= 64, "lg.l", "must lie in [-64, 64]");
    check(std::abs(hologram_delta_m) <= 64, "hologram.delta_m", "must lie in [-64, 64]");
    check(std::isfinite(hologram_offset.x) && std::isfinite(hologram_offset.y), "hologram.offset",
          "must be finite");

    check(!l1_list.empty(), "conservation.l1", "must not be empty");
    check(!l2_list.empty(), "conservation.l2", "must not be empty");
    for (int l : l1_list) check(std::abs(l) <= truncation, "conservation.l1", "entries must lie within +-truncation");
    for (int l : l2_list) check(std::abs(l) <= truncation, "conservation.l2", "entries must lie within +-truncation");
    check(mean_pairs >= 0.0 && std::isfinite(mean_pairs), "conservation.mean_pairs", "must be >= 0");

    const double half_grid = 0.5 * ext - 0.5 * ext / samples;
    check(!shifts.empty(), "scan.shifts", "must not be empty");
    for (double s : shifts) {
        check(s >= 0.0 && s * waist < half_grid, "scan.shifts", "entries must be >= 0 and inside the grid");
    }
    check(raster_points >= 1 && raster_points <= 401, "scan.raster_points", "must lie in [1, 401]");
    check(raster_half_width >= 0.0 && raster_half_width * waist <= half_grid, "scan.raster_half_width",
          "raster must lie inside the grid");
    check(scan_delta_m != 0 && std::abs(scan_delta_m) <= 2, "scan.delta_m", "must be +-1 or +-2");
    check(std::abs(scan_delta_m) <= truncation, "scan.delta_m", "must lie within +-truncation");
    check(std::isfinite(relative_phase), "scan.relative_phase", "must be finite");

    check(!budget.empty(), "budget", "needs at least one factor");
    for (const auto& f : budget) {
        if (!(f.value >= 0.0 && f.value <= 1.0)) throw ConfigError("budget." + f.name, "must lie in [0, 1]");
    }
}

SetupConfig RunConfig::setup() const {
    SetupConfig s;
    s.grid = GridSpec(samples, extent.value_or(SetupConfig::kExtentInWaists * waist));
    s.beam = BeamParams(waist, signal_wavelength);
    s.fiber_waist = fiber_waist.value_or(waist);
    s.truncation = truncation;
    s.hologram.line_density = line_density;
    s.hologram.blaze_depth = blaze_depth;
    s.hologram.first_order_efficiency = first_order_efficiency;
    s.hologram.aperture = aperture;
    s.model = model;
    return s;
}

TwoPhotonState RunConfig::state() const {
    if (amplitudes.empty()) return make_uniform_spdc_state(pump_l, state_L);
    return make_spdc_state(pump_l, state_L, amplitudes);
}

SuperpositionSetup RunConfig::superposition() const {
    SuperpositionSetup s;
    s.setup = setup();
    s.state = SuperpositionSetup::make_default_state(relative_phase);
    s.delta_m = scan_delta_m;
    return s;
}

RasterSpec RunConfig::raster() const { return RasterSpec{raster_points, raster_half_width * waist}; }

namespace {

// ---- Subcommands --------------------------------------------------------

using Rows = std::vector<std::vector<std::string>>;

struct Context {
    RunConfig config;
    fs::path out_dir;
    std::ostream& out;
};

void note(Context& ctx, const fs::path& p) { ctx.out << p.string() << '\n'; }

void write_csv(Context& ctx, const std::string& name, const std::vector<std::string>& header, const Rows& rows) {
    const fs::path p = ctx.out_dir / name;
    io::write_csv(p, header, rows);
    note(ctx, p);
}

void write_image(Context& ctx, const std::string& name, int n, const std::vector<std::uint8_t>& grid_order) {
    const fs::path p = ctx.out_dir / name;
    io::write_pgm(p, n, n, io::flip_rows(grid_order, n, n));
    note(ctx, p);
}

void cmd_lg(Context& ctx) {
    const RunConfig& c = ctx.config;
    const SetupConfig s = c.setup();
    const ComplexField f = eval_lg({c.lg_l, c.lg_p}, s.beam, s.grid);
    const std::string stem = "lg_l" + std::to_string(c.lg_l) + "_p" + std::to_string(c.lg_p);
    write_image(ctx, stem + "_intensity.pgm", s.grid.n(), io::intensity_gray(f));
    write_image(ctx, stem + "_phase.pgm", s.grid.n(), io::phase_gray(f));
}

void cmd_hologram(Context& ctx) {
    const RunConfig& c = ctx.config;
    const SetupConfig s = c.setup();
    HologramSpec h = s.hologram;
    h.delta_m = c.hologram_delta_m;
    h.dislocation_offset = c.hologram_offset;
    write_image(ctx, "hologram_dm" + std::to_string(h.delta_m) + ".pgm", s.grid.n(),
                io::mask_gray(mask_phase(h, s.grid)));
}

void cmd_conservation(Context& ctx) {
    const RunConfig& c = ctx.config;
    const ConservationMatrix m = conservation_matrix(c.pump_l, c.l1_list, c.l2_list, c.state(), c.setup());
    std::vector<std::string> header{"l1"};
    for (int l2 : m.l2) header.push_back(std::to_string(l2));
    header.push_back("normalized");
    Rows rows;
    for (std::size_t r = 0; r < m.l1.size(); ++r) {
        std::vector<std::string> row{std::to_string(m.l1[r])};
        for (std::size_t k = 0; k < m.l2.size(); ++k) row.push_back(io::format_number(m.at(r, k)));
        row.push_back(m.row_normalized[r] ? "1" : "0");
        rows.push_back(std::move(row));
    }
    const std::string stem = "conservation_p" + std::to_string(c.pump_l);
    write_csv(ctx, stem + ".csv", header, rows);
    for (std::size_t r = 0; r < m.l1.size(); ++r) {
        if (!m.row_normalized[r]) {
            ctx.out << "warning: row l1=" << m.l1[r] << " has no coincidences and is not normalized\n";
        }
    }

    if (c.mean_pairs > 0.0) {
        std::mt19937_64 rng(c.seed);
        Rows counts;
        for (std::size_t r = 0; r < m.l1.size(); ++r) {
            std::vector<std::string> row{std::to_string(m.l1[r])};
            for (std::size_t k = 0; k < m.l2.size(); ++k) {
                const double p = std::min(1.0, m.raw[r * m.l2.size() + k]);
                row.push_back(std::to_string(poisson_counts(p, c.mean_pairs, rng)));
            }
            counts.push_back(std::move(row));
        }
        header.pop_back();
        write_csv(ctx, stem + "_counts.csv", header, counts);
    }
}

void cmd_scan(Context& ctx) {
    const RunConfig& c = ctx.config;
    const SuperpositionExperiment exp(c.superposition(), c.raster());
    const auto offsets = c.raster().offsets();
    const int side = c.raster_points;
    Rows summary;
    for (std::size_t k = 0; k < c.shifts.size(); ++k) {
        const double shift = c.shifts[k] * c.waist;
        const ScanMap ent = exp.scan(CorrelationModel::entangled, shift);
        const ScanMap mix = exp.scan(CorrelationModel::mixture, shift);
        const ProjectionVector arm1 = exp.arm1_projector(shift);
        const ScanZero zero = exp.locate_zero(arm1, ent.argmin_position());
        const double mix_at_zero = exp.value_at(CorrelationModel::mixture, arm1, zero.position);

        Rows map_rows;
        for (std::size_t i = 0; i < offsets.size(); ++i) {
            map_rows.push_back({io::format_number(offsets[i].x), io::format_number(offsets[i].y),
                                io::format_number(ent.values[i]), io::format_number(mix.values[i])});
        }
        const std::string stem = "scan_s" + std::to_string(k);
        write_csv(ctx, stem + ".csv", {"x", "y", "entangled", "mixture"}, map_rows);
        write_image(ctx, stem + "_entangled.pgm", side, io::value_gray(ent.values));
        write_image(ctx, stem + "_mixture.pgm", side, io::value_gray(mix.values));

        const auto ratio = [](double v, double mx) { return mx > 0.0 ? v / mx : 0.0; };
        summary.push_back({io::format_number(c.shifts[k]), io::format_number(shift),
                           io::format_number(ent.max_value), io::format_number(ratio(ent.min_value, ent.max_value)),
                           io::format_number(zero.position.x), io::format_number(zero.position.y),
                           io::format_number(ratio(zero.value, ent.max_value)),
                           io::format_number(ratio(mix_at_zero, mix.max_value)), zero.converged ? "1" : "0"});
    }
    write_csv(ctx, "scan_summary.csv",
              {"shift_w", "shift_mm", "entangled_max", "raster_min_ratio", "zero_x", "zero_y", "zero_ratio",
               "mixture_at_zero_ratio", "converged"},
              summary);
}

void cmd_locus(Context& ctx) {
    const RunConfig& c = ctx.config;
    std::vector<double> shifts_mm;
    for (double s : c.shifts) shifts_mm.push_back(s * c.waist);
    const auto rows = singularity_locus(shifts_mm, c.superposition());
    Rows out;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const LocusRow& r = rows[k];
        out.push_back({io::format_number(c.shifts[k]), io::format_number(r.shift),
                       io::format_number(r.amplitude_ratio), io::format_number(r.radius),
                       io::format_number(r.angle), r.found ? "1" : "0", std::to_string(r.zeros.size())});
        if (!r.found) ctx.out << "warning: no singularity found at shift " << io::format_number(r.shift) << " mm\n";
    }
    write_csv(ctx, "locus.csv",
              {"shift_w", "shift_mm", "amplitude_ratio", "radius_mm", "angle_rad", "found", "zeros"}, out);
}

void cmd_budget(Context& ctx) {
    const double eta = efficiency_budget(LossBudget(ctx.config.budget));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", eta);
    ctx.out << buf << '\n';
}

fs::path resolve_out_dir(const RunConfig& c, const std::string& flag) {
    if (!flag.empty()) return flag;
    if (!c.output_dir.empty()) return c.output_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return ".";
}

bool prepare_out_dir(const fs::path& dir, std::ostream& err) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        err << "error: cannot create output directory '" << dir.string() << "'"
            << (ec ? ": " + ec.message() : std::string{}) << '\n';
        return false;
    }
    const fs::path probe = dir / ".oamsim_write_probe";
    {
        std::ofstream os(probe);
        if (!os) {
            err << "error: output directory '" << dir.string() << "' is not writable\n";
            return false;
        }
    }
    fs::remove(probe, ec);
    return true;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("--config", "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

int run(std::span<const std::string> argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-photon orbital angular momentum simulator", argv.empty() ? "oamsim" : argv[0]};
    app.require_subcommand(1, 1);

    std::string config_path, out_flag, model_flag;
    int n_flag = 0;
    double waist_flag = 0.0;
    std::uint64_t seed_flag = 0;
    auto* o_config = app.add_option("--config", config_path, "JSON configuration file");
    auto* o_out = app.add_option("--out", out_flag, std::string("Output directory (default $") + kOutputDirEnv + " or .)");
    auto* o_seed = app.add_option("--seed", seed_flag, "Random seed");
    auto* o_n = app.add_option("--n", n_flag, "Grid samples per side");
    auto* o_waist = app.add_option("--waist", waist_flag, "Beam waist, mm");
    auto* o_model = app.add_option("--model", model_flag, "Filter model: wave_optics or first_order");
    (void)o_config;

    int l_flag = 0, p_flag = 0, dm_flag = 0, pump_flag = 0, points_flag = 0;
    double phase_flag = 0.0;
    std::vector<double> shift_flag;
    std::vector<std::string> factor_flag;

    auto* lg = app.add_subcommand("lg", "Render a Laguerre-Gaussian mode as intensity and phase images");
    auto* o_l = lg->add_option("--l", l_flag, "Azimuthal index");
    auto* o_p = lg->add_option("--p", p_flag, "Radial index");

    auto* holo = app.add_subcommand("hologram", "Export a fork hologram phase mask");
    auto* o_dm = holo->add_option("--delta-m", dm_flag, "Number of dislocations");

    auto* cons = app.add_subcommand("conservation", "Coincidence matrix for l1 x l2 analyzers");
    auto* o_pump = cons->add_option("--pump", pump_flag, "Pump charge");

    auto* scan = app.add_subcommand("scan", "Arm-2 coincidence maps for a displaced arm-1 hologram");
    auto* o_shift = scan->add_option("--shift", shift_flag, "Dislocation shifts in beam waists");
    auto* o_points = scan->add_option("--points", points_flag, "Raster points per side");
    auto* o_phase = scan->add_option("--phase", phase_flag, "Relative phase of the (2,-2) term, rad");

    auto* locus = app.add_subcommand("locus", "Singularity positions of the conditional arm-2 field");
    auto* o_lshift = locus->add_option("--shift", shift_flag, "Dislocation shifts in beam waists");
    auto* o_lphase = locus->add_option("--phase", phase_flag, "Relative phase of the (2,-2) term, rad");

    auto* budget = app.add_subcommand("budget", "Product of the detection efficiency factors");
    budget->add_option("--factor", factor_flag, "Override or add a factor, name=value");

    for (auto* sub : {lg, holo, cons, scan, locus, budget}) sub->fallthrough();

    std::vector<const char*> cargv;
    for (const auto& a : argv) cargv.push_back(a.c_str());
    if (cargv.empty()) cargv.push_back("oamsim");
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    Context ctx{RunConfig{}, {}, out};
    RunConfig& c = ctx.config;
    try {
        if (!config_path.empty()) c = parse_config(read_file(config_path));
        if (o_seed->count()) c.seed = seed_flag;
        if (o_n->count()) c.samples = n_flag;
        if (o_waist->count()) c.waist = waist_flag;
        if (o_model->count()) c.model = parse_model(model_flag, "filters.model");
        if (o_l->count()) c.lg_l = l_flag;
        if (o_p->count()) c.lg_p = p_flag;
        if (o_dm->count()) c.hologram_delta_m = dm_flag;
        if (o_pump->count()) c.pump_l = pump_flag;
        if (o_shift->count() || o_lshift->count()) c.shifts = shift_flag;
        if (o_points->count()) c.raster_points = points_flag;
        if (o_phase->count() || o_lphase->count()) c.relative_phase = phase_flag;
        for (const auto& f : factor_flag) {
            const auto eq = f.find('=');
            if (eq == std::string::npos || eq == 0) throw ConfigError("budget", "--factor expects name=value");
            const std::string name = f.substr(0, eq);
            double v = 0.0;
            try {
                std::size_t used = 0;
                v = std::stod(f.substr(eq + 1), &used);
                if (used != f.size() - eq - 1) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw ConfigError("budget." + name, "not a number");
            }
            set_factor(c.budget, name, v);
        }
        c.validate();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (budget->parsed()) {
            cmd_budget(ctx);
            return 0;
        }
        ctx.out_dir = resolve_out_dir(c, o_out->count() ? out_flag : std::string{});
        if (!prepare_out_dir(ctx.out_dir, err)) return 1;
        if (lg->parsed()) cmd_lg(ctx);
        else if (holo->parsed()) cmd_hologram(ctx);
        else if (cons->parsed()) cmd_conservation(ctx);
        else if (scan->parsed()) cmd_scan(ctx);
        else if (locus->parsed()) cmd_locus(ctx);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace oamsim::cli
