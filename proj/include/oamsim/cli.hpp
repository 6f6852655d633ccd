#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oamsim/biphoton.hpp"
#include "oamsim/scenarios.hpp"

namespace oamsim::cli {

/// Default output directory when neither --out nor "output_dir" is given.
inline constexpr const char* kOutputDirEnv = "OAMSIM_OUTPUT_DIR";

/// Invalid configuration value. `key()` is the dotted JSON path, e.g. "grid.n".
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

  private:
    std::string key_;
};

/// Everything a run needs. Lengths in mm, angles in radians; scan shifts and
/// raster half width are in units of the beam waist.
struct RunConfig {
    int samples = SetupConfig::kDefaultSamples;
    /// Grid side; unset means 8 beam waists.
    std::optional<double> extent;
    double waist = SetupConfig::kDefaultWaist;
    double signal_wavelength = BeamParams::kSignalWavelength;
    double pump_wavelength = BeamParams::kPumpWavelength;

    int pump_l = 0;
    int state_L = 2;
    /// 2L+1 amplitudes, l = -L first; empty means equal weights.
    std::vector<cplx> amplitudes;

    /// Unset means equal to the beam waist.
    std::optional<double> fiber_waist;
    int truncation = 4;
    double line_density = 20.0;
    double blaze_depth = kTwoPi;
    double first_order_efficiency = 0.18;
    double aperture = 5.0;
    FilterModel model = FilterModel::wave_optics;

    int lg_l = 1;
    int lg_p = 0;

    int hologram_delta_m = 1;
    Point2 hologram_offset{};

    std::vector<int> l1_list{0, 1, 2};
    std::vector<int> l2_list{-2, -1, 0, 1, 2};
    /// Pairs per setting for the optional Poisson count table; 0 disables it.
    double mean_pairs = 0.0;

    std::vector<double> shifts{std::begin(kDefaultShiftSchedule), std::end(kDefaultShiftSchedule)};
    int raster_points = 41;
    double raster_half_width = 2.0;
    int scan_delta_m = -2;
    double relative_phase = 0.0;

    std::vector<LossFactor> budget = LossBudget::reference_setup().factors();

    std::string output_dir;
    std::uint64_t seed = 1;

    /// Throws ConfigError naming the first offending key.
    void validate() const;
    SetupConfig setup() const;
    TwoPhotonState state() const;
    SuperpositionSetup superposition() const;
    RasterSpec raster() const;
};

/// Parses a JSON document onto the defaults. Unknown keys are rejected.
RunConfig parse_config(std::string_view json_text);

/// Full command line including the program name. Returns the process exit
/// code: 0 success, 1 runtime or output failure, 2 configuration or usage error.
int run(std::span<const std::string> argv, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

} // namespace oamsim::cli
