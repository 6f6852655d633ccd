#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "oamsim/biphoton.hpp"
#include "oamsim/fieldgrid.hpp"
#include "oamsim/hologram.hpp"
#include "oamsim/lgmodes.hpp"
#include "oamsim/modefilter.hpp"

namespace oamsim {

/// Shared optical parameters for the end-to-end presets.
struct SetupConfig {
    /// Beam waist at the hologram plane, mm.
    static constexpr double kDefaultWaist = 0.25;
    static constexpr int kDefaultSamples = 256;
    /// Grid side in units of the beam waist.
    static constexpr double kExtentInWaists = 8.0;

    GridSpec grid{kDefaultSamples, kExtentInWaists * kDefaultWaist};
    BeamParams beam{kDefaultWaist};
    double fiber_waist = kDefaultWaist;
    /// OAM truncation L of every projector.
    int truncation = 4;
    /// Line density, blaze, efficiency and aperture used by every analyzer.
    /// delta_m and dislocation_offset are set per analyzer.
    HologramSpec hologram{};
    FilterModel model = FilterModel::wave_optics;

    /// Default setup rescaled to another waist (grid extent follows).
    static SetupConfig for_waist(double waist, int samples = kDefaultSamples);
};

/// Mode analyzer for charge l: hologram with delta_m = -l and the given
/// dislocation offset, or no hologram for l = 0. Fiber centered.
FilterConfig analyzer_for(int l, const SetupConfig& setup, Point2 dislocation_offset = {});

/// Projector of analyzer_for(l) under setup.model.
ProjectionVector analyzer_projector(int l, const SetupConfig& setup);

struct ConservationMatrix {
    int pump_l = 0;
    std::vector<int> l1;
    std::vector<int> l2;
    /// Row-major, l2 as columns. Normalized rows sum to 1; rows that could not
    /// be normalized hold the raw coincidence probabilities.
    std::vector<double> values;
    std::vector<bool> row_normalized;
    /// Coincidence probabilities before normalization, same layout.
    std::vector<double> raw;

    double at(std::size_t row, std::size_t col) const { return values[row * l2.size() + col]; }
};

/// Rows whose total is at or below this fraction of the largest row total
/// are treated as carrying no coincidences.
inline constexpr double kEmptyRowThreshold = 1e-9;

ConservationMatrix conservation_matrix(int pump_l, std::span<const int> l1_list,
                                       std::span<const int> l2_list, const TwoPhotonState& state,
                                       const SetupConfig& setup);

/// Same matrix from ideal unit projectors (basis-level computation).
ConservationMatrix conservation_matrix_ideal(int pump_l, std::span<const int> l1_list,
                                             std::span<const int> l2_list,
                                             const TwoPhotonState& state, int truncation = 4);

struct VisibilityResult {
    double i_out = 0.0;
    double i_in = 0.0;
    double visibility = 0.0;
};

/// Coincidences with the arm-1 dislocation out (delta_m = 0 grating) and in
/// (centered delta_m), arm 2 analyzing the partner of l1 = 0.
VisibilityResult dislocation_visibility(const TwoPhotonState& state, int delta_m,
                                        const SetupConfig& setup);

/// Visibility estimates from Poisson counts. The "out" setting is scaled to
/// `mean_out_counts`; `background` adds accidental counts to both settings.
std::vector<double> visibility_trials(const VisibilityResult& ideal, double mean_out_counts,
                                      double background, int trials, std::uint64_t seed);

enum class CorrelationModel { entangled, mixture };

struct RasterSpec {
    int points = 41;
    /// Half side of the square raster, mm.
    double half_width = 2.0 * SetupConfig::kDefaultWaist;

    double spacing() const;
    /// Row-major offsets, y slow.
    std::vector<Point2> offsets() const;
};

/// Two-term state over (0, 0) and (2, -2), arm 1 a displaced fork, arm 2 a
/// scanned bare fiber.
struct SuperpositionSetup {
    SetupConfig setup{};
    TwoPhotonState state = make_default_state(0.0);
    int delta_m = -2;

    /// Equal weights; `relative_phase` multiplies the (2, -2) amplitude.
    static TwoPhotonState make_default_state(double relative_phase);
};

/// Default dislocation shifts in units of the beam waist.
inline constexpr double kDefaultShiftSchedule[] = {0.0, 0.25, 0.5, 0.75, 1.0};

struct ScanMap {
    CorrelationModel model = CorrelationModel::entangled;
    double shift = 0.0;
    RasterSpec raster{};
    std::vector<double> values;
    double max_value = 0.0;
    double min_value = 0.0;
    std::size_t argmin = 0;

    Point2 argmin_position() const;
};

struct ScanZero {
    Point2 position;
    double value = 0.0;
    bool converged = false;
};

/// Precomputes the arm-2 raster projectors once so several shifts and both
/// correlation models can be scanned cheaply.
class SuperpositionExperiment {
  public:
    SuperpositionExperiment(SuperpositionSetup config, RasterSpec raster);

    const SuperpositionSetup& config() const { return config_; }
    const RasterSpec& raster() const { return raster_; }

    /// Arm-1 projector with the dislocation moved by `shift` along +x.
    ProjectionVector arm1_projector(double shift) const;

    ScanMap scan(CorrelationModel model, double shift) const;

    /// Coincidence probability with the arm-2 fiber at an arbitrary offset.
    double value_at(CorrelationModel model, const ProjectionVector& arm1, Point2 offset) const;

    /// Newton search for a zero of the entangled coincidence amplitude
    /// starting at `start` (typically the raster argmin). A root that lands
    /// outside the grid is reported with converged = false.
    ScanZero locate_zero(const ProjectionVector& arm1, Point2 start) const;

    /// Arm-2 field conditioned on an arm-1 click: sum_l C_l A_l LG_{pump - l}.
    ComplexField conditional_field(const ProjectionVector& arm1) const;

    /// The same field evaluated analytically at an arbitrary point.
    cplx conditional_amplitude(const ProjectionVector& arm1, Point2 p) const;

  private:
    ProjectionVector arm2_projector_at(Point2 offset) const;
    cplx amplitude_at(const ProjectionVector& arm1, Point2 offset) const;

    SuperpositionSetup config_;
    RasterSpec raster_;
    std::vector<ComplexField> arm2_modes_;
    std::vector<ProjectionVector> arm2_raster_;
};

ScanMap superposition_scan(CorrelationModel model, double shift, const RasterSpec& raster,
                           const SuperpositionSetup& config);

struct LocusRow {
    double shift = 0.0;
    /// |A_0 / A_2| of the arm-1 projector.
    double amplitude_ratio = 0.0;
    double radius = 0.0;
    /// Angle of the zero in the upper half plane, [0, pi).
    double angle = 0.0;
    bool found = false;
    std::vector<Singularity> zeros;
};

/// Zero locus of the conditional arm-2 field for each dislocation shift.
/// Rows with no singularity (pure Gaussian limit) have found = false.
std::vector<LocusRow> singularity_locus(std::span<const double> shifts,
                                        const SuperpositionSetup& config);

} // namespace oamsim
