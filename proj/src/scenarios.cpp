#include "oamsim/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include "oamsim/optics.hpp"
#include "parallel.hpp"

namespace oamsim {

SetupConfig SetupConfig::for_waist(double waist, int samples) {
    SetupConfig s;
    s.grid = GridSpec(samples, kExtentInWaists * waist);
    s.beam = BeamParams(waist);
    s.fiber_waist = waist;
    return s;
}

FilterConfig analyzer_for(int l, const SetupConfig& setup, Point2 dislocation_offset) {
    FilterConfig f;
    f.fiber_waist = setup.fiber_waist;
    if (l != 0) {
        HologramSpec h = setup.hologram;
        h.delta_m = -l;
        h.dislocation_offset = dislocation_offset;
        f.hologram = h;
    }
    return f;
}

ProjectionVector analyzer_projector(int l, const SetupConfig& setup) {
    return effective_projector(analyzer_for(l, setup), setup.beam, setup.grid, setup.truncation,
                               setup.model);
}

namespace {

ConservationMatrix assemble(int pump_l, std::span<const int> l1_list, std::span<const int> l2_list,
                            const std::vector<double>& raw) {
    ConservationMatrix m;
    m.pump_l = pump_l;
    m.l1.assign(l1_list.begin(), l1_list.end());
    m.l2.assign(l2_list.begin(), l2_list.end());
    m.values = raw;
    m.raw = raw;
    const std::size_t cols = l2_list.size();
    std::vector<double> totals(l1_list.size(), 0.0);
    for (std::size_t r = 0; r < l1_list.size(); ++r) {
        for (std::size_t c = 0; c < cols; ++c) totals[r] += raw[r * cols + c];
    }
    const double largest = totals.empty() ? 0.0 : *std::max_element(totals.begin(), totals.end());
    m.row_normalized.assign(l1_list.size(), false);
    for (std::size_t r = 0; r < l1_list.size(); ++r) {
        if (!(totals[r] > kEmptyRowThreshold * largest) || !(totals[r] > 0.0)) continue;
        for (std::size_t c = 0; c < cols; ++c) m.values[r * cols + c] /= totals[r];
        m.row_normalized[r] = true;
    }
    return m;
}

void check_lists(std::span<const int> l1_list, std::span<const int> l2_list) {
    if (l1_list.empty() || l2_list.empty()) {
        throw std::invalid_argument("conservation_matrix: analyzer lists must not be empty");
    }
}

} // namespace

ConservationMatrix conservation_matrix(int pump_l, std::span<const int> l1_list,
                                       std::span<const int> l2_list, const TwoPhotonState& state,
                                       const SetupConfig& setup) {
    check_lists(l1_list, l2_list);
    if (state.pump_l() != pump_l) {
        throw std::invalid_argument("conservation_matrix: state pump charge does not match pump_l");
    }
    std::map<int, ProjectionVector> projectors;
    for (std::span<const int> list : {l1_list, l2_list}) {
        for (int l : list) {
            if (!projectors.contains(l)) projectors.emplace(l, analyzer_projector(l, setup));
        }
    }

    std::vector<double> raw;
    raw.reserve(l1_list.size() * l2_list.size());
    for (int l1 : l1_list) {
        for (int l2 : l2_list) {
            raw.push_back(coincidence_prob(state, projectors.at(l1), projectors.at(l2)));
        }
    }
    return assemble(pump_l, l1_list, l2_list, raw);
}

ConservationMatrix conservation_matrix_ideal(int pump_l, std::span<const int> l1_list,
                                             std::span<const int> l2_list,
                                             const TwoPhotonState& state, int truncation) {
    check_lists(l1_list, l2_list);
    std::vector<double> raw;
    for (int l1 : l1_list) {
        for (int l2 : l2_list) {
            raw.push_back(coincidence_prob(state, ProjectionVector::pure(truncation, l1),
                                           ProjectionVector::pure(truncation, l2)));
        }
    }
    return assemble(pump_l, l1_list, l2_list, raw);
}

VisibilityResult dislocation_visibility(const TwoPhotonState& state, int delta_m,
                                        const SetupConfig& setup) {
    if (delta_m == 0) throw std::invalid_argument("dislocation_visibility: delta_m must be nonzero");
    FilterConfig out = analyzer_for(0, setup);
    HologramSpec grating = setup.hologram;
    grating.delta_m = 0;
    out.hologram = grating;
    FilterConfig in = out;
    in.hologram->delta_m = delta_m;

    const auto proj = [&](const FilterConfig& f) {
        return effective_projector(f, setup.beam, setup.grid, setup.truncation, setup.model);
    };
    const ProjectionVector arm2 = analyzer_projector(state.pump_l(), setup);
    VisibilityResult r;
    r.i_out = coincidence_prob(state, proj(out), arm2);
    r.i_in = coincidence_prob(state, proj(in), arm2);
    r.visibility = visibility(r.i_out, r.i_in);
    return r;
}

std::vector<double> visibility_trials(const VisibilityResult& ideal, double mean_out_counts,
                                      double background, int trials, std::uint64_t seed) {
    if (!(ideal.i_out > 0.0)) throw std::invalid_argument("visibility_trials: I_out must be positive");
    if (trials < 0 || !(mean_out_counts >= 0.0) || !(background >= 0.0)) {
        throw std::invalid_argument("visibility_trials: counts and trials must be non-negative");
    }
    std::mt19937_64 rng(seed);
    const double scale = mean_out_counts / ideal.i_out;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        const auto draw = [&](double mean) -> double {
            if (mean <= 0.0) return 0.0;
            std::poisson_distribution<std::int64_t> d(mean);
            return static_cast<double>(d(rng));
        };
        const double c_out = draw(ideal.i_out * scale + background);
        const double c_in = draw(ideal.i_in * scale + background);
        if (c_out + c_in == 0.0) continue;
        out.push_back(visibility(c_out, c_in));
    }
    return out;
}

double RasterSpec::spacing() const {
    if (points < 2) return 0.0;
    return 2.0 * half_width / (points - 1);
}

std::vector<Point2> RasterSpec::offsets() const {
    if (points < 1 || !(half_width >= 0.0)) throw std::invalid_argument("raster: invalid spec");
    std::vector<Point2> out;
    out.reserve(static_cast<std::size_t>(points) * points);
    const double d = spacing();
    const double start = points == 1 ? 0.0 : -half_width;
    for (int iy = 0; iy < points; ++iy) {
        for (int ix = 0; ix < points; ++ix) out.push_back({start + ix * d, start + iy * d});
    }
    return out;
}

TwoPhotonState SuperpositionSetup::make_default_state(double relative_phase) {
    // l runs over [-2, 2]; only l1 = 0 and l1 = 2 are populated.
    const cplx amps[] = {0.0, 0.0, 1.0, 0.0, std::polar(1.0, relative_phase)};
    return make_spdc_state(0, 2, amps);
}

Point2 ScanMap::argmin_position() const {
    const auto offs = raster.offsets();
    return offs.at(argmin);
}

SuperpositionExperiment::SuperpositionExperiment(SuperpositionSetup config, RasterSpec raster)
    : config_(std::move(config)), raster_(raster) {
    const SetupConfig& s = config_.setup;
    const int L2 = s.truncation;
    if (L2 < config_.state.truncation() + std::abs(config_.state.pump_l())) {
        throw std::invalid_argument("superposition: setup truncation too small for the state");
    }
    const auto offs = raster_.offsets();
    const double lo = s.grid.coord(0), hi = s.grid.coord(s.grid.n() - 1);
    for (const Point2& p : offs) {
        if (p.x < lo || p.x > hi || p.y < lo || p.y > hi) {
            throw std::domain_error("superposition: raster extends outside the grid");
        }
    }
    arm2_modes_.reserve(static_cast<std::size_t>(2 * L2 + 1));
    for (int l = -L2; l <= L2; ++l) arm2_modes_.push_back(eval_lg({l, 0}, s.beam, s.grid));
    FilterConfig arm2;
    arm2.fiber_waist = s.fiber_waist;
    arm2_raster_ = scan_projectors(arm2, offs, s.beam, s.grid, L2);
}

ProjectionVector SuperpositionExperiment::arm1_projector(double shift) const {
    const SetupConfig& s = config_.setup;
    FilterConfig f = analyzer_for(-config_.delta_m, s, Point2{shift, 0.0});
    return effective_projector(f, s.beam, s.grid, s.truncation, s.model);
}

ScanMap SuperpositionExperiment::scan(CorrelationModel model, double shift) const {
    if (shift < 0.0) throw std::invalid_argument("superposition_scan: shift must be >= 0");
    const ProjectionVector arm1 = arm1_projector(shift);
    const MixtureState mix = MixtureState::dephased(config_.state);
    ScanMap m;
    m.model = model;
    m.shift = shift;
    m.raster = raster_;
    m.values.resize(arm2_raster_.size());
    for (std::size_t k = 0; k < arm2_raster_.size(); ++k) {
        m.values[k] = model == CorrelationModel::entangled
                          ? coincidence_prob(config_.state, arm1, arm2_raster_[k])
                          : mixture_coincidence_prob(mix, arm1, arm2_raster_[k]);
    }
    const auto [mn, mx] = std::minmax_element(m.values.begin(), m.values.end());
    m.min_value = *mn;
    m.max_value = *mx;
    m.argmin = static_cast<std::size_t>(mn - m.values.begin());
    return m;
}

ProjectionVector SuperpositionExperiment::arm2_projector_at(Point2 offset) const {
    const SetupConfig& s = config_.setup;
    FilterConfig f;
    f.fiber_waist = s.fiber_waist;
    f.fiber_offset = offset;
    const ComplexField fiber = fiber_mode(f, s.grid);
    std::vector<cplx> a(arm2_modes_.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = inner_product(fiber, arm2_modes_[i]);
    return ProjectionVector(s.truncation, std::move(a));
}

cplx SuperpositionExperiment::amplitude_at(const ProjectionVector& arm1, Point2 offset) const {
    const ProjectionVector b = arm2_projector_at(offset);
    const TwoPhotonState& st = config_.state;
    cplx amp{};
    for (int l = -st.truncation(); l <= st.truncation(); ++l) {
        amp += st.amplitude(l) * arm1[l] * b[st.pump_l() - l];
    }
    return amp;
}

double SuperpositionExperiment::value_at(CorrelationModel model, const ProjectionVector& arm1,
                                         Point2 offset) const {
    const ProjectionVector b = arm2_projector_at(offset);
    if (model == CorrelationModel::entangled) return coincidence_prob(config_.state, arm1, b);
    return mixture_coincidence_prob(MixtureState::dephased(config_.state), arm1, b);
}

namespace {

// Real 2x2 Newton iteration on (Re f, Im f) as a function of (x, y), with
// central-difference derivatives.
template <class Fn>
ScanZero newton_zero(const Fn& f_at, Point2 start, double step, double scale) {
    ScanZero z;
    z.position = start;
    cplx f = f_at(z.position);
    for (int it = 0; it < 40; ++it) {
        const cplx fx = (f_at({z.position.x + step, z.position.y}) -
                         f_at({z.position.x - step, z.position.y})) / (2.0 * step);
        const cplx fy = (f_at({z.position.x, z.position.y + step}) -
                         f_at({z.position.x, z.position.y - step})) / (2.0 * step);
        const double a = fx.real(), b = fy.real(), c = fx.imag(), d = fy.imag();
        const double det = a * d - b * c;
        if (det == 0.0) break;
        const double dx = (d * f.real() - b * f.imag()) / det;
        const double dy = (-c * f.real() + a * f.imag()) / det;
        z.position.x -= dx;
        z.position.y -= dy;
        f = f_at(z.position);
        if (std::hypot(dx, dy) < 1e-9 * step || std::abs(f) < 1e-15 * scale) {
            z.converged = true;
            break;
        }
    }
    z.value = std::norm(f);
    return z;
}

} // namespace

ScanZero SuperpositionExperiment::locate_zero(const ProjectionVector& arm1, Point2 start) const {
    const double scale = std::sqrt(std::max(arm1.total_weight(), 1e-300));
    ScanZero z = newton_zero([&](Point2 p) { return amplitude_at(arm1, p); }, start,
                             1e-4 * config_.setup.beam.waist(), scale);
    // Fiber modes centered off the grid are truncated; a root there is not trusted.
    const GridSpec& g = config_.setup.grid;
    const double lo = g.coord(0), hi = g.coord(g.n() - 1);
    if (z.position.x < lo || z.position.x > hi || z.position.y < lo || z.position.y > hi) z.converged = false;
    return z;
}

cplx SuperpositionExperiment::conditional_amplitude(const ProjectionVector& arm1, Point2 p) const {
    const TwoPhotonState& st = config_.state;
    cplx acc{};
    for (int l = -st.truncation(); l <= st.truncation(); ++l) {
        const cplx w = st.amplitude(l) * arm1[l];
        if (w == cplx{}) continue;
        acc += w * lg_amplitude({st.pump_l() - l, 0}, config_.setup.beam, p.x, p.y);
    }
    return acc;
}

ComplexField SuperpositionExperiment::conditional_field(const ProjectionVector& arm1) const {
    const TwoPhotonState& st = config_.state;
    const SetupConfig& s = config_.setup;
    std::vector<cplx> acc(s.grid.size());
    for (int l = -st.truncation(); l <= st.truncation(); ++l) {
        const cplx w = st.amplitude(l) * arm1[l];
        if (w == cplx{}) continue;
        const int partner = st.pump_l() - l;
        const auto& mode = arm2_modes_.at(static_cast<std::size_t>(partner + s.truncation));
        const auto src = mode.samples();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * src[i];
    }
    return ComplexField(s.grid, std::move(acc));
}

ScanMap superposition_scan(CorrelationModel model, double shift, const RasterSpec& raster,
                           const SuperpositionSetup& config) {
    return SuperpositionExperiment(config, raster).scan(model, shift);
}

std::vector<LocusRow> singularity_locus(std::span<const double> shifts,
                                        const SuperpositionSetup& config) {
    // The raster is irrelevant here; a 1-point raster keeps construction cheap.
    const SuperpositionExperiment exp(config, RasterSpec{1, 0.0});
    const int dm = -config.delta_m;
    std::vector<LocusRow> rows;
    for (double shift : shifts) {
        if (shift < 0.0) throw std::invalid_argument("singularity_locus: shifts must be >= 0");
        LocusRow row;
        row.shift = shift;
        const ProjectionVector arm1 = exp.arm1_projector(shift);
        const double a_lg = std::abs(arm1[dm]);
        row.amplitude_ratio = a_lg > 0.0 ? std::abs(arm1[0]) / a_lg : INFINITY;
        auto zeros = find_singularities(exp.conditional_field(arm1));
        std::sort(zeros.begin(), zeros.end(), [](const Singularity& a, const Singularity& b) {
            return std::hypot(a.position.x, a.position.y) < std::hypot(b.position.x, b.position.y);
        });
        // Keep the innermost zeros carrying the combined charge of the LG term.
        int charge = 0;
        std::vector<Singularity> kept;
        for (const auto& z : zeros) {
            if (std::abs(charge) >= std::abs(dm)) break;
            kept.push_back(z);
            charge += z.charge;
        }
        // Plaquette centers are only pitch-accurate; polish on the analytic field.
        const double scale = std::sqrt(std::max(arm1.total_weight(), 1e-300)) / config.setup.beam.waist();
        for (auto& z : kept) {
            const ScanZero r = newton_zero([&](Point2 p) { return exp.conditional_amplitude(arm1, p); },
                                           z.position, 1e-4 * config.setup.beam.waist(), scale);
            if (r.converged && std::hypot(r.position.x - z.position.x, r.position.y - z.position.y) <
                                   config.setup.grid.pitch()) {
                z.position = r.position;
            }
        }
        row.zeros = kept;
        if (!kept.empty()) {
            row.found = true;
            double rsum = 0.0;
            for (const auto& z : kept) rsum += std::hypot(z.position.x, z.position.y);
            row.radius = rsum / static_cast<double>(kept.size());
            const auto upper = [](const Singularity& z) {
                return z.position.y > 0.0 || (z.position.y == 0.0 && z.position.x >= 0.0);
            };
            const auto it = std::find_if(kept.begin(), kept.end(), upper);
            const Singularity& pick = it != kept.end() ? *it : kept.front();
            double ang = std::atan2(pick.position.y, pick.position.x);
            if (ang < 0.0) ang += kPi;
            if (ang >= kPi) ang -= kPi;
            row.angle = ang;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace oamsim
