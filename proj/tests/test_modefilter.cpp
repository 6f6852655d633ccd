#include "doctest.h"

#include <cmath>

#include "oamsim/lgmodes.hpp"
#include "oamsim/modefilter.hpp"
#include "oracles.hpp"

using namespace oamsim;

namespace {

const double kW = 0.25;
const GridSpec kGrid(256, 8.0 * kW);
const BeamParams kBeam(kW);

FilterConfig with_fork(int dm, double eff = 1.0, Point2 offset = {}) {
    FilterConfig f;
    f.fiber_waist = kW;
    HologramSpec h;
    h.delta_m = dm;
    h.first_order_efficiency = eff;
    h.dislocation_offset = offset;
    f.hologram = h;
    return f;
}

FilterConfig bare() {
    FilterConfig f;
    f.fiber_waist = kW;
    return f;
}

} // namespace

TEST_CASE("projection vector basics") {
    const auto p = ProjectionVector::pure(2, -1, {0.0, 2.0});
    CHECK(p[-1] == cplx{0.0, 2.0});
    CHECK(p[0] == cplx{});
    CHECK(p[5] == cplx{});
    CHECK(p.total_weight() == doctest::Approx(4.0));
    const std::pair<int, cplx> terms[] = {{0, 1.0}, {2, {0.0, 1.0}}, {0, 1.0}};
    const auto s = ProjectionVector::superposition(2, terms);
    CHECK(s[0] == cplx{2.0, 0.0});
    CHECK(s[2] == cplx{0.0, 1.0});
    CHECK_THROWS_AS(ProjectionVector::pure(1, 2), std::out_of_range);
    CHECK_THROWS_AS(ProjectionVector(1, std::vector<cplx>(2)), std::invalid_argument);
}

TEST_CASE("filter validation") {
    FilterConfig f = bare();
    f.fiber_waist = 0.0;
    CHECK_THROWS_AS(f.validate(), std::invalid_argument);
    CHECK_THROWS_AS(effective_projector(bare(), kBeam, kGrid, -1), std::invalid_argument);
}

TEST_CASE("bare fiber couples only the Gaussian") {
    const auto a = effective_projector(bare(), kBeam, kGrid, 4);
    CHECK(std::abs(a[0] - 1.0) < 1e-9);
    for (int l = -4; l <= 4; ++l) {
        if (l != 0) CHECK(std::abs(a[l]) < 1e-10);
    }
}

namespace {

void check_selectivity(double tol) {
    for (int dm : {-2, -1, 1, 2}) {
        const auto a = effective_projector(with_fork(dm), kBeam, kGrid, 4);
        for (int l = -4; l <= 4; ++l) {
            CAPTURE(dm);
            CAPTURE(l);
            if (l != -dm) CHECK(std::abs(a[l]) < tol);
        }
    }
}

} // namespace

TEST_CASE("centered charge -2 hologram detects l = 2") {
    const auto a = effective_projector(with_fork(-2), kBeam, kGrid, 4);
    // The fork maps LG_2 onto charge 0; the radial overlap of r^2 e^{-r^2/w^2} with
    // e^{-r^2/w^2} is Gamma(2)^2 / Gamma(3) = 0.5.
    CHECK(std::norm(a[2]) == doctest::Approx(oracle::vortex_gaussian_overlap_closed(2)).epsilon(1e-6));
    CHECK(oracle::vortex_gaussian_overlap(2, kW) == doctest::Approx(0.5).epsilon(1e-9));
    // Efficiency enters as a power factor.
    const auto b = effective_projector(with_fork(-2, 0.18), kBeam, kGrid, 4);
    CHECK(std::norm(b[2]) == doctest::Approx(0.5 * 0.18).epsilon(1e-6));
    for (int l = -4; l <= 4; ++l) {
        if (l != 2) CHECK(std::abs(b[l]) < 1e-6);
    }
}

TEST_CASE("charge selectivity: a delta_m hologram detects l = -delta_m") {
    for (int dm : {-2, -1, 1, 2}) {
        const auto a = effective_projector(with_fork(dm), kBeam, kGrid, 4);
        CAPTURE(dm);
        CHECK(std::abs(a[-dm]) > 0.5);
    }
    // Residual charge leakage comes from the square-lattice sum of integrands
    // r^|l| e^{4ik phi}: the grid's 4-fold symmetry cancels every other charge
    // difference exactly, but not multiples of 4 with a non-smooth core. It is
    // 8e-7 for (delta_m, l) = (-2, -2) on the default grid.
    check_selectivity(1e-6);
}

TEST_CASE("charge selectivity at 1e-10" * doctest::may_fail()) {
    check_selectivity(1e-10);
}

TEST_CASE("charge-1 hologram projector magnitude matches pi/4") {
    const auto a = effective_projector(with_fork(-1), kBeam, kGrid, 2);
    CHECK(std::norm(a[1]) == doctest::Approx(oracle::pi / 4.0).epsilon(1e-3));
}

TEST_CASE("wave-optics and first-order projectors agree") {
    for (int dm : {-2, -1, 1, 2}) {
        FilterConfig f = with_fork(dm, 0.18);
        const auto a = effective_projector(f, kBeam, kGrid, 4, FilterModel::first_order);
        const auto b = effective_projector(f, kBeam, kGrid, 4, FilterModel::wave_optics);
        for (int l = -4; l <= 4; ++l) CHECK(std::abs(a[l] - b[l]) < 1e-6);
    }
}

TEST_CASE("far-displaced dislocation approaches the plain-grating response") {
    const double eff = 0.18;
    const auto plain = effective_projector(bare(), kBeam, kGrid, 4);
    double prev = 1e9;
    for (double d : {0.5, 2.0, 20.0, 200.0}) {
        const auto a = effective_projector(with_fork(-2, eff, {d, 0.0}), kBeam, kGrid, 4);
        // Far away the spiral is a nearly uniform phase across the beam.
        const cplx phase = a[0] / std::abs(a[0]);
        double dev = 0.0;
        for (int l = -4; l <= 4; ++l) dev += std::norm(a[l] - std::sqrt(eff) * phase * plain[l]);
        CAPTURE(d);
        CHECK(dev < prev);
        prev = dev;
    }
    CHECK(prev < 1e-5);
}

TEST_CASE("displacement continuity") {
    const auto at = [](double d) { return effective_projector(with_fork(-2, 1.0, {d, 0.0}), kBeam, kGrid, 4); };
    const auto a = at(0.1), b = at(0.1 + 1e-4);
    for (int l = -4; l <= 4; ++l) CHECK(std::abs(a[l] - b[l]) < 1e-2);
    const auto c = at(0.0);
    CHECK(std::abs(c[0]) < 1e-10);
    CHECK(std::abs(a[0]) > 1e-3);
}

TEST_CASE("reciprocity: forward and backward pictures agree") {
    for (int dm : {-2, 1}) {
        for (Point2 off : {Point2{}, Point2{0.07, -0.03}}) {
            FilterConfig f = with_fork(dm, 0.5, off);
            f.fiber_offset = {0.02, 0.01};
            const auto fwd = effective_projector(f, kBeam, kGrid, 4);
            const auto back = reciprocal_projector(f, kBeam, kGrid, 4);
            for (int l = -4; l <= 4; ++l) CHECK(std::abs(fwd[l] - back[l]) < 1e-6);
        }
    }
}

TEST_CASE("projector weight never exceeds one") {
    for (int dm : {-2, 0, 1}) {
        for (double d : {0.0, 0.1, 0.3}) {
            auto f = with_fork(dm, 1.0, {d, 0.0});
            f.fiber_offset = {0.05, 0.0};
            CHECK(effective_projector(f, kBeam, kGrid, 4).total_weight() <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("truncation stability: L -> L + 2 leaves amplitudes unchanged") {
    auto f = with_fork(-2, 0.18, {0.1, 0.0});
    const auto a = effective_projector(f, kBeam, kGrid, 4);
    const auto b = effective_projector(f, kBeam, kGrid, 6);
    for (int l = -4; l <= 4; ++l) CHECK(std::abs(a[l] - b[l]) < 1e-6);
}

TEST_CASE("scan projectors") {
    const Point2 origin[] = {{0.0, 0.0}};
    const auto single = scan_projectors(bare(), origin, kBeam, kGrid, 3);
    const auto direct = effective_projector(bare(), kBeam, kGrid, 3);
    REQUIRE(single.size() == 1);
    for (int l = -3; l <= 3; ++l) CHECK(std::abs(single[0][l] - direct[l]) < 1e-14);

    const Point2 mirror[] = {{0.1, 0.05}, {-0.1, -0.05}};
    const auto m = scan_projectors(bare(), mirror, kBeam, kGrid, 3);
    CHECK(std::abs(m[0][0]) == doctest::Approx(std::abs(m[1][0])).epsilon(1e-12));

    std::vector<Point2> raster;
    for (int iy = 0; iy < 41; ++iy) {
        for (int ix = 0; ix < 41; ++ix) raster.push_back({-2 * kW + ix * kW / 10, -2 * kW + iy * kW / 10});
    }
    const auto r = scan_projectors(bare(), raster, kBeam, kGrid, 4);
    REQUIRE(r.size() == 1681);
    for (const auto& p : r) CHECK(p.total_weight() <= 1.0 + 1e-9);
    // Deterministic order: entry k is the projector at raster[k].
    FilterConfig at = bare();
    at.fiber_offset = raster[100];
    const auto one = effective_projector(at, kBeam, kGrid, 4);
    for (int l = -4; l <= 4; ++l) CHECK(std::abs(r[100][l] - one[l]) < 1e-14);

    const Point2 outside[] = {{5.0, 0.0}};
    CHECK_THROWS_AS(scan_projectors(bare(), outside, kBeam, kGrid, 2), std::domain_error);
}

TEST_CASE("displaced bare fiber: overlap of shifted Gaussians") {
    FilterConfig f = bare();
    f.fiber_offset = {0.1, 0.0};
    const auto a = effective_projector(f, kBeam, kGrid, 2);
    // <G(r - d), G(r)> = exp(-d^2 / (2 w^2)) for equal waists.
    CHECK(std::abs(a[0]) == doctest::Approx(std::exp(-0.01 / (2.0 * kW * kW))).epsilon(1e-9));
}
