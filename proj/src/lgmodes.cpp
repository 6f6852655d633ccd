#include "oamsim/lgmodes.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace oamsim {

BeamParams::BeamParams(double waist, double wavelength) : waist_(waist), wavelength_(wavelength) {
    if (!(waist > 0.0) || !std::isfinite(waist)) {
        throw std::invalid_argument("beam: waist must be positive");
    }
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw std::invalid_argument("beam: wavelength must be positive");
    }
}

double BeamParams::rayleigh_range() const { return kPi * waist_ * waist_ / wavelength_; }

double assoc_laguerre(int p, int alpha, double x) {
    if (p < 0) throw std::invalid_argument("assoc_laguerre: p must be >= 0");
    double prev = 1.0;
    if (p == 0) return prev;
    double cur = 1.0 + alpha - x;
    for (int k = 1; k < p; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

void check_mode(ModeIndex mode) {
    if (mode.p < 0) {
        throw std::invalid_argument("mode: radial index p must be >= 0, got " +
                                    std::to_string(mode.p));
    }
}

// sqrt(2 p! / (pi (p + |l|)!)) / w
double lg_norm(ModeIndex mode, double w) {
    const int al = std::abs(mode.l);
    const double log_ratio = std::lgamma(mode.p + 1.0) - std::lgamma(mode.p + al + 1.0);
    return std::sqrt(2.0 / kPi * std::exp(log_ratio)) / w;
}

cplx lg_value(ModeIndex mode, double w, double norm, double dx, double dy) {
    const int al = std::abs(mode.l);
    const double r2 = (dx * dx + dy * dy) / (w * w);
    double radial = norm * std::exp(-r2) * assoc_laguerre(mode.p, al, 2.0 * r2);
    if (al > 0) radial *= std::pow(std::sqrt(2.0 * r2), al);
    if (mode.l == 0) return {radial, 0.0};
    const double phi = std::atan2(dy, dx);
    return std::polar(radial, mode.l * phi);
}

} // namespace

cplx lg_amplitude(ModeIndex mode, const BeamParams& beam, double x, double y) {
    return lg_amplitude(mode, beam, Point2{}, x, y);
}

cplx lg_amplitude(ModeIndex mode, const BeamParams& beam, Point2 center, double x, double y) {
    check_mode(mode);
    return lg_value(mode, beam.waist(), lg_norm(mode, beam.waist()), x - center.x, y - center.y);
}

ComplexField eval_lg(ModeIndex mode, const BeamParams& beam, const GridSpec& grid) {
    return eval_lg(mode, beam, grid, Point2{});
}

ComplexField eval_lg(ModeIndex mode, const BeamParams& beam, const GridSpec& grid, Point2 center) {
    check_mode(mode);
    const double w = beam.waist();
    const double c = lg_norm(mode, w);
    return ComplexField::from_function(grid, [&](double x, double y) {
        return lg_value(mode, w, c, x - center.x, y - center.y);
    });
}

OamSpectrum::OamSpectrum(int L, std::vector<double> weights) : L_(L), weights_(std::move(weights)) {
    if (L < 0 || weights_.size() != static_cast<std::size_t>(2 * L + 1)) {
        throw std::invalid_argument("OamSpectrum: weights must have 2L+1 entries");
    }
}

double OamSpectrum::weight(int l) const {
    if (l < -L_ || l > L_) return 0.0;
    return weights_[static_cast<std::size_t>(l + L_)];
}

double OamSpectrum::total() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
}

double OamSpectrum::fraction(int l) const {
    const double t = total();
    return t > 0.0 ? weight(l) / t : 0.0;
}

OamSpectrum oam_spectrum(const ComplexField& f, int L) {
    if (L < 0) throw std::invalid_argument("oam_spectrum: L must be >= 0");
    const GridSpec& g = f.grid();
    const int rings = g.n() / 2;
    const double dr = g.pitch();
    const int m = std::max(64, 4 * L + 8);
    const std::size_t nl = static_cast<std::size_t>(2 * L + 1);

    std::vector<std::vector<double>> per_ring(static_cast<std::size_t>(rings));
    detail::parallel_for(static_cast<std::size_t>(rings), [&](std::size_t k) {
        std::vector<double> out(nl, 0.0);
        // Ring k = 0 is the axis; its contribution is the endpoint correction below.
        if (k > 0) {
            const double r = static_cast<double>(k) * dr;
            std::vector<cplx> ring(static_cast<std::size_t>(m));
            for (int j = 0; j < m; ++j) {
                const double t = kTwoPi * j / m;
                ring[static_cast<std::size_t>(j)] = interpolate(f, {r * std::cos(t), r * std::sin(t)});
            }
            const double trap = (static_cast<int>(k) == rings - 1) ? 0.5 : 1.0;
            for (int l = -L; l <= L; ++l) {
                cplx c{};
                for (int j = 0; j < m; ++j) {
                    c += ring[static_cast<std::size_t>(j)] * std::polar(1.0, -l * kTwoPi * j / m);
                }
                c /= static_cast<double>(m);
                out[static_cast<std::size_t>(l + L)] = trap * kTwoPi * r * std::norm(c) * dr;
            }
        }
        per_ring[k] = std::move(out);
    });

    std::vector<double> weights(nl, 0.0);
    for (const auto& ring : per_ring) {
        for (std::size_t i = 0; i < nl; ++i) weights[i] += ring[i];
    }
    // Euler-Maclaurin: the integrand 2 pi r |c_0(r)|^2 has slope 2 pi |f(0)|^2 at r = 0.
    const cplx axis = interpolate(f, {0.0, 0.0});
    weights[static_cast<std::size_t>(L)] += dr * dr / 12.0 * kTwoPi * std::norm(axis);
    return OamSpectrum(L, std::move(weights));
}

LgCoefficients::LgCoefficients(int L, int P, std::vector<cplx> values)
    : L_(L), P_(P), values_(std::move(values)) {
    if (L < 0 || P < 0 ||
        values_.size() != static_cast<std::size_t>((2 * L + 1) * (P + 1))) {
        throw std::invalid_argument("LgCoefficients: size does not match (2L+1)(P+1)");
    }
}

cplx LgCoefficients::at(int l, int p) const {
    if (l < -L_ || l > L_ || p < 0 || p > P_) {
        throw std::out_of_range("LgCoefficients: index outside decomposition range");
    }
    return values_[static_cast<std::size_t>((l + L_) * (P_ + 1) + p)];
}

double LgCoefficients::total_power() const {
    double s = 0.0;
    for (const cplx& c : values_) s += std::norm(c);
    return s;
}

LgCoefficients decompose_lg(const ComplexField& f, const BeamParams& beam, int L, int P) {
    if (L < 0 || P < 0) throw std::invalid_argument("decompose_lg: L and P must be >= 0");
    const std::size_t count = static_cast<std::size_t>((2 * L + 1) * (P + 1));
    std::vector<cplx> values(count);
    detail::parallel_for(count, [&](std::size_t i) {
        const int l = static_cast<int>(i) / (P + 1) - L;
        const int p = static_cast<int>(i) % (P + 1);
        values[i] = inner_product(eval_lg({l, p}, beam, f.grid()), f);
    });
    return LgCoefficients(L, P, std::move(values));
}

} // namespace oamsim
