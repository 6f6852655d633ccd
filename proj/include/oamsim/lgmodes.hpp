#pragma once

#include <vector>

#include "oamsim/fieldgrid.hpp"

namespace oamsim {

/// LG mode label: winding number l (any sign) and radial index p >= 0.
struct ModeIndex {
    int l = 0;
    int p = 0;

    friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

/// Beam geometry at the evaluation plane (mm).
class BeamParams {
  public:
    /// 702 nm down-converted signal.
    static constexpr double kSignalWavelength = 702e-6;
    /// 351 nm pump.
    static constexpr double kPumpWavelength = 351e-6;

    explicit BeamParams(double waist, double wavelength = kSignalWavelength);

    double waist() const { return waist_; }
    double wavelength() const { return wavelength_; }
    /// pi w^2 / lambda.
    double rayleigh_range() const;

  private:
    double waist_;
    double wavelength_;
};

/// Generalized Laguerre polynomial L_p^alpha(x) by the three-term recurrence.
double assoc_laguerre(int p, int alpha, double x);

/// Unit-normalized LG_p^l amplitude at the waist plane, evaluated at (x, y).
/// Positive l winds counterclockwise, exp(+i l phi).
cplx lg_amplitude(ModeIndex mode, const BeamParams& beam, double x, double y);

/// Same, displaced so the beam axis sits at `center`.
cplx lg_amplitude(ModeIndex mode, const BeamParams& beam, Point2 center, double x, double y);

ComplexField eval_lg(ModeIndex mode, const BeamParams& beam, const GridSpec& grid);

/// LG mode evaluated about a displaced axis (used for scanned fiber modes).
ComplexField eval_lg(ModeIndex mode, const BeamParams& beam, const GridSpec& grid, Point2 center);

/// Power per OAM charge l in [-L, L].
class OamSpectrum {
  public:
    OamSpectrum(int L, std::vector<double> weights);

    int truncation() const { return L_; }
    double weight(int l) const;
    double total() const;
    /// weight(l) / total().
    double fraction(int l) const;
    const std::vector<double>& weights() const { return weights_; }

  private:
    int L_;
    std::vector<double> weights_;
};

/// Azimuthal Fourier analysis on n/2 concentric rings.
///
/// Each ring is sampled by interpolation and Fourier analysed in phi; the
/// per-charge power is integrated over r with the trapezoidal rule plus the
/// leading endpoint correction at r = 0 (only the l = 0 harmonic survives
/// at the axis).
OamSpectrum oam_spectrum(const ComplexField& f, int L);

/// Coefficients <LG_p^l, f> for l in [-L, L], p in [0, P].
class LgCoefficients {
  public:
    LgCoefficients(int L, int P, std::vector<cplx> values);

    int max_l() const { return L_; }
    int max_p() const { return P_; }
    cplx at(int l, int p) const;
    /// Sum of |c|^2.
    double total_power() const;

  private:
    int L_;
    int P_;
    std::vector<cplx> values_;
};

LgCoefficients decompose_lg(const ComplexField& f, const BeamParams& beam, int L, int P);

} // namespace oamsim
