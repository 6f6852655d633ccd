#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oamsim/fieldgrid.hpp"
#include "oamsim/modefilter.hpp"

namespace oamsim {

/// Truncated down-converted pair state sum_l C_l |l>_1 |pump_l - l>_2.
///
/// Conservation of OAM is built into the indexing: amplitude C_l belongs to
/// the pair (l, pump_l - l). Normalized at construction.
class TwoPhotonState {
  public:
    int pump_l() const { return pump_l_; }
    int truncation() const { return L_; }
    /// C_l for l in [-L, L]; zero outside.
    cplx amplitude(int l) const;
    const std::vector<cplx>& amplitudes() const { return amplitudes_; }

    friend TwoPhotonState make_spdc_state(int pump_l, int L, std::span<const cplx> amplitudes);

  private:
    TwoPhotonState(int pump_l, int L, std::vector<cplx> amplitudes);

    int pump_l_;
    int L_;
    std::vector<cplx> amplitudes_;
};

/// Normalizes the given 2L+1 amplitudes (l = -L first). Throws when all are zero.
TwoPhotonState make_spdc_state(int pump_l, int L, std::span<const cplx> amplitudes);

/// Equal-magnitude, zero-phase amplitudes over l in [-L, L].
TwoPhotonState make_uniform_spdc_state(int pump_l, int L);

/// Classically correlated ensemble of the product states |l>|pump_l - l>.
class MixtureState {
  public:
    MixtureState(int pump_l, int L, std::vector<double> probabilities);

    /// Same pair weights as the coherent state, phases discarded.
    static MixtureState dephased(const TwoPhotonState& state);

    int pump_l() const { return pump_l_; }
    int truncation() const { return L_; }
    double probability(int l) const;

  private:
    int pump_l_;
    int L_;
    std::vector<double> probabilities_;
};

/// |sum_l C_l A_l B_{pump - l}|^2.
///
/// Requires A.L >= state.L and B.L >= state.L + |pump_l| so that every
/// partner charge is represented; throws std::invalid_argument otherwise.
double coincidence_prob(const TwoPhotonState& state, const ProjectionVector& a,
                        const ProjectionVector& b);

/// sum_l p_l |A_l|^2 |B_{pump - l}|^2, same truncation rules.
double mixture_coincidence_prob(const MixtureState& mix, const ProjectionVector& a,
                                const ProjectionVector& b);

/// (I_out - I_in) / (I_out + I_in).
double visibility(double i_out, double i_in);

struct LossFactor {
    std::string name;
    double value = 1.0;
};

/// Named scalar transmission factors, each in [0, 1].
class LossBudget {
  public:
    LossBudget() = default;
    explicit LossBudget(std::vector<LossFactor> factors);

    /// Hologram first order 0.18, surfaces 0.95, fiber coupling 0.70,
    /// interference filter 0.75, detector 0.30.
    static LossBudget reference_setup();

    const std::vector<LossFactor>& factors() const { return factors_; }

  private:
    std::vector<LossFactor> factors_;
};

/// Product of all factors; 1 for an empty budget.
double efficiency_budget(const LossBudget& budget);

/// One Poisson(prob * mean_pairs) draw from a generator seeded with `seed`.
std::int64_t poisson_counts(double prob, double mean_pairs, std::uint64_t seed);

/// Same, drawing from a caller-owned stream.
std::int64_t poisson_counts(double prob, double mean_pairs, std::mt19937_64& rng);

struct CountSample {
    std::int64_t singles_1 = 0;
    std::int64_t singles_2 = 0;
    std::int64_t coincidences = 0;
};

/// Raw counts for `pairs_mean` emitted pairs with per-arm efficiency eta:
/// singles ~ Poisson(pairs * eta), coincidences ~ Poisson(pairs * eta^2).
CountSample simulate_counts(double pairs_mean, double eta, std::mt19937_64& rng);

} // namespace oamsim
