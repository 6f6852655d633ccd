#include "oamsim/biphoton.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace oamsim {

TwoPhotonState::TwoPhotonState(int pump_l, int L, std::vector<cplx> amplitudes)
    : pump_l_(pump_l), L_(L), amplitudes_(std::move(amplitudes)) {}

cplx TwoPhotonState::amplitude(int l) const {
    if (l < -L_ || l > L_) return {};
    return amplitudes_[static_cast<std::size_t>(l + L_)];
}

TwoPhotonState make_spdc_state(int pump_l, int L, std::span<const cplx> amplitudes) {
    if (L < 0) throw std::invalid_argument("state: truncation L must be >= 0");
    if (amplitudes.size() != static_cast<std::size_t>(2 * L + 1)) {
        throw std::invalid_argument("state: expected " + std::to_string(2 * L + 1) +
                                    " amplitudes, got " + std::to_string(amplitudes.size()));
    }
    double total = 0.0;
    for (const cplx& c : amplitudes) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw std::invalid_argument("state: non-finite amplitude");
        }
        total += std::norm(c);
    }
    if (!(total > 0.0)) throw std::invalid_argument("state: all amplitudes are zero");
    const double s = 1.0 / std::sqrt(total);
    std::vector<cplx> normed(amplitudes.begin(), amplitudes.end());
    for (cplx& c : normed) c *= s;
    return TwoPhotonState(pump_l, L, std::move(normed));
}

TwoPhotonState make_uniform_spdc_state(int pump_l, int L) {
    if (L < 0) throw std::invalid_argument("state: truncation L must be >= 0");
    const std::vector<cplx> ones(static_cast<std::size_t>(2 * L + 1), cplx{1.0, 0.0});
    return make_spdc_state(pump_l, L, ones);
}

MixtureState::MixtureState(int pump_l, int L, std::vector<double> probabilities)
    : pump_l_(pump_l), L_(L), probabilities_(std::move(probabilities)) {
    if (L < 0 || probabilities_.size() != static_cast<std::size_t>(2 * L + 1)) {
        throw std::invalid_argument("mixture: need 2L+1 probabilities");
    }
    double total = 0.0;
    for (double p : probabilities_) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("mixture: probabilities must be >= 0");
        total += p;
    }
    if (!(total > 0.0)) throw std::invalid_argument("mixture: all probabilities are zero");
    for (double& p : probabilities_) p /= total;
}

MixtureState MixtureState::dephased(const TwoPhotonState& state) {
    std::vector<double> p;
    p.reserve(state.amplitudes().size());
    for (const cplx& c : state.amplitudes()) p.push_back(std::norm(c));
    return MixtureState(state.pump_l(), state.truncation(), std::move(p));
}

double MixtureState::probability(int l) const {
    if (l < -L_ || l > L_) return 0.0;
    return probabilities_[static_cast<std::size_t>(l + L_)];
}

namespace {

void check_coverage(int L, int pump_l, const ProjectionVector& a, const ProjectionVector& b) {
    if (a.truncation() < L) {
        throw std::invalid_argument("coincidence: arm-1 projector truncation " +
                                    std::to_string(a.truncation()) + " < state truncation " +
                                    std::to_string(L));
    }
    if (b.truncation() < L + std::abs(pump_l)) {
        throw std::invalid_argument("coincidence: arm-2 projector truncation " +
                                    std::to_string(b.truncation()) + " cannot hold partner charges up to " +
                                    std::to_string(L + std::abs(pump_l)));
    }
}

} // namespace

double coincidence_prob(const TwoPhotonState& state, const ProjectionVector& a,
                        const ProjectionVector& b) {
    const int L = state.truncation();
    const int pump = state.pump_l();
    check_coverage(L, pump, a, b);
    cplx amp{};
    for (int l = -L; l <= L; ++l) amp += state.amplitude(l) * a[l] * b[pump - l];
    return std::norm(amp);
}

double mixture_coincidence_prob(const MixtureState& mix, const ProjectionVector& a,
                                const ProjectionVector& b) {
    const int L = mix.truncation();
    const int pump = mix.pump_l();
    check_coverage(L, pump, a, b);
    double p = 0.0;
    for (int l = -L; l <= L; ++l) p += mix.probability(l) * std::norm(a[l]) * std::norm(b[pump - l]);
    return p;
}

double visibility(double i_out, double i_in) {
    if (!(i_out >= 0.0) || !(i_in >= 0.0)) throw std::invalid_argument("visibility: intensities must be >= 0");
    const double sum = i_out + i_in;
    if (!(sum > 0.0)) throw std::invalid_argument("visibility: both intensities are zero");
    return (i_out - i_in) / sum;
}

LossBudget::LossBudget(std::vector<LossFactor> factors) : factors_(std::move(factors)) {
    for (const auto& f : factors_) {
        if (!(f.value >= 0.0 && f.value <= 1.0)) {
            throw std::invalid_argument("loss budget: factor '" + f.name + "' must lie in [0, 1]");
        }
    }
}

LossBudget LossBudget::reference_setup() {
    return LossBudget({{"hologram_first_order", 0.18},
                       {"surface_transmission", 0.95},
                       {"fiber_coupling", 0.70},
                       {"filter_transmission", 0.75},
                       {"detector_efficiency", 0.30}});
}

double efficiency_budget(const LossBudget& budget) {
    double eta = 1.0;
    for (const auto& f : budget.factors()) eta *= f.value;
    return eta;
}

std::int64_t poisson_counts(double prob, double mean_pairs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return poisson_counts(prob, mean_pairs, rng);
}

std::int64_t poisson_counts(double prob, double mean_pairs, std::mt19937_64& rng) {
    if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("poisson_counts: prob must lie in [0, 1]");
    if (!(mean_pairs >= 0.0) || !std::isfinite(mean_pairs)) {
        throw std::invalid_argument("poisson_counts: mean_pairs must be >= 0");
    }
    const double mean = prob * mean_pairs;
    if (mean == 0.0) return 0;
    std::poisson_distribution<std::int64_t> dist(mean);
    return dist(rng);
}

CountSample simulate_counts(double pairs_mean, double eta, std::mt19937_64& rng) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("simulate_counts: eta must lie in [0, 1]");
    CountSample s;
    s.singles_1 = poisson_counts(eta, pairs_mean, rng);
    s.singles_2 = poisson_counts(eta, pairs_mean, rng);
    s.coincidences = poisson_counts(eta * eta, pairs_mean, rng);
    return s;
}

} // namespace oamsim
