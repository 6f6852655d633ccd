#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>

#include "oamsim/biphoton.hpp"
#include "oamsim/optics.hpp"
#include "oamsim/scenarios.hpp"

namespace py = pybind11;
using namespace oamsim;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

// Fields cross the boundary as (n, n) complex arrays, row index y.
CArray to_array(const ComplexField& f) {
    const int n = f.grid().n();
    CArray a({n, n});
    std::copy(f.samples().begin(), f.samples().end(), a.mutable_data());
    return a;
}

ComplexField to_field(const CArray& a, const GridSpec& grid) {
    if (a.ndim() != 2 || a.shape(0) != grid.n() || a.shape(1) != grid.n()) {
        throw std::invalid_argument("field array must have shape (n, n) matching the grid");
    }
    return ComplexField(grid, std::vector<cplx>(a.data(), a.data() + a.size()));
}

FilterModel parse_model(const std::string& s) {
    if (s == "wave_optics") return FilterModel::wave_optics;
    if (s == "first_order") return FilterModel::first_order;
    throw std::invalid_argument("model must be 'wave_optics' or 'first_order'");
}

SetupConfig make_setup(double waist, int samples, const std::string& model) {
    SetupConfig s = SetupConfig::for_waist(waist, samples);
    s.model = parse_model(model);
    return s;
}

std::map<int, double> spectrum_dict(const OamSpectrum& s) {
    std::map<int, double> out;
    for (int l = -s.truncation(); l <= s.truncation(); ++l) out[l] = s.weight(l);
    return out;
}

ProjectionVector to_projector(const std::vector<cplx>& a) {
    if (a.size() % 2 == 0) throw std::invalid_argument("projector needs 2L+1 amplitudes");
    return ProjectionVector(static_cast<int>(a.size() / 2), a);
}

py::array_t<double> matrix_array(const ConservationMatrix& m) {
    py::array_t<double> a({m.l1.size(), m.l2.size()});
    std::copy(m.values.begin(), m.values.end(), a.mutable_data());
    return a;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Orbital angular momentum pair simulator: LG modes, fork holograms, mode filters, coincidences.";

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<int, double>(), py::arg("n"), py::arg("extent"))
        .def_property_readonly("n", &GridSpec::n)
        .def_property_readonly("extent", &GridSpec::extent)
        .def_property_readonly("pitch", &GridSpec::pitch)
        .def("coord", &GridSpec::coord)
        .def("__repr__", [](const GridSpec& g) {
            return "GridSpec(n=" + std::to_string(g.n()) + ", extent=" + std::to_string(g.extent()) + ")";
        });

    py::class_<BeamParams>(m, "BeamParams")
        .def(py::init<double, double>(), py::arg("waist"), py::arg("wavelength") = BeamParams::kSignalWavelength)
        .def_property_readonly("waist", &BeamParams::waist)
        .def_property_readonly("wavelength", &BeamParams::wavelength)
        .def_property_readonly("rayleigh_range", &BeamParams::rayleigh_range);

    py::class_<HologramSpec>(m, "HologramSpec")
        .def(py::init<>())
        .def_readwrite("delta_m", &HologramSpec::delta_m)
        .def_readwrite("line_density", &HologramSpec::line_density)
        .def_readwrite("blaze_depth", &HologramSpec::blaze_depth)
        .def_readwrite("first_order_efficiency", &HologramSpec::first_order_efficiency)
        .def_readwrite("aperture", &HologramSpec::aperture)
        .def_property(
            "dislocation_offset",
            [](const HologramSpec& h) { return std::pair{h.dislocation_offset.x, h.dislocation_offset.y}; },
            [](HologramSpec& h, std::pair<double, double> p) { h.dislocation_offset = {p.first, p.second}; });

    m.def(
        "eval_lg",
        [](int l, int p, const BeamParams& beam, const GridSpec& grid) { return to_array(eval_lg({l, p}, beam, grid)); },
        py::arg("l"), py::arg("p"), py::arg("beam"), py::arg("grid"));
    m.def(
        "inner_product",
        [](const CArray& f, const CArray& g, const GridSpec& grid) {
            return inner_product(to_field(f, grid), to_field(g, grid));
        },
        py::arg("f"), py::arg("g"), py::arg("grid"));
    m.def(
        "oam_spectrum",
        [](const CArray& f, const GridSpec& grid, int L) { return spectrum_dict(oam_spectrum(to_field(f, grid), L)); },
        py::arg("field"), py::arg("grid"), py::arg("L"));
    m.def(
        "find_singularities",
        [](const CArray& f, const GridSpec& grid) {
            std::vector<std::tuple<double, double, int>> out;
            for (const auto& s : find_singularities(to_field(f, grid))) out.emplace_back(s.position.x, s.position.y, s.charge);
            return out;
        },
        py::arg("field"), py::arg("grid"));

    m.def(
        "transmittance", [](const HologramSpec& h, const GridSpec& grid) { return to_array(transmittance(h, grid)); },
        py::arg("spec"), py::arg("grid"));
    m.def(
        "apply_first_order",
        [](const CArray& f, const GridSpec& grid, const HologramSpec& h) {
            return to_array(apply_first_order(to_field(f, grid), h));
        },
        py::arg("field"), py::arg("grid"), py::arg("spec"));
    m.def(
        "extract_order",
        [](const CArray& f, const GridSpec& grid, const HologramSpec& h, int order) {
            return to_array(extract_order(to_field(f, grid), h, order));
        },
        py::arg("after_mask"), py::arg("grid"), py::arg("spec"), py::arg("order"));
    m.def(
        "angular_spectrum",
        [](const CArray& f, const GridSpec& grid, double z, double wavelength) {
            return to_array(angular_spectrum(to_field(f, grid), z, wavelength));
        },
        py::arg("field"), py::arg("grid"), py::arg("distance"), py::arg("wavelength"));

    m.def(
        "analyzer_projector",
        [](int l, double waist, int samples, const std::string& model) {
            return analyzer_projector(l, make_setup(waist, samples, model)).amplitudes();
        },
        py::arg("l"), py::arg("waist") = SetupConfig::kDefaultWaist, py::arg("samples") = SetupConfig::kDefaultSamples,
        py::arg("model") = "wave_optics",
        "Detection amplitudes a_l, l = -L..L, of the analyzer for charge l.");

    py::class_<TwoPhotonState>(m, "TwoPhotonState")
        .def_property_readonly("pump_l", &TwoPhotonState::pump_l)
        .def_property_readonly("L", &TwoPhotonState::truncation)
        .def("amplitude", &TwoPhotonState::amplitude)
        .def_property_readonly("amplitudes", &TwoPhotonState::amplitudes);
    m.def(
        "make_spdc_state",
        [](int pump_l, int L, const std::vector<cplx>& amps) { return make_spdc_state(pump_l, L, amps); },
        py::arg("pump_l"), py::arg("L"), py::arg("amplitudes"));
    m.def("make_uniform_spdc_state", &make_uniform_spdc_state, py::arg("pump_l"), py::arg("L"));
    m.def(
        "coincidence_prob",
        [](const TwoPhotonState& s, const std::vector<cplx>& a, const std::vector<cplx>& b) {
            return coincidence_prob(s, to_projector(a), to_projector(b));
        },
        py::arg("state"), py::arg("a"), py::arg("b"));
    m.def(
        "mixture_coincidence_prob",
        [](const TwoPhotonState& s, const std::vector<cplx>& a, const std::vector<cplx>& b) {
            return mixture_coincidence_prob(MixtureState::dephased(s), to_projector(a), to_projector(b));
        },
        py::arg("state"), py::arg("a"), py::arg("b"), "Incoherent coincidence for the dephased state.");
    m.def("visibility", &visibility, py::arg("i_out"), py::arg("i_in"));
    m.def(
        "efficiency_budget",
        [](std::optional<std::map<std::string, double>> factors) {
            if (!factors) return efficiency_budget(LossBudget::reference_setup());
            std::vector<LossFactor> f;
            for (const auto& [k, v] : *factors) f.push_back({k, v});
            return efficiency_budget(LossBudget(std::move(f)));
        },
        py::arg("factors") = py::none());
    m.def(
        "poisson_counts",
        [](double prob, double mean_pairs, std::uint64_t seed) { return poisson_counts(prob, mean_pairs, seed); },
        py::arg("prob"), py::arg("mean_pairs"), py::arg("seed"));

    m.def(
        "conservation_matrix",
        [](int pump_l, const std::vector<int>& l1, const std::vector<int>& l2, std::optional<TwoPhotonState> state,
           double waist, int samples, const std::string& model) {
            const TwoPhotonState s = state ? *state : make_uniform_spdc_state(pump_l, 2);
            const auto mat = conservation_matrix(pump_l, l1, l2, s, make_setup(waist, samples, model));
            return py::make_tuple(matrix_array(mat), mat.row_normalized);
        },
        py::arg("pump_l"), py::arg("l1") = std::vector<int>{0, 1, 2},
        py::arg("l2") = std::vector<int>{-2, -1, 0, 1, 2}, py::arg("state") = py::none(),
        py::arg("waist") = SetupConfig::kDefaultWaist, py::arg("samples") = SetupConfig::kDefaultSamples,
        py::arg("model") = "wave_optics",
        "Row-normalized coincidence matrix (l2 as columns) and the per-row normalized flags.");
    m.def(
        "singularity_locus",
        [](const std::vector<double>& shifts_w, double relative_phase) {
            SuperpositionSetup cfg;
            cfg.state = SuperpositionSetup::make_default_state(relative_phase);
            const double w = cfg.setup.beam.waist();
            std::vector<double> shifts;
            for (double s : shifts_w) shifts.push_back(s * w);
            py::list out;
            for (const auto& r : singularity_locus(shifts, cfg)) {
                py::dict d;
                d["shift"] = r.shift;
                d["amplitude_ratio"] = r.amplitude_ratio;
                d["radius"] = r.radius;
                d["angle"] = r.angle;
                d["found"] = r.found;
                out.append(d);
            }
            return out;
        },
        py::arg("shifts_w"), py::arg("relative_phase") = 0.0,
        "Zero-pair radius (mm) and angle of the conditional arm-2 field; shifts in beam waists.");
}
