#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zpf/dipole_flux.hpp"
#include "zpf/errors.hpp"
#include "zpf/field_core.hpp"
#include "zpf/filament.hpp"
#include "zpf/fringe.hpp"
#include "zpf/parallel.hpp"
#include "zpf/splitter.hpp"
#include "zpf/toroid.hpp"

namespace py = pybind11;
using namespace zpf;

namespace {

void bind_core(py::module_& m) {
    py::class_<PhysicalConstants>(m, "PhysicalConstants")
        .def(py::init<>())
        .def_static("natural", &PhysicalConstants::natural)
        .def_static("si", &PhysicalConstants::si)
        .def_readwrite("h", &PhysicalConstants::h)
        .def_readwrite("kB", &PhysicalConstants::kB)
        .def_readwrite("c", &PhysicalConstants::c)
        .def_readwrite("eps0", &PhysicalConstants::eps0)
        .def_readwrite("mu0", &PhysicalConstants::mu0)
        .def("impedance", &PhysicalConstants::impedance);

    py::enum_<PlanckLaw>(m, "PlanckLaw").value("First", PlanckLaw::First).value("Second", PlanckLaw::Second);
    m.def("planck_mean_energy", &planck_mean_energy, py::arg("nu"), py::arg("temperature"), py::arg("law"),
          py::arg("constants") = PhysicalConstants::natural());
    m.def(
        "spectral_quantum_line", [](double nu, double energy) { return spectral_quantum(SpectrumSample::line(nu, energy)); },
        py::arg("nu"), py::arg("energy"));
    m.def(
        "spectral_quantum",
        [](std::vector<double> grid, std::vector<double> density) {
            SpectrumSample s;
            s.grid = std::move(grid);
            s.density = std::move(density);
            return spectral_quantum(s);
        },
        py::arg("grid"), py::arg("density"));
    m.def("set_thread_count", &set_thread_count);
    m.def("thread_count", &thread_count);
}

void bind_fringe(py::module_& m) {
    using namespace zpf::fringe;
    py::class_<FringeGeometry>(m, "FringeGeometry")
        .def(py::init<>())
        .def_readwrite("s1", &FringeGeometry::s1)
        .def_readwrite("s2", &FringeGeometry::s2)
        .def_readwrite("r1", &FringeGeometry::r1)
        .def_readwrite("r2", &FringeGeometry::r2)
        .def_readwrite("wavelength", &FringeGeometry::wavelength)
        .def("delta", &FringeGeometry::delta);
    py::enum_<PhaseSampling>(m, "PhaseSampling")
        .value("Stratified", PhaseSampling::Stratified)
        .value("Independent", PhaseSampling::Independent);
    py::class_<FringeParams>(m, "FringeParams")
        .def(py::init<>())
        .def_readwrite("zpf_amplitude", &FringeParams::zpf_amplitude)
        .def_readwrite("conventional_amplitude", &FringeParams::conventional_amplitude)
        .def_readwrite("shots", &FringeParams::shots)
        .def_readwrite("seed", &FringeParams::seed)
        .def_readwrite("sampling", &FringeParams::sampling)
        .def_readwrite("stochastic_zpf", &FringeParams::stochastic_zpf);
    py::class_<ScanRow>(m, "ScanRow")
        .def_readonly("delta", &ScanRow::delta)
        .def_readonly("mean", &ScanRow::mean)
        .def_readonly("stderr", &ScanRow::stderr_)
        .def_readonly("oracle", &ScanRow::oracle);
    py::class_<Harmonics>(m, "Harmonics")
        .def_readonly("first", &Harmonics::first)
        .def_readonly("second", &Harmonics::second)
        .def_readonly("offset", &Harmonics::offset);
    m.def("closed_form_mean", &closed_form_mean, py::arg("z"), py::arg("f"), py::arg("delta"), py::arg("wavelength"));
    m.def("uniform_deltas", &uniform_deltas, py::arg("points"), py::arg("periods"), py::arg("wavelength"));
    m.def(
        "correlation_scan",
        [](const FringeGeometry& g, const FringeParams& p, const std::vector<double>& d) {
            py::gil_scoped_release release;
            return correlation_scan(g, p, d);
        },
        py::arg("geometry"), py::arg("params"), py::arg("deltas"));
    m.def(
        "fringe_analysis", [](const std::vector<ScanRow>& t, double l) { return fringe_analysis(t, l); },
        py::arg("table"), py::arg("wavelength"));
}

void bind_splitter(py::module_& m) {
    using namespace zpf::splitter;
    py::class_<Phasor>(m, "Phasor")
        .def(py::init<>())
        .def(py::init([](double a, double p) { return Phasor{a, p}; }), py::arg("amplitude"), py::arg("phase"))
        .def_readwrite("amplitude", &Phasor::amplitude)
        .def_readwrite("phase", &Phasor::phase)
        .def("value", &Phasor::value)
        .def("intensity", &Phasor::intensity);
    py::enum_<PhaseConvention>(m, "PhaseConvention")
        .value("ReflectedLeads", PhaseConvention::ReflectedLeads)
        .value("ReflectedLags", PhaseConvention::ReflectedLags);
    py::class_<SplitterSpec>(m, "SplitterSpec")
        .def(py::init<>())
        .def_readwrite("reflectance", &SplitterSpec::reflectance)
        .def_readwrite("convention", &SplitterSpec::convention);
    m.def("interfere_two_sources", &interfere_two_sources);
    m.def("mach_zehnder", &mach_zehnder);
    py::class_<CoalescenceStats>(m, "CoalescenceStats")
        .def_readonly("mean_product", &CoalescenceStats::mean_product)
        .def_readonly("stderr", &CoalescenceStats::stderr_)
        .def_readonly("baseline_product", &CoalescenceStats::baseline_product)
        .def_readonly("min_product", &CoalescenceStats::min_product);
    m.def("coalescence_statistics", &coalescence_statistics, py::arg("amp1"), py::arg("amp2"), py::arg("zpf_level"),
          py::arg("shots"), py::arg("seed"), py::arg("spec") = SplitterSpec{});
}

void bind_dipole(py::module_& m) {
    using namespace zpf::dipole;
    py::class_<DipoleSource>(m, "DipoleSource")
        .def(py::init<>())
        .def_readwrite("omega", &DipoleSource::omega)
        .def_readwrite("moment", &DipoleSource::moment);
    py::class_<SphereQuadrature>(m, "SphereQuadrature")
        .def(py::init<>())
        .def_readwrite("radius", &SphereQuadrature::radius)
        .def_readwrite("nodes", &SphereQuadrature::nodes)
        .def_readwrite("azimuth_nodes", &SphereQuadrature::azimuth_nodes);
    py::class_<FluxComponents>(m, "FluxComponents")
        .def_readonly("phi_x", &FluxComponents::phi_x)
        .def_readonly("phi_y", &FluxComponents::phi_y)
        .def_readonly("phi_z", &FluxComponents::phi_z)
        .def("total", &FluxComponents::total);
    py::class_<FactorTwoReport>(m, "FactorTwoReport")
        .def_readonly("spherical", &FactorTwoReport::spherical)
        .def_readonly("plane", &FactorTwoReport::plane)
        .def_readonly("plane_projection", &FactorTwoReport::plane_projection)
        .def_readonly("plane_scale", &FactorTwoReport::plane_scale)
        .def_readonly("ratio", &FactorTwoReport::ratio);
    m.def("compare_inputs", &compare_inputs, py::arg("dipole"), py::arg("amplitude"), py::arg("phase"),
          py::arg("quadrature"), py::arg("constants") = PhysicalConstants::natural());
}

void bind_filament(py::module_& m) {
    using namespace zpf::filament;
    py::class_<SaturatingResponse>(m, "SaturatingResponse")
        .def(py::init<>())
        .def_readwrite("f_max", &SaturatingResponse::f_max)
        .def_readwrite("s_sat", &SaturatingResponse::s_sat)
        .def("__call__", &SaturatingResponse::operator());
    py::class_<MediumModel>(m, "MediumModel")
        .def(py::init<>())
        .def_readwrite("n0", &MediumModel::n0)
        .def_readwrite("n2", &MediumModel::n2)
        .def_readwrite("saturation_field", &MediumModel::saturation_field)
        .def_readwrite("magnetic", &MediumModel::magnetic)
        .def("pure_kerr", &MediumModel::pure_kerr)
        .def("permittivity", &MediumModel::permittivity);
    py::class_<SolveOptions>(m, "SolveOptions")
        .def(py::init<>())
        .def_readwrite("step", &SolveOptions::step)
        .def_readwrite("nodes", &SolveOptions::nodes)
        .def_readwrite("max_scaled_radius", &SolveOptions::max_scaled_radius);
    py::class_<RadialProfile>(m, "RadialProfile")
        .def_readonly("r", &RadialProfile::r)
        .def_readonly("field", &RadialProfile::field)
        .def_readonly("peak", &RadialProfile::peak)
        .def_readonly("k0", &RadialProfile::k0)
        .def_readonly("k", &RadialProfile::k)
        .def_readonly("q", &RadialProfile::q)
        .def_readonly("residual", &RadialProfile::residual)
        .def("at", &RadialProfile::at)
        .def("half_width", &RadialProfile::half_width);
    m.def("solve_profile", &solve_profile, py::arg("medium"), py::arg("omega"), py::arg("peak"),
          py::arg("options") = SolveOptions{}, py::arg("constants") = PhysicalConstants::natural());
    m.def("beam_power", [](const RadialProfile& p) { return beam_power(p).power; });
    m.def("dimensionless_power", &dimensionless_power);
    m.def("diffraction_length", &diffraction_length);
}

void bind_toroid(py::module_& m) {
    using namespace zpf::toroid;
    py::class_<CarrierSpec>(m, "CarrierSpec")
        .def(py::init<>())
        .def_readwrite("omega", &CarrierSpec::omega)
        .def_readwrite("k", &CarrierSpec::k)
        .def("period", &CarrierSpec::period);
    m.def("carrier_of", &carrier_of, py::arg("profile"), py::arg("constants") = PhysicalConstants::natural());
    m.def(
        "rotation_ratio",
        [](const RadialProfile& p, const CarrierSpec& c, const MediumModel& md, double curvature) {
            return rotation_ratio(p, c, md, curvature);
        },
        py::arg("profile"), py::arg("carrier"), py::arg("medium"), py::arg("curvature"));
    m.def("max_curvature", [](const RadialProfile& p) { return max_curvature(p); });
    py::class_<CurvatureResponse>(m, "CurvatureResponse")
        .def_readonly("curvature", &CurvatureResponse::curvature)
        .def_readonly("gamma", &CurvatureResponse::gamma)
        .def_readonly("slope", &CurvatureResponse::slope)
        .def("radius", &CurvatureResponse::radius);
    m.def(
        "find_stable_curvature",
        [](const RadialProfile& p, const CarrierSpec& c, const MediumModel& md) { return find_stable_curvature(p, c, md); },
        py::arg("profile"), py::arg("carrier"), py::arg("medium"));
    py::enum_<Adjustment>(m, "Adjustment").value("Frequency", Adjustment::Frequency).value("Medium", Adjustment::Medium);
    py::enum_<TransitSpeed>(m, "TransitSpeed").value("Group", TransitSpeed::Group).value("Phase", TransitSpeed::Phase);
    py::class_<QuantizeSpec>(m, "QuantizeSpec")
        .def(py::init<>())
        .def_readwrite("carrier", &QuantizeSpec::carrier)
        .def_readwrite("n0", &QuantizeSpec::n0)
        .def_readwrite("transverse_q", &QuantizeSpec::transverse_q)
        .def_readwrite("critical_power", &QuantizeSpec::critical_power)
        .def_readwrite("adjustment", &QuantizeSpec::adjustment)
        .def_readwrite("speed", &QuantizeSpec::speed)
        .def_readwrite("radius_response", &QuantizeSpec::radius_response);
    py::class_<TorusSolution>(m, "TorusSolution")
        .def_readonly("m", &TorusSolution::m)
        .def_readonly("radius", &TorusSolution::radius)
        .def_readonly("period", &TorusSolution::period)
        .def_readonly("omega", &TorusSolution::omega)
        .def_readonly("energy", &TorusSolution::energy)
        .def_readonly("freq_shift", &TorusSolution::freq_shift)
        .def_readonly("residual", &TorusSolution::residual);
    m.def("quantize_torus", &quantize_torus, py::arg("c0"), py::arg("spec"), py::arg("m_min"), py::arg("m_max"),
          py::arg("constants") = PhysicalConstants::natural());
}

}  // namespace

PYBIND11_MODULE(_zpflab, m) {
    m.doc() = "Zero-point field, filament and toroid models";
    auto base = py::register_exception<Error>(m, "ZpfError", PyExc_RuntimeError);
    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ModelError>(m, "ModelError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());
    py::register_exception<NoSolutionError>(m, "NoSolutionError", base.ptr());
    py::register_exception<ResolutionError>(m, "ResolutionError", base.ptr());

    bind_core(m);
    bind_fringe(m);
    bind_splitter(m);
    bind_dipole(m);
    bind_filament(m);
    bind_toroid(m);
}
