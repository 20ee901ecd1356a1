#include "twistspdc/decompose.hpp"
#include "twistspdc/errors.hpp"
#include "twistspdc/gaussian.hpp"
#include "twistspdc/spdc.hpp"
#include "twistspdc/sweep.hpp"
#include "twistspdc/tgsm.hpp"
#include "twistspdc/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace twistspdc;

namespace {

py::object json_to_python(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Party party_from_int(int party) {
  if (party != 1 && party != 2) throw InvalidParams("party must be 1 or 2");
  return party == 1 ? Party::First : Party::Second;
}

GridAxis axis_from_tuple(const std::tuple<double, double, int>& t) {
  return GridAxis{std::get<0>(t), std::get<1>(t), std::get<2>(t)};
}

SweepSpec make_spec(const Setup& setup, const std::tuple<double, double, int>& beta_grid,
                    const std::tuple<double, double, int>& twist_grid) {
  SweepSpec spec;
  spec.setup = setup;
  spec.beta_grid = axis_from_tuple(beta_grid);
  spec.twist_grid = axis_from_tuple(twist_grid);
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian covariance-matrix model of SPDC pumped by twisted Gaussian Schell-model beams";

  // Translators run newest-first, so the subclass is registered last.
  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<InfeasibleWaist>(m, "InfeasibleWaist", base.ptr());

  // gaussian core
  m.def("symplectic_form", &symplectic_form, "n_modes"_a);
  m.def("symplectic_spectrum", [](const Matrix& v) { return symplectic_spectrum(CovMatrix(v)).values; }, "v"_a);
  m.def("is_physical", [](const Matrix& v, double tol) { return is_physical(CovMatrix(v), tol); }, "v"_a,
        "tol"_a = kPhysicalityTol);
  m.def("purity", [](const Matrix& v) { return purity(CovMatrix(v)); }, "v"_a);
  m.def("partial_transpose",
        [](const Matrix& v, int party) { return partial_transpose(CovMatrix(v), party_from_int(party)).matrix(); },
        "v"_a, "party"_a = 2);
  m.def("local_scale", [](const Matrix& v) { return local_scale(CovMatrix(v)).matrix(); }, "v"_a);
  m.def("log_negativity", [](const Matrix& v) { return log_negativity(CovMatrix(v)); }, "v"_a);
  m.def("williamson",
        [](const Matrix& v) {
          const auto w = williamson(CovMatrix(v));
          return py::make_tuple(w.symplectic, w.diag);
        },
        "v"_a, "Returns (S_w, nu) with V = S_w diag(nu1, nu1, ...) S_w^T.");

  // pump
  py::class_<TgsmParams>(m, "TgsmParams")
      .def(py::init<>())
      .def_static("from_delta",
                  [](double sigma, double delta, double k, double inv_r, double u) {
                    return TgsmParams::from_delta(sigma, delta, inv_r, u, k);
                  },
                  "sigma"_a, "delta"_a, "k"_a, "inv_R"_a = 0.0, "u"_a = 0.0)
      .def_readwrite("sigma", &TgsmParams::sigma)
      .def_readwrite("inv_delta_sq", &TgsmParams::inv_delta_sq)
      .def_readwrite("inv_R", &TgsmParams::inv_R)
      .def_readwrite("u", &TgsmParams::u)
      .def_readwrite("k", &TgsmParams::k)
      .def_property_readonly("delta", &TgsmParams::delta)
      .def_property_readonly("tau_sq", &TgsmParams::tau_sq)
      .def_property_readonly("beta_sq", &TgsmParams::beta_sq)
      .def_property_readonly("twist_bound", &TgsmParams::twist_bound)
      .def("validate", &TgsmParams::validate);

  py::class_<NormalizedPoint>(m, "NormalizedPoint")
      .def(py::init([](double beta, double t, int sign) { return NormalizedPoint{beta, t, sign}; }), "beta"_a,
           "t"_a = 0.0, "twist_sign"_a = 1)
      .def_readwrite("beta", &NormalizedPoint::beta)
      .def_readwrite("t", &NormalizedPoint::t)
      .def_readwrite("twist_sign", &NormalizedPoint::twist_sign);

  py::class_<MixtureModel>(m, "MixtureModel")
      .def_property_readonly("component_cm", [](const MixtureModel& mm) { return mm.component_cm.matrix(); })
      .def_readonly("ensemble_cov", &MixtureModel::ensemble_cov);

  m.def("wavenumber_from_wavelength", &wavenumber_from_wavelength, "wavelength_m"_a);
  m.def("pump_cm", [](const TgsmParams& p) { return pump_cm(p).matrix(); }, "params"_a);
  m.def("beta_squared", &beta_squared, "sigma"_a, "delta"_a);
  m.def("delta_from_beta", &delta_from_beta, "beta"_a, "sigma"_a);
  m.def("max_twist", &max_twist, "k"_a, "delta"_a);
  m.def("params_from_normalized", &params_from_normalized, "point"_a, "sigma"_a, "k"_a, "inv_R"_a = 0.0);
  m.def("pump_oam", &pump_oam, "params"_a);
  m.def("mixture_model",
        [](const TgsmParams& p, const std::string& mode, double waist) {
          return mixture_model(p, parse_mode(mode), waist);
        },
        "params"_a, "mode"_a = "williamson", "waist"_a = 0.0);
  m.def("sample_component_means",
        [](const MixtureModel& model, std::size_t count, std::uint64_t seed) {
          const auto samples = sample_component_means(model, count, seed);
          Eigen::Matrix<double, Eigen::Dynamic, 4, Eigen::RowMajor> out(samples.size(), 4);
          for (std::size_t i = 0; i < samples.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = samples[i];
          return out;
        },
        "model"_a, "count"_a, "seed"_a);

  // spdc model
  py::class_<PhaseMatching>(m, "PhaseMatching")
      .def(py::init([](double length, double k) { return PhaseMatching{length, k}; }), "length"_a, "k"_a)
      .def_readwrite("length", &PhaseMatching::length)
      .def_readwrite("k", &PhaseMatching::k)
      .def_property_readonly("sigma_minus_sq", &PhaseMatching::sigma_minus_sq)
      .def_property_readonly("delta_minus_sq", &PhaseMatching::delta_minus_sq);

  py::class_<ClosedFormEigs>(m, "ClosedFormEigs")
      .def_readonly("lambda_minus", &ClosedFormEigs::lambda_minus)
      .def_readonly("lambda_plus", &ClosedFormEigs::lambda_plus)
      .def_readonly("a_plus", &ClosedFormEigs::a_plus)
      .def_readonly("a_minus", &ClosedFormEigs::a_minus);

  py::class_<EntanglementReport>(m, "EntanglementReport")
      .def_readonly("lambda_minus", &EntanglementReport::lambda_minus)
      .def_readonly("lambda_plus", &EntanglementReport::lambda_plus)
      .def_readonly("npt_entangled", &EntanglementReport::npt_entangled)
      .def_readonly("log_negativity", &EntanglementReport::log_negativity)
      .def_property_readonly("mancini_products",
                             [](const EntanglementReport& r) {
                               return py::make_tuple(r.mancini.plus_minus, r.mancini.minus_plus);
                             })
      .def_readonly("mancini_violated", &EntanglementReport::mancini_violated)
      .def_readonly("purity_two_photon", &EntanglementReport::purity_two_photon)
      .def_readonly("pump_oam", &EntanglementReport::pump_oam)
      .def_property_readonly("photon_oam", [](const EntanglementReport& r) { return r.photon.photon_oam; })
      .def_property_readonly("cross_twist_sum", [](const EntanglementReport& r) { return r.photon.cross_twist_sum; })
      .def_property_readonly("cross_twist_diff",
                             [](const EntanglementReport& r) { return r.photon.cross_twist_diff; })
      .def_readonly("a_plus", &EntanglementReport::a_plus)
      .def_readonly("a_minus", &EntanglementReport::a_minus)
      .def("to_dict", [](const EntanglementReport& r) { return json_to_python(report_json(r)); });

  py::class_<Setup>(m, "Setup")
      .def(py::init([](double wavelength_m, double sigma_m, double crystal_length_m, double curvature_inv_m) {
             return Setup{wavelength_m, sigma_m, crystal_length_m, curvature_inv_m};
           }),
           "wavelength_m"_a = 400e-9, "sigma_m"_a = 50e-6, "crystal_length_m"_a = 0.01, "curvature_inv_m"_a = 0.0)
      .def_readwrite("wavelength_m", &Setup::wavelength_m)
      .def_readwrite("sigma_m", &Setup::sigma_m)
      .def_readwrite("crystal_length_m", &Setup::crystal_length_m)
      .def_readwrite("curvature_inv_m", &Setup::curvature_inv_m)
      .def_property_readonly("k", &Setup::k)
      .def("pump", &Setup::pump, "point"_a)
      .def("phase_matching", &Setup::phase_matching);

  m.def("phase_matching_cm", [](const PhaseMatching& pm) { return phase_matching_cm(pm).matrix(); }, "pm"_a);
  m.def("coordinate_transform", &coordinate_transform);
  m.def("two_photon_cm",
        [](const TgsmParams& p, const PhaseMatching& pm) {
          const auto s = two_photon_state(p, pm);
          return py::make_tuple(s.global_cm.matrix(), s.photon_cm.matrix());
        },
        "pump"_a, "pm"_a, "Returns (global_cm, photon_cm).");
  m.def("closed_form_eigs", &closed_form_eigs, "pump"_a, "pm"_a);
  m.def("two_photon_purity", &two_photon_purity, "pump"_a, "pm"_a);
  m.def("pt_spectrum",
        [](const TgsmParams& p, const PhaseMatching& pm, int party) {
          return pt_spectrum_oracle(two_photon_state(p, pm), party_from_int(party)).values;
        },
        "pump"_a, "pm"_a, "party"_a = 2);
  m.def("entanglement_report", &entanglement_report, "pump"_a, "pm"_a);
  m.def("evaluate_point", &evaluate_point, "setup"_a, "point"_a);

  // drivers
  m.def("sweep",
        [](const Setup& setup, const std::tuple<double, double, int>& beta_grid,
           const std::tuple<double, double, int>& twist_grid, unsigned threads) {
          py::list out;
          for (const SweepRow& r : run_sweep(make_spec(setup, beta_grid, twist_grid), threads)) {
            out.append(py::dict("beta"_a = r.beta, "t_norm"_a = r.t_norm, "u_inv_m"_a = r.u_inv_m,
                                "delta_m"_a = r.delta_m, "tau2_inv_m2"_a = r.tau2_inv_m2,
                                "lambda_minus"_a = r.lambda_minus, "lambda_plus"_a = r.lambda_plus,
                                "log_negativity"_a = r.log_negativity, "mancini_min"_a = r.mancini_min,
                                "purity"_a = r.purity, "npt_entangled"_a = r.npt_entangled,
                                "mancini_violated"_a = r.mancini_violated));
          }
          return out;
        },
        "setup"_a, "beta_grid"_a, "twist_grid"_a, "threads"_a = 0,
        "Grids are (min, max, count) tuples; rows are beta-outer, t-inner.");
  m.def("sweep_csv",
        [](const Setup& setup, const std::tuple<double, double, int>& beta_grid,
           const std::tuple<double, double, int>& twist_grid, unsigned threads) {
          std::ostringstream os;
          write_csv(os, run_sweep(make_spec(setup, beta_grid, twist_grid), threads));
          return os.str();
        },
        "setup"_a, "beta_grid"_a, "twist_grid"_a, "threads"_a = 0);
  m.def("verify",
        [](int trials, std::uint64_t seed, std::optional<double> tolerance) {
          VerifyOptions opts{trials, seed, tolerance};
          const auto result = run_verify(opts);
          std::ostringstream os;
          print_verify_table(os, result);
          return py::make_tuple(result.passed(), os.str());
        },
        "trials"_a = 1000, "seed"_a = 20201, "tolerance"_a = py::none(), "Returns (passed, table).");
  m.def("decompose",
        [](const Setup& setup, const NormalizedPoint& point, std::size_t samples, std::uint64_t seed,
           const std::string& mode, double waist) {
          DecomposeOptions opts;
          opts.setup = setup;
          opts.point = point;
          opts.samples = samples;
          opts.seed = seed;
          opts.mode = parse_mode(mode);
          opts.waist_m = waist;
          return json_to_python(decompose_json(run_decompose(opts)));
        },
        "setup"_a, "point"_a, "samples"_a = 100000, "seed"_a = 0, "mode"_a = "williamson", "waist"_a = 0.0);
}
