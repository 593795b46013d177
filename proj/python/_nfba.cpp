// Copyright 2026 The nfba Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nfba/baselines.hpp"
#include "nfba/channel.hpp"
#include "nfba/coarse.hpp"
#include "nfba/errors.hpp"
#include "nfba/finenet/dataset.hpp"
#include "nfba/finenet/network.hpp"
#include "nfba/finenet/weights_io.hpp"
#include "nfba/flops.hpp"
#include "nfba/monte_carlo.hpp"
#include "nfba/numerics.hpp"
#include "nfba/report.hpp"
#include "nfba/sim_config.hpp"

namespace py = pybind11;
using namespace nfba;

namespace {

py::dict row_to_dict(const MetricsRow& r) {
  py::dict d;
  d["scheme"] = r.scheme;
  d["p_t_dbm"] = r.p_t_dbm;
  d["nmse_range"] = r.nmse_range;
  d["nmse_angle"] = r.nmse_angle;
  d["mean_gain"] = r.mean_gain;
  d["success_rate"] = r.success_rate;
  d["rate_bps_hz"] = r.rate_bps_hz;
  d["flops"] = r.flops;
  d["pilot_symbols"] = r.pilot_symbols;
  d["trials"] = r.trials;
  d["seed"] = r.seed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_nfba, m) {
  m.doc() = "Near-field beam alignment: numerics, channel model, estimators and simulation.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalAbort>(m, "NumericalAbort", PyExc_ArithmeticError);

  m.def("dbm_to_mw", &dbm_to_mw);
  m.def("mw_to_dbm", &mw_to_dbm);

  py::class_<ArrayConfig>(m, "ArrayConfig")
      .def(py::init<>())
      .def_readwrite("n_antennas", &ArrayConfig::n_antennas)
      .def_readwrite("carrier_hz", &ArrayConfig::carrier_hz)
      .def_readwrite("bandwidth_hz", &ArrayConfig::bandwidth_hz)
      .def_readwrite("noise_psd_dbm_per_hz", &ArrayConfig::noise_psd_dbm_per_hz)
      .def_readwrite("r_min", &ArrayConfig::r_min)
      .def_readwrite("r_max", &ArrayConfig::r_max)
      .def_property_readonly("wavelength", &ArrayConfig::wavelength)
      .def_property_readonly("spacing", &ArrayConfig::spacing)
      .def_property_readonly("rayleigh_distance", &ArrayConfig::rayleigh_distance)
      .def_property_readonly("noise_dbm", &ArrayConfig::noise_dbm)
      .def_property_readonly("noise_mw", &ArrayConfig::noise_mw)
      .def("grid_angle", &ArrayConfig::grid_angle, py::arg("m"))
      .def("validate", &ArrayConfig::validate);

  // Numerics.
  m.def("fresnel", [](double x) {
    const CornuPoint p = fresnel(x);
    return py::make_tuple(p.c, p.s);
  }, py::arg("x"), "Unnormalized Fresnel integrals (C, S) of x.");
  m.def("osculating_center", [](double t, std::optional<double> radius) {
    const Vec2 c = osculating_center(t, radius);
    return py::make_tuple(c.x, c.y);
  }, py::arg("t"), py::arg("radius") = py::none());
  m.def("spread_params", [](double theta, double r, int l, const ArrayConfig& cfg) {
    const SpreadParams p = spread_params(theta, r, l, cfg);
    return py::make_tuple(p.s_param, p.delta, p.w);
  }, py::arg("theta"), py::arg("r"), py::arg("l"), py::arg("cfg") = ArrayConfig{});
  m.def("rho_exact", &rho_exact, py::arg("theta"), py::arg("r"), py::arg("l"),
        py::arg("cfg") = ArrayConfig{});
  m.def("rho_fresnel", &rho_fresnel, py::arg("theta"), py::arg("r"), py::arg("l"),
        py::arg("cfg") = ArrayConfig{});
  m.def("rho_upper_bound", py::overload_cast<double, double, int, const ArrayConfig&>(&rho_upper_bound),
        py::arg("theta"), py::arg("r"), py::arg("l"), py::arg("cfg") = ArrayConfig{});
  m.def("spread_half_width", &spread_half_width, py::arg("delta"), py::arg("epsilon"));
  m.def("half_width_at", &half_width_at, py::arg("theta"), py::arg("r"), py::arg("epsilon"),
        py::arg("cfg") = ArrayConfig{});
  m.def("epsilon_subspace", &epsilon_subspace, py::arg("center"), py::arg("r"), py::arg("epsilon"),
        py::arg("cfg") = ArrayConfig{});

  // Channel.
  m.def("steering_vector", &steering_vector, py::arg("theta"), py::arg("r"),
        py::arg("cfg") = ArrayConfig{});
  m.def("channel", [](double phi, double r, const ArrayConfig& cfg) {
    return channel(UePosition::from_phi(phi, r), cfg);
  }, py::arg("phi"), py::arg("r"), py::arg("cfg") = ArrayConfig{});
  m.def("dft_column", &dft_column, py::arg("m"), py::arg("cfg") = ArrayConfig{});
  m.def("nearest_grid_index", &nearest_grid_index, py::arg("theta"), py::arg("cfg") = ArrayConfig{});
  m.def("beam_gain", &beam_gain, py::arg("w"), py::arg("h"));
  m.def("measure", [](const ComplexVector& h, double p_t_mw, double sigma2_mw, std::uint64_t seed,
                      std::uint64_t trial, const ArrayConfig& cfg) {
    const DftCodebook dft(cfg);
    KeyedRng rng(seed, trial, StreamTag::kDftNoise);
    return measure(h, p_t_mw, sigma2_mw, dft, rng);
  }, py::arg("h"), py::arg("p_t_mw"), py::arg("sigma2_mw"), py::arg("seed") = 1, py::arg("trial") = 0,
        py::arg("cfg") = ArrayConfig{}, "DFT-codebook pilot measurements y = sqrt(P) F^H h + n.");

  // Coarse stage.
  py::class_<CoarseResult>(m, "CoarseResult")
      .def_readonly("center_index", &CoarseResult::center_index)
      .def_readonly("half_width", &CoarseResult::half_width)
      .def_readonly("range_est", &CoarseResult::range_est)
      .def_readonly("angle_est", &CoarseResult::angle_est)
      .def_readonly("gain_est", &CoarseResult::gain_est)
      .def_readonly("objective", &CoarseResult::objective)
      .def_readonly("subspace", &CoarseResult::subspace);
  m.def("default_gamma", &default_gamma, py::arg("p_t_mw"), py::arg("exponent") = 1.5);
  m.def("coarse_align", [](const ComplexVector& y, double p_t_mw, const ArrayConfig& cfg, double epsilon,
                           std::optional<double> gamma) {
    return coarse_align(y, p_t_mw, cfg, epsilon, gamma.value_or(default_gamma(p_t_mw)));
  }, py::arg("y"), py::arg("p_t_mw"), py::arg("cfg") = ArrayConfig{}, py::arg("epsilon") = 0.1,
        py::arg("gamma") = py::none());

  // Network.
  py::class_<finenet::FineNet, std::shared_ptr<finenet::FineNet>>(m, "FineNet")
      .def(py::init<>())
      .def("init", &finenet::FineNet::init, py::arg("seed"))
      .def_property_readonly("trainable_count", &finenet::FineNet::trainable_count)
      .def("load", [](finenet::FineNet& net, const std::filesystem::path& p) { finenet::load_weights(net, p); })
      .def("save", [](const finenet::FineNet& net, const std::filesystem::path& p) { finenet::save_weights(net, p); })
      .def("forward", [](finenet::FineNet& net, const std::vector<double>& x, const std::vector<std::uint8_t>& mask) {
        if (x.size() != mask.size()) throw std::invalid_argument("input and mask lengths differ");
        return net.forward(x, mask, 1, finenet::Mode::kEval);
      }, py::arg("x"), py::arg("mask"), "Slot probabilities for one input row.");
  m.def("input_length", &finenet::input_length, py::arg("cfg") = ArrayConfig{}, py::arg("epsilon") = 0.1);

  // Complexity.
  py::module_ f = m.def_submodule("flops");
  f.def("coarse", &flops::coarse);
  f.def("fine", py::overload_cast<int>(&flops::fine));
  f.def("fine_approx", &flops::fine_approx);
  f.def("ls", &flops::ls);
  f.def("polar_exhaustive", &flops::polar_exhaustive);
  f.def("aswje", &flops::aswje);
  f.def("dft_dnn", &flops::dft_dnn);
  f.def("dnbt", &flops::dnbt);

  // Simulation.
  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("array", &SimConfig::array)
      .def_readwrite("sweep_dbm", &SimConfig::sweep_dbm)
      .def_readwrite("trials", &SimConfig::trials)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("epsilon", &SimConfig::epsilon)
      .def_readwrite("schemes", &SimConfig::schemes)
      .def_readwrite("n_rf", &SimConfig::n_rf)
      .def("__str__", [](const SimConfig& c) { return to_string(c); });
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("simulate", [](const SimConfig& cfg, std::shared_ptr<finenet::FineNet> net, int threads) {
    std::vector<MetricsRow> rows;
    {
      py::gil_scoped_release release;
      rows = Simulator(cfg, net).run(threads);
    }
    py::list out;
    for (const auto& r : rows) out.append(row_to_dict(r));
    return out;
  }, py::arg("cfg"), py::arg("net") = nullptr, py::arg("threads") = 0,
        "Runs the Monte Carlo sweep and returns one dict per (scheme, power).");
  m.def("simulate_csv", [](const SimConfig& cfg, std::shared_ptr<finenet::FineNet> net, int threads) {
    py::gil_scoped_release release;
    return format_csv(Simulator(cfg, net).run(threads));
  }, py::arg("cfg"), py::arg("net") = nullptr, py::arg("threads") = 0);
}
