// SPDX-License-Identifier: Apache-2.0
#include "risbeam/analytic.hpp"
#include "risbeam/cli.hpp"
#include "risbeam/grcs.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace risbeam;

namespace {

ArrayGeometry line_or_plane(int ny, int nz, double spacing_lambda, const Wavelength& wl) {
    return centered_upa(ny, nz, spacing_lambda * wl.meters(), Position3::Zero());
}

}  // namespace

PYBIND11_MODULE(_risbeam, m) {
    m.doc() = "Bindings for the risbeam C++ core";
    m.attr("__version__") = kVersion;

    m.def(
        "regime_distances",
        [](double largest_dimension, double freq_hz) {
            const Wavelength wl = Wavelength::from_frequency_hz(freq_hz);
            return std::pair{quadratic_near_field_distance(largest_dimension, wl),
                             far_field_distance(largest_dimension, wl)};
        },
        py::arg("largest_dimension"), py::arg("freq_hz"), "(d_qNF, d_FF) in metres.");

    m.def(
        "classify_regime",
        [](double distance, double largest_dimension, double freq_hz) {
            return std::string(
                to_string(classify_regime(distance, largest_dimension, Wavelength::from_frequency_hz(freq_hz))));
        },
        py::arg("distance"), py::arg("largest_dimension"), py::arg("freq_hz"));

    m.def(
        "focusing_profile",
        [](int ny, int nz, const Position3& u_t, const Position3& u_r, double freq_hz, double spacing_lambda) {
            const Wavelength wl = Wavelength::from_frequency_hz(freq_hz);
            return RVector(focusing_profile(line_or_plane(ny, nz, spacing_lambda, wl), u_t, u_r, wl).omegas());
        },
        py::arg("ny"), py::arg("nz"), py::arg("u_t"), py::arg("u_r"), py::arg("freq_hz"),
        py::arg("spacing_lambda") = 0.5, "Exact focusing phases for a y-z UPA centred at the origin.");

    m.def(
        "normalized_grcs",
        [](int ny, int nz, const RVector& phases, const Position3& u_t, const Position3& u_r, double freq_hz,
           double spacing_lambda) {
            const Wavelength wl = Wavelength::from_frequency_hz(freq_hz);
            const ArrayGeometry g = line_or_plane(ny, nz, spacing_lambda, wl);
            if (phases.size() != g.size()) throw py::value_error("phases must have ny*nz entries");
            return normalized_grcs(response_near(g.positions(), u_t, u_r, kPi, wl), PhaseProfile(phases));
        },
        py::arg("ny"), py::arg("nz"), py::arg("phases"), py::arg("u_t"), py::arg("u_r"), py::arg("freq_hz"),
        py::arg("spacing_lambda") = 0.5, "Near-field GRCS normalized by (Omega N)^2.");

    m.def("subcommands", &subcommands);

    m.def(
        "run",
        [](const std::string& subcommand, const std::string& config, const std::string& out,
           std::optional<std::uint64_t> seed, int workers, bool verbose) {
            RunConfig rc{subcommand, config, out, seed, workers, verbose};
            std::ostringstream o, e;
            int code;
            {
                py::gil_scoped_release release;
                code = dispatch(rc, o, e);
            }
            return py::make_tuple(code, o.str(), e.str());
        },
        py::arg("subcommand"), py::arg("config"), py::arg("out") = ".", py::arg("seed") = py::none(),
        py::arg("workers") = 1, py::arg("verbose") = false,
        "Run a CLI subcommand in-process. Returns (exit_code, stdout, stderr).");
}
