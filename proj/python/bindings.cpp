#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <optional>

#include "cli.hpp"
#include "qortho/verify.hpp"

namespace py = pybind11;
using namespace qortho;

namespace {

std::complex<double> to_std(const HPComplex& z) { return {z.re.to_double(), z.im.to_double()}; }

HPComplex from_std(std::complex<double> z, Bits b) { return HPComplex(z.real(), z.imag(), b); }

PrecisionPolicy policy_for(const ExactRational& q, const ExactRational& alpha, long n_max, std::optional<unsigned> bits) {
  return PrecisionPolicy::with_bits(bits ? *bits : required_bits(q, alpha, n_max, 32));
}

std::string run_json(const std::string& command, const std::string& claim, const py::kwargs& kw) {
  cli::RunConfig c;
  c.command = command;
  c.claim = claim;
  for (const auto& item : kw) {
    const auto key = item.first.cast<std::string>();
    const py::handle v = item.second;
    if (key == "q") c.q = py::str(v);
    else if (key == "alpha") c.alpha = py::str(v);
    else if (key == "weight") c.weight = v.cast<std::string>();
    else if (key == "weight_table") c.weight_table = v.cast<std::string>();
    else if (key == "n_max") c.n_max = v.cast<long>();
    else if (key == "precision") c.precision = py::str(v);
    else if (key == "tail_eps") c.tail_eps = py::str(v);
    else if (key == "j_max") c.j_max = v.cast<long>();
    else if (key == "det_check") c.det_check = v.cast<bool>();
    else if (key == "label") c.label = v.cast<std::string>();
    else if (key == "n_set") c.n_set = v.cast<std::string>();
    else if (key == "outer_z") c.outer_z = v.cast<std::vector<std::string>>();
    else throw py::key_error("unknown option " + key);
  }
  const cli::Artifact a = cli::run(c);
  Json out = a.json;
  out["passed"] = a.passed;
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_qortho, m) {
  m.doc() = "q-orthogonal polynomial recurrences and model problem checks";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(PyExc_ValueError, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def("run_json", &run_json, py::arg("command"), py::arg("claim") = "");

  m.def(
      "recurrence",
      [](const std::string& weight, const std::string& q, const std::string& alpha, long n_max,
         std::optional<unsigned> bits) {
        const ExactRational qq = parse_rational(q), aa = parse_rational(alpha);
        const auto rec = build_recurrence(WeightSpec::parse(weight, qq, aa), n_max, policy_for(qq, aa, n_max, bits));
        return to_json(rec).dump();
      },
      py::arg("weight") = "unit", py::arg("q") = "1/2", py::arg("alpha") = "0", py::arg("n_max") = 16,
      py::arg("bits") = py::none());

  m.def(
      "exact_recurrence",
      [](const std::string& weight, const std::string& q, const std::string& alpha, long n_max) {
        const auto mom = exact_moments(WeightSpec::parse(weight, parse_rational(q), parse_rational(alpha)), n_max);
        if (!mom) fail(ErrorKind::bad_input, "no exact moments for this weight and alpha");
        return to_json(recurrence_stieltjes(*mom, n_max)).dump();
      },
      py::arg("weight") = "unit", py::arg("q") = "1/2", py::arg("alpha") = "0", py::arg("n_max") = 10);

  m.def(
      "pochhammer_inf",
      [](std::complex<double> z, const std::string& q, unsigned bits) {
        const auto p = PrecisionPolicy::with_bits(bits);
        return to_std(pochhammer_inf(from_std(z, p.bits()), HPReal(parse_rational(q), p.bits()), p.tolerance())
                          .checked("pochhammer"));
      },
      py::arg("z"), py::arg("q") = "1/2", py::arg("bits") = 128);

  py::class_<ModelSolution>(m, "ModelSolution")
      .def(py::init([](const std::string& q, const std::string& alpha, long j_max, unsigned bits) {
             return build_model_solution(QParams(parse_rational(q), parse_rational(alpha)), j_max,
                                         PrecisionPolicy::with_bits(bits));
           }),
           py::arg("q") = "1/2", py::arg("alpha") = "0", py::arg("j_max") = 80, py::arg("bits") = 256)
      .def("psi", [](const ModelSolution& s, std::complex<double> t) { return to_std(s.psi(from_std(t, s.policy.bits()))); })
      .def("phi", [](const ModelSolution& s, std::complex<double> t) { return to_std(s.phi(from_std(t, s.policy.bits()))); })
      .def("varphi",
           [](const ModelSolution& s, std::complex<double> t) { return to_std(s.varphi(from_std(t, s.policy.bits()))); })
      .def("rho", [](const ModelSolution& s, std::complex<double> t) { return to_std(s.rho(from_std(t, s.policy.bits()))); })
      .def("det_residual",
           [](const ModelSolution& s, std::complex<double> t) {
             return det_residual(s, from_std(t, s.policy.bits())).to_double();
           })
      .def("connection_residual",
           [](const ModelSolution& s, std::complex<double> t) {
             return connection_residual(s, from_std(t, s.policy.bits())).to_double();
           })
      .def("smallest_zero", [](const ModelSolution& s) { return psi_smallest_positive_zero(s).str(30); })
      .def_property_readonly("C0", [](const ModelSolution& s) { return s.C0.value.str(30); });
}
