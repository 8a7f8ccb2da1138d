#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "siframes/cli.hpp"
#include "siframes/errors.hpp"

namespace py = pybind11;
using namespace siframes;

namespace {

// Accepts ints, fractions.Fraction and "p/q" strings.
Rational rational(const py::handle& value) { return parse_rational(py::str(value).cast<std::string>()); }

std::complex<double> to_complex(const HpComplex& z) {
  return {z.re.convert_to<double>(), z.im.convert_to<double>()};
}

py::object loads(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json dumps(const py::object& o) {
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::dict integral_dict(const IntegralValue& v) {
  py::dict out;
  out["exact"] = v.is_exact();
  out["value"] = to_complex(v.value());
  out["json"] = loads(to_json(v));
  return out;
}

cli::Flags flags_from(const py::dict& options) {
  cli::Flags flags;
  for (auto [key, value] : options) {
    const auto name = py::str(key).cast<std::string>();
    if (name == "tol") {
      flags.tol = rational(value);
    } else if (name == "window") {
      flags.window = cli::parse_window(py::str(value).cast<std::string>());
    } else if (name == "max_size") {
      flags.max_size = value.cast<int>();
    } else if (name == "epsilon") {
      flags.epsilon = rational(value);
    } else if (name == "depth") {
      flags.depth = value.cast<int>();
    } else if (name == "a") {
      flags.a = value.cast<std::int64_t>();
    } else if (name == "b") {
      flags.b = rational(value);
    } else if (name == "c") {
      flags.c = rational(value);
    } else if (name == "csv") {
      if (value.cast<bool>()) flags.format = cli::OutputFormat::Csv;
    } else if (name == "timings") {
      flags.timings = value.cast<bool>();
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown option '" + name + "'");
    }
  }
  return flags;
}

}  // namespace

PYBIND11_MODULE(_siframes, m) {
  m.doc() = "Exact step-function analysis of shift-invariant spaces and affine systems";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error;
  error.call_once_and_store_result([&] { return py::exception<Error>(m, "SiframesError", PyExc_ValueError); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = error.get_stored();
      py::object instance = type(e.what());
      instance.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(type.ptr(), instance.ptr());
    }
  });

  py::class_<ModStepFn>(m, "StepFunction")
      .def(py::init<>())
      .def_static(
          "indicator",
          [](const py::object& lo, const py::object& hi) { return ModStepFn::indicator(rational(lo), rational(hi)); },
          py::arg("lo"), py::arg("hi"))
      .def_static(
          "from_json", [](const py::object& o) { return step_from_json(dumps(o), "function"); }, py::arg("data"))
      .def("to_json", [](const ModStepFn& f) { return loads(to_json(f)); })
      .def("is_exact", &ModStepFn::is_exact)
      .def("breakpoints",
           [](const ModStepFn& f) {
             std::vector<std::string> out;
             for (const auto& x : f.breakpoints()) out.push_back(to_string(x));
             return out;
           })
      .def("__call__", [](const ModStepFn& f, const py::object& xi) { return to_complex(f.evaluate(rational(xi))); })
      .def("__add__", [](const ModStepFn& f, const ModStepFn& g) { return f + g; })
      .def("__sub__", [](const ModStepFn& f, const ModStepFn& g) { return f - g; })
      .def("__eq__", [](const ModStepFn& f, const ModStepFn& g) { return equals(f, g); })
      .def("modulate", [](const ModStepFn& f, const py::object& tau) { return modulate(f, rational(tau)); })
      .def("affine_reparam",
           [](const ModStepFn& f, const py::object& s, const py::object& t) {
             return affine_reparam(f, rational(s), rational(t));
           })
      .def("restrict",
           [](const ModStepFn& f, const py::object& lo, const py::object& hi) {
             return restrict(f, rational(lo), rational(hi));
           })
      .def("periodize", [](const ModStepFn& f, const py::object& p) { return periodize(f, rational(p)); })
      .def("integrate", [](const ModStepFn& f) { return integral_dict(integrate(f)); })
      .def("norm2", [](const ModStepFn& f) { return integral_dict(norm2(f)); })
      .def("__repr__", [](const ModStepFn& f) { return "StepFunction(" + to_json(f).dump() + ")"; });

  m.def(
      "run",
      [](const std::string& command, const std::optional<std::string>& spec, const std::string& target,
         const py::dict& options) {
        std::optional<cli::SpecFile> parsed;
        if (spec) parsed = cli::parse_spec(*spec);
        const cli::Report report = cli::execute(parsed ? &*parsed : nullptr, command, target, flags_from(options));
        py::dict out;
        out["report"] = loads(report.json);
        out["csv"] = report.csv ? py::object(py::str(*report.csv)) : py::object(py::none());
        out["exit_code"] = report.exit_code;
        return out;
      },
      py::arg("command"), py::arg("spec") = py::none(), py::arg("target") = "", py::arg("options") = py::dict(),
      "Runs one CLI command in process. `spec` is the JSON text of a spec file.");

  m.def(
      "calderon_sum",
      [](const py::object& config) {
        const auto result = calderon_sum(config_from_json(dumps(config), "config"));
        py::list domain;
        for (const auto& [lo, hi] : result.domain) domain.append(py::make_tuple(to_string(lo), to_string(hi)));
        py::dict out;
        out["domain"] = domain;
        out["sum"] = loads(to_json(result.sum));
        return out;
      },
      py::arg("config"));

  m.def(
      "frame_sum",
      [](const py::object& config, const ModStepFn& f) {
        return integral_dict(frame_sum(config_from_json(dumps(config), "config"), f));
      },
      py::arg("config"), py::arg("f"));

  m.def(
      "translates_criterion",
      [](const std::map<std::int64_t, std::string>& coefficients, const py::object& b) {
        std::map<std::int64_t, Scalar> coeffs;
        for (const auto& [k, c] : coefficients) coeffs.emplace(k, Scalar(parse_rational(c)));
        const auto v = translates_criterion(coeffs, rational(b));
        py::dict out;
        out["status"] = std::string(to_string(v.status));
        out["witness_xi"] = to_string(v.witness_xi);
        out["witness_modulus"] = v.witness_modulus.convert_to<double>();
        return out;
      },
      py::arg("coefficients"), py::arg("b"));

#ifdef SIFRAMES_VERSION_STRING
  m.attr("__version__") = SIFRAMES_VERSION_STRING;
#endif
}
