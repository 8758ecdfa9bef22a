// Python bindings. Results cross the boundary as plain dicts built from the
// same JSON documents the CLI writes.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ctrlcap/cli/cli.hpp"

namespace py = pybind11;
using namespace ctrlcap;
using io::json;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::object& o) { return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>()); }

system::SystemSpec make_spec(int n, int k, const std::string& region, double cond, std::uint64_t seed, bool hermitian,
                             std::optional<int> stable_count, double b_fro) {
  system::SystemSpec s;
  s.n = n;
  s.k = k;
  s.region = capacity::parse_region(region);
  s.target_cond_V = cond;
  s.seed = seed;
  s.hermitian = hermitian;
  s.stable_count = stable_count;
  s.b_fro = b_fro;
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gramian eigenvalue bounds and logarithmic capacity";

  // Kept alive for the interpreter's lifetime; messages start with the kind.
  static PyObject* error = PyErr_NewException("ctrlcap._core.CtrlcapError", PyExc_RuntimeError, nullptr);
  m.add_object("CtrlcapError", py::handle(error));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def("thm2", [](int mm, int k, double q, double b_fro) {
    const auto v = bounds::thm2(mm, k, q, b_fro);
    return to_py(json{{"t_quad", v.t_quad}, {"bound", v.bound}});
  }, py::arg("m"), py::arg("k"), py::arg("q"), py::arg("b_fro") = 1.0);

  m.def("lemma2", [](int mm, double q, bool exact) { return to_py(io::to_json(bounds::lemma2_sum(mm, q, exact))); },
        py::arg("m"), py::arg("q"), py::arg("exact") = false);

  m.def("cap_closed_form", [](const std::string& region) { return capacity::cap_closed_form(capacity::parse_region(region)); },
        py::arg("region"));

  m.def("capacity", [](const std::string& region, int n_max) {
    return to_py(io::to_json(capacity::capacity(capacity::parse_region(region), n_max)));
  }, py::arg("region"), py::arg("n_max") = 40);

  m.def("cap_estimate", [](const std::string& region, int n_max) {
    return to_py(io::to_json(capacity::cap_estimate(capacity::parse_region(region), n_max)));
  }, py::arg("region"), py::arg("n_max") = 40);

  m.def("err", [](int l, const std::string& region) {
    return to_py(io::to_json(approx::err_region(l, capacity::parse_region(region))));
  }, py::arg("l"), py::arg("region"));

  m.def("phi", [](int n, int mm) { return to_py(io::to_json(approx::phi_exact(n, mm))); }, py::arg("n"), py::arg("m"));

  m.def("phi_hoeffding", &approx::phi_hoeffding, py::arg("n"), py::arg("m"));

  m.def("generate", [](int n, int k, const std::string& region, double cond, std::uint64_t seed, bool hermitian,
                       std::optional<int> stable_count, double b_fro) {
    return to_py(io::to_json(system::generate(make_spec(n, k, region, cond, seed, hermitian, stable_count, b_fro))));
  }, py::arg("n"), py::arg("k") = 1, py::arg("region") = "interval:-1,1", py::arg("cond") = 1.0, py::arg("seed") = 0,
     py::arg("hermitian") = false, py::arg("stable_count") = py::none(), py::arg("b_fro") = 1.0);

  m.def("gramian", [](const py::object& sys, int t, int precision_bits) {
    gramian::GramianOptions o;
    o.precision_bits = precision_bits;
    return to_py(io::to_json(gramian::gramian(io::system_from_json(from_py(sys)), t, o), false));
  }, py::arg("system"), py::arg("t"), py::arg("precision_bits") = 53);

  m.def("control_energy", [](const py::object& sys, int t) {
    return to_py(io::big_json(gramian::control_energy(io::system_from_json(from_py(sys)), t)));
  }, py::arg("system"), py::arg("t"));

  m.def("verify_thm1", [](int n, int k, const std::string& region, double cond, std::uint64_t seed) {
    const auto spec = make_spec(n, k, region, cond, seed, false, std::nullopt, 1.0);
    return to_py(io::to_json(bounds::verify_thm1(spec, spec.region)));
  }, py::arg("n"), py::arg("k"), py::arg("region"), py::arg("cond") = 1.0, py::arg("seed") = 0);

  m.def("verify_thm2", [](int n, int k, int stable_count, double q, int t, std::uint64_t seed) {
    const auto spec = make_spec(n, k, "interval:-1,1", 1.0, seed, true, stable_count, 1.0);
    return to_py(io::to_json(bounds::verify_thm2(spec, q, t)));
  }, py::arg("n"), py::arg("k"), py::arg("stable_count"), py::arg("q"), py::arg("t"), py::arg("seed") = 0);

  m.def("reproduce", [] {
    json lines = json::array();
    for (const auto& l : bounds::reproduce()) lines.push_back(io::to_json(l));
    return to_py(lines);
  });

  m.def("main", [](std::vector<std::string> args) {
    args.insert(args.begin(), "ctrlcap");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli::main(static_cast<int>(argv.size()), argv.data());
  }, py::arg("args"), "Runs the command-line front end; returns the exit code.");
}
