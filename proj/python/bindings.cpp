#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "constellation/alternants.hpp"
#include "constellation/cli.hpp"
#include "constellation/ensembles.hpp"
#include "constellation/form.hpp"
#include "constellation/form_io.hpp"
#include "constellation/limits.hpp"
#include "constellation/oracle.hpp"
#include "constellation/parallel.hpp"

namespace py = pybind11;
using namespace constellation;

namespace {

// specs arrive as the JSON text of one config "specs" entry
EnsembleSpec spec_from_json(const std::string& text) {
  const auto cfg = cli::parse_config("{\"specs\": [" + text + "]}", "spec");
  return cfg.specs.at(0);
}

py::dict result_dict(const PartitionResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["route"] = r.route;
  d["case_label"] = r.case_label;
  py::list routes;
  for (const auto& v : r.routes) {
    py::dict e;
    e["route"] = v.route;
    e["value"] = v.value;
    e["est_error"] = v.est_error;
    routes.append(e);
  }
  d["routes"] = routes;
  py::dict diag;
  diag["dimension"] = r.diagnostics.dimension;
  diag["effective_dimension"] = r.diagnostics.effective_dimension;
  diag["block_grade"] = r.diagnostics.block_grade;
  diag["kept_terms"] = r.diagnostics.kept_terms;
  diag["dropped_terms"] = r.diagnostics.dropped_terms;
  diag["notes"] = r.diagnostics.notes;
  d["diagnostics"] = diag;
  if (!r.canonical_values.empty()) {
    py::dict canon;
    for (const auto& [m, v] : r.canonical_values) canon[py::tuple(py::cast(m))] = v;
    d["canonical_values"] = canon;
  }
  return d;
}

py::dict report_dict(const LimitReport& rep) {
  py::dict d;
  d["kind"] = rep.kind;
  d["target"] = rep.target;
  auto points = [](const std::vector<LimitPoint>& ps) {
    py::list out;
    for (const auto& p : ps) out.append(py::make_tuple(p.parameter, p.ratio, p.error));
    return out;
  };
  d["points"] = points(rep.points);
  d["partition"] = points(rep.partition);
  d["order"] = rep.order;
  d["monotone"] = rep.monotone;
  d["passed"] = rep.passed;
  d["notes"] = rep.notes;
  return d;
}

Form form_from_dict(int dim, const std::map<std::vector<int>, Complex>& terms) {
  Form f(dim);
  for (const auto& [idx, c] : terms) f += Form::basis(IndexSubset(idx, dim), c);
  return f;
}

py::dict form_terms(const Form& f) {
  py::dict out;
  for (const auto& t : f.terms()) out[py::tuple(py::cast(mask_indices(t.mask)))] = t.coeff;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Constellation log-gas partition functions";

  static py::exception<Error> base(m, "ConstellationError", PyExc_RuntimeError);
  static py::exception<IntegrityError> integrity(m, "IntegrityError", base.ptr());
  static py::exception<ResourceLimitExceeded> resource(m, "ResourceLimitExceeded", base.ptr());
  static py::exception<ConfigError> config(m, "ConfigError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const IntegrityError& e) {
      py::set_error(integrity, e.what());
    } catch (const ResourceLimitExceeded& e) {
      py::set_error(resource, e.what());
    } catch (const ConfigError& e) {
      py::set_error(config, e.what());
    } catch (const InvalidArgument& e) {
      py::set_error(PyExc_ValueError, e.what());
    } catch (const DimensionMismatch& e) {
      py::set_error(PyExc_ValueError, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  py::class_<Form>(m, "Form")
      .def(py::init(&form_from_dict), py::arg("dim"), py::arg("terms") = std::map<std::vector<int>, Complex>{})
      .def_property_readonly("dim", &Form::dim)
      .def("terms", &form_terms)
      .def("coefficient",
           [](const Form& f, const std::vector<int>& idx) { return f.coefficient(IndexSubset(idx, f.dim())); })
      .def("wedge", [](const Form& a, const Form& b) { return wedge(a, b); })
      .def("__xor__", [](const Form& a, const Form& b) { return wedge(a, b); })
      .def("__add__", [](const Form& a, const Form& b) { return a + b; })
      .def("__sub__", [](const Form& a, const Form& b) { return a - b; })
      .def("berezin", [](const Form& f, const std::vector<int>& idx) { return berezin(f, IndexSubset(idx, f.dim())); })
      .def("exp", [](const Form& f, int max_grade) { return exp_truncated(f, max_grade); })
      .def("divided_power", [](const Form& f, int k) { return divided_power(f, k); })
      .def("hyperpfaffian", [](const Form& f, int M) { return hyperpfaffian(f, M); })
      .def("be_vol", [](const Form& f, int extension) { return be_vol(f, extension); }, py::arg("extension") = 0)
      .def("to_json", [](const Form& f) { return form_to_json(f).dump(); })
      .def_static("from_json", [](const std::string& s) { return form_from_json(nlohmann::json::parse(s)); })
      .def("__repr__", [](const Form& f) { return form_to_string(f); });

  m.def("_partition_function", [](const std::string& spec) {
    const auto s = spec_from_json(spec);
    PartitionResult r;
    {
      py::gil_scoped_release release;
      r = partition_function(s);
    }
    return result_dict(r);
  });

  m.def("_gamma_form", [](const std::string& spec) { return gamma_form(spec_from_json(spec)); });
  m.def("_eta_form", [](const std::string& spec) { return eta_form(spec_from_json(spec)); });

  m.def(
      "_oracle",
      [](const std::string& spec, const std::string& method, int nodes, std::uint64_t samples, std::uint64_t seed) {
        const auto s = spec_from_json(spec);
        OracleConfig cfg;
        if (method == "nested") {
          cfg.method = OracleConfig::Method::nested_quadrature;
        } else if (method == "monte_carlo") {
          cfg.method = OracleConfig::Method::monte_carlo;
        } else {
          throw InvalidArgument("oracle method must be 'nested' or 'monte_carlo'");
        }
        cfg.nodes_per_dim = nodes;
        cfg.samples = samples;
        cfg.seed = seed;
        OracleResult r;
        {
          py::gil_scoped_release release;
          r = oracle_partition(s, cfg);
        }
        py::dict d;
        d["value"] = r.value;
        d["std_error"] = r.std_error;
        d["method"] = r.method;
        d["evaluations"] = r.evaluations;
        return d;
      },
      py::arg("spec"), py::arg("method") = "nested", py::arg("nodes") = 96, py::arg("samples") = 1'000'000,
      py::arg("seed") = 20240611);

  m.def("_collapsed_limit", [](const std::string& spec, const std::vector<double>& scales) {
    return report_dict(collapsed_limit_check(spec_from_json(spec), scales));
  });
  m.def("_separated_limit", [](const std::string& spec, const std::vector<double>& hs) {
    return report_dict(separated_limit_check(spec_from_json(spec), hs));
  });

  m.def(
      "confluent_vandermonde_det",
      [](const std::vector<int>& shape, const std::vector<Complex>& x, std::optional<std::uint64_t> seed) {
        int n = 0;
        for (int l : shape) n += l;
        const auto fam = seed ? PolynomialFamily::random_monic(n, *seed) : PolynomialFamily::monomials(n);
        return confluent_vandermonde_det(fam, Shape(shape), x);
      },
      py::arg("shape"), py::arg("x"), py::arg("family_seed") = std::nullopt,
      "det of the confluent Vandermonde matrix (monomials unless a random family seed is given)");

  m.def(
      "run_config",
      [](const std::string& path, const std::string& out, std::optional<int> cap) {
        cli::RunOptions opts;
        opts.dimension_cap = cap;
        std::ostringstream log;
        const int code = cli::run(cli::load_config(path), out, opts, log);
        return py::make_tuple(code, log.str());
      },
      py::arg("path"), py::arg("out"), py::arg("cap") = std::nullopt);

  m.def(
      "verify",
      [](const std::string& suite, std::uint64_t seed) {
        std::ostringstream out;
        const int code = cli::verify(suite, seed, out);
        return py::make_tuple(code, out.str());
      },
      py::arg("suite") = "all", py::arg("seed") = 0);

  m.def("set_thread_count", &set_thread_count);
}
