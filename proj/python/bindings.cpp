#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "semijacobi/asymptotics.hpp"
#include "semijacobi/evolution.hpp"
#include "semijacobi/ladder.hpp"
#include "semijacobi/recur.hpp"

namespace py = pybind11;
namespace sj = semijacobi;

namespace {

// Numbers come in as str or float and are parsed from their decimal text.
std::string text_of(const py::object& x) { return py::str(x); }

sj::WeightParams params_of(const py::object& alpha, const py::object& t) {
  return sj::WeightParams::parse(text_of(alpha), text_of(t));
}

sj::Real real_of(const py::object& x) {
  sj::WorkingPrecision guard(1024);
  return sj::Real::parse(text_of(x));
}

std::vector<std::string> strings(const std::vector<sj::Real>& xs, int digits, std::size_t count) {
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(xs[i].str(digits));
  return out;
}

std::vector<double> doubles(const std::vector<sj::Real>& xs, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(xs[i].to_double());
  return out;
}

struct Table {
  sj::OrthoTable table;
  sj::AuxTable aux;

  const std::vector<sj::Real>& column(const std::string& name) const {
    if (name == "h") return table.h;
    if (name == "beta") return table.beta;
    if (name == "p") return table.p;
    if (name == "log_d") return table.log_d;
    if (name == "R") return aux.R;
    if (name == "r") return aux.r;
    if (name == "H") return aux.H;
    throw py::key_error("unknown column '" + name + "'; expected h, beta, p, log_d, R, r or H");
  }
  std::size_t rows() const { return static_cast<std::size_t>(table.n_max) + 1; }
};

Table make_table(const py::object& alpha, const py::object& t, int n_max, unsigned digits,
                 std::optional<long> mantissa_bits) {
  const sj::WeightParams params = params_of(alpha, t);
  py::gil_scoped_release release;
  sj::PrecisionContext ctx = sj::PrecisionContext::for_degree(n_max, digits);
  if (mantissa_bits) ctx.mantissa_bits = *mantissa_bits;
  Table out{sj::build_ortho_table(params, n_max, ctx), {}};
  out.aux = sj::build_aux_table(out.table);
  return out;
}

py::dict report_dict(const sj::ResidualReport& report, int digits) {
  py::dict d;
  for (const auto& e : report.entries()) {
    py::dict entry;
    entry["max_residual"] = e.max_residual.str(digits);
    entry["argmax"] = py::dict(py::arg("alpha") = e.argmax.alpha.str(digits), py::arg("t") = e.argmax.t.str(digits),
                               py::arg("n") = e.argmax.n);
    d[py::str(e.name)] = entry;
  }
  return d;
}

py::dict verify(const std::string& suite, const std::vector<py::object>& alphas, const std::vector<py::object>& ts,
                int n_max, unsigned digits) {
  if (suite != "identities" && suite != "difference") {
    throw py::value_error("suite must be 'identities' or 'difference'");
  }
  std::vector<sj::WeightParams> grid;
  for (const auto& a : alphas)
    for (const auto& t : ts) grid.push_back(params_of(a, t));
  sj::ResidualReport merged;
  {
    py::gil_scoped_release release;
    for (const auto& params : grid) {
      const int size = suite == "identities" ? n_max + 1 : n_max;
      sj::OrthoTable table = sj::build_ortho_table(params, size, digits);
      sj::AuxTable aux = sj::build_aux_table(table);
      if (suite == "identities") {
        merged.merge(sj::identity_residuals(table, aux));
      } else {
        for (int n = 1; n <= n_max; ++n) {
          merged.record("btd", sj::btd_residual(table, n), params.alpha, params.t, n);
          merged.record("pnd", sj::pnd_residual(table, n), params.alpha, params.t, n);
          merged.record("hnd", sj::hnd_residual(aux, n), params.alpha, params.t, n);
        }
      }
    }
  }
  return report_dict(merged, static_cast<int>(digits) + 5);
}

sj::SeriesQuantity quantity_of(const std::string& q) {
  if (q == "beta") return sj::SeriesQuantity::beta;
  if (q == "p") return sj::SeriesQuantity::p;
  if (q == "hankel") return sj::SeriesQuantity::hankel;
  throw py::value_error("quantity must be 'beta', 'p' or 'hankel'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Orthogonal polynomials for the weight (1-x^2)^alpha exp(-t x^2) on [-1, 1]";

  py::register_exception<sj::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<sj::PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);
  py::register_exception<sj::SingularError>(m, "SingularError", PyExc_ArithmeticError);
  py::register_exception<sj::ConditioningError>(m, "ConditioningError", PyExc_ArithmeticError);

  py::class_<Table>(m, "Table")
      .def_property_readonly("alpha", [](const Table& t) { return t.table.params.alpha.to_double(); })
      .def_property_readonly("t", [](const Table& t) { return t.table.params.t.to_double(); })
      .def_property_readonly("n_max", [](const Table& t) { return t.table.n_max; })
      .def_property_readonly("mantissa_bits", [](const Table& t) { return t.table.bits; })
      .def_property_readonly("agreement_digits", [](const Table& t) { return t.table.agreement_digits; })
      .def(
          "column",
          [](const Table& t, const std::string& name) { return doubles(t.column(name), t.rows()); },
          py::arg("name"), "Entries n = 0..n_max of h, beta, p, log_d, R, r or H as floats.")
      .def(
          "column_text",
          [](const Table& t, const std::string& name, int digits) {
            return strings(t.column(name), digits, t.rows());
          },
          py::arg("name"), py::arg("digits") = 30, "Same as decimal strings with `digits` significant digits.")
      .def("__len__", &Table::rows)
      .def("__repr__", [](const Table& t) {
        return "<Table alpha=" + t.table.params.alpha.str(6) + " t=" + t.table.params.t.str(6) +
               " n_max=" + std::to_string(t.table.n_max) + " bits=" + std::to_string(t.table.bits) + ">";
      });

  m.def("table", &make_table, py::arg("alpha"), py::arg("t"), py::arg("n_max"), py::arg("digits") = 25,
        py::arg("mantissa_bits") = py::none(),
        "Build h_n, beta_n, p(n,t), ln D_n and R_n, r_n, H_n for n = 0..n_max.");

  m.def("verify", &verify, py::arg("suite"), py::arg("alpha"), py::arg("t"), py::arg("n_max") = 10,
        py::arg("digits") = 25,
        "Worst scaled residual per identity ('identities' or 'difference' suite) over the grid.");

  m.def(
      "series_coefficients",
      [](const std::string& quantity, const py::object& alpha, const py::object& t) {
        const sj::WeightParams params = params_of(alpha, t);
        sj::WorkingPrecision guard(256);
        sj::AsymSeries s = quantity == "p" ? sj::p_series(params)
                           : quantity == "beta" ? sj::beta_series(params)
                                                : throw py::value_error("quantity must be 'beta' or 'p'");
        std::vector<double> out{s.lead_n.to_double(), s.lead_0.to_double()};
        for (const auto& c : s.c) out.push_back(c.to_double());
        return out;
      },
      py::arg("quantity"), py::arg("alpha"), py::arg("t"),
      "[coefficient of n, constant, c_1, c_2, ...] of the large-n expansion.");

  m.def(
      "compare_series",
      [](const std::string& quantity, const py::object& alpha, const py::object& t, const std::vector<int>& ns,
         unsigned digits) {
        const sj::SeriesQuantity q = quantity_of(quantity);
        const sj::WeightParams params = params_of(alpha, t);
        sj::SeriesComparison cmp;
        {
          py::gil_scoped_release release;
          cmp = sj::compare_series(q, params, ns, digits);
        }
        py::dict d;
        d["n"] = cmp.n;
        d["abs_error"] = doubles(cmp.abs_error, cmp.abs_error.size());
        d["slope"] = cmp.fit_valid ? py::object(py::float_(cmp.fit.slope)) : py::object(py::none());
        d["fit_valid"] = cmp.fit_valid;
        d["exponential_regime"] = cmp.exponential;
        d["warnings"] = cmp.fit.warnings;
        return d;
      },
      py::arg("quantity"), py::arg("alpha"), py::arg("t"), py::arg("n"), py::arg("digits") = 25,
      "Pipeline vs large-n expansion over the given n, with the fitted error exponent.");

  m.def(
      "log_dn0",
      [](const py::object& alpha, int n, unsigned digits) {
        const sj::Real a = real_of(alpha);
        py::gil_scoped_release release;
        sj::PrecisionContext ctx{sj::digits_to_bits(digits) + 64, 3, digits};
        return sj::dn0_exact(a, n, ctx).value.str(static_cast<int>(digits) + 5);
      },
      py::arg("alpha"), py::arg("n"), py::arg("digits") = 25, "ln D_n(0) in closed form, as a decimal string.");

  m.def(
      "log_dn_asymptotic",
      [](const py::object& alpha, const py::object& t, int n) {
        sj::WorkingPrecision guard(256);
        return sj::dn_asymptotic(params_of(alpha, t), n).to_double();
      },
      py::arg("alpha"), py::arg("t"), py::arg("n"), "Large-n expansion of ln D_n(t) through n^-3.");

  m.def(
      "order_fit",
      [](const std::vector<std::pair<double, double>>& points) {
        std::vector<std::pair<double, sj::Real>> pts;
        sj::WorkingPrecision guard(64);
        for (const auto& [n, e] : points) pts.emplace_back(n, sj::Real(e));
        return sj::order_fit(pts).slope;
      },
      py::arg("points"), "Least-squares slope of log|error| against log n from (n, error) pairs.");

  m.def(
      "iterate_beta",
      [](const py::object& alpha, const py::object& t, int n_target, unsigned digits) {
        const sj::WeightParams params = params_of(alpha, t);
        py::gil_scoped_release release;
        sj::BetaIteration it = sj::btd_iterate(params, n_target, sj::PrecisionContext::for_degree(n_target, digits));
        return doubles(it.beta, it.beta.size());
      },
      py::arg("alpha"), py::arg("t"), py::arg("n_target"), py::arg("digits") = 25,
      "beta_0..beta_{n_target} by forward iteration of the difference equation.");

  m.def(
      "riccati",
      [](const py::object& alpha, int n, const py::object& t_start, const py::object& t_end, int samples) {
        const sj::WeightParams params = params_of(alpha, t_start);
        const sj::Real t0 = real_of(t_start);
        const sj::Real t1 = real_of(t_end);
        sj::RiccatiSolution sol;
        {
          py::gil_scoped_release release;
          sj::RiccatiOptions opts;
          opts.samples = samples;
          sol = sj::riccati_integrate(params, n, t0, t1, sj::PrecisionContext::for_degree(n + 1, 30), opts);
        }
        py::dict d;
        d["t"] = doubles(sol.R.t, sol.R.t.size());
        d["R"] = doubles(sol.R.values, sol.R.values.size());
        d["r"] = doubles(sol.r.values, sol.r.values.size());
        return d;
      },
      py::arg("alpha"), py::arg("n"), py::arg("t_start"), py::arg("t_end"), py::arg("samples") = 33,
      "Integrate the (R_n, r_n) system in t from pipeline values at t_start.");
}
