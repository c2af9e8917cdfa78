#include <cmath>
#include <limits>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vertex_expand/coulomb.hpp"
#include "vertex_expand/dimer_pfaffian.hpp"
#include "vertex_expand/errors.hpp"
#include "vertex_expand/series.hpp"
#include "vertex_expand/thermo.hpp"
#include "vertex_expand/transfer_matrix.hpp"
#include "vertex_expand/verify.hpp"
#include "vertex_expand/vertex_model.hpp"

namespace py = pybind11;
namespace ve = vertex_expand;

namespace {

ve::thermo::QuadratureSpec spec_with(double tol) {
  ve::thermo::QuadratureSpec spec;
  spec.tolerance = tol;
  return spec;
}

std::vector<std::string> fractions(const std::vector<ve::series::Rational>& v) {
  std::vector<std::string> out;
  for (const auto& q : v) out.push_back(ve::series::to_string(q));
  return out;
}

py::dict log_series_dict(const ve::series::LogSeries& s, int max_degree, int step) {
  py::dict d;
  d["coefficients"] = fractions(s.series.coefficients());
  d["bracket"] = fractions(s.bracket(max_degree, step));
  d["prefactor"] = py::make_tuple(ve::series::to_string(s.scale.q()), s.scale.pi_power());
  d["log_power"] = s.log_power;
  return d;
}

ve::model::ModelParams params(int rows, int cols, double beta_s, double u,
                              const std::string& boundary) {
  return ve::model::ModelParams::from_u(u, beta_s, rows, cols, ve::model::parse_boundary(boundary));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Free-fermion expansion of staggered six-vertex models";

  static py::exception<ve::Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ve::Error& e) {
      py::set_error(error, e.what());
    }
  });

  // Thermodynamics.
  m.def("baxter_free_energy",
        [](double beta_s, double tol) { return ve::thermo::baxter_free_energy(beta_s, spec_with(tol)).value; },
        py::arg("beta_s"), py::arg("tol") = 1e-10);
  m.def("baxter_series",
        [](double beta_s, int n_max) {
          const auto s = ve::thermo::baxter_series(beta_s, n_max);
          return py::make_tuple(s.value, s.tail_bound);
        },
        py::arg("beta_s"), py::arg("n_max"));
  m.def("baxter_series_converged",
        [](double beta_s) { return ve::thermo::baxter_series_converged(beta_s).value; },
        py::arg("beta_s"));
  m.def("dF0_dbetas",
        [](double beta_s, double tol) { return ve::thermo::dF0_dbetas(beta_s, spec_with(tol)).value; },
        py::arg("beta_s"), py::arg("tol") = 1e-10);
  m.def("zb_ratio",
        [](double beta_s, double tol) { return ve::thermo::zb_ratio(beta_s, spec_with(tol)).value; },
        py::arg("beta_s"), py::arg("tol") = 1e-10);
  m.def("za_ratio",
        [](double beta_s, double tol) { return ve::thermo::za_ratio(beta_s, spec_with(tol)).value; },
        py::arg("beta_s"), py::arg("tol") = 1e-10);
  m.def("first_order_free_energy",
        [](double beta_s, double u, double tol) {
          const auto f = ve::thermo::first_order_free_energy(beta_s, u, spec_with(tol));
          py::dict d;
          d["f0"] = f.f0;
          d["coefficient_from_constraints"] = f.coefficient_from_constraints;
          d["coefficient_from_derivative"] = f.coefficient_from_derivative;
          d["u"] = f.u;
          d["free_energy"] = f.free_energy;
          return d;
        },
        py::arg("beta_s"), py::arg("u"), py::arg("tol") = 1e-10);

  // Finite lattices.
  m.def("partition_enumerate",
        [](int rows, int cols, double beta_s, double u, const std::string& boundary) {
          return ve::model::enumerate_partition(params(rows, cols, beta_s, u, boundary), false)
              .partition_function;
        },
        py::arg("rows"), py::arg("cols"), py::arg("beta_s"), py::arg("u") = 0.0,
        py::arg("boundary") = "fixed");
  m.def("log_partition_pfaffian",
        [](int rows, int cols, double beta_s) {
          const auto lattice = ve::dimer::build_decorated(params(rows, cols, beta_s, 0.0, "fixed"));
          return ve::dimer::partition_dimer(ve::dimer::kasteleyn_orientation(lattice));
        },
        py::arg("rows"), py::arg("cols"), py::arg("beta_s"));
  m.def("matching_sum",
        [](int rows, int cols, double beta_s) {
          return ve::dimer::enumerate_matchings(ve::dimer::DecoratedLattice(rows, cols, beta_s).graph());
        },
        py::arg("rows"), py::arg("cols"), py::arg("beta_s"));
  m.def("constrained_ratio",
        [](int rows, int cols, double beta_s, const std::vector<std::pair<int, bool>>& constraints) {
          const ve::dimer::DecoratedLattice lattice(rows, cols, beta_s);
          std::vector<ve::dimer::EdgeConstraint> cons;
          for (auto [e, occ] : constraints) cons.push_back({e, occ});
          return ve::dimer::constrained_partition(ve::dimer::kasteleyn_orientation(lattice), cons).ratio;
        },
        py::arg("rows"), py::arg("cols"), py::arg("beta_s"), py::arg("constraints"));
  m.def("transfer_matrix_free_energy",
        [](int width, double beta_s, double u) {
          return ve::model::transfer_matrix_free_energy(params(width, 2, beta_s, u, "periodic"))
              .free_energy;
        },
        py::arg("width"), py::arg("beta_s"), py::arg("u") = 0.0);

  // Exact series.
  m.def("stirling_correction",
        [](int order) { return fractions(ve::series::stirling_correction(order).coefficients()); },
        py::arg("order"));
  m.def("bernoulli_numbers", [](int k) { return fractions(ve::series::bernoulli_numbers(k)); },
        py::arg("k_max"));
  m.def("t_of_betas", [](int order) { return fractions(ve::series::t_of_betas(order).coefficients()); },
        py::arg("order"));
  m.def("singular_t_series",
        [](int order) { return log_series_dict(ve::series::singular_t_series(order), order, 1); },
        py::arg("order"));
  m.def("singular_betas_series",
        [](int order) { return log_series_dict(ve::series::singular_betas_series(order), order, 2); },
        py::arg("order"));
  m.def("b2_series",
        [](int order) { return log_series_dict(ve::series::b2_series(order), order, 2); },
        py::arg("order"));

  // Coulomb gas.
  m.def("j_of_betaeps", &ve::coulomb::j_of_betaeps, py::arg("beta_eps"));
  m.def("kt_threshold", &ve::coulomb::kt_threshold);
  m.def("singular_exponent",
        [](double beta_eps) { return ve::coulomb::singular_exponent(beta_eps).value; },
        py::arg("beta_eps"));
  m.def("singular_exponent_u",
        [](double u) { return ve::coulomb::singular_exponent_u(u).value; }, py::arg("u"));
  m.def("exponent_u_expansion",
        [](int order) {
          std::vector<std::map<int, std::string>> out;
          for (const auto& p : ve::coulomb::exponent_u_expansion(order)) {
            std::map<int, std::string> terms;
            for (const auto& [k, q] : p.terms()) terms[k] = ve::series::to_string(q);
            out.push_back(std::move(terms));
          }
          return out;
        },
        py::arg("order"));
  m.def("verify_first_order", [] { return ve::coulomb::verify_first_order().to_json(); });

  // Acceptance checks.
  m.def("run_suite",
        [](const std::string& suite) {
          py::list out;
          for (const auto& r : ve::verify::run_suite(suite)) {
            py::dict d;
            d["id"] = r.id;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["metric"] = r.metric;
            d["detail"] = r.detail;
            out.append(d);
          }
          return out;
        },
        py::arg("suite") = "all");
}
