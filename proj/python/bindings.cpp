#include "harnack/calculus.hpp"
#include "harnack/cli.hpp"
#include "harnack/convergence.hpp"
#include "harnack/elliptic.hpp"
#include "harnack/errors.hpp"
#include "harnack/mms.hpp"
#include "harnack/parabolic.hpp"
#include "harnack/report.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>
#include <sstream>

namespace py = pybind11;
using namespace harnack;

namespace {

// pybind11 holders cannot be shared_ptr<const T>; the const is restored at every call.
using MutableManifold = std::shared_ptr<Manifold>;

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

ScalarField to_field(const MutableManifold& m, const Array& values) {
  if (values.ndim() != 1)
    throw py::value_error("expected a 1-d array of nodal values");
  const double* data = values.data();
  return ScalarField(m, std::vector<double>(data, data + values.size()));
}

Array to_array(const ScalarField& f) {
  Array out(static_cast<py::ssize_t>(f.size()));
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

template <class Op>
auto unary(Op op) {
  return [op](const MutableManifold& m, const Array& f) { return to_array(op(to_field(m, f))); };
}

template <class Op>
auto binary(Op op) {
  return [op](const MutableManifold& m, const Array& f, const Array& g) {
    return to_array(op(to_field(m, f), to_field(m, g)));
  };
}

py::dict report_dict(const EllipticReport& r) {
  py::dict d;
  d["sup_Q"] = r.sup_Q;
  d["argmax"] = r.argmax;
  d["rhs"] = r.rhs_general_b;
  d["rhs_statement"] = r.rhs_theorem_statement;
  d["margin"] = r.margin;
  d["statement_margin"] = r.statement_margin;
  d["holds"] = r.holds;
  d["statement_holds"] = r.statement_holds;
  d["res_q"] = r.residual_q_identity;
  d["res_quot"] = r.residual_quotient_laplacian;
  d["res_solver"] = r.residual_solver;
  return d;
}

py::dict record_dict(const HeatTraceRecord& r) {
  py::dict d;
  d["t"] = r.t;
  d["sup_F"] = r.sup_F;
  d["running_sup_F"] = r.running_sup_F;
  d["z_index"] = r.z_index;
  d["mu"] = r.mu;
  d["min_u"] = r.min_u;
  d["res_w"] = r.res_w;
  d["res_wt"] = r.res_wt;
  d["res_quot_evo"] = r.res_quot_evo;
  d["res_quot_dt"] = r.res_quot_dt;
  d["res_F_evo"] = r.res_F_evo;
  d["liyau_margin"] = r.liyau_margin;
  d["young_margin"] = r.young_margin;
  d["trace_margin"] = r.trace_margin;
  d["key1_margin"] = r.key1_margin;
  return d;
}

py::dict run_dict(const HeatRunResult& run) {
  py::dict d;
  py::list records;
  for (const auto& r : run.records)
    records.append(record_dict(r));
  d["records"] = records;
  d["space_time_sup_F"] = run.space_time_sup_F;
  d["argmax_time"] = run.argmax_time;
  d["argmax_node"] = run.argmax_node;
  d["capability"] = run.capability;
  const auto& k = run.constants;
  d["structural_constants"] =
      py::dict(py::arg("min_u") = k.min_u, py::arg("sup_A") = k.sup_A,
               py::arg("sup_grad_A") = k.sup_grad_A, py::arg("sup_lap_A") = k.sup_lap_A,
               py::arg("K") = k.ricci_K, py::arg("a") = k.a, py::arg("T") = k.horizon);
  if (run.final_state)
    d["final_state"] = to_array(*run.final_state);
  return d;
}

} // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Gradient-estimate verification on flat tori and the icosphere";

  py::register_exception<PreconditionError>(mod, "PreconditionError", PyExc_ValueError);
  py::register_exception<UnsupportedManifold>(mod, "UnsupportedManifold", PyExc_ValueError);
  py::register_exception<PositivityLoss>(mod, "PositivityLoss", PyExc_RuntimeError);
  py::register_exception<SolverFailure>(mod, "SolverFailure", PyExc_RuntimeError);

  py::class_<Manifold, MutableManifold>(mod, "Manifold")
      .def_property_readonly("dimension", &Manifold::dimension)
      .def_property_readonly("node_count", &Manifold::node_count)
      .def_property_readonly("volume", &Manifold::volume)
      .def_property_readonly("is_torus", &Manifold::is_torus)
      .def_property_readonly("is_sphere", &Manifold::is_sphere)
      .def("weights", [](const Manifold& m) {
        Array out(static_cast<py::ssize_t>(m.node_count()));
        std::copy(m.weights().begin(), m.weights().end(), out.mutable_data());
        return out;
      })
      .def("points", [](const Manifold& m) {
        py::array_t<double> out({static_cast<py::ssize_t>(m.node_count()), py::ssize_t{3}});
        auto view = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < m.node_count(); ++i) {
          const auto p = m.point(i);
          for (int k = 0; k < 3; ++k)
            view(static_cast<py::ssize_t>(i), k) = p[k];
        }
        return out;
      });

  mod.def("flat_torus",
          [](int dimension, std::vector<double> lengths, std::vector<int> resolutions) {
            return std::const_pointer_cast<Manifold>(
                build_flat_torus(dimension, std::move(lengths), std::move(resolutions)));
          },
          py::arg("dimension"), py::arg("lengths"), py::arg("resolutions"));
  mod.def("unit_sphere",
          [](int subdivision) {
            return std::const_pointer_cast<Manifold>(build_unit_sphere_mesh(subdivision));
          },
          py::arg("subdivision"));

  mod.def("integrate", [](const MutableManifold& m, const Array& f) { return integrate(to_field(m, f)); });
  mod.def("laplace_beltrami", unary([](const ScalarField& f) { return laplace_beltrami(f); }));
  mod.def("gradient_norm_sq", unary([](const ScalarField& f) { return gradient_norm_sq(f); }));
  mod.def("gradient_inner",
          binary([](const ScalarField& f, const ScalarField& g) { return gradient_inner(f, g); }));
  mod.def("bochner_residual", unary([](const ScalarField& f) { return bochner_residual(f); }));
  mod.def("hessian_trace_margin",
          unary([](const ScalarField& f) { return hessian_trace_margin(f); }));
  mod.def("solve_poisson_mean_zero",
          unary([](const ScalarField& f) { return solve_poisson_mean_zero(f); }));
  mod.def("harnack_Q",
          binary([](const ScalarField& u, const ScalarField& A) { return harnack_Q(u, A); }));
  mod.def("q_identity_residual", binary([](const ScalarField& u, const ScalarField& A) {
            return q_identity_residual(u, A);
          }));
  mod.def("quotient_laplacian_residual", binary([](const ScalarField& u, const ScalarField& A) {
            return quotient_laplacian_residual(u, A);
          }));
  mod.def("harnack_F",
          [](const MutableManifold& m, const Array& u, const Array& w_t, const Array& A, double a,
             double t) {
            return to_array(harnack_F(to_field(m, u), to_field(m, w_t), to_field(m, A), a, t));
          },
          py::arg("manifold"), py::arg("u"), py::arg("w_t"), py::arg("source"), py::arg("a"),
          py::arg("t"));

  mod.def("verify_theorem1",
          [](const MutableManifold& m, const Array& A, double shift, double b, double K) {
            return report_dict(verify_theorem1({to_field(m, A), shift, b, K}));
          },
          py::arg("manifold"), py::arg("source"), py::arg("shift") = 1.0, py::arg("b") = 0.5,
          py::arg("K") = 0.0);

  mod.def("elliptic_catalog", [](const MutableManifold& m) { return elliptic_catalog(*m); });
  mod.def("parabolic_catalog", [](const MutableManifold& m) { return parabolic_catalog(*m); });
  mod.def("elliptic_mms", [](const std::string& id, const MutableManifold& m) {
    const auto p = elliptic_mms(id, m);
    return py::dict(py::arg("solution") = to_array(p.solution),
                    py::arg("source") = to_array(p.source));
  });

  mod.def("run_heat",
          [](const MutableManifold& m, const Array& initial, double T, double dt, double a,
             int stride) {
            HeatRunConfig c{to_field(m, initial), SpaceTimeSource::zero(m), T, dt, a, 0.0, stride};
            HeatRunResult run;
            {
              py::gil_scoped_release release;
              run = run_heat(c);
            }
            return run_dict(run);
          },
          py::arg("manifold"), py::arg("initial"), py::arg("T") = 1.0, py::arg("dt") = 1e-3,
          py::arg("a") = 2.0, py::arg("stride") = 10,
          "Homogeneous heat run (A = 0) from the given initial data.");
  mod.def("run_heat_mms",
          [](const std::string& id, const MutableManifold& m, double T, double dt, double a,
             int stride) {
            const auto mms = parabolic_mms(id, m);
            HeatRunConfig c{mms.solution(0.0), mms.source_term(), T, dt, a, 0.0, stride};
            auto d = run_dict(run_heat(c));
            d["exact_final_state"] = to_array(mms.solution(T));
            return d;
          },
          py::arg("id"), py::arg("manifold"), py::arg("T") = 1.0, py::arg("dt") = 1e-3,
          py::arg("a") = 2.0, py::arg("stride") = 10);

  mod.def("convergence_checks", &named_checks);
  mod.def("convergence_study", [](const std::string& name) {
    const auto check = named_check(name);
    const auto levels = default_levels(check);
    const auto table = convergence_study(check, levels);
    py::list rows;
    for (const auto& r : table.rows)
      rows.append(py::dict(py::arg("level") = r.level, py::arg("N") = r.resolution,
                           py::arg("dt") = r.dt, py::arg("residual") = r.residual,
                           py::arg("order") = r.order));
    return py::dict(py::arg("check") = table.check, py::arg("converged") = table.converged,
                    py::arg("expected_order") = table.expected_order, py::arg("rows") = rows);
  });

  mod.def("format_number", &format_number);
  mod.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, "Runs the command-line front end in-process; returns (exit_code, stdout, stderr).");
}
