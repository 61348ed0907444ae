#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "framescale/frobenius.hpp"
#include "framescale/io.hpp"
#include "framescale/operator_scaling.hpp"
#include "framescale/polytope.hpp"
#include "framescale/report.hpp"

namespace py = pybind11;
namespace fs = framescale;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

fs::FrameMatrix to_frame(const DoubleArray& arr) {
  if (arr.ndim() != 2)
    throw fs::ValidationError("a frame must be a 2-D array with one vector per column");
  const auto n = static_cast<std::size_t>(arr.shape(0));
  const auto m = static_cast<std::size_t>(arr.shape(1));
  std::vector<double> column_major(n * m);
  const auto r = arr.unchecked<2>();
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i)
      column_major[j * n + i] = r(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j));
  return fs::FrameMatrix(n, m, std::move(column_major));
}

fs::Matrix to_matrix(const DoubleArray& arr) {
  if (arr.ndim() != 2) throw fs::ValidationError("expected a 2-D array");
  fs::Matrix mat(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
  const auto r = arr.unchecked<2>();
  for (py::ssize_t i = 0; i < arr.shape(0); ++i)
    for (py::ssize_t j = 0; j < arr.shape(1); ++j)
      mat(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = r(i, j);
  return mat;
}

py::array_t<double> matrix_to_array(const fs::Matrix& mat) {
  py::array_t<double> out({mat.rows(), mat.cols()});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < mat.rows(); ++i)
    for (std::size_t j = 0; j < mat.cols(); ++j)
      w(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = mat(i, j);
  return out;
}

py::array_t<double> frame_to_array(const fs::FrameMatrix& frame) {
  return matrix_to_array(frame.as_matrix());
}

py::array_t<double> vector_to_array(const std::vector<double>& v) {
  // Shape and strides spelled out; the scalar-shape constructor mis-strides
  // 1-D arrays on older pybind11 releases.
  py::array_t<double> out({static_cast<py::ssize_t>(v.size())},
                          {static_cast<py::ssize_t>(sizeof(double))});
  auto w = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < v.size(); ++i) w(static_cast<py::ssize_t>(i)) = v[i];
  return out;
}

fs::Scaling to_scaling(const std::vector<double>& c) { return fs::Scaling(c); }

py::dict solution_dict(const fs::ScalingSolution& sol) {
  py::dict d;
  d["norm_kind"] = fs::norm_kind_name(sol.norm_kind);
  d["scaling"] = vector_to_array(sol.scaling.coefficients());
  d["operator"] = matrix_to_array(sol.scaled_operator.entries());
  d["residual"] = sol.residual;
  d["lambda_max"] = sol.lambda_max;
  d["lambda_min"] = sol.lambda_min;
  d["condition_number"] = sol.condition_number;
  d["iterations"] = sol.iterations;
  d["converged"] = sol.converged;
  d["kkt_residual"] = sol.kkt_residual;
  return d;
}

fs::SolverOptions make_options(std::size_t max_iterations, double step_scale,
                               double objective_tol, std::size_t stagnation_window,
                               double balance_tol, std::uint64_t seed,
                               const std::optional<std::vector<double>>& warm_start) {
  fs::SolverOptions opts;
  opts.max_iterations = max_iterations;
  opts.step_scale = step_scale;
  opts.objective_tol = objective_tol;
  opts.stagnation_window = stagnation_window;
  opts.balance_tol = balance_tol;
  opts.seed = seed;
  if (warm_start) opts.warm_start = fs::Scaling(*warm_start);
  return opts;
}

fs::FrameFormat format_from(const std::string& name) {
  if (name == "json") return fs::FrameFormat::kJson;
  if (name == "csv") return fs::FrameFormat::kCsv;
  throw fs::ValidationError("format must be 'json' or 'csv'");
}

}  // namespace

PYBIND11_MODULE(_framescale, m) {
  m.doc() = "Optimal scalings of finite frames under the Frobenius and operator norms";

  py::register_exception<fs::Error>(m, "FramescaleError", PyExc_RuntimeError);
  py::register_exception<fs::CapacityError>(m, "CapacityError", PyExc_RuntimeError);
  py::register_exception<fs::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<fs::DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<fs::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<fs::PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<fs::DegenerateInputError>(m, "DegenerateInputError", PyExc_ValueError);

  // generators and fixtures
  m.def("builtin_frame",
        [](const std::string& name) { return frame_to_array(fs::builtin_frame(name)); },
        py::arg("name"));
  m.def("builtin_frame_names", &fs::builtin_frame_names);
  m.def("random_unit_frame",
        [](std::size_t dim, std::size_t count, std::uint64_t seed) {
          return frame_to_array(fs::random_unit_frame(dim, count, seed));
        },
        py::arg("dim"), py::arg("count"), py::arg("seed"));
  m.def("near_degenerate_frame",
        [](std::size_t dim, std::size_t count, double delta, std::uint64_t seed) {
          return frame_to_array(fs::near_degenerate_frame(dim, count, delta, seed));
        },
        py::arg("dim"), py::arg("count"), py::arg("delta"), py::arg("seed"));
  m.def("extend_within_cone",
        [](const DoubleArray& frame, std::size_t extra, std::uint64_t seed) {
          return frame_to_array(fs::extend_within_cone(to_frame(frame), extra, seed));
        },
        py::arg("frame"), py::arg("extra"), py::arg("seed"));
  m.def("tightness_witness",
        [](std::size_t dim, std::size_t count, double epsilon, std::uint64_t seed) {
          return frame_to_array(fs::tightness_witness(dim, count, epsilon, seed));
        },
        py::arg("dim"), py::arg("count"), py::arg("epsilon"), py::arg("seed"));

  // core operations
  m.def("frame_operator",
        [](const DoubleArray& frame, const std::vector<double>& scaling) {
          return matrix_to_array(
              fs::frame_operator(to_frame(frame), to_scaling(scaling)).entries());
        },
        py::arg("frame"), py::arg("scaling"));
  m.def("gram_lift", [](const DoubleArray& frame) {
    const auto lift = fs::gram_lift(to_frame(frame));
    py::dict d;
    d["f"] = matrix_to_array(lift.f);
    d["norms_squared"] = vector_to_array(lift.norms_squared);
    d["column_one_norms"] = vector_to_array(lift.column_one_norms);
    return d;
  });
  m.def("sym_eigen", [](const DoubleArray& matrix) {
    const auto eig = fs::sym_eigen(fs::SymmetricMatrix(to_matrix(matrix)));
    return py::make_tuple(vector_to_array(eig.eigenvalues), matrix_to_array(eig.eigenvectors));
  });
  m.def("operator_distance_to_identity", [](const DoubleArray& matrix) {
    return fs::operator_distance_to_identity(fs::SymmetricMatrix(to_matrix(matrix)));
  });
  m.def("frobenius_distance_to_identity", [](const DoubleArray& matrix) {
    return fs::frobenius_distance_to_identity(fs::SymmetricMatrix(to_matrix(matrix)));
  });
  m.def("condition_number", [](const DoubleArray& matrix) {
    return fs::condition_number(fs::SymmetricMatrix(to_matrix(matrix)));
  });
  m.def("is_full_spark",
        [](const DoubleArray& frame, std::size_t cap) {
          return fs::is_full_spark(to_frame(frame), cap);
        },
        py::arg("frame"), py::arg("cap") = 20);
  m.def("outer_products_independent",
        [](const DoubleArray& frame, const std::vector<std::size_t>& support) {
          const auto result = fs::outer_products_independent(to_frame(frame), support);
          return py::make_tuple(result.independent, result.rank);
        },
        py::arg("frame"), py::arg("support"));
  m.def("spans", [](const DoubleArray& frame) { return to_frame(frame).spans(); });

  // operator-norm scaling
  m.def("balance_rescale",
        [](const DoubleArray& frame, const std::vector<double>& scaling) {
          return vector_to_array(
              fs::balance_rescale(to_frame(frame), to_scaling(scaling)).coefficients());
        },
        py::arg("frame"), py::arg("scaling"));
  m.def("minimize_operator_norm",
        [](const DoubleArray& frame, std::size_t max_iterations, double step_scale,
           double objective_tol, std::size_t stagnation_window, double balance_tol,
           std::uint64_t seed, const std::optional<std::vector<double>>& warm_start) {
          return solution_dict(fs::minimize_operator_norm(
              to_frame(frame), make_options(max_iterations, step_scale, objective_tol,
                                            stagnation_window, balance_tol, seed, warm_start)));
        },
        py::arg("frame"), py::arg("max_iterations") = 5000, py::arg("step_scale") = 1.0,
        py::arg("objective_tol") = 1e-9, py::arg("stagnation_window") = 200,
        py::arg("balance_tol") = 1e-6, py::arg("seed") = 1,
        py::arg("warm_start") = std::nullopt);
  m.def("min_condition_scaling",
        [](const DoubleArray& frame, std::size_t max_iterations, double step_scale,
           double objective_tol, std::size_t stagnation_window, double balance_tol,
           std::uint64_t seed, const std::optional<std::vector<double>>& warm_start) {
          return solution_dict(fs::min_condition_scaling(
              to_frame(frame), make_options(max_iterations, step_scale, objective_tol,
                                            stagnation_window, balance_tol, seed, warm_start)));
        },
        py::arg("frame"), py::arg("max_iterations") = 5000, py::arg("step_scale") = 1.0,
        py::arg("objective_tol") = 1e-9, py::arg("stagnation_window") = 200,
        py::arg("balance_tol") = 1e-6, py::arg("seed") = 1,
        py::arg("warm_start") = std::nullopt);

  // Frobenius scaling
  m.def("minimize_frobenius", [](const DoubleArray& frame) {
    return solution_dict(fs::minimize_frobenius(to_frame(frame)));
  });
  m.def("unconstrained_projection", [](const DoubleArray& frame) {
    const auto proj = fs::unconstrained_projection(to_frame(frame));
    py::dict d;
    d["coefficients"] = vector_to_array(proj.coefficients);
    d["residual"] = proj.residual;
    d["unique"] = proj.unique;
    return d;
  });
  m.def("kkt_residual",
        [](const DoubleArray& frame, const std::vector<double>& scaling) {
          return fs::kkt_residual(to_frame(frame), to_scaling(scaling));
        },
        py::arg("frame"), py::arg("scaling"));
  m.def("is_scalable",
        [](const DoubleArray& frame, double tol) { return fs::is_scalable(to_frame(frame), tol); },
        py::arg("frame"), py::arg("tol") = 1e-8);
  m.def("spread_certificate", [](const DoubleArray& frame) {
    const auto cert = fs::spread_certificate(to_frame(frame));
    py::dict d;
    d["one_norm_spread"] = cert.one_norm_spread;
    d["smallest_singular_value"] = cert.smallest_singular_value;
    d["independent"] = cert.independent;
    d["holds"] = cert.holds;
    d["positive_scaling"] =
        cert.positive_scaling ? py::object(vector_to_array(*cert.positive_scaling))
                              : py::object(py::none());
    return d;
  });
  m.def("invertibility_report", [](const DoubleArray& frame) {
    const auto report = fs::invertibility_report(to_frame(frame));
    py::dict d;
    d["frobenius_operator_invertible"] = report.frobenius_operator_invertible;
    d["min_eigenvalue"] = report.min_eigenvalue;
    d["support_size"] = report.support_size;
    return d;
  });

  // polytope of optimal scalings
  m.def("enumerate_minimal_scalings",
        [](const DoubleArray& frame, std::size_t cap) {
          const auto description = fs::enumerate_minimal_scalings(to_frame(frame), cap);
          py::dict d;
          d["optimal_operator"] = matrix_to_array(description.optimal_operator.entries());
          py::list vertices;
          for (const auto& v : description.vertices)
            vertices.append(vector_to_array(v.coefficients()));
          d["vertices"] = vertices;
          d["supports"] = description.supports;
          return d;
        },
        py::arg("frame"), py::arg("cap") = 20);
  m.def("is_minimal_scaling",
        [](const DoubleArray& frame, const std::vector<double>& scaling) {
          return fs::is_minimal_scaling(to_frame(frame), to_scaling(scaling));
        },
        py::arg("frame"), py::arg("scaling"));
  m.def("polytope_membership",
        [](const DoubleArray& frame, const std::vector<double>& scaling,
           const DoubleArray& optimal_operator) {
          fs::PolytopeDescription description;
          description.optimal_operator = fs::SymmetricMatrix(to_matrix(optimal_operator));
          return fs::polytope_membership(to_frame(frame), to_scaling(scaling), description);
        },
        py::arg("frame"), py::arg("scaling"), py::arg("optimal_operator"));

  // serialization
  m.def("parse_frame",
        [](const std::string& text, const std::string& format) {
          return frame_to_array(fs::parse_frame(text, format_from(format)));
        },
        py::arg("text"), py::arg("format") = "json");
  m.def("serialize_frame",
        [](const DoubleArray& frame, const std::string& format,
           const std::map<std::string, std::string>& metadata) {
          return fs::serialize_frame(to_frame(frame), format_from(format), metadata);
        },
        py::arg("frame"), py::arg("format") = "json",
        py::arg("metadata") = std::map<std::string, std::string>{});
}
