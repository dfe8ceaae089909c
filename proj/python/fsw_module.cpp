#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fsw/embedding.hpp"
#include "fsw/measure.hpp"
#include "fsw/quantile.hpp"
#include "fsw/transport.hpp"
#include "fsw/validate.hpp"

namespace py = pybind11;
using namespace fsw;

namespace {

Matrix matrix_from_array(const py::array_t<double>& array) {
  const auto buffer = array.request();
  if (buffer.ndim != 2) {
    throw std::invalid_argument("points must be a 2-D array of shape (d, n)");
  }
  const auto d = static_cast<std::size_t>(buffer.shape[0]);
  const auto n = static_cast<std::size_t>(buffer.shape[1]);
  Matrix out(d, n);
  const auto view = array.unchecked<2>();
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out(r, c) = view(static_cast<py::ssize_t>(r), static_cast<py::ssize_t>(c));
    }
  }
  return out;
}

py::array_t<double> array_from_matrix(const Matrix& matrix) {
  py::array_t<double> out({matrix.rows(), matrix.cols()});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      view(static_cast<py::ssize_t>(r), static_cast<py::ssize_t>(c)) = matrix(r, c);
    }
  }
  return out;
}

py::array_t<double> array_from_vector(const std::vector<double>& values) {
  py::array_t<double> out(static_cast<py::ssize_t>(values.size()));
  auto view = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < values.size(); ++i) {
    view(static_cast<py::ssize_t>(i)) = values[i];
  }
  return out;
}

std::vector<double> vector_from_array(const py::array_t<double>& array) {
  const auto buffer = array.request();
  if (buffer.ndim != 1) {
    throw std::invalid_argument("expected a 1-D array");
  }
  const auto view = array.unchecked<1>();
  std::vector<double> out(static_cast<std::size_t>(buffer.shape[0]));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = view(static_cast<py::ssize_t>(i));
  }
  return out;
}

double parse_p(const py::object& p) {
  if (py::isinstance<py::str>(p)) {
    const auto name = p.cast<std::string>();
    if (name == "inf") {
      return kInfinity;
    }
    throw std::invalid_argument("p must be a number or 'inf'");
  }
  return p.cast<double>();
}

}  // namespace

PYBIND11_MODULE(fsw, m) {
  m.doc() = "Fourier sliced-Wasserstein embeddings of multisets and measures over R^d";

  py::class_<DiscreteMeasure>(m, "DiscreteMeasure")
      .def(py::init([](const py::array_t<double>& points, const py::array_t<double>& weights) {
             return DiscreteMeasure(matrix_from_array(points), vector_from_array(weights));
           }),
           py::arg("points"), py::arg("weights"))
      .def_property_readonly("d", &DiscreteMeasure::dim)
      .def_property_readonly("n", &DiscreteMeasure::size)
      .def_property_readonly("points",
                             [](const DiscreteMeasure& mu) { return array_from_matrix(mu.points()); })
      .def_property_readonly("weights",
                             [](const DiscreteMeasure& mu) { return array_from_vector(mu.weights()); })
      .def("__repr__", [](const DiscreteMeasure& mu) {
        return "DiscreteMeasure(d=" + std::to_string(mu.dim()) +
               ", n=" + std::to_string(mu.size()) + ")";
      });

  py::class_<ProbabilityMeasure, DiscreteMeasure>(m, "ProbabilityMeasure")
      .def(py::init([](const py::array_t<double>& points, const py::array_t<double>& weights) {
             return ProbabilityMeasure(matrix_from_array(points), vector_from_array(weights));
           }),
           py::arg("points"), py::arg("weights"));

  py::class_<EmbeddingParams>(m, "EmbeddingParams")
      .def_static(
          "sample",
          [](std::size_t d, std::size_t m_dim, std::uint64_t seed) {
            return EmbeddingParams::sample(d, m_dim, seed);
          },
          py::arg("d"), py::arg("m"), py::arg("seed"))
      .def_readonly("d", &EmbeddingParams::d)
      .def_readonly("m", &EmbeddingParams::m)
      .def_readonly("seed", &EmbeddingParams::seed)
      .def_property_readonly(
          "directions",
          [](const EmbeddingParams& params) { return array_from_matrix(params.directions); })
      .def_property_readonly(
          "frequencies",
          [](const EmbeddingParams& params) { return array_from_vector(params.frequencies); })
      .def(
          "to_json",
          [](const EmbeddingParams& params, bool include_arrays) {
            return params.to_json(include_arrays).dump();
          },
          py::arg("include_arrays") = false)
      .def_static("from_json", [](const std::string& text) {
        return EmbeddingParams::from_json(nlohmann::json::parse(text));
      })
      .def("prefix", &EmbeddingParams::prefix, py::arg("count"));

  m.def(
      "from_multiset",
      [](const py::array_t<double>& points) { return from_multiset(matrix_from_array(points)); },
      py::arg("points"), "Uniform distribution on the columns of a (d, n) array");
  m.def("total_mass", &total_mass, py::arg("mu"));
  m.def("normalize", &normalize, py::arg("mu"));
  m.def("regularize", &regularize, py::arg("mu"), py::arg("rho") = kDefaultRho);
  m.def(
      "pseudonorm",
      [](const ProbabilityMeasure& mu, const py::object& p) { return pseudonorm(mu, parse_p(p)); },
      py::arg("mu"), py::arg("p") = 2.0, "W_p distance to the point mass at the origin");
  m.def(
      "scale_points",
      [](const DiscreteMeasure& mu, double alpha) { return scale_points(mu, alpha); },
      py::arg("mu"), py::arg("alpha"));

  m.def(
      "one_sample",
      [](const ProbabilityMeasure& mu, const py::array_t<double>& v, double xi) {
        return one_sample(mu, vector_from_array(v), xi);
      },
      py::arg("mu"), py::arg("v"), py::arg("xi"));
  m.def(
      "embed",
      [](const ProbabilityMeasure& mu, const EmbeddingParams& params) {
        return array_from_vector(embed(mu, params).coords);
      },
      py::arg("mu"), py::arg("params"));
  m.def(
      "embed_measure",
      [](const DiscreteMeasure& mu, const EmbeddingParams& params, double rho,
         const std::string& variant) {
        return array_from_vector(embed_measure(mu, params, rho, variant_from_string(variant)).coords);
      },
      py::arg("mu"), py::arg("params"), py::arg("rho") = kDefaultRho,
      py::arg("variant") = "mass_regularized");
  m.def(
      "embedding_distance",
      [](const py::array_t<double>& a, const py::array_t<double>& b) {
        EmbeddingVector ea{vector_from_array(a), EmbeddingVariant::basic};
        EmbeddingVector eb{vector_from_array(b), EmbeddingVariant::basic};
        return embedding_distance(ea, eb);
      },
      py::arg("a"), py::arg("b"), "sqrt((1/m) ||a - b||^2)");
  m.def(
      "embed_grad",
      [](const ProbabilityMeasure& mu, const EmbeddingParams& params) {
        const auto grad = embed_grad(mu, params);
        py::array_t<double> points({grad.m, grad.n, grad.d});
        auto pview = points.mutable_unchecked<3>();
        for (std::size_t k = 0; k < grad.m; ++k) {
          for (std::size_t i = 0; i < grad.n; ++i) {
            for (std::size_t a = 0; a < grad.d; ++a) {
              pview(static_cast<py::ssize_t>(k), static_cast<py::ssize_t>(i),
                    static_cast<py::ssize_t>(a)) = grad.point_grad(k, i, a);
            }
          }
        }
        py::array_t<double> weights({grad.m, grad.n});
        auto wview = weights.mutable_unchecked<2>();
        for (std::size_t k = 0; k < grad.m; ++k) {
          for (std::size_t i = 0; i < grad.n; ++i) {
            wview(static_cast<py::ssize_t>(k), static_cast<py::ssize_t>(i)) =
                grad.weight_grad(k, i);
          }
        }
        return py::make_tuple(points, weights);
      },
      py::arg("mu"), py::arg("params"),
      "Gradients of every coordinate: ((m, n, d) wrt points, (m, n) wrt weights)");

  m.def(
      "quantile",
      [](const ProbabilityMeasure& nu) {
        const auto q = quantile(nu);
        return py::make_tuple(array_from_vector(q.breakpoints()), array_from_vector(q.values()));
      },
      py::arg("nu"), "Breakpoints and values of the quantile step function");
  m.def(
      "quantile_lp_distance",
      [](const ProbabilityMeasure& mu, const ProbabilityMeasure& nu, const py::object& p) {
        return quantile_lp_distance(quantile(mu), quantile(nu), parse_p(p));
      },
      py::arg("mu"), py::arg("nu"), py::arg("p") = 2.0);
  m.def(
      "wasserstein_sorted",
      [](const py::array_t<double>& x, const py::array_t<double>& y) {
        return wasserstein_sorted(vector_from_array(x), vector_from_array(y));
      },
      py::arg("x"), py::arg("y"));

  m.def(
      "wasserstein_exact",
      [](const ProbabilityMeasure& mu, const ProbabilityMeasure& nu, double p) {
        const auto result = wasserstein_exact(mu, nu, p);
        py::array_t<double> plan({result.plan.rows(), result.plan.cols()});
        auto view = plan.mutable_unchecked<2>();
        for (std::size_t i = 0; i < result.plan.rows(); ++i) {
          for (std::size_t j = 0; j < result.plan.cols(); ++j) {
            view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = result.plan.at(i, j);
          }
        }
        return py::make_tuple(result.cost, plan);
      },
      py::arg("mu"), py::arg("nu"), py::arg("p") = 2.0,
      "Exact p-Wasserstein cost and an optimal transport plan");
  m.def(
      "sliced_wasserstein_mc",
      [](const ProbabilityMeasure& mu, const ProbabilityMeasure& nu, std::int64_t directions,
         std::uint64_t seed) {
        const auto est = sliced_wasserstein_mc(mu, nu, directions, seed);
        return py::make_tuple(est.estimate, est.std_error);
      },
      py::arg("mu"), py::arg("nu"), py::arg("directions") = 1000, py::arg("seed") = 0);
  m.def("sliced_wasserstein_collinear", &sliced_wasserstein_collinear, py::arg("mu"),
        py::arg("nu"));
  m.def("pswe_counterexample_pair", &pswe_counterexample_pair, py::arg("d"), py::arg("n1"),
        py::arg("n2"));

  m.def("injectivity_dim_multisets", &injectivity_dim_multisets, py::arg("n"), py::arg("d"));
  m.def("injectivity_dim_measures", &injectivity_dim_measures, py::arg("n"), py::arg("d"));
}
