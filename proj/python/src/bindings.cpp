#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "fuel/cluster_metrics.hpp"
#include "fuel/conv_select.hpp"
#include "fuel/error.hpp"
#include "fuel/graph.hpp"
#include "fuel/pipeline.hpp"
#include "fuel/probe.hpp"
#include "fuel/refine.hpp"
#include "fuel/theory.hpp"

namespace py = pybind11;
using namespace fuel;

namespace {

py::dict step1_to_dict(const Step1Result& r) {
  py::dict out;
  const auto a = r.weights.alphas();
  out["alphas"] = std::vector<double>(a.begin(), a.end());
  out["logits"] = std::vector<double>(r.weights.logits.begin(), r.weights.logits.end());
  out["h"] = r.h;
  out["centroids"] = r.head.centroids;
  out["probs"] = r.assignments.probs;
  out["clusters"] = r.assignments.hard;
  std::vector<double> total;
  for (const auto& e : r.trace) total.push_back(e.loss.total);
  out["loss_trace"] = total;
  out["exact_pairs"] = r.exact_pairs;
  return out;
}

py::dict step2_to_dict(const Step2Result& r) {
  py::dict out;
  out["z"] = r.z;
  out["loss_trace"] = r.trace;
  out["positive_pairs"] = r.pairs.positives.size();
  out["exact_negatives"] = r.exact_negatives;
  out["hidden"] = r.resolved_hidden;
  return out;
}

// Commands take and return JSON text; the Python side does the dict conversion.
std::pair<int, std::string> run_command(const CommandResult& result) {
  return {result.exit_code, result.report.dump()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = kVersion;

  // Held for the interpreter's lifetime; never decref'd at static destruction.
  static PyObject* fuel_error = py::exception<Error>(m, "FuelError", PyExc_ValueError).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(fuel_error)(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(fuel_error, inst.ptr());
    }
  });

  py::class_<Split>(m, "Split")
      .def(py::init<>())
      .def(py::init([](std::vector<int> train, std::vector<int> val, std::vector<int> test) {
             return Split{std::move(train), std::move(val), std::move(test)};
           }),
           py::arg("train"), py::arg("val"), py::arg("test"))
      .def_readwrite("train", &Split::train)
      .def_readwrite("val", &Split::val)
      .def_readwrite("test", &Split::test);

  py::class_<Graph>(m, "Graph")
      .def_readonly("name", &Graph::name)
      .def_readonly("num_nodes", &Graph::num_nodes)
      .def_readonly("num_classes", &Graph::num_classes)
      .def_readonly("features", &Graph::features)
      .def_readonly("labels", &Graph::labels)
      .def_readonly("splits", &Graph::splits)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def_property_readonly("feature_dim", &Graph::feature_dim)
      .def("edges", &Graph::edges)
      .def("degrees", &Graph::degrees)
      .def("__repr__", [](const Graph& g) {
        std::ostringstream os;
        os << "<fuel.Graph '" << g.name << "' nodes=" << g.num_nodes << " edges=" << g.num_edges()
           << " dim=" << g.feature_dim() << ">";
        return os.str();
      });

  m.def(
      "make_graph",
      [](std::string name, int num_nodes, const std::vector<NodePair>& edges, const Matrix& features,
         Labels labels, std::vector<Split> splits, int num_classes) {
        return make_graph(std::move(name), num_nodes, edges, features, std::move(labels), std::move(splits),
                          num_classes);
      },
      py::arg("name"), py::arg("num_nodes"), py::arg("edges"), py::arg("features"), py::arg("labels") = Labels{},
      py::arg("splits") = std::vector<Split>{}, py::arg("num_classes") = -1);
  m.def("load_dataset", &load_dataset, py::arg("path"));
  m.def("save_dataset", &save_dataset, py::arg("graph"), py::arg("path"));
  m.def("edge_homophily", py::overload_cast<const Graph&>(&edge_homophily), py::arg("graph"));

  m.def(
      "conv_bases",
      [](const Graph& g) {
        auto b = compute_conv_bases(g);
        return py::make_tuple(b.b0, b.b1, b.b2);
      },
      py::arg("graph"), "Return (X, normalized A X, normalized A^2 X).");

  m.def(
      "gen_synthetic",
      [](int n, int n0, double mu, double sigma, int num_nodes, int feature_dim, std::uint64_t seed) {
        SyntheticConfig cfg{.n = n, .n0 = n0, .mu = mu, .sigma = sigma, .num_nodes = num_nodes,
                            .feature_dim = feature_dim};
        return gen_synthetic(cfg, seed);
      },
      py::arg("n"), py::arg("n0"), py::arg("mu") = 1.0, py::arg("sigma") = 1.0, py::arg("num_nodes") = 100,
      py::arg("feature_dim") = 1, py::arg("seed") = 0);

  m.def(
      "train_step1",
      [](const Graph& g, int clusters, double lambda, int epochs, std::uint64_t seed) {
        Step1Config cfg;
        cfg.clusters = clusters;
        cfg.lambda = lambda;
        cfg.epochs = epochs;
        cfg.seed = seed;
        Step1Result r;
        {
          py::gil_scoped_release release;
          r = train_step1(g, cfg);
        }
        return step1_to_dict(r);
      },
      py::arg("graph"), py::arg("clusters") = 0, py::arg("lambda_") = 1.0, py::arg("epochs") = 300,
      py::arg("seed") = 0);

  m.def(
      "train_step2",
      [](const Matrix& h, int knn, double tau, int hidden, int epochs, double lr, std::uint64_t seed) {
        Step2Config cfg;
        cfg.knn = knn;
        cfg.tau = tau;
        cfg.hidden = hidden;
        cfg.epochs = epochs;
        cfg.lr = lr;
        cfg.seed = seed;
        Step2Result r;
        {
          py::gil_scoped_release release;
          r = train_step2(h, cfg);
        }
        return step2_to_dict(r);
      },
      py::arg("h"), py::arg("knn") = 10, py::arg("tau") = 1.0, py::arg("hidden") = 0, py::arg("epochs") = 200,
      py::arg("lr") = 1e-3, py::arg("seed") = 0);

  m.def(
      "kmeans",
      [](const Matrix& z, int k, std::uint64_t seed, int restarts) {
        auto r = kmeans(z, k, seed, {.restarts = restarts});
        return py::make_tuple(r.assignment, r.inertia);
      },
      py::arg("z"), py::arg("k"), py::arg("seed") = 0, py::arg("restarts") = 10,
      "Return (assignment, inertia) of the best restart.");
  m.def(
      "nmi", [](const Labels& a, const Labels& b) { return nmi(a, b); }, py::arg("a"), py::arg("b"));
  m.def(
      "ari", [](const Labels& a, const Labels& b) { return ari(a, b); }, py::arg("a"), py::arg("b"));
  m.def(
      "calinski_harabasz", [](const Matrix& z, const Labels& labels) { return calinski_harabasz(z, labels).score; },
      py::arg("z"), py::arg("labels"));

  m.def(
      "probe",
      [](const Matrix& z, const Labels& labels, const Split& split, const std::string& kind, std::uint64_t seed) {
        ProbeConfig cfg;
        cfg.seed = seed;
        const auto r = run_probe(probe_kind_from_string(kind), z, labels, split, cfg);
        py::dict out;
        out["train_accuracy"] = r.train_accuracy;
        out["val_accuracy"] = r.val_accuracy;
        out["test_accuracy"] = r.test_accuracy;
        out["best_epoch"] = r.best_epoch;
        out["epochs_run"] = r.epochs_run;
        return out;
      },
      py::arg("z"), py::arg("labels"), py::arg("split"), py::arg("kind") = "mlp", py::arg("seed") = 0);

  m.def(
      "cs_closed_form",
      [](int n, int n0, double w, double mu, double sigma) {
        return cs_closed_form({.n = n, .n0 = n0, .mu = mu, .sigma = sigma, .w = w});
      },
      py::arg("n"), py::arg("n0"), py::arg("w"), py::arg("mu") = 1.0, py::arg("sigma") = 1.0);
  m.def(
      "lcs_closed_form",
      [](int n, int n0, double w, double mu, double sigma) {
        return lcs_closed_form({.n = n, .n0 = n0, .mu = mu, .sigma = sigma, .w = w});
      },
      py::arg("n"), py::arg("n0"), py::arg("w"), py::arg("mu") = 1.0, py::arg("sigma") = 1.0);
  m.def(
      "cs_monte_carlo",
      [](int n, int n0, double w, std::int64_t samples, std::uint64_t seed, double mu, double sigma) {
        py::gil_scoped_release release;
        return cs_monte_carlo({.n = n, .n0 = n0, .mu = mu, .sigma = sigma, .w = w}, samples, seed);
      },
      py::arg("n"), py::arg("n0"), py::arg("w"), py::arg("samples") = 100000, py::arg("seed") = 0,
      py::arg("mu") = 1.0, py::arg("sigma") = 1.0);

  m.def(
      "_embed",
      [](const std::string& config_json) {
        PipelineConfig cfg;
        apply_config_json(nlohmann::json::parse(config_json), cfg);
        std::ostringstream log;
        py::gil_scoped_release release;
        return run_command(cmd_embed(cfg, log));
      },
      py::arg("config_json"));
  m.def(
      "_theory",
      [](int n, int n0, double step, std::int64_t samples, std::uint64_t seed) {
        TheoryCommandOptions opt;
        opt.n = n;
        opt.n0 = n0;
        opt.step = step;
        opt.oracle_samples = samples;
        opt.seed = seed;
        std::ostringstream log;
        py::gil_scoped_release release;
        return run_command(cmd_theory(opt, log));
      },
      py::arg("n"), py::arg("n0"), py::arg("step"), py::arg("samples"), py::arg("seed"));
}
