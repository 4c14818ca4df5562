#include "fuel/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "fuel/cluster_metrics.hpp"
#include "fuel/embedding_io.hpp"
#include "fuel/error.hpp"
#include "fuel/stats.hpp"
#include "fuel/text_io.hpp"

namespace fuel {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string default_output_dir() {
  if (const char* env = std::getenv("FUEL_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return "fuel_out";
}

namespace {

template <typename T>
void read_key(const json& section, const char* key, T& target, const std::string& where) {
  if (!section.contains(key)) return;
  try {
    target = section.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, where + "." + key + ": " + e.what());
  }
}

void reject_unknown(const json& section, std::initializer_list<const char*> known, const std::string& where) {
  require(section.is_object(), ErrorCode::InvalidArgument, where + " must be an object");
  for (const auto& [key, _] : section.items()) {
    const bool ok = std::any_of(known.begin(), known.end(), [&](const char* k) { return key == k; });
    require(ok, ErrorCode::InvalidArgument, "unknown config key '" + where + "." + key + "'");
  }
}

void write_json(const fs::path& path, const ordered_json& doc) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::MissingFile, "cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ordered_json error_json(const std::exception& e, const char* stage) {
  ordered_json out = {{"stage", stage}, {"message", e.what()}};
  if (const auto* err = dynamic_cast<const Error*>(&e)) out["code"] = std::string(to_string(err->code()));
  if (const auto* terr = dynamic_cast<const TrainingError*>(&e)) out["epoch"] = terr->epoch();
  return out;
}

ordered_json dataset_json(const Graph& g) {
  return {{"name", g.name},
          {"num_nodes", g.num_nodes},
          {"num_edges", g.num_edges()},
          {"feature_dim", g.feature_dim()},
          {"num_classes", g.num_classes}};
}

ordered_json summary_stats(const std::vector<double>& values) {
  return {{"mean", mean(values)}, {"std", stddev(values)}};
}

CommandResult config_failure(const std::exception& e, std::ostream& log) {
  log << "error: " << e.what() << "\n";
  CommandResult r;
  r.exit_code = kExitConfig;
  r.report = {{"status", "failed"}, {"error", error_json(e, "config")}};
  return r;
}

}  // namespace

void apply_config_json(const json& doc, PipelineConfig& c) {
  reject_unknown(doc,
                 {"dataset", "output_dir", "seed", "csv", "evaluate", "eval_seeds", "kmeans_restarts", "step1",
                  "step2", "probe"},
                 "config");
  read_key(doc, "dataset", c.dataset, "config");
  read_key(doc, "output_dir", c.output_dir, "config");
  read_key(doc, "seed", c.seed, "config");
  read_key(doc, "csv", c.csv, "config");
  read_key(doc, "evaluate", c.evaluate, "config");
  read_key(doc, "eval_seeds", c.eval_seeds, "config");
  read_key(doc, "kmeans_restarts", c.kmeans_restarts, "config");
  if (doc.contains("step1")) {
    const auto& s = doc.at("step1");
    reject_unknown(s, {"clusters", "lambda", "epochs", "lr_logits", "lr_centroids", "pair_sample", "pair_exact_threshold", "seed"}, "step1");
    read_key(s, "clusters", c.step1.clusters, "step1");
    read_key(s, "lambda", c.step1.lambda, "step1");
    read_key(s, "epochs", c.step1.epochs, "step1");
    read_key(s, "lr_logits", c.step1.lr_logits, "step1");
    read_key(s, "lr_centroids", c.step1.lr_centroids, "step1");
    read_key(s, "pair_sample", c.step1.pair_sample, "step1");
    read_key(s, "pair_exact_threshold", c.step1.pair_exact_threshold, "step1");
    if (s.contains("seed")) {
      std::uint64_t seed = 0;
      read_key(s, "seed", seed, "step1");
      c.step1_seed = seed;
    }
  }
  if (doc.contains("step2")) {
    const auto& s = doc.at("step2");
    reject_unknown(s, {"knn", "tau", "hidden", "epochs", "lr_refiner", "neg_sample", "pair_exact_threshold", "seed"}, "step2");
    read_key(s, "knn", c.step2.knn, "step2");
    read_key(s, "tau", c.step2.tau, "step2");
    read_key(s, "hidden", c.step2.hidden, "step2");
    read_key(s, "epochs", c.step2.epochs, "step2");
    read_key(s, "lr_refiner", c.step2.lr, "step2");
    read_key(s, "neg_sample", c.step2.neg_sample, "step2");
    read_key(s, "pair_exact_threshold", c.step2.pair_exact_threshold, "step2");
    if (s.contains("seed")) {
      std::uint64_t seed = 0;
      read_key(s, "seed", seed, "step2");
      c.step2_seed = seed;
    }
  }
  if (doc.contains("probe")) {
    const auto& s = doc.at("probe");
    reject_unknown(s, {"kind", "hidden", "weight_decay", "lr", "epochs", "patience"}, "probe");
    if (s.contains("kind")) {
      std::string kind;
      read_key(s, "kind", kind, "probe");
      c.probe_kind = probe_kind_from_string(kind);
    }
    read_key(s, "hidden", c.probe.hidden, "probe");
    read_key(s, "weight_decay", c.probe.weight_decay, "probe");
    read_key(s, "lr", c.probe.lr, "probe");
    read_key(s, "epochs", c.probe.epochs, "probe");
    read_key(s, "patience", c.probe.patience, "probe");
  }
}

ordered_json config_to_json(const PipelineConfig& c) {
  ordered_json step1 = {{"clusters", c.step1.clusters},
                        {"lambda", c.step1.lambda},
                        {"epochs", c.step1.epochs},
                        {"lr_logits", c.step1.lr_logits},
                        {"lr_centroids", c.step1.lr_centroids},
                        {"pair_sample", c.step1.pair_sample},
                        {"pair_exact_threshold", c.step1.pair_exact_threshold},
                        {"seed", c.step1_seed.value_or(c.step1.seed)}};
  ordered_json step2 = {{"knn", c.step2.knn},
                        {"tau", c.step2.tau},
                        {"hidden", c.step2.hidden},
                        {"epochs", c.step2.epochs},
                        {"lr_refiner", c.step2.lr},
                        {"neg_sample", c.step2.neg_sample},
                        {"pair_exact_threshold", c.step2.pair_exact_threshold},
                        {"seed", c.step2_seed.value_or(c.step2.seed)}};
  ordered_json probe = {{"kind", to_string(c.probe_kind)},
                        {"hidden", c.probe.hidden},
                        {"weight_decay", c.probe.weight_decay},
                        {"lr", c.probe.lr},
                        {"epochs", c.probe.epochs},
                        {"patience", c.probe.patience}};
  return {{"dataset", c.dataset},
          {"output_dir", c.output_dir},
          {"seed", c.seed},
          {"csv", c.csv},
          {"evaluate", c.evaluate},
          {"eval_seeds", c.eval_seeds},
          {"kmeans_restarts", c.kmeans_restarts},
          {"step1", step1},
          {"step2", step2},
          {"probe", probe}};
}

PipelineConfig resolve_config(PipelineConfig c, const Graph* graph) {
  require(!c.eval_seeds.empty(), ErrorCode::InvalidArgument, "eval_seeds must not be empty");
  require(c.kmeans_restarts >= 1, ErrorCode::InvalidArgument, "kmeans_restarts must be >= 1");
  if (c.output_dir.empty()) c.output_dir = default_output_dir();
  c.step1.seed = c.step1_seed.value_or(derive_seed(c.seed, "step1"));
  c.step2.seed = c.step2_seed.value_or(derive_seed(c.seed, "step2"));
  c.step1_seed = c.step1.seed;
  c.step2_seed = c.step2.seed;
  if (graph != nullptr && c.step1.clusters == 0) c.step1.clusters = graph->num_classes;
  if (graph != nullptr) {
    require(c.step1.clusters >= 2, ErrorCode::InvalidArgument,
            "cluster count must be >= 2 (set step1.clusters; dataset has " + std::to_string(graph->num_classes) +
                " classes)");
  }
  require(c.step1.lambda >= 0.0, ErrorCode::InvalidArgument, "step1.lambda must be >= 0");
  require(c.step1.epochs >= 1, ErrorCode::InvalidArgument, "step1.epochs must be >= 1");
  require(c.step1.pair_sample >= 0, ErrorCode::InvalidArgument, "step1.pair_sample must be >= 1 (0 = default)");
  require(c.step2.knn >= 1, ErrorCode::InvalidArgument, "step2.knn must be >= 1");
  require(c.step2.tau > 0.0, ErrorCode::InvalidArgument, "step2.tau must be positive");
  require(c.step2.epochs >= 0, ErrorCode::InvalidArgument, "step2.epochs must be >= 0");
  return c;
}

EvaluationSummary evaluate_embedding(const Matrix& z, const Graph& graph, const PipelineConfig& config) {
  require(z.rows() == graph.num_nodes, ErrorCode::ShapeMismatch,
          "embedding has " + std::to_string(z.rows()) + " rows, dataset has " + std::to_string(graph.num_nodes) +
              " nodes");
  require(graph.has_labels(), ErrorCode::UnlabeledEndpoint, "evaluation needs labels");
  EvaluationSummary s;
  s.kind = config.probe_kind;
  s.seeds = config.eval_seeds;

  std::vector<int> labeled;
  Labels truth;
  for (int i = 0; i < graph.num_nodes; ++i) {
    if (graph.labels[static_cast<std::size_t>(i)] >= 0) {
      labeled.push_back(i);
      truth.push_back(graph.labels[static_cast<std::size_t>(i)]);
    }
  }
  for (std::size_t k = 0; k < config.eval_seeds.size(); ++k) {
    const std::uint64_t seed = config.eval_seeds[k];
    const Split split = graph.splits.empty()
                            ? stratified_splits(graph.labels, 1, 0.48, 0.32, derive_seed(seed, "eval/split"))[0]
                            : graph.splits[seed % graph.splits.size()];
    ProbeConfig probe = config.probe;
    probe.seed = derive_seed(seed, "eval/probe");
    s.accuracy.push_back(run_probe(config.probe_kind, z, graph.labels, split, probe).test_accuracy);

    const auto clusters = kmeans(z, graph.num_classes, derive_seed(seed, "eval/kmeans"), {.restarts = config.kmeans_restarts});
    Labels predicted;
    for (int i : labeled) predicted.push_back(clusters.assignment[static_cast<std::size_t>(i)]);
    s.nmi.push_back(nmi(predicted, truth));
    s.ari.push_back(ari(predicted, truth));
    if (k == 0) {
      const auto ch = calinski_harabasz(z, clusters.assignment);
      s.ch_index = ch.score;
    }
  }
  return s;
}

ordered_json evaluation_to_json(const EvaluationSummary& s) {
  const auto acc = summary_stats(s.accuracy);
  const auto nmi_stats = summary_stats(s.nmi);
  const auto ari_stats = summary_stats(s.ari);
  return {{"probe",
           {{"kind", to_string(s.kind)},
            {"acc_mean", acc["mean"]},
            {"acc_std", acc["std"]},
            {"per_seed", s.accuracy},
            {"seeds", s.seeds}}},
          {"clustering",
           {{"nmi_mean", nmi_stats["mean"]},
            {"nmi_std", nmi_stats["std"]},
            {"ari_mean", ari_stats["mean"]},
            {"ari_std", ari_stats["std"]},
            {"nmi_per_seed", s.nmi},
            {"ari_per_seed", s.ari},
            {"nmi_normalization", "arithmetic"}}},
          {"ch_index", std::isfinite(s.ch_index) ? ordered_json(s.ch_index) : ordered_json(nullptr)}};
}

namespace {

ordered_json ch_json(const Matrix& m, std::span<const int> clusters) {
  try {
    const auto ch = calinski_harabasz(m, clusters);
    if (ch.zero_within_variance) return nullptr;
    return ch.score;
  } catch (const Error&) {
    return nullptr;
  }
}

}  // namespace

CommandResult cmd_embed(const PipelineConfig& input, std::ostream& log) {
  Graph graph;
  PipelineConfig config;
  try {
    require(!input.dataset.empty(), ErrorCode::InvalidArgument, "no dataset given");
    graph = load_dataset(input.dataset);
    config = resolve_config(input, &graph);
    fs::create_directories(config.output_dir);
  } catch (const std::exception& e) {
    return config_failure(e, log);
  }
  const fs::path out = config.output_dir;
  CommandResult result;
  auto& report = result.report;
  report["tool"] = {{"name", "fuel"}, {"version", kVersion}};
  report["command"] = "embed";
  report["dataset"] = dataset_json(graph);
  report["config"] = config_to_json(config);
  report["status"] = "running";
  ordered_json timings;

  const auto fail_with = [&](const std::exception& e, const char* stage) {
    log << "error: " << e.what() << "\n";
    report["status"] = "failed";
    report["error"] = error_json(e, stage);
    report["timings"] = timings;
    write_json(out / "report.json", report);
    result.exit_code = kExitTraining;
    return result;
  };

  Step1Result step1;
  auto start = std::chrono::steady_clock::now();
  try {
    step1 = train_step1(compute_conv_bases(graph), config.step1.clusters, config.step1);
  } catch (const std::exception& e) {
    return fail_with(e, "step1");
  }
  timings["step1_seconds"] = seconds_since(start);
  const auto alphas = step1.weights.alphas();
  log << "step1: alpha = (" << alphas[0] << ", " << alphas[1] << ", " << alphas[2] << ")\n";
  write_embedding(out / "H", step1.h, config.csv);
  ordered_json alpha_doc = {{"alphas", alphas}, {"logits", step1.weights.logits}};
  write_json(out / "alpha.json", alpha_doc);

  ordered_json trace_total, trace_l1, trace_l2, trace_l3;
  for (const auto& e : step1.trace) {
    trace_total.push_back(e.loss.total);
    trace_l1.push_back(e.loss.sharpness);
    trace_l2.push_back(e.loss.balance);
    trace_l3.push_back(e.loss.separation);
  }
  report["step1"] = {{"alphas", alphas},
                     {"logits", step1.weights.logits},
                     {"clusters", step1.resolved_clusters},
                     {"exact_pairs", step1.exact_pairs},
                     {"pair_sample", step1.resolved_pair_sample},
                     {"seed", config.step1.seed},
                     {"loss_trace",
                      {{"total", trace_total}, {"sharpness", trace_l1}, {"balance", trace_l2}, {"separation", trace_l3}}}};
  write_json(out / "report.json", report);

  Step2Result step2;
  start = std::chrono::steady_clock::now();
  try {
    step2 = train_step2(step1.h, config.step2);
  } catch (const std::exception& e) {
    return fail_with(e, "step2");
  }
  timings["step2_seconds"] = seconds_since(start);
  write_embedding(out / "Z", step2.z, config.csv);
  report["step2"] = {{"seed", config.step2.seed},
                     {"hidden", step2.resolved_hidden},
                     {"knn", step2.pairs.neighbors_per_node},
                     {"positive_pairs", step2.pairs.positives.size()},
                     {"exact_negatives", step2.exact_negatives},
                     {"neg_sample", step2.resolved_neg_sample},
                     {"loss_trace", step2.trace}};
  const ordered_json ch_before = ch_json(step1.h, step1.assignments.hard);
  const ordered_json ch_after = ch_json(step2.z, step1.assignments.hard);
  report["ch_index"] = {{"latent_classes", "step1_hard_assignments"}, {"before", ch_before}, {"after", ch_after}};
  log << "step2: CH before = " << ch_before.dump() << ", after = " << ch_after.dump() << "\n";

  if (config.evaluate && graph.has_labels()) {
    start = std::chrono::steady_clock::now();
    try {
      report["evaluation"] = evaluation_to_json(evaluate_embedding(step2.z, graph, config));
    } catch (const std::exception& e) {
      return fail_with(e, "evaluation");
    }
    timings["eval_seconds"] = seconds_since(start);
    log << "eval: acc_mean = " << report["evaluation"]["probe"]["acc_mean"].dump()
        << ", nmi_mean = " << report["evaluation"]["clustering"]["nmi_mean"].dump() << "\n";
  }
  report["status"] = "ok";
  report["timings"] = timings;
  write_json(out / "report.json", report);
  return result;
}

CommandResult cmd_eval(const fs::path& embedding, const PipelineConfig& input, std::ostream& log) {
  Graph graph;
  PipelineConfig config;
  Matrix z;
  try {
    require(!input.dataset.empty(), ErrorCode::InvalidArgument, "no dataset given");
    graph = load_dataset(input.dataset);
    config = resolve_config(input, &graph);
    z = read_embedding(embedding);
    require(z.rows() == graph.num_nodes, ErrorCode::ShapeMismatch,
            "embedding has " + std::to_string(z.rows()) + " rows, dataset has " + std::to_string(graph.num_nodes));
    require(graph.has_labels(), ErrorCode::UnlabeledEndpoint, "dataset has no labels");
    fs::create_directories(config.output_dir);
  } catch (const std::exception& e) {
    return config_failure(e, log);
  }
  CommandResult result;
  auto& report = result.report;
  report["tool"] = {{"name", "fuel"}, {"version", kVersion}};
  report["command"] = "eval";
  report["embedding"] = embedding.string();
  report["dataset"] = dataset_json(graph);
  report["config"] = config_to_json(config);
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto summary = evaluation_to_json(evaluate_embedding(z, graph, config));
    for (const auto& [key, value] : summary.items()) report[key] = value;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    report["status"] = "failed";
    report["error"] = error_json(e, "evaluation");
    write_json(fs::path(config.output_dir) / "eval_report.json", report);
    result.exit_code = kExitTraining;
    return result;
  }
  report["config_echo"] = report["config"];
  report["status"] = "ok";
  report["timings"] = {{"eval_seconds", seconds_since(start)}};
  write_json(fs::path(config.output_dir) / "eval_report.json", report);
  log << "eval: acc_mean = " << report["probe"]["acc_mean"].dump() << " (std " << report["probe"]["acc_std"].dump()
      << "), nmi_mean = " << report["clustering"]["nmi_mean"].dump() << "\n";
  return result;
}

CommandResult cmd_proxy(const ProxyCommandOptions& options, std::ostream& log) {
  Graph graph;
  const std::string out_dir = options.output_dir.empty() ? default_output_dir() : options.output_dir;
  try {
    graph = load_dataset(options.dataset);
    require(graph.has_labels(), ErrorCode::UnlabeledEndpoint, "dataset '" + graph.name + "' has no labels");
    require(options.trials >= 2, ErrorCode::InvalidArgument, "trials must be >= 2");
    fs::create_directories(out_dir);
  } catch (const std::exception& e) {
    return config_failure(e, log);
  }
  CommandResult result;
  ProxyResult proxy;
  try {
    proxy = proxy_experiment(graph, options.trials, options.train_frac, options.seed, options.proxy);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    result.exit_code = kExitTraining;
    result.report = {{"status", "failed"}, {"error", error_json(e, "proxy")}};
    return result;
  }
  const fs::path csv_path = fs::path(out_dir) / "proxy_pairs.csv";
  {
    std::ofstream csv(csv_path, std::ios::binary);
    csv << "trial,alpha0,alpha1,alpha2,lcs,accuracy\n";
    for (std::size_t t = 0; t < proxy.trials.size(); ++t) {
      const auto& tr = proxy.trials[t];
      csv << t << ',' << format_double(tr.alphas[0]) << ',' << format_double(tr.alphas[1]) << ','
          << format_double(tr.alphas[2]) << ',' << format_double(tr.lcs) << ',' << format_double(tr.accuracy) << '\n';
    }
  }
  result.report = {
      {"tool", {{"name", "fuel"}, {"version", kVersion}}},
      {"command", "proxy"},
      {"dataset", dataset_json(graph)},
      {"proxy",
       {{"rho", proxy.rho},
        {"pairs_csv_path", csv_path.string()},
        {"trials", options.trials},
        {"train_frac", options.train_frac},
        {"seed", options.seed},
        {"latent_classes", options.proxy.latent == LatentClassMode::KMeans ? "kmeans" : "labels"},
        {"probe", to_string(options.proxy.probe)},
        {"low_trial_warning", proxy.low_trial_warning}}},
      {"status", "ok"}};
  if (proxy.low_trial_warning) log << "warning: only " << options.trials << " trials (< 10); rho is unreliable\n";
  log << "proxy: spearman rho = " << proxy.rho << " over " << options.trials << " trials\n";
  write_json(fs::path(out_dir) / "proxy_report.json", result.report);
  return result;
}

CommandResult cmd_theory(const TheoryCommandOptions& options, std::ostream& log) {
  CommandResult result;
  Theorem1Report check;
  try {
    require(options.oracle_samples >= 1, ErrorCode::InvalidArgument, "oracle samples must be >= 1");
    check = theorem1_check(options.n, options.n0, options.step, options.mu, options.sigma);
  } catch (const std::exception& e) {
    return config_failure(e, log);
  }
  ordered_json violations = ordered_json::array();
  for (const auto& v : check.violations) {
    violations.push_back({{"w", v.w}, {"w_prime", v.w_prime}, {"cs_diff", v.cs_diff}, {"lcs_diff", v.lcs_diff}});
  }
  double max_err = 0.0;
  ordered_json grid = ordered_json::array();
  for (std::size_t k = 0; k < check.grid.size(); ++k) {
    SyntheticConfig cfg{.n = options.n, .n0 = options.n0, .mu = options.mu, .sigma = options.sigma, .w = check.grid[k]};
    const double exact = cs_closed_form(cfg);
    const double estimate = cs_monte_carlo(cfg, options.oracle_samples, derive_seed(options.seed, "theory/oracle", k));
    max_err = std::max(max_err, std::abs(estimate - exact));
    grid.push_back({{"w", check.grid[k]}, {"cs", exact}, {"cs_monte_carlo", estimate}, {"lcs", lcs_closed_form(cfg)}});
  }
  const double bound = 3.0 * std::sqrt(0.25 / static_cast<double>(options.oracle_samples));
  const bool oracle_pass = max_err < bound;
  result.report = {{"tool", {{"name", "fuel"}, {"version", kVersion}}},
                   {"command", "theory"},
                   {"theorem1",
                    {{"n", options.n},
                     {"n0", options.n0},
                     {"step", options.step},
                     {"region", {check.region_low, 1.0}},
                     {"cases", check.cases},
                     {"pass", check.pass},
                     {"violations", violations}}},
                   {"oracle",
                    {{"grid", grid},
                     {"samples", options.oracle_samples},
                     {"seed", options.seed},
                     {"max_abs_err", max_err},
                     {"bound", bound},
                     {"pass", oracle_pass}}},
                   {"status", check.pass && oracle_pass ? "pass" : "fail"}};
  log << "theorem1: n=" << options.n << " n0=" << options.n0 << " region=[" << check.region_low << ", 1] cases="
      << check.cases << " violations=" << check.violations.size() << "\n";
  log << "oracle: max |MC - closed form| = " << max_err << " (bound " << bound << ")\n";
  if (!options.output_dir.empty()) {
    fs::create_directories(options.output_dir);
    write_json(fs::path(options.output_dir) / "theory_report.json", result.report);
  }
  result.exit_code = check.pass && oracle_pass ? kExitOk : kExitViolation;
  return result;
}

CommandResult cmd_homophily(const std::string& dataset, std::ostream& log) {
  try {
    const Graph graph = load_dataset(dataset);
    const double h = edge_homophily(graph);
    CommandResult result;
    result.report = {{"dataset", graph.name}, {"num_edges", graph.num_edges()}, {"edge_homophily", h}};
    log << graph.name << ": edge homophily = " << h << " over " << graph.num_edges() << " edges\n";
    return result;
  } catch (const std::exception& e) {
    return config_failure(e, log);
  }
}

CommandResult cmd_gen_synth(const SynthCommandOptions& options, std::ostream& log) {
  try {
    require(!options.output_dir.empty(), ErrorCode::InvalidArgument, "no output directory given");
    const Graph graph = gen_synthetic(options.config, options.seed);
    save_dataset(graph, options.output_dir);
    CommandResult result;
    result.report = {{"dataset", graph.name},
                     {"num_nodes", graph.num_nodes},
                     {"num_edges", graph.num_edges()},
                     {"edge_homophily", edge_homophily(graph)},
                     {"output_dir", options.output_dir}};
    log << "wrote " << graph.name << " (" << graph.num_nodes << " nodes, " << graph.num_edges() << " edges) to "
        << options.output_dir << "\n";
    return result;
  } catch (const std::exception& e) {
    return config_failure(e, log);
  }
}

}  // namespace fuel
