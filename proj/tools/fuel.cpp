#include <fstream>
#include <functional>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "fuel/error.hpp"
#include "fuel/pipeline.hpp"

namespace {

using fuel::PipelineConfig;

// Flags are parsed into shadow storage and copied onto the config only when given on the
// command line, so they override values from --config.
class Overrides {
 public:
  template <typename T, typename Setter>
  CLI::Option* add(CLI::App* app, const std::string& name, Setter set, const std::string& help) {
    auto storage = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *storage, help);
    setters_.push_back([opt, storage, set](PipelineConfig& c) {
      if (opt->count() > 0) set(c, *storage);
    });
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, std::function<void(PipelineConfig&)> set,
                    const std::string& help) {
    CLI::Option* opt = app->add_flag(name, help);
    setters_.push_back([opt, set](PipelineConfig& c) {
      if (opt->count() > 0) set(c);
    });
    return opt;
  }

  void apply(PipelineConfig& c) const {
    for (const auto& s : setters_) s(c);
  }

 private:
  std::vector<std::function<void(PipelineConfig&)>> setters_;
};

PipelineConfig load_config(const std::string& path) {
  PipelineConfig config;
  config.output_dir = fuel::default_output_dir();
  if (path.empty()) return config;
  std::ifstream in(path);
  fuel::require(static_cast<bool>(in), fuel::ErrorCode::MissingFile, "cannot open config " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fuel::fail(fuel::ErrorCode::ParseError, path + ": " + e.what());
  }
  fuel::apply_config_json(doc, config);
  return config;
}

void add_pipeline_flags(CLI::App* app, Overrides& ov, bool training) {
  ov.add<std::string>(app, "--dataset,-d", [](PipelineConfig& c, const std::string& v) { c.dataset = v; },
                      "dataset directory");
  ov.add<std::string>(app, "--out,-o", [](PipelineConfig& c, const std::string& v) { c.output_dir = v; },
                      "output directory (default $FUEL_OUTPUT_DIR or fuel_out)");
  ov.add<std::uint64_t>(app, "--seed,-s", [](PipelineConfig& c, std::uint64_t v) { c.seed = v; }, "master seed");
  ov.add<std::vector<std::uint64_t>>(app, "--eval-seeds",
                                     [](PipelineConfig& c, const std::vector<std::uint64_t>& v) { c.eval_seeds = v; },
                                     "evaluation seeds (default 0..9)");
  ov.add<int>(app, "--kmeans-restarts", [](PipelineConfig& c, int v) { c.kmeans_restarts = v; },
              "k-means restarts for NMI/ARI");
  ov.add<std::string>(app, "--probe", [](PipelineConfig& c, const std::string& v) { c.probe_kind = fuel::probe_kind_from_string(v); },
                      "probe classifier: mlp or linear")
      ->check(CLI::IsMember({"mlp", "linear"}));
  ov.add<int>(app, "--probe-epochs", [](PipelineConfig& c, int v) { c.probe.epochs = v; }, "probe epochs");
  ov.add<int>(app, "--probe-hidden", [](PipelineConfig& c, int v) { c.probe.hidden = v; }, "MLP probe width");
  if (!training) return;
  ov.add<int>(app, "--clusters", [](PipelineConfig& c, int v) { c.step1.clusters = v; },
              "cluster count (default: number of classes)");
  ov.add<double>(app, "--lambda", [](PipelineConfig& c, double v) { c.step1.lambda = v; }, "separation loss weight");
  ov.add<int>(app, "--step1-epochs", [](PipelineConfig& c, int v) { c.step1.epochs = v; }, "conv-select epochs");
  ov.add<double>(app, "--lr-logits", [](PipelineConfig& c, double v) { c.step1.lr_logits = v; }, "mixing logit lr");
  ov.add<double>(app, "--lr-centroids", [](PipelineConfig& c, double v) { c.step1.lr_centroids = v; }, "centroid lr");
  ov.add<int>(app, "--pair-sample", [](PipelineConfig& c, int v) { c.step1.pair_sample = v; },
              "sampled pairs per kind for large graphs (default 10n)");
  ov.add<std::uint64_t>(app, "--step1-seed", [](PipelineConfig& c, std::uint64_t v) { c.step1_seed = v; },
                        "explicit conv-select seed");
  ov.add<int>(app, "--knn", [](PipelineConfig& c, int v) { c.step2.knn = v; }, "neighbors per node");
  ov.add<double>(app, "--tau", [](PipelineConfig& c, double v) { c.step2.tau = v; }, "distance temperature");
  ov.add<int>(app, "--hidden", [](PipelineConfig& c, int v) { c.step2.hidden = v; }, "refiner width (default d)");
  ov.add<int>(app, "--step2-epochs", [](PipelineConfig& c, int v) { c.step2.epochs = v; }, "refiner epochs");
  ov.add<double>(app, "--lr-refiner", [](PipelineConfig& c, double v) { c.step2.lr = v; }, "refiner lr");
  ov.add<int>(app, "--neg-sample", [](PipelineConfig& c, int v) { c.step2.neg_sample = v; },
              "sampled negatives for large graphs (default 10n)");
  ov.add<std::uint64_t>(app, "--step2-seed", [](PipelineConfig& c, std::uint64_t v) { c.step2_seed = v; },
                        "explicit refiner seed");
  ov.flag(app, "--csv", [](PipelineConfig& c) { c.csv = true; }, "also write embeddings as CSV");
  ov.flag(app, "--no-eval", [](PipelineConfig& c) { c.evaluate = false; }, "skip probe and clustering evaluation");
}

int finish(const fuel::CommandResult& result, bool print_json) {
  if (print_json) std::cout << result.report.dump(2) << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fuel: unsupervised node embeddings with adaptive graph convolution"};
  app.set_version_flag("--version", fuel::kVersion);
  app.require_subcommand(1);
  bool print_json = false;
  app.add_flag("--json", print_json, "print the JSON report to stdout");
  std::ostream& log = std::cerr;

  Overrides embed_ov;
  std::string embed_config;
  auto* embed = app.add_subcommand("embed", "learn H (conv-select) and Z (refine), then evaluate");
  embed->add_option("--config,-c", embed_config, "JSON config; flags override its values");
  add_pipeline_flags(embed, embed_ov, true);

  Overrides eval_ov;
  std::string eval_config, embedding;
  auto* eval = app.add_subcommand("eval", "probe and cluster a stored embedding");
  eval->add_option("--embedding,-e", embedding, "embedding stem, .bin or .meta.json")->required();
  eval->add_option("--config,-c", eval_config, "JSON config; flags override its values");
  add_pipeline_flags(eval, eval_ov, false);

  fuel::ProxyCommandOptions proxy_opts;
  std::string latent = "kmeans", proxy_probe = "linear";
  auto* proxy = app.add_subcommand("proxy", "correlate the CH proxy with probe accuracy over random mixings");
  proxy->add_option("--dataset,-d", proxy_opts.dataset, "dataset directory")->required();
  proxy->add_option("--out,-o", proxy_opts.output_dir, "output directory");
  proxy->add_option("--trials", proxy_opts.trials, "number of random mixings")->capture_default_str();
  proxy->add_option("--train-frac", proxy_opts.train_frac, "labeled fraction for the probe")->capture_default_str();
  proxy->add_option("--seed,-s", proxy_opts.seed, "seed");
  proxy->add_option("--latent", latent, "latent classes: kmeans or labels")
      ->check(CLI::IsMember({"kmeans", "labels"}))
      ->capture_default_str();
  proxy->add_option("--probe", proxy_probe, "probe classifier")->check(CLI::IsMember({"mlp", "linear"}))->capture_default_str();

  fuel::TheoryCommandOptions theory_opts;
  auto* theory = app.add_subcommand("theory", "check CS/LCS ordering agreement and the Monte-Carlo oracle");
  theory->add_option("--n", theory_opts.n, "neighbors per node")->capture_default_str();
  theory->add_option("--n0", theory_opts.n0, "same-class neighbors")->capture_default_str();
  theory->add_option("--step", theory_opts.step, "grid step in (0, 0.5]")->capture_default_str();
  theory->add_option("--mu", theory_opts.mu, "class mean")->capture_default_str();
  theory->add_option("--sigma", theory_opts.sigma, "feature stddev")->capture_default_str();
  theory->add_option("--samples", theory_opts.oracle_samples, "Monte-Carlo samples per grid point")->capture_default_str();
  theory->add_option("--seed,-s", theory_opts.seed, "seed");
  theory->add_option("--out,-o", theory_opts.output_dir, "write theory_report.json here");

  std::string homophily_dataset;
  auto* homophily = app.add_subcommand("homophily", "edge homophily of a labeled dataset");
  homophily->add_option("--dataset,-d", homophily_dataset, "dataset directory")->required();

  fuel::SynthCommandOptions synth_opts;
  auto* synth = app.add_subcommand("gen-synth", "generate a two-class regular synthetic graph");
  synth->add_option("--n", synth_opts.config.n, "neighbors per node")->capture_default_str();
  synth->add_option("--n0", synth_opts.config.n0, "same-class neighbors")->capture_default_str();
  synth->add_option("--nodes", synth_opts.config.num_nodes, "node count (even)")->capture_default_str();
  synth->add_option("--feature-dim", synth_opts.config.feature_dim, "feature copies")->capture_default_str();
  synth->add_option("--mu", synth_opts.config.mu, "class mean")->capture_default_str();
  synth->add_option("--sigma", synth_opts.config.sigma, "feature stddev")->capture_default_str();
  synth->add_option("--seed,-s", synth_opts.seed, "seed");
  synth->add_option("--out,-o", synth_opts.output_dir, "dataset directory to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fuel::kExitConfig;
  }

  try {
    if (*embed || *eval) {
      const bool is_embed = static_cast<bool>(*embed);
      PipelineConfig config = load_config(is_embed ? embed_config : eval_config);
      (is_embed ? embed_ov : eval_ov).apply(config);
      return finish(is_embed ? fuel::cmd_embed(config, log) : fuel::cmd_eval(embedding, config, log), print_json);
    }
    if (*proxy) {
      proxy_opts.proxy.latent = latent == "labels" ? fuel::LatentClassMode::Labels : fuel::LatentClassMode::KMeans;
      proxy_opts.proxy.probe = fuel::probe_kind_from_string(proxy_probe);
      return finish(fuel::cmd_proxy(proxy_opts, log), print_json);
    }
    if (*theory) return finish(fuel::cmd_theory(theory_opts, log), print_json);
    if (*homophily) return finish(fuel::cmd_homophily(homophily_dataset, log), print_json);
    if (*synth) return finish(fuel::cmd_gen_synth(synth_opts, log), print_json);
  } catch (const fuel::Error& e) {
    log << "error: " << e.what() << "\n";
    return fuel::kExitConfig;
  }
  return fuel::kExitConfig;
}
