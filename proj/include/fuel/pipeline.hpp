#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fuel/conv_select.hpp"
#include "fuel/graph.hpp"
#include "fuel/probe.hpp"
#include "fuel/refine.hpp"
#include "fuel/theory.hpp"
#include "json.hpp"

namespace fuel {

inline constexpr const char* kVersion = "0.1.0";

// Process exit codes shared by the CLI and the Python entry points.
enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitConfig = 2, kExitTraining = 3 };

struct PipelineConfig {
  std::string dataset;
  std::string output_dir;
  std::uint64_t seed = 0;  // master seed
  Step1Config step1;
  Step2Config step2;
  std::optional<std::uint64_t> step1_seed;  // derived from the master seed when unset
  std::optional<std::uint64_t> step2_seed;
  ProbeKind probe_kind = ProbeKind::Mlp;
  ProbeConfig probe;
  std::vector<std::uint64_t> eval_seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  int kmeans_restarts = 10;
  bool csv = false;
  bool evaluate = true;  // embed: also evaluate when the dataset has labels
};

// Default output directory: $FUEL_OUTPUT_DIR, else "fuel_out".
std::string default_output_dir();

// Overlays the keys present in doc onto config. Unknown keys raise InvalidArgument.
void apply_config_json(const nlohmann::json& doc, PipelineConfig& config);
nlohmann::ordered_json config_to_json(const PipelineConfig& config);
// Fills derived values (seeds, cluster count) and checks invariants.
PipelineConfig resolve_config(PipelineConfig config, const Graph* graph);

struct EvaluationSummary {
  ProbeKind kind = ProbeKind::Mlp;
  std::vector<std::uint64_t> seeds;
  std::vector<double> accuracy;
  std::vector<double> nmi;
  std::vector<double> ari;
  double ch_index = 0.0;
};

EvaluationSummary evaluate_embedding(const Matrix& z, const Graph& graph, const PipelineConfig& config);
nlohmann::ordered_json evaluation_to_json(const EvaluationSummary& summary);

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::ordered_json report;
};

// Step 1, Step 2, optional evaluation. Writes H, Z, alpha.json and report.json into the output dir.
CommandResult cmd_embed(const PipelineConfig& config, std::ostream& log);
// Probes and clustering metrics for an existing embedding.
CommandResult cmd_eval(const std::filesystem::path& embedding, const PipelineConfig& config, std::ostream& log);

struct ProxyCommandOptions {
  std::string dataset;
  std::string output_dir;
  int trials = 100;
  double train_frac = 0.1;
  std::uint64_t seed = 0;
  ProxyOptions proxy;
};
CommandResult cmd_proxy(const ProxyCommandOptions& options, std::ostream& log);

struct TheoryCommandOptions {
  int n = 5;
  int n0 = 5;
  double step = 0.05;
  double mu = 1.0;
  double sigma = 1.0;
  std::int64_t oracle_samples = 100000;
  std::uint64_t seed = 0;
  std::string output_dir;  // report.json written here when non-empty
};
CommandResult cmd_theory(const TheoryCommandOptions& options, std::ostream& log);

CommandResult cmd_homophily(const std::string& dataset, std::ostream& log);

struct SynthCommandOptions {
  SyntheticConfig config;
  std::uint64_t seed = 0;
  std::string output_dir;
};
CommandResult cmd_gen_synth(const SynthCommandOptions& options, std::ostream& log);

}  // namespace fuel
