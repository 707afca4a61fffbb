// Copyright 2026 The clusteraug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "clusteraug/augment.h"
#include "clusteraug/clustering.h"
#include "clusteraug/corpus.h"
#include "clusteraug/embeddings.h"
#include "clusteraug/error.h"
#include "clusteraug/eval.h"
#include "clusteraug/file_io.h"
#include "clusteraug/llm.h"
#include "clusteraug/parallel.h"
#include "clusteraug/reports.h"
#include "clusteraug/rng.h"
#include "clusteraug/scorer.h"
#include "json.hpp"

namespace clusteraug::cli {

namespace {

struct Logger {
  int verbosity = 0;  // -1 quiet, 0 warnings, 1 info

  void Warn(const std::string& message) const {
    if (verbosity >= 0) std::cerr << "warning: " << message << "\n";
  }
  void Info(const std::string& message) const {
    if (verbosity >= 1) std::cerr << message << "\n";
  }
};

struct CorpusFlags {
  std::string scheme = "bio";
  bool lenient = false;
};

struct LlmFlags {
  LlmConfig config;
  long long timeout_ms = 60000;
  std::string replay = "off";
  std::string language = "Urdu";
  std::string examples_path;
  std::size_t num_examples = 3;
};

struct RunConfig {
  int threads = 0;
  std::uint64_t seed = kDefaultSeed;
  Logger log;

  // stats / convert / map / overlap / evaluate
  std::string input;
  std::string output = "-";
  std::string json_path;
  std::string inventory_path;
  std::string train_path;
  std::string test_path;
  std::string gold_path;
  std::string pred_path;
  CorpusFlags corpus;

  // build-clusters and augment
  std::string embeddings_path;
  std::string titles_path;
  std::string clusters_path;
  ClusterSpec cluster_spec;

  std::string method = "cluster";
  std::string select = "top1";
  AugConfig aug;
  std::string scorer = "gazetteer";
  std::string scorer_command;
  std::string scorer_address;
  long long scorer_timeout_ms = 30000;
  bool scorer_lenient = false;
  std::string gazetteer_path;
  std::string similarity = "static";
  std::string similarity_command;
  std::string similarity_address;
  std::string provenance_path;
  bool union_output = false;

  LlmFlags llm;
};

Scheme ParseScheme(const std::string& text) {
  if (text == "bio") return Scheme::kBio;
  if (text == "io") return Scheme::kIo;
  ThrowInvalid("unknown scheme '" + text + "' (expected bio or io)");
}

Corpus LoadCorpus(const std::string& path, Scheme scheme, bool lenient,
                  const Logger& log) {
  ParseResult parsed =
      ParseCorpus(ReadFileOrDie(path), scheme,
                  lenient ? ParseMode::kLenient : ParseMode::kStrict);
  for (const std::string& w : parsed.warnings) log.Warn(path + ": " + w);
  return std::move(parsed.corpus);
}

Corpus LoadBio(const RunConfig& cfg, const std::string& path) {
  return LoadCorpus(path, Scheme::kBio, cfg.corpus.lenient, cfg.log);
}

void Emit(const std::string& path, const std::string& contents) {
  WriteFileAtomic(path, contents);
}

std::unordered_set<std::string> CorpusVocabulary(const Corpus& corpus) {
  std::unordered_set<std::string> vocab;
  for (const TaggedSentence& s : corpus.sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s.labels[i].IsOutside()) vocab.insert(s.tokens[i]);
    }
  }
  return vocab;
}

EmbeddingTable LoadTable(const std::string& path,
                         const std::unordered_set<std::string>& vocab,
                         const Logger& log) {
  std::ifstream in(path);
  if (!in) ThrowInvalid("cannot open embeddings '" + path + "'");
  EmbeddingLoadResult loaded = LoadEmbeddings(in, &vocab);
  for (const std::string& w : loaded.warnings) log.Warn(path + ": " + w);
  log.Info("loaded " + std::to_string(loaded.table.size()) +
           " vectors of dimension " +
           std::to_string(loaded.table.dimension()));
  return std::move(loaded.table);
}

TitleList LoadTitles(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) ThrowInvalid("cannot open title list '" + path + "'");
  return LoadTitleList(in);
}

void WriteReport(const RunConfig& cfg, const std::string& table,
                 const std::string& json) {
  Emit(cfg.output, table);
  if (!cfg.json_path.empty()) Emit(cfg.json_path, json);
}

int RunStats(const RunConfig& cfg) {
  Corpus corpus = LoadCorpus(cfg.input, ParseScheme(cfg.corpus.scheme),
                             cfg.corpus.lenient, cfg.log);
  if (corpus.scheme == Scheme::kIo) corpus = IoToBio(corpus);
  const CorpusStats stats = ComputeCorpusStats(corpus);
  WriteReport(cfg, FormatStatsTable(stats), StatsToJson(stats));
  return 0;
}

int RunConvert(const RunConfig& cfg) {
  Corpus corpus = LoadCorpus(cfg.input, Scheme::kIo, false, cfg.log);
  Emit(cfg.output, SerializeCorpus(IoToBio(corpus)));
  return 0;
}

int RunMap(const RunConfig& cfg) {
  Corpus corpus = LoadBio(cfg, cfg.input);
  TypeInventories inventories =
      cfg.inventory_path.empty()
          ? BuildTypeInventories(corpus)
          : BuildTypeInventories(LoadBio(cfg, cfg.inventory_path));
  MappingResult mapped = MapMissingAnnotations(corpus, inventories);
  Emit(cfg.output, SerializeCorpus(mapped.corpus));
  std::cerr << FormatMappingTable(mapped.report);
  if (!cfg.json_path.empty()) Emit(cfg.json_path, MappingToJson(mapped.report));
  return 0;
}

int RunOverlap(const RunConfig& cfg) {
  const OverlapReport report =
      AnalyzeOverlap(LoadBio(cfg, cfg.train_path), LoadBio(cfg, cfg.test_path));
  WriteReport(cfg, FormatOverlapTable(report), OverlapToJson(report));
  return 0;
}

int RunEvaluate(const RunConfig& cfg) {
  Corpus gold = LoadBio(cfg, cfg.gold_path);
  Corpus pred = LoadBio(cfg, cfg.pred_path);
  const EvalReport report = EntityPrf(gold, pred);
  const double accuracy = TokenAccuracy(gold, pred);
  char line[64];
  std::snprintf(line, sizeof(line), "token accuracy: %.4f\n", accuracy);
  nlohmann::ordered_json doc = nlohmann::ordered_json::parse(
      EvalReportToJson(report));
  doc["token_accuracy"] = accuracy;
  WriteReport(cfg, FormatEvalTable(report) + line, doc.dump(2) + "\n");
  return 0;
}

ClusterSpec SpecFrom(const RunConfig& cfg) {
  ClusterSpec spec = cfg.cluster_spec;
  spec.seed = cfg.seed;
  return spec;
}

int RunBuildClusters(const RunConfig& cfg) {
  Corpus corpus = LoadBio(cfg, cfg.input);
  EmbeddingTable table =
      LoadTable(cfg.embeddings_path, CorpusVocabulary(corpus), cfg.log);
  TitleList titles = LoadTitles(cfg.titles_path);
  ClusterArtifacts artifacts =
      BuildClusterDictionaries(corpus, table, titles, SpecFrom(cfg));
  for (const std::string& w : artifacts.warnings) cfg.log.Warn(w);
  Emit(cfg.output, ClusterArtifactsToJson(artifacts));
  return 0;
}

ExternalEndpoint Endpoint(const std::string& command, const std::string& address,
                          long long timeout_ms) {
  ExternalEndpoint endpoint;
  endpoint.command = command;
  endpoint.address = address;
  endpoint.timeout = std::chrono::milliseconds(timeout_ms);
  return endpoint;
}

LlmConfig LlmFrom(const RunConfig& cfg) {
  LlmConfig config = cfg.llm.config;
  config.timeout = std::chrono::milliseconds(cfg.llm.timeout_ms);
  if (cfg.llm.replay == "off") {
    config.replay_mode = ReplayMode::kOff;
  } else if (cfg.llm.replay == "record") {
    config.replay_mode = ReplayMode::kRecord;
  } else if (cfg.llm.replay == "replay") {
    config.replay_mode = ReplayMode::kReplay;
  } else {
    ThrowInvalid("--replay must be off, record or replay");
  }
  return config;
}

std::vector<AugExample> LoadAugExamples(const RunConfig& cfg,
                                        const Corpus& corpus) {
  if (cfg.llm.examples_path.empty()) {
    return DefaultAugExamples(corpus, cfg.llm.num_examples, cfg.seed);
  }
  nlohmann::json doc =
      nlohmann::json::parse(ReadFileOrDie(cfg.llm.examples_path), nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) {
    ThrowInvalid("examples file must be a JSON array");
  }
  std::vector<AugExample> examples;
  for (const nlohmann::json& e : doc) {
    if (!e.is_object() || !e.contains("original") || !e.contains("augmented")) {
      ThrowInvalid("each example needs 'original' and 'augmented'");
    }
    examples.push_back({e["original"].get<std::string>(),
                        e["augmented"].get<std::string>()});
  }
  return examples;
}

void LogEvents(const Logger& log, const std::vector<ProvenanceEvent>& events) {
  for (const ProvenanceEvent& e : events) {
    log.Info("sentence " + std::to_string(e.origin) + " (iteration " +
             std::to_string(e.iteration) + "): " + e.message);
  }
}

int RunAugment(const RunConfig& cfg) {
  Corpus corpus = LoadBio(cfg, cfg.input);
  AugmentResult result;
  AugConfig aug = cfg.aug;
  aug.seed = cfg.seed;
  aug.selection = ParseSelectionMode(cfg.select);

  if (cfg.method == "eda-rr") {
    result = EdaRandomReplace(corpus, BuildTypeInventories(corpus), cfg.seed);
  } else if (cfg.method == "generative") {
    GenerativeOptions options;
    options.language = cfg.llm.language;
    options.examples = LoadAugExamples(cfg, corpus);
    options.max_in_flight = cfg.llm.config.max_in_flight;
    auto client = std::make_shared<ChatClient>(LlmFrom(cfg));
    result = GenerativeAugment(corpus, MakeChatBackend(client), options);
  } else if (cfg.method == "cluster") {
    const std::unordered_set<std::string> vocab = CorpusVocabulary(corpus);
    EmbeddingTable table;
    const bool have_table = !cfg.embeddings_path.empty();
    if (have_table) table = LoadTable(cfg.embeddings_path, vocab, cfg.log);
    TitleList titles = LoadTitles(cfg.titles_path);

    ClusterArtifacts artifacts;
    if (!cfg.clusters_path.empty()) {
      artifacts = ClusterArtifactsFromJson(ReadFileOrDie(cfg.clusters_path));
    } else if (have_table) {
      artifacts = BuildClusterDictionaries(corpus, table, titles, SpecFrom(cfg));
    } else {
      ThrowInvalid("--method cluster needs --clusters or --embeddings");
    }
    for (const std::string& w : artifacts.warnings) cfg.log.Warn(w);
    if (!have_table) {
      cfg.log.Warn(
          "no --embeddings: ranking by similarity is disabled, replacements "
          "are drawn at random from the aligned cluster");
    }

    std::unique_ptr<SimilarityProvider> similarity;
    if (cfg.similarity == "static") {
      similarity = std::make_unique<StaticSimilarity>(table, titles);
    } else if (cfg.similarity == "external") {
      similarity = std::make_unique<ExternalSimilarity>(
          Endpoint(cfg.similarity_command, cfg.similarity_address,
                   cfg.scorer_timeout_ms));
    } else {
      ThrowInvalid("--similarity must be static or external");
    }

    std::unique_ptr<Scorer> scorer;
    if (cfg.scorer == "gazetteer") {
      scorer = std::make_unique<GazetteerTagger>(
          cfg.gazetteer_path.empty() ? corpus : LoadBio(cfg, cfg.gazetteer_path));
    } else if (cfg.scorer == "external") {
      ExternalScorerOptions options;
      options.endpoint =
          Endpoint(cfg.scorer_command, cfg.scorer_address, cfg.scorer_timeout_ms);
      options.lenient = cfg.scorer_lenient;
      scorer = std::make_unique<ExternalScorer>(std::move(options));
    } else {
      ThrowInvalid("--scorer must be gazetteer or external");
    }

    CandidateContext context{artifacts, have_table ? &table : nullptr, titles,
                             *similarity};
    result = AugmentCorpus(corpus, context, *scorer, aug);
  } else {
    ThrowInvalid("--method must be cluster, eda-rr or generative");
  }

  LogEvents(cfg.log, result.provenance.events);
  cfg.log.Info("augmented sentences: " +
               std::to_string(result.corpus.sentences.size()));
  if (result.requests > 0 && result.transport_failures == result.requests) {
    throw Error(ErrorKind::kTransport,
                "every request to the chat endpoint failed");
  }

  Corpus out = result.corpus;
  if (cfg.union_output) {
    out.sentences = corpus.sentences;
    out.sentences.insert(out.sentences.end(), result.corpus.sentences.begin(),
                         result.corpus.sentences.end());
  }
  Emit(cfg.output, SerializeCorpus(out));
  if (!cfg.provenance_path.empty()) {
    Emit(cfg.provenance_path, ProvenanceToJsonLines(result.provenance));
  }
  return 0;
}

int RunFewShot(const RunConfig& cfg) {
  Corpus input = LoadBio(cfg, cfg.input);
  if (cfg.train_path.empty()) ThrowInvalid("fewshot-ner needs --examples-from");
  Corpus train = LoadBio(cfg, cfg.train_path);
  FewShotOptions options;
  options.language = cfg.llm.language;
  options.examples = DefaultNerExamples(train, cfg.llm.num_examples);
  options.max_in_flight = cfg.llm.config.max_in_flight;
  if (options.examples.empty()) {
    ThrowInvalid("no sentence with an entity to use as an example");
  }
  auto client = std::make_shared<ChatClient>(LlmFrom(cfg));
  FewShotResult result = FewShotNer(input, MakeChatBackend(client), options);
  LogEvents(cfg.log, result.events);
  if (!input.empty() && result.transport_failures == input.size()) {
    throw Error(ErrorKind::kTransport,
                "every request to the chat endpoint failed");
  }
  Emit(cfg.output, SerializeCorpus(result.predictions));
  return 0;
}

void AddLlmOptions(CLI::App* cmd, RunConfig& cfg) {
  LlmConfig& c = cfg.llm.config;
  cmd->add_option("--endpoint", c.endpoint,
                  "Chat-completion base address, e.g. http://localhost:8000");
  cmd->add_option("--path", c.path, "Request path")->capture_default_str();
  cmd->add_option("--model", c.model, "Model identifier");
  cmd->add_option("--temperature", c.temperature)->capture_default_str();
  cmd->add_option("--max-tokens", c.max_tokens)->capture_default_str();
  cmd->add_option("--credential-env", c.credential_env,
                  "Environment variable holding the API key")
      ->capture_default_str();
  cmd->add_option("--llm-timeout-ms", cfg.llm.timeout_ms)->capture_default_str();
  cmd->add_option("--retries", c.max_retries)->capture_default_str();
  cmd->add_option("--in-flight", c.max_in_flight, "Concurrent requests")
      ->capture_default_str();
  cmd->add_option("--replay", cfg.llm.replay, "off | record | replay")
      ->capture_default_str();
  cmd->add_option("--replay-log", c.replay_log, "Request/response log");
  cmd->add_option("--language", cfg.llm.language)->capture_default_str();
  cmd->add_option("--num-examples", cfg.llm.num_examples)->capture_default_str();
}

int Dispatch(CLI::App& app, const RunConfig& cfg) {
  if (cfg.threads > 0) SetNumThreads(cfg.threads);
  const std::string name = app.get_subcommands().front()->get_name();
  if (name == "stats") return RunStats(cfg);
  if (name == "convert-io-bio") return RunConvert(cfg);
  if (name == "map-annotations") return RunMap(cfg);
  if (name == "overlap") return RunOverlap(cfg);
  if (name == "build-clusters") return RunBuildClusters(cfg);
  if (name == "augment") return RunAugment(cfg);
  if (name == "evaluate") return RunEvaluate(cfg);
  if (name == "fewshot-ner") return RunFewShot(cfg);
  ThrowInvalid("unknown subcommand " + name);
}

}  // namespace

int Run(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Cluster-based entity replacement augmentation for NER corpora"};
  app.require_subcommand(1);
  // Global options may also follow the subcommand.
  app.fallthrough();
  app.set_config("--config", "", "Key-value configuration file");
  app.add_option("--threads", cfg.threads,
                 "Worker threads (default: all cores); output is unaffected");
  app.add_option("--seed", cfg.seed, "Seed for every random choice")
      ->capture_default_str();
  bool verbose = false;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "Log per-sentence events");
  app.add_flag("-q,--quiet", quiet, "Suppress warnings");
  app.add_flag("--lenient", cfg.corpus.lenient,
               "Repair orphan I- labels instead of rejecting the corpus");

  CLI::App* stats = app.add_subcommand("stats", "Per-type mention counts");
  stats->add_option("--input,input", cfg.input)->required();
  stats->add_option("--scheme", cfg.corpus.scheme, "bio | io")
      ->capture_default_str();
  stats->add_option("--output,-o", cfg.output)->capture_default_str();
  stats->add_option("--json", cfg.json_path);

  CLI::App* convert =
      app.add_subcommand("convert-io-bio", "Convert an IO corpus to BIO");
  convert->add_option("--input,input", cfg.input)->required();
  convert->add_option("--output,-o", cfg.output)->capture_default_str();

  CLI::App* map = app.add_subcommand(
      "map-annotations", "Label unannotated occurrences of known entities");
  map->add_option("--input,input", cfg.input)->required();
  map->add_option("--inventory", cfg.inventory_path,
                  "Corpus supplying the inventories (default: the input)");
  map->add_option("--output,-o", cfg.output)->capture_default_str();
  map->add_option("--json", cfg.json_path, "Mapping report as JSON");

  CLI::App* overlap =
      app.add_subcommand("overlap", "Test entities already seen in training");
  overlap->add_option("--train", cfg.train_path)->required();
  overlap->add_option("--test", cfg.test_path)->required();
  overlap->add_option("--output,-o", cfg.output)->capture_default_str();
  overlap->add_option("--json", cfg.json_path);

  CLI::App* build =
      app.add_subcommand("build-clusters", "Cluster entity vectors per type");
  build->add_option("--input,input", cfg.input)->required();
  build->add_option("--embeddings", cfg.embeddings_path)->required();
  build->add_option("--titles", cfg.titles_path, "Person-name title list");
  build->add_option("--k-per", cfg.cluster_spec.k[0])->capture_default_str();
  build->add_option("--k-loc", cfg.cluster_spec.k[1])->capture_default_str();
  build->add_option("--k-org", cfg.cluster_spec.k[2])->capture_default_str();
  build->add_option("--repetitions", cfg.cluster_spec.repetitions)
      ->capture_default_str();
  build->add_option("--max-iters", cfg.cluster_spec.max_iterations)
      ->capture_default_str();
  build->add_option("--output,-o", cfg.output)->required();

  CLI::App* augment = app.add_subcommand("augment", "Augment a training corpus");
  augment->add_option("--input,input", cfg.input)->required();
  augment->add_option("--method", cfg.method, "cluster | eda-rr | generative")
      ->capture_default_str();
  augment->add_option("--clusters", cfg.clusters_path,
                      "Cluster artifact from build-clusters");
  augment->add_option("--embeddings", cfg.embeddings_path);
  augment->add_option("--titles", cfg.titles_path);
  augment->add_option("--k-per", cfg.cluster_spec.k[0])->capture_default_str();
  augment->add_option("--k-loc", cfg.cluster_spec.k[1])->capture_default_str();
  augment->add_option("--k-org", cfg.cluster_spec.k[2])->capture_default_str();
  augment->add_option("--repetitions", cfg.cluster_spec.repetitions)
      ->capture_default_str();
  augment->add_option("--select", cfg.select, "top1 | top2 | topK=N | all-correct")
      ->capture_default_str();
  augment->add_option("--iterations", cfg.aug.iterations)->capture_default_str();
  augment->add_option("--candidates", cfg.aug.candidates_per_sentence)
      ->capture_default_str();
  augment->add_option("--subset", cfg.aug.subset_size)->capture_default_str();
  augment->add_option("--scorer", cfg.scorer, "gazetteer | external")
      ->capture_default_str();
  augment->add_option("--gazetteer-corpus", cfg.gazetteer_path,
                      "Corpus compiled into the gazetteer (default: the input)");
  augment->add_option("--scorer-command", cfg.scorer_command);
  augment->add_option("--scorer-address", cfg.scorer_address, "host:port");
  augment->add_option("--scorer-timeout-ms", cfg.scorer_timeout_ms)
      ->capture_default_str();
  augment->add_flag("--scorer-lenient", cfg.scorer_lenient);
  augment->add_flag("--degrade-scorer-failures", cfg.aug.degrade_scorer_failures,
                    "Score failed candidates 0 instead of aborting");
  augment->add_option("--similarity", cfg.similarity, "static | external")
      ->capture_default_str();
  augment->add_option("--similarity-command", cfg.similarity_command);
  augment->add_option("--similarity-address", cfg.similarity_address);
  augment->add_option("--examples", cfg.llm.examples_path,
                      "JSON array of {original, augmented} prompt examples");
  augment->add_option("--output,-o", cfg.output)->capture_default_str();
  augment->add_option("--provenance", cfg.provenance_path);
  augment->add_flag("--union", cfg.union_output,
                    "Write the original sentences before the augmented ones");
  AddLlmOptions(augment, cfg);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Entity-level precision, recall and F1");
  evaluate->add_option("--gold", cfg.gold_path)->required();
  evaluate->add_option("--pred", cfg.pred_path)->required();
  evaluate->add_option("--output,-o", cfg.output)->capture_default_str();
  evaluate->add_option("--json", cfg.json_path);

  CLI::App* fewshot =
      app.add_subcommand("fewshot-ner", "Tag a corpus with a prompted LLM");
  fewshot->add_option("--input,input", cfg.input)->required();
  fewshot->add_option("--examples-from", cfg.train_path)->required();
  fewshot->add_option("--output,-o", cfg.output)->capture_default_str();
  AddLlmOptions(fewshot, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  cfg.log.verbosity = quiet ? -1 : (verbose ? 1 : 0);

  try {
    return Dispatch(app, cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.IsTransport() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int Run(const std::vector<std::string>& args) {
  std::vector<std::string> storage = args;
  std::vector<char*> argv;
  std::string program = "clusteraug";
  argv.push_back(program.data());
  for (std::string& a : storage) argv.push_back(a.data());
  return Run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace clusteraug::cli
