// Command line front end for the entsum shared library: ingest N-Triples,
// train the topic model, write top-k summaries and score them against gold
// standards. Subcommands: train, summarize, eval, pipeline.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "entsum/entsum.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsage = 2;

struct Options {
  // inputs
  std::string input_path;
  std::string categories_path;
  std::string enrichment;  // empty: "none", or the model's recorded mode
  // training
  std::string beta_mode = "fixed_001";
  double alpha = 0.0;  // 0 = (E/20)/R
  std::uint32_t iterations = 1000;
  std::uint32_t burn_in = 200;
  std::uint64_t seed = 42;
  bool tfidf = false;
  // summarize
  std::string model_path;
  std::vector<std::string> entities;
  bool all_entities = false;
  std::uint32_t k = 10;
  std::string format = "jsonl";
  std::string summary_output;
  // eval
  std::string summaries_path;
  std::vector<std::string> gold_specs;  // label=path or bare path
  std::vector<std::uint32_t> k_list = {5, 10};
  bool union_annotators = false;
  // outputs
  std::string output_dir;
};

int report_failure(int status) {
  std::fprintf(stderr, "entsum: %s: %s\n", entsum_status_name(status), entsum_last_error());
  return status == ENTSUM_ERR_INVALID_ARGUMENT ? kExitUsage : kExitDataError;
}

// Cross-flag checks shared by the subcommands; runs after config and flags
// are merged.
void validate(const Options& opt) {
  if (opt.iterations <= opt.burn_in) {
    throw CLI::ValidationError("--iterations must be greater than --burn-in");
  }
  if (opt.k_list.empty() || !std::is_sorted(opt.k_list.begin(), opt.k_list.end())) {
    throw CLI::ValidationError("--k-list must be non-empty and ascending");
  }
  if (opt.k == 0) throw CLI::ValidationError("--k must be positive");
}

// Wraps a C API call; returns 0 or the process exit code.
#define CHECK_API(call)                                \
  do {                                                 \
    const int status_ = (call);                        \
    if (status_ != ENTSUM_OK) return report_failure(status_); \
  } while (0)

struct CorpusHandle {
  entsum_corpus* ptr = nullptr;
  ~CorpusHandle() { entsum_corpus_free(ptr); }
};
struct ModelHandle {
  entsum_model* ptr = nullptr;
  ~ModelHandle() { entsum_model_free(ptr); }
};
struct ReportHandle {
  entsum_report* ptr = nullptr;
  ~ReportHandle() { entsum_report_free(ptr); }
};

int load_corpus(const Options& opt, const std::string& enrichment, CorpusHandle& corpus) {
  CHECK_API(entsum_corpus_load(opt.input_path.c_str(),
                               opt.categories_path.empty() ? nullptr : opt.categories_path.c_str(),
                               enrichment.c_str(), &corpus.ptr));
  return kExitOk;
}

int ensure_output_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::fprintf(stderr, "entsum: cannot create output directory %s: %s\n", dir.c_str(),
                 ec.message().c_str());
    return kExitDataError;
  }
  return kExitOk;
}

int run_train(const Options& opt) {
  if (int rc = ensure_output_dir(opt.output_dir)) return rc;

  CorpusHandle corpus;
  const std::string enrichment = opt.enrichment.empty() ? "none" : opt.enrichment;
  if (int rc = load_corpus(opt, enrichment, corpus)) return rc;

  std::uint64_t entities = 0, predicates = 0, objects = 0, tokens = 0;
  CHECK_API(entsum_corpus_counts(corpus.ptr, &entities, &predicates, &objects, &tokens));
  std::printf("E=%llu R=%llu V=%llu N=%llu\n", (unsigned long long)entities,
              (unsigned long long)predicates, (unsigned long long)objects,
              (unsigned long long)tokens);

  const auto stats_path = std::filesystem::path(opt.output_dir) / "corpus_stats.tsv";
  CHECK_API(entsum_corpus_write_stats(corpus.ptr, stats_path.string().c_str()));

  entsum_train_opts train_opts;
  entsum_train_opts_init(&train_opts);
  train_opts.alpha = opt.alpha;
  train_opts.beta_mode =
      opt.beta_mode == "fixed_001" ? ENTSUM_BETA_FIXED_001 : ENTSUM_BETA_FIFTY_OVER_R;
  train_opts.iterations = opt.iterations;
  train_opts.burn_in = opt.burn_in;
  train_opts.seed = opt.seed;
  train_opts.use_tfidf = opt.tfidf ? 1 : 0;
  const auto log_path = std::filesystem::path(opt.output_dir) / "train_log.tsv";
  const std::string log_path_str = log_path.string();
  train_opts.log_path = log_path_str.c_str();

  ModelHandle model;
  CHECK_API(entsum_train(corpus.ptr, &train_opts, &model.ptr));

  double alpha = 0.0, beta = 0.0;
  CHECK_API(entsum_model_hyperparams(model.ptr, &alpha, &beta));
  std::printf("alpha=%g beta=%g iterations=%u burn_in=%u seed=%llu tfidf=%d\n", alpha, beta,
              opt.iterations, opt.burn_in, (unsigned long long)opt.seed, opt.tfidf ? 1 : 0);

  const auto model_path = std::filesystem::path(opt.output_dir) / "model.bin";
  CHECK_API(entsum_model_save(model.ptr, model_path.string().c_str()));
  std::printf("model=%s\n", model_path.string().c_str());
  return kExitOk;
}

int run_summarize(const Options& opt) {
  ModelHandle model;
  CHECK_API(entsum_model_load(opt.model_path.c_str(), &model.ptr));

  std::string enrichment = opt.enrichment;
  if (enrichment.empty()) {
    const char* recorded = nullptr;
    CHECK_API(entsum_model_enrichment(model.ptr, &recorded));
    enrichment = recorded;
  }

  CorpusHandle corpus;
  if (int rc = load_corpus(opt, enrichment, corpus)) return rc;

  std::vector<const char*> names;
  for (const std::string& e : opt.entities) names.push_back(e.c_str());
  CHECK_API(entsum_write_summaries(model.ptr, corpus.ptr,
                                   opt.all_entities ? nullptr : names.data(), names.size(), opt.k,
                                   opt.format.c_str(), opt.summary_output.c_str()));
  std::printf("summaries=%s\n", opt.summary_output.c_str());
  return kExitOk;
}

// label=path, else the file stem labels the dataset.
void split_gold_spec(const std::string& spec, std::string& label, std::string& path) {
  const auto eq = spec.find('=');
  if (eq != std::string::npos && eq > 0) {
    label = spec.substr(0, eq);
    path = spec.substr(eq + 1);
  } else {
    path = spec;
    label = std::filesystem::path(spec).stem().string();
  }
}

int print_aggregates(const entsum_report* report, const std::vector<std::uint32_t>& ks) {
  std::uint64_t n_datasets = 0;
  CHECK_API(entsum_report_datasets(report, &n_datasets));
  std::printf("metric");
  for (std::uint64_t i = 0; i < n_datasets; ++i) {
    const char* label = nullptr;
    CHECK_API(entsum_report_dataset_label(report, i, &label));
    for (const std::uint32_t k : ks) std::printf("\t%s@k=%u", label, k);
  }
  std::printf("\n");
  for (const char* metric : {"F", "MAP"}) {
    std::printf("%s", metric);
    for (std::uint64_t i = 0; i < n_datasets; ++i) {
      const char* label = nullptr;
      CHECK_API(entsum_report_dataset_label(report, i, &label));
      for (const std::uint32_t k : ks) {
        double f = 0.0, map = 0.0;
        CHECK_API(entsum_report_aggregate(report, label, k, &f, &map));
        std::printf("\t%.4f", metric[0] == 'F' ? f : map);
      }
    }
    std::printf("\n");
  }
  return kExitOk;
}

int evaluate_and_report(const std::string& summaries_path, const Options& opt) {
  std::vector<std::string> labels, paths;
  for (const std::string& spec : opt.gold_specs) {
    std::string label, path;
    split_gold_spec(spec, label, path);
    labels.push_back(label);
    paths.push_back(path);
  }
  std::vector<const char*> label_ptrs, path_ptrs;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    label_ptrs.push_back(labels[i].c_str());
    path_ptrs.push_back(paths[i].c_str());
  }

  ReportHandle report;
  CHECK_API(entsum_evaluate_files(summaries_path.c_str(), label_ptrs.data(), path_ptrs.data(),
                                  label_ptrs.size(), opt.k_list.data(), opt.k_list.size(),
                                  opt.union_annotators ? 1 : 0, &report.ptr));

  const auto tsv_path = std::filesystem::path(opt.output_dir) / "report.tsv";
  const auto json_path = std::filesystem::path(opt.output_dir) / "report.json";
  CHECK_API(entsum_report_write(report.ptr, tsv_path.string().c_str(),
                                json_path.string().c_str()));
  if (int rc = print_aggregates(report.ptr, opt.k_list)) return rc;
  std::printf("report=%s\n", tsv_path.string().c_str());
  return kExitOk;
}

int run_eval(const Options& opt) {
  if (int rc = ensure_output_dir(opt.output_dir)) return rc;
  return evaluate_and_report(opt.summaries_path, opt);
}

int run_pipeline(const Options& opt) {
  if (int rc = run_train(opt)) return rc;

  Options stage = opt;
  stage.model_path = (std::filesystem::path(opt.output_dir) / "model.bin").string();
  stage.all_entities = true;
  stage.k = *std::max_element(opt.k_list.begin(), opt.k_list.end());
  stage.summary_output =
      (std::filesystem::path(opt.output_dir) / ("summaries." + opt.format)).string();
  if (int rc = run_summarize(stage)) return rc;

  return evaluate_and_report(stage.summary_output, opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entsum: entity summarization over RDF via topic modeling"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value file with [train]/[summarize]/[eval]/[pipeline] sections; flags win");
  app.set_version_flag("--version", entsum_version());

  Options opt;
  int rc = kExitOk;

  const auto add_corpus_flags = [&](CLI::App* cmd) {
    cmd->add_option("--input", opt.input_path, "N-Triples input file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--categories", opt.categories_path, "object-to-category TSV")
        ->check(CLI::ExistingFile);
    cmd->add_option("--enrichment", opt.enrichment,
                    "document enrichment: none|categories|expand|both")
        ->check(CLI::IsMember({"none", "categories", "expand", "both"}));
  };
  const auto add_train_flags = [&](CLI::App* cmd) {
    cmd->add_option("--beta-mode", opt.beta_mode, "beta prior: fixed_001 (0.01) or fifty_over_R")
        ->check(CLI::IsMember({"fixed_001", "fifty_over_R"}));
    cmd->add_option("--alpha", opt.alpha, "alpha prior override (default (E/20)/R)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--iterations", opt.iterations, "Gibbs sweeps (default 1000)");
    cmd->add_option("--burn-in", opt.burn_in, "burn-in sweeps (default 200)");
    cmd->add_option("--seed", opt.seed, "RNG seed (default 42)");
    cmd->add_flag("--tfidf", opt.tfidf, "weight token counts by TF-IDF");
  };
  const auto add_eval_flags = [&](CLI::App* cmd) {
    cmd->add_option("--gold", opt.gold_specs, "gold TSV, label=path or path")->required();
    cmd->add_option("--k-list", opt.k_list, "summary sizes to evaluate (default 5 10)");
    cmd->add_flag("--union", opt.union_annotators, "pool annotator gold sets");
  };

  auto* train = app.add_subcommand("train", "build the corpus and train the model");
  add_corpus_flags(train);
  add_train_flags(train);
  train->add_option("--output-dir", opt.output_dir, "directory for model and logs")->required();
  train->callback([&] {
    validate(opt);
    rc = run_train(opt);
  });

  auto* summarize = app.add_subcommand("summarize", "write top-k summaries from a trained model");
  summarize->add_option("--model", opt.model_path, "model dump from train")
      ->required()
      ->check(CLI::ExistingFile);
  add_corpus_flags(summarize);
  auto* ent = summarize->add_option("--entities", opt.entities, "entity IRIs to summarize");
  auto* all = summarize->add_flag("--all", opt.all_entities, "summarize every entity");
  ent->excludes(all);
  summarize->add_option("--k", opt.k, "summary size (default 10)")->check(CLI::PositiveNumber);
  summarize->add_option("--format", opt.format, "jsonl or tsv (default jsonl)")
      ->check(CLI::IsMember({"jsonl", "tsv"}));
  summarize->add_option("--output", opt.summary_output, "summaries file to write")->required();
  summarize->callback([&] {
    validate(opt);
    if (!opt.all_entities && opt.entities.empty()) {
      std::fprintf(stderr, "entsum: summarize needs --entities or --all\n");
      rc = kExitUsage;
      return;
    }
    rc = run_summarize(opt);
  });

  auto* eval = app.add_subcommand("eval", "score summaries against gold standards");
  eval->add_option("--summaries", opt.summaries_path, "summaries file from summarize")
      ->required()
      ->check(CLI::ExistingFile);
  add_eval_flags(eval);
  eval->add_option("--output-dir", opt.output_dir, "directory for report files")->required();
  eval->callback([&] {
    validate(opt);
    rc = run_eval(opt);
  });

  auto* pipeline = app.add_subcommand("pipeline", "train, summarize --all and eval in one run");
  add_corpus_flags(pipeline);
  add_train_flags(pipeline);
  add_eval_flags(pipeline);
  pipeline->add_option("--format", opt.format, "summary format: jsonl or tsv (default jsonl)")
      ->check(CLI::IsMember({"jsonl", "tsv"}));
  pipeline->add_option("--output-dir", opt.output_dir, "directory for all artifacts")->required();
  pipeline->callback([&] {
    validate(opt);
    rc = run_pipeline(opt);
  });

  for (CLI::App* cmd : {train, summarize, eval, pipeline}) cmd->configurable();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  return rc;
}
