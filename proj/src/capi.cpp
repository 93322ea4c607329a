#include "entsum/entsum.h"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "lda.hpp"
#include "mp_rank.hpp"
#include "rdf.hpp"

struct entsum_corpus {
  entsum::Corpus corpus;
  entsum::Enrichment enrichment = entsum::Enrichment::none;
};

struct entsum_model {
  entsum::LdaModel model;
};

struct entsum_summary {
  std::string entity_iri;
  std::vector<entsum::Triple> triples;
  std::vector<std::string> object_syntax;
  std::vector<entsum::Phase> phases;
};

struct entsum_report {
  entsum::EvalReport report;
};

namespace {

thread_local std::string g_last_error;

int status_of(entsum::errc code) {
  using entsum::errc;
  switch (code) {
    case errc::malformed_line: return ENTSUM_ERR_MALFORMED_LINE;
    case errc::invalid_utf8: return ENTSUM_ERR_INVALID_UTF8;
    case errc::empty_token: return ENTSUM_ERR_EMPTY_TOKEN;
    case errc::empty_corpus: return ENTSUM_ERR_EMPTY_CORPUS;
    case errc::degenerate_corpus: return ENTSUM_ERR_DEGENERATE_CORPUS;
    case errc::empty_document: return ENTSUM_ERR_EMPTY_DOCUMENT;
    case errc::corpus_mismatch: return ENTSUM_ERR_CORPUS_MISMATCH;
    case errc::unknown_entity: return ENTSUM_ERR_UNKNOWN_ENTITY;
    case errc::missing_summary: return ENTSUM_ERR_MISSING_SUMMARY;
    case errc::io_error: return ENTSUM_ERR_IO;
    case errc::invalid_argument: return ENTSUM_ERR_INVALID_ARGUMENT;
  }
  return ENTSUM_ERR_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const entsum::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ENTSUM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return ENTSUM_ERR_INTERNAL;
  }
}

int fail_argument(const char* what) {
  g_last_error = what;
  return ENTSUM_ERR_INVALID_ARGUMENT;
}

entsum_corpus* make_corpus(std::vector<entsum::Triple> triples, const entsum::CategoryMap& cats,
                           entsum::Enrichment mode) {
  std::vector<std::string> warnings;
  std::vector<entsum::EntityDocument> docs = entsum::build_documents(triples, &warnings);
  for (const std::string& w : warnings) {
    std::fprintf(stderr, "entsum: warning: %s\n", w.c_str());
  }
  for (auto& doc : docs) doc = entsum::apply_enrichment(doc, cats, mode);
  auto handle = std::make_unique<entsum_corpus>();
  handle->corpus = entsum::Corpus::freeze(std::move(docs));
  handle->enrichment = mode;
  return handle.release();
}

entsum::Enrichment parse_enrichment(const char* name) {
  const auto mode = entsum::enrichment_from_name(name ? name : "none");
  if (!mode) {
    throw entsum::Error(entsum::errc::invalid_argument,
                        std::string("unknown enrichment mode '") + name + "'");
  }
  return *mode;
}

}  // namespace

extern "C" {

const char* entsum_version(void) { return "1.0.0"; }

const char* entsum_last_error(void) { return g_last_error.c_str(); }

const char* entsum_status_name(int status) {
  switch (status) {
    case ENTSUM_OK: return "ok";
    case ENTSUM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ENTSUM_ERR_IO: return "io error";
    case ENTSUM_ERR_MALFORMED_LINE: return "malformed line";
    case ENTSUM_ERR_INVALID_UTF8: return "invalid utf-8";
    case ENTSUM_ERR_EMPTY_TOKEN: return "empty token";
    case ENTSUM_ERR_EMPTY_CORPUS: return "empty corpus";
    case ENTSUM_ERR_DEGENERATE_CORPUS: return "degenerate corpus";
    case ENTSUM_ERR_EMPTY_DOCUMENT: return "empty document";
    case ENTSUM_ERR_CORPUS_MISMATCH: return "corpus mismatch";
    case ENTSUM_ERR_UNKNOWN_ENTITY: return "unknown entity";
    case ENTSUM_ERR_MISSING_SUMMARY: return "missing summary";
    default: return "internal error";
  }
}

int entsum_corpus_load(const char* ntriples_path, const char* categories_path,
                       const char* enrichment, entsum_corpus** out) {
  if (!ntriples_path || !out) return fail_argument("null path or out handle");
  return guarded([&] {
    auto triples = entsum::parse_ntriples_file(ntriples_path);
    entsum::CategoryMap cats;
    if (categories_path) cats = entsum::load_category_map_file(categories_path);
    *out = make_corpus(std::move(triples), cats, parse_enrichment(enrichment));
    return ENTSUM_OK;
  });
}

int entsum_corpus_load_string(const char* ntriples_text, const char* categories_tsv,
                              const char* enrichment, entsum_corpus** out) {
  if (!ntriples_text || !out) return fail_argument("null text or out handle");
  return guarded([&] {
    auto triples = entsum::parse_ntriples(std::string_view(ntriples_text));
    entsum::CategoryMap cats;
    if (categories_tsv) {
      std::istringstream in(categories_tsv);
      cats = entsum::load_category_map(in);
    }
    *out = make_corpus(std::move(triples), cats, parse_enrichment(enrichment));
    return ENTSUM_OK;
  });
}

int entsum_corpus_counts(const entsum_corpus* corpus, uint64_t* entities, uint64_t* predicates,
                         uint64_t* objects, uint64_t* tokens) {
  if (!corpus) return fail_argument("null corpus");
  if (entities) *entities = corpus->corpus.entity_count();
  if (predicates) *predicates = corpus->corpus.topic_count();
  if (objects) *objects = corpus->corpus.vocab_size();
  if (tokens) *tokens = corpus->corpus.total_tokens();
  return ENTSUM_OK;
}

int entsum_corpus_entity_iri(const entsum_corpus* corpus, uint64_t index, const char** iri) {
  if (!corpus || !iri) return fail_argument("null corpus or out pointer");
  if (index >= corpus->corpus.entity_count()) return fail_argument("entity index out of range");
  *iri = corpus->corpus.documents()[index].entity_iri.c_str();
  return ENTSUM_OK;
}

int entsum_corpus_write_stats(const entsum_corpus* corpus, const char* tsv_path) {
  if (!corpus || !tsv_path) return fail_argument("null corpus or path");
  return guarded([&] {
    std::ofstream outfile(tsv_path, std::ios::binary | std::ios::trunc);
    if (!outfile) throw entsum::Error(entsum::errc::io_error, std::string("cannot open ") + tsv_path);
    entsum::write_corpus_stats(corpus->corpus, outfile);
    return ENTSUM_OK;
  });
}

void entsum_corpus_free(entsum_corpus* corpus) { delete corpus; }

void entsum_train_opts_init(entsum_train_opts* opts) {
  if (!opts) return;
  opts->alpha = 0.0;
  opts->beta_mode = ENTSUM_BETA_FIXED_001;
  opts->iterations = 1000;
  opts->burn_in = 200;
  opts->seed = 42;
  opts->use_tfidf = 0;
  opts->log_path = nullptr;
  opts->log_interval = 100;
}

int entsum_train(const entsum_corpus* corpus, const entsum_train_opts* opts, entsum_model** out) {
  if (!corpus || !opts || !out) return fail_argument("null corpus, options or out handle");
  return guarded([&] {
    if (opts->beta_mode != ENTSUM_BETA_FIXED_001 && opts->beta_mode != ENTSUM_BETA_FIFTY_OVER_R) {
      throw entsum::Error(entsum::errc::invalid_argument, "unknown beta mode");
    }
    entsum::HyperParams params = entsum::default_hyperparams(
        corpus->corpus, opts->beta_mode == ENTSUM_BETA_FIXED_001
                            ? entsum::BetaMode::fixed_001
                            : entsum::BetaMode::fifty_over_R);
    if (opts->alpha > 0.0) params.alpha = opts->alpha;
    params.iterations = opts->iterations;
    params.burn_in = opts->burn_in;
    params.seed = opts->seed;

    entsum::TrainOptions train;
    std::optional<entsum::TfidfWeights> weights;
    if (opts->use_tfidf) {
      weights.emplace(corpus->corpus);
      train.weights = &*weights;
    }
    std::ofstream log;
    if (opts->log_path) {
      log.open(opts->log_path, std::ios::binary | std::ios::trunc);
      if (!log) {
        throw entsum::Error(entsum::errc::io_error,
                            std::string("cannot open ") + opts->log_path);
      }
      log << "sweep\tlog_likelihood\n";
      train.ll_interval = opts->log_interval == 0 ? 100 : opts->log_interval;
      train.on_ll = [&log](std::uint32_t sweep, double ll) {
        log << sweep << '\t' << std::setprecision(17) << ll << '\n';
      };
    }

    auto handle = std::make_unique<entsum_model>();
    handle->model = entsum::gibbs_train(corpus->corpus, params, train);
    handle->model.enrichment = corpus->enrichment;
    *out = handle.release();
    return ENTSUM_OK;
  });
}

int entsum_model_save(const entsum_model* model, const char* path) {
  if (!model || !path) return fail_argument("null model or path");
  return guarded([&] {
    entsum::save_model_file(model->model, path);
    return ENTSUM_OK;
  });
}

int entsum_model_load(const char* path, entsum_model** out) {
  if (!path || !out) return fail_argument("null path or out handle");
  return guarded([&] {
    auto handle = std::make_unique<entsum_model>();
    handle->model = entsum::load_model_file(path);
    *out = handle.release();
    return ENTSUM_OK;
  });
}

int entsum_model_counts(const entsum_model* model, uint64_t* docs, uint64_t* topics,
                        uint64_t* vocab) {
  if (!model) return fail_argument("null model");
  if (docs) *docs = model->model.num_docs();
  if (topics) *topics = model->model.num_topics();
  if (vocab) *vocab = model->model.vocab_size();
  return ENTSUM_OK;
}

int entsum_model_hyperparams(const entsum_model* model, double* alpha, double* beta) {
  if (!model) return fail_argument("null model");
  if (alpha) *alpha = model->model.params.alpha;
  if (beta) *beta = model->model.params.beta;
  return ENTSUM_OK;
}

int entsum_model_enrichment(const entsum_model* model, const char** mode) {
  if (!model || !mode) return fail_argument("null model or out pointer");
  *mode = entsum::enrichment_name(model->model.enrichment).data();
  return ENTSUM_OK;
}

int entsum_model_log_likelihood(const entsum_model* model, const entsum_corpus* corpus,
                                double* ll) {
  if (!model || !corpus || !ll) return fail_argument("null model, corpus or out pointer");
  return guarded([&] {
    *ll = entsum::log_likelihood(model->model, corpus->corpus);
    return ENTSUM_OK;
  });
}

void entsum_model_free(entsum_model* model) { delete model; }

int entsum_summarize(const entsum_model* model, const entsum_corpus* corpus,
                     const char* entity_iri, uint32_t k, entsum_summary** out) {
  if (!model || !corpus || !entity_iri || !out) {
    return fail_argument("null model, corpus, entity or out handle");
  }
  if (k == 0) return fail_argument("k must be positive");
  return guarded([&] {
    entsum::RankedSummary ranked =
        entsum::summarize_ranked(model->model, corpus->corpus, entity_iri);
    const std::size_t take = std::min<std::size_t>(k, ranked.ordered_triples.size());
    auto handle = std::make_unique<entsum_summary>();
    handle->entity_iri = std::move(ranked.entity_iri);
    handle->triples.assign(ranked.ordered_triples.begin(),
                           ranked.ordered_triples.begin() + static_cast<std::ptrdiff_t>(take));
    handle->phases.assign(ranked.phase_tags.begin(),
                          ranked.phase_tags.begin() + static_cast<std::ptrdiff_t>(take));
    handle->object_syntax.reserve(take);
    for (const auto& t : handle->triples) {
      handle->object_syntax.push_back(entsum::term_to_ntriples(t.object));
    }
    *out = handle.release();
    return ENTSUM_OK;
  });
}

int entsum_summary_size(const entsum_summary* summary, uint32_t* n) {
  if (!summary || !n) return fail_argument("null summary or out pointer");
  *n = static_cast<uint32_t>(summary->triples.size());
  return ENTSUM_OK;
}

int entsum_summary_entity(const entsum_summary* summary, const char** iri) {
  if (!summary || !iri) return fail_argument("null summary or out pointer");
  *iri = summary->entity_iri.c_str();
  return ENTSUM_OK;
}

int entsum_summary_triple(const entsum_summary* summary, uint32_t index, const char** subject,
                          const char** predicate, const char** object, const char** phase) {
  if (!summary) return fail_argument("null summary");
  if (index >= summary->triples.size()) return fail_argument("triple index out of range");
  const entsum::Triple& t = summary->triples[index];
  if (subject) *subject = t.subject.c_str();
  if (predicate) *predicate = t.predicate.c_str();
  if (object) *object = summary->object_syntax[index].c_str();
  if (phase) *phase = entsum::phase_name(summary->phases[index]).data();
  return ENTSUM_OK;
}

void entsum_summary_free(entsum_summary* summary) { delete summary; }

int entsum_write_summaries(const entsum_model* model, const entsum_corpus* corpus,
                           const char* const* entities, size_t n_entities, uint32_t k,
                           const char* format, const char* path) {
  if (!model || !corpus || !format || !path) {
    return fail_argument("null model, corpus, format or path");
  }
  if (k == 0) return fail_argument("k must be positive");
  return guarded([&] {
    const std::string fmt = format;
    if (fmt != "jsonl" && fmt != "tsv") {
      throw entsum::Error(entsum::errc::invalid_argument,
                          "format must be 'jsonl' or 'tsv', got '" + fmt + "'");
    }

    std::vector<std::string> targets;
    if (entities == nullptr) {
      for (const auto& doc : corpus->corpus.documents()) targets.push_back(doc.entity_iri);
    } else {
      std::string unknown;
      for (size_t i = 0; i < n_entities; ++i) {
        if (!entities[i]) throw entsum::Error(entsum::errc::invalid_argument, "null entity name");
        if (!corpus->corpus.find_entity(entities[i])) {
          unknown += unknown.empty() ? "" : ", ";
          unknown += entities[i];
        }
        targets.emplace_back(entities[i]);
      }
      if (!unknown.empty()) {
        throw entsum::Error(entsum::errc::unknown_entity, "unknown entities: " + unknown);
      }
      if (targets.empty()) {
        throw entsum::Error(entsum::errc::invalid_argument, "no entities requested");
      }
    }

    // Summarize everything first so a late failure cannot truncate the file.
    std::vector<entsum::RankedSummary> summaries;
    summaries.reserve(targets.size());
    for (const std::string& iri : targets) {
      summaries.push_back(entsum::summarize_ranked(model->model, corpus->corpus, iri));
    }

    std::ofstream outfile(path, std::ios::binary | std::ios::trunc);
    if (!outfile) throw entsum::Error(entsum::errc::io_error, std::string("cannot open ") + path);
    for (const entsum::RankedSummary& s : summaries) {
      if (fmt == "jsonl") {
        entsum::write_summary_jsonl(s, k, outfile);
      } else {
        entsum::write_summary_tsv(s, k, outfile);
      }
    }
    if (!outfile) throw entsum::Error(entsum::errc::io_error, "failed writing summaries");
    return ENTSUM_OK;
  });
}

int entsum_evaluate_files(const char* summaries_path, const char* const* gold_labels,
                          const char* const* gold_paths, size_t n_gold, const uint32_t* ks,
                          size_t n_ks, int union_annotators, entsum_report** out) {
  if (!summaries_path || !gold_labels || !gold_paths || !out) {
    return fail_argument("null summaries, gold arrays or out handle");
  }
  if (n_gold == 0) return fail_argument("need at least one gold dataset");
  if (!ks || n_ks == 0) return fail_argument("need at least one k");
  return guarded([&] {
    const auto summaries = entsum::load_summaries_file(summaries_path);
    std::vector<entsum::GoldDataset> datasets;
    datasets.reserve(n_gold);
    for (size_t i = 0; i < n_gold; ++i) {
      if (!gold_labels[i] || !gold_paths[i]) {
        throw entsum::Error(entsum::errc::invalid_argument, "null gold label or path");
      }
      datasets.push_back({gold_labels[i], entsum::load_gold_file(gold_paths[i])});
    }
    entsum::EvalOptions options;
    options.ks.assign(ks, ks + n_ks);
    options.union_annotators = union_annotators != 0;
    auto handle = std::make_unique<entsum_report>();
    handle->report = entsum::evaluate(summaries, datasets, options);
    *out = handle.release();
    return ENTSUM_OK;
  });
}

int entsum_report_write(const entsum_report* report, const char* tsv_path, const char* json_path) {
  if (!report) return fail_argument("null report");
  return guarded([&] {
    if (tsv_path) {
      std::ofstream outfile(tsv_path, std::ios::binary | std::ios::trunc);
      if (!outfile) {
        throw entsum::Error(entsum::errc::io_error, std::string("cannot open ") + tsv_path);
      }
      entsum::write_report_tsv(report->report, outfile);
    }
    if (json_path) {
      std::ofstream outfile(json_path, std::ios::binary | std::ios::trunc);
      if (!outfile) {
        throw entsum::Error(entsum::errc::io_error, std::string("cannot open ") + json_path);
      }
      entsum::write_report_json(report->report, outfile);
    }
    return ENTSUM_OK;
  });
}

int entsum_report_datasets(const entsum_report* report, uint64_t* n) {
  if (!report || !n) return fail_argument("null report or out pointer");
  *n = report->report.dataset_labels.size();
  return ENTSUM_OK;
}

int entsum_report_dataset_label(const entsum_report* report, uint64_t index, const char** label) {
  if (!report || !label) return fail_argument("null report or out pointer");
  if (index >= report->report.dataset_labels.size()) {
    return fail_argument("dataset index out of range");
  }
  *label = report->report.dataset_labels[index].c_str();
  return ENTSUM_OK;
}

int entsum_report_aggregate(const entsum_report* report, const char* dataset, uint32_t k,
                            double* f, double* map) {
  if (!report || !dataset) return fail_argument("null report or dataset");
  const auto dit = report->report.aggregates.find(dataset);
  if (dit == report->report.aggregates.end()) return fail_argument("no such dataset in report");
  const auto kit = dit->second.find(k);
  if (kit == dit->second.end()) return fail_argument("k was not evaluated");
  if (f) *f = kit->second.f;
  if (map) *map = kit->second.map;
  return ENTSUM_OK;
}

void entsum_report_free(entsum_report* report) { delete report; }

}  // extern "C"
