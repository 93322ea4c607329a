/*
 * entsum — entity summarization over RDF via topic modeling.
 *
 * C interface to the shared library. All functions return ENTSUM_OK (0) or
 * an entsum_status error code; entsum_last_error() describes the most
 * recent failure on the calling thread. Handles are opaque and owned by
 * the caller until passed to the matching _free function. Strings returned
 * through const char** out-parameters are borrowed and stay valid for the
 * lifetime of the handle they came from.
 */

#ifndef ENTSUM_H
#define ENTSUM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ENTSUM_API __declspec(dllexport)
#else
#define ENTSUM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum entsum_status {
  ENTSUM_OK = 0,
  ENTSUM_ERR_INVALID_ARGUMENT = 1,
  ENTSUM_ERR_IO = 2,
  ENTSUM_ERR_MALFORMED_LINE = 3,
  ENTSUM_ERR_INVALID_UTF8 = 4,
  ENTSUM_ERR_EMPTY_TOKEN = 5,
  ENTSUM_ERR_EMPTY_CORPUS = 6,
  ENTSUM_ERR_DEGENERATE_CORPUS = 7,
  ENTSUM_ERR_EMPTY_DOCUMENT = 8,
  ENTSUM_ERR_CORPUS_MISMATCH = 9,
  ENTSUM_ERR_UNKNOWN_ENTITY = 10,
  ENTSUM_ERR_MISSING_SUMMARY = 11,
  ENTSUM_ERR_INTERNAL = 12
};

ENTSUM_API const char* entsum_version(void);

/* Human-readable message for the last failed call on this thread. */
ENTSUM_API const char* entsum_last_error(void);

ENTSUM_API const char* entsum_status_name(int status);

/* ------------------------------------------------------------------ */
/* Corpus: parsed N-Triples grouped into per-entity documents, with     */
/* optional category enrichment, frozen vocabularies and counts.        */

typedef struct entsum_corpus entsum_corpus;

/*
 * enrichment is one of "none", "categories", "expand", "both".
 * categories_path may be NULL (same as an empty category map).
 */
ENTSUM_API int entsum_corpus_load(const char* ntriples_path, const char* categories_path,
                                  const char* enrichment, entsum_corpus** out);

/* Same, from in-memory buffers. categories_tsv may be NULL. */
ENTSUM_API int entsum_corpus_load_string(const char* ntriples_text, const char* categories_tsv,
                                         const char* enrichment, entsum_corpus** out);

/* entities = E, predicates = R (= topic count K), objects = V, tokens = N. */
ENTSUM_API int entsum_corpus_counts(const entsum_corpus* corpus, uint64_t* entities,
                                    uint64_t* predicates, uint64_t* objects, uint64_t* tokens);

ENTSUM_API int entsum_corpus_entity_iri(const entsum_corpus* corpus, uint64_t index,
                                        const char** iri);

/* TSV: entity <TAB> num_triples <TAB> num_tokens. */
ENTSUM_API int entsum_corpus_write_stats(const entsum_corpus* corpus, const char* tsv_path);

ENTSUM_API void entsum_corpus_free(entsum_corpus* corpus);

/* ------------------------------------------------------------------ */
/* Training: collapsed Gibbs sampling with one topic per unique         */
/* predicate, optionally TF-IDF weighted.                               */

enum entsum_beta_mode {
  ENTSUM_BETA_FIXED_001 = 0,  /* beta = 0.01 */
  ENTSUM_BETA_FIFTY_OVER_R = 1 /* beta = 50/R */
};

typedef struct entsum_train_opts {
  double alpha;          /* <= 0 selects the default (E/20)/R */
  int beta_mode;         /* entsum_beta_mode */
  uint32_t iterations;   /* Gibbs sweeps */
  uint32_t burn_in;      /* must be < iterations */
  uint64_t seed;
  int use_tfidf;         /* weight token counts by TF-IDF */
  const char* log_path;  /* optional TSV log: sweep <TAB> log_likelihood */
  uint32_t log_interval; /* sweeps between log entries */
} entsum_train_opts;

/* Fills the documented defaults: alpha auto, beta 0.01, 1000/200/42. */
ENTSUM_API void entsum_train_opts_init(entsum_train_opts* opts);

typedef struct entsum_model entsum_model;

ENTSUM_API int entsum_train(const entsum_corpus* corpus, const entsum_train_opts* opts,
                            entsum_model** out);

/* Binary dump: params, vocabularies, theta, phi, version tag, corpus hash.
 * Identical training inputs produce byte-identical dumps. */
ENTSUM_API int entsum_model_save(const entsum_model* model, const char* path);
ENTSUM_API int entsum_model_load(const char* path, entsum_model** out);

ENTSUM_API int entsum_model_counts(const entsum_model* model, uint64_t* docs, uint64_t* topics,
                                   uint64_t* vocab);
ENTSUM_API int entsum_model_hyperparams(const entsum_model* model, double* alpha, double* beta);

/* Enrichment mode of the corpus the model was trained on. */
ENTSUM_API int entsum_model_enrichment(const entsum_model* model, const char** mode);

/* Sum over token instances of log p(token | document). Fails with
 * ENTSUM_ERR_CORPUS_MISMATCH when the corpus is not the training corpus. */
ENTSUM_API int entsum_model_log_likelihood(const entsum_model* model,
                                           const entsum_corpus* corpus, double* ll);

ENTSUM_API void entsum_model_free(entsum_model* model);

/* ------------------------------------------------------------------ */
/* Summaries: top-k triples per entity in MP order (ranked topic words   */
/* matched against triples with first-use predicate uniqueness).         */

typedef struct entsum_summary entsum_summary;

ENTSUM_API int entsum_summarize(const entsum_model* model, const entsum_corpus* corpus,
                                const char* entity_iri, uint32_t k, entsum_summary** out);

ENTSUM_API int entsum_summary_size(const entsum_summary* summary, uint32_t* n);
ENTSUM_API int entsum_summary_entity(const entsum_summary* summary, const char** iri);

/* object is in N-Triples term syntax; phase is "topic_match",
 * "new_predicate" or "remainder". */
ENTSUM_API int entsum_summary_triple(const entsum_summary* summary, uint32_t index,
                                     const char** subject, const char** predicate,
                                     const char** object, const char** phase);

ENTSUM_API void entsum_summary_free(entsum_summary* summary);

/*
 * Writes summaries for the named entities (or, when entities is NULL, for
 * every entity in corpus order). format is "jsonl" or "tsv". All entities
 * are validated before anything is written; unknown ones fail the call
 * with ENTSUM_ERR_UNKNOWN_ENTITY and a message listing them.
 */
ENTSUM_API int entsum_write_summaries(const entsum_model* model, const entsum_corpus* corpus,
                                      const char* const* entities, size_t n_entities, uint32_t k,
                                      const char* format, const char* path);

/* ------------------------------------------------------------------ */
/* Evaluation: F-measure and MAP of summaries against gold standards.   */

typedef struct entsum_report entsum_report;

/*
 * summaries_path: JSONL or TSV summaries as written above.
 * gold_labels/gold_paths: n_gold parallel arrays, one gold TSV per dataset
 * (entity <TAB> annotator <TAB> predicate <TAB> object).
 * ks: cutoffs to evaluate, e.g. {5, 10}.
 * union_annotators: pool annotator gold sets instead of averaging.
 * Fails with ENTSUM_ERR_MISSING_SUMMARY when a gold entity is unsummarized.
 */
ENTSUM_API int entsum_evaluate_files(const char* summaries_path, const char* const* gold_labels,
                                     const char* const* gold_paths, size_t n_gold,
                                     const uint32_t* ks, size_t n_ks, int union_annotators,
                                     entsum_report** out);

/* Either path may be NULL to skip that format. */
ENTSUM_API int entsum_report_write(const entsum_report* report, const char* tsv_path,
                                   const char* json_path);

/* Dataset labels in report order; the last one is the pooled "All". */
ENTSUM_API int entsum_report_datasets(const entsum_report* report, uint64_t* n);
ENTSUM_API int entsum_report_dataset_label(const entsum_report* report, uint64_t index,
                                           const char** label);

ENTSUM_API int entsum_report_aggregate(const entsum_report* report, const char* dataset,
                                       uint32_t k, double* f, double* map);

ENTSUM_API void entsum_report_free(entsum_report* report);

#ifdef __cplusplus
}
#endif

#endif /* ENTSUM_H */
