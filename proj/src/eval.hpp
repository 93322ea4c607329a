#ifndef ENTSUM_EVAL_HPP
#define ENTSUM_EVAL_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace entsum {

// A summary item reduced to its matching unit: (predicate token, object
// token). The subject is constant within an entity.
using FeaturePair = std::pair<std::string, std::string>;

struct GoldStandard {
  std::string entity_iri;
  std::vector<std::set<FeaturePair>> gold_summaries;  // one set per annotator
  std::uint32_t k_hint = 0;                           // largest annotator set
};

// TSV: entity <TAB> annotator_id <TAB> predicate <TAB> object. Cells are
// normalized on load; grouping is by entity then annotator, both in
// first-appearance order.
std::vector<GoldStandard> load_gold(std::istream& input);
std::vector<GoldStandard> load_gold_file(const std::string& path);

struct SummaryRecord {
  std::string entity_iri;
  std::vector<FeaturePair> ranked;  // normalized, best first
};

// Reads either the JSONL or the TSV summary format (sniffed from the first
// non-space byte).
std::vector<SummaryRecord> load_summaries(std::istream& input);
std::vector<SummaryRecord> load_summaries_file(const std::string& path);

// Mean over annotators of 2PR/(P+R) between the gold set and the top-k
// summary pairs (set semantics); 0 when P+R is 0.
double f_measure(std::span<const FeaturePair> ranked, const GoldStandard& gold, std::uint32_t k);

// Mean over annotators of (1/min(k,|G|)) * sum of Precision@i over relevant
// ranks i <= k.
double average_precision(std::span<const FeaturePair> ranked, const GoldStandard& gold,
                         std::uint32_t k);

struct GoldDataset {
  std::string label;
  std::vector<GoldStandard> entries;
};

struct EntityScores {
  std::string entity_iri;
  std::string dataset;
  std::map<std::uint32_t, double> f;   // k -> F
  std::map<std::uint32_t, double> ap;  // k -> AP
};

struct Aggregate {
  double f = 0.0;
  double map = 0.0;
};

struct EvalReport {
  std::vector<std::uint32_t> ks;
  std::vector<std::string> dataset_labels;  // input order, then "All"
  std::vector<EntityScores> per_entity;
  std::map<std::string, std::map<std::uint32_t, Aggregate>> aggregates;
};

struct EvalOptions {
  std::vector<std::uint32_t> ks = {5, 10};
  // Pool all annotators' gold sets into one union set per entity instead of
  // averaging per-annotator scores.
  bool union_annotators = false;
};

// Scores every gold entity; throws Error(missing_summary) when one has no
// summary record. Aggregates are arithmetic means over entities, per
// dataset plus pooled over all datasets as "All".
EvalReport evaluate(const std::vector<SummaryRecord>& summaries,
                    const std::vector<GoldDataset>& datasets, const EvalOptions& options = {});

void write_report_tsv(const EvalReport& report, std::ostream& out);
void write_report_json(const EvalReport& report, std::ostream& out);

}  // namespace entsum

#endif
