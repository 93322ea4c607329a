#include "eval.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "errors.hpp"
#include "json.hpp"
#include "rdf.hpp"

namespace entsum {

namespace {

std::string normalize_gold_cell(std::string_view cell, std::size_t line_no) {
  try {
    return normalize_term(term_from_cell(cell, line_no));
  } catch (const Error& e) {
    if (e.code() == errc::empty_token) {
      throw_malformed_line(line_no, "cell normalizes to an empty token");
    }
    throw;
  }
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

std::vector<GoldStandard> load_gold(std::istream& input) {
  std::vector<GoldStandard> golds;
  std::unordered_map<std::string, std::size_t> entity_pos;
  std::unordered_map<std::string, std::size_t> annotator_pos;  // key: entity \x1f annotator

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_tabs(line);
    if (cells.size() != 4) throw_malformed_line(line_no, "expected 4 tab-separated columns");
    std::string entity(cells[0]);
    if (entity.empty()) throw_malformed_line(line_no, "empty entity column");
    std::string annotator(cells[1]);
    FeaturePair pair{normalize_gold_cell(cells[2], line_no),
                     normalize_gold_cell(cells[3], line_no)};

    auto [eit, new_entity] = entity_pos.emplace(entity, golds.size());
    if (new_entity) {
      golds.emplace_back();
      golds.back().entity_iri = entity;
    }
    GoldStandard& gold = golds[eit->second];
    const std::string akey = entity + '\x1f' + annotator;
    auto [ait, new_annotator] = annotator_pos.emplace(akey, gold.gold_summaries.size());
    if (new_annotator) gold.gold_summaries.emplace_back();
    gold.gold_summaries[ait->second].insert(std::move(pair));
  }

  for (GoldStandard& gold : golds) {
    for (const auto& set : gold.gold_summaries) {
      gold.k_hint = std::max<std::uint32_t>(gold.k_hint, static_cast<std::uint32_t>(set.size()));
    }
  }
  return golds;
}

std::vector<GoldStandard> load_gold_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::io_error, "cannot open " + path);
  return load_gold(in);
}

namespace {

FeaturePair summary_pair(std::string_view predicate, std::string_view object_cell,
                         std::size_t line_no) {
  return {normalize_iri(predicate), normalize_gold_cell(object_cell, line_no)};
}

std::vector<SummaryRecord> load_summaries_jsonl(std::istream& input) {
  std::vector<SummaryRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.contains("entity") || !record.contains("triples")) {
      throw_malformed_line(line_no, "not a summary record");
    }
    SummaryRecord rec;
    rec.entity_iri = record["entity"].get<std::string>();
    for (const auto& item : record["triples"]) {
      rec.ranked.push_back(
          summary_pair(item.at("p").get<std::string>(), item.at("o").get<std::string>(), line_no));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SummaryRecord> load_summaries_tsv(std::istream& input) {
  std::vector<SummaryRecord> records;
  std::unordered_map<std::string, std::size_t> entity_pos;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_tabs(line);
    if (cells.size() != 5) throw_malformed_line(line_no, "expected 5 tab-separated columns");
    std::string entity(cells[0]);
    auto [it, inserted] = entity_pos.emplace(entity, records.size());
    if (inserted) {
      records.emplace_back();
      records.back().entity_iri = entity;
    }
    records[it->second].ranked.push_back(summary_pair(cells[3], cells[4], line_no));
  }
  return records;
}

}  // namespace

std::vector<SummaryRecord> load_summaries(std::istream& input) {
  std::ostringstream buf;
  buf << input.rdbuf();
  const std::string text = buf.str();
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  std::istringstream replay(text);
  if (first != std::string::npos && text[first] == '{') return load_summaries_jsonl(replay);
  return load_summaries_tsv(replay);
}

std::vector<SummaryRecord> load_summaries_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::io_error, "cannot open " + path);
  return load_summaries(in);
}

namespace {

std::set<FeaturePair> top_k_set(std::span<const FeaturePair> ranked, std::uint32_t k) {
  const std::size_t take = std::min<std::size_t>(k, ranked.size());
  return {ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take)};
}

double set_f_measure(const std::set<FeaturePair>& summary, const std::set<FeaturePair>& gold) {
  if (summary.empty() || gold.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& pair : summary) inter += gold.count(pair);
  const double p = static_cast<double>(inter) / static_cast<double>(summary.size());
  const double r = static_cast<double>(inter) / static_cast<double>(gold.size());
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

double set_average_precision(std::span<const FeaturePair> ranked,
                             const std::set<FeaturePair>& gold, std::uint32_t k) {
  if (gold.empty()) return 0.0;
  const std::size_t take = std::min<std::size_t>(k, ranked.size());
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < take; ++i) {
    if (gold.contains(ranked[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  const std::size_t denom = std::min<std::size_t>(k, gold.size());
  return sum / static_cast<double>(denom);
}

std::vector<std::set<FeaturePair>> effective_gold_sets(const GoldStandard& gold,
                                                       bool union_annotators) {
  if (!union_annotators) return gold.gold_summaries;
  std::set<FeaturePair> pooled;
  for (const auto& set : gold.gold_summaries) pooled.insert(set.begin(), set.end());
  return {std::move(pooled)};
}

}  // namespace

double f_measure(std::span<const FeaturePair> ranked, const GoldStandard& gold, std::uint32_t k) {
  if (gold.gold_summaries.empty()) return 0.0;
  const std::set<FeaturePair> summary = top_k_set(ranked, k);
  double sum = 0.0;
  for (const auto& set : gold.gold_summaries) sum += set_f_measure(summary, set);
  return sum / static_cast<double>(gold.gold_summaries.size());
}

double average_precision(std::span<const FeaturePair> ranked, const GoldStandard& gold,
                         std::uint32_t k) {
  if (gold.gold_summaries.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& set : gold.gold_summaries) sum += set_average_precision(ranked, set, k);
  return sum / static_cast<double>(gold.gold_summaries.size());
}

EvalReport evaluate(const std::vector<SummaryRecord>& summaries,
                    const std::vector<GoldDataset>& datasets, const EvalOptions& options) {
  if (options.ks.empty()) throw Error(errc::invalid_argument, "need at least one k");

  std::unordered_map<std::string_view, const SummaryRecord*> by_entity;
  for (const SummaryRecord& rec : summaries) by_entity.emplace(rec.entity_iri, &rec);

  EvalReport report;
  report.ks = options.ks;

  struct Accumulator {
    std::map<std::uint32_t, double> f_sum, ap_sum;
    std::size_t n = 0;
  };
  std::map<std::string, Accumulator> acc;

  for (const GoldDataset& dataset : datasets) {
    if (dataset.label == "All" || acc.contains(dataset.label)) {
      throw Error(errc::invalid_argument, "dataset label '" + dataset.label + "' is taken");
    }
    acc[dataset.label];  // reserve the label before scoring
    report.dataset_labels.push_back(dataset.label);
    for (const GoldStandard& gold : dataset.entries) {
      const auto it = by_entity.find(gold.entity_iri);
      if (it == by_entity.end()) {
        throw Error(errc::missing_summary, "no summary for entity <" + gold.entity_iri + ">");
      }
      GoldStandard effective = gold;
      effective.gold_summaries = effective_gold_sets(gold, options.union_annotators);

      EntityScores scores;
      scores.entity_iri = gold.entity_iri;
      scores.dataset = dataset.label;
      for (const std::uint32_t k : options.ks) {
        const double f = f_measure(it->second->ranked, effective, k);
        const double ap = average_precision(it->second->ranked, effective, k);
        scores.f[k] = f;
        scores.ap[k] = ap;
        for (const char* label : {dataset.label.c_str(), "All"}) {
          auto& a = acc[label];
          a.f_sum[k] += f;
          a.ap_sum[k] += ap;
        }
      }
      ++acc[dataset.label].n;
      ++acc["All"].n;
      report.per_entity.push_back(std::move(scores));
    }
  }
  report.dataset_labels.push_back("All");

  for (const std::string& label : report.dataset_labels) {
    const Accumulator& a = acc[label];
    for (const std::uint32_t k : options.ks) {
      Aggregate agg;
      if (a.n > 0) {
        agg.f = a.f_sum.at(k) / static_cast<double>(a.n);
        agg.map = a.ap_sum.at(k) / static_cast<double>(a.n);
      }
      report.aggregates[label][k] = agg;
    }
  }
  return report;
}

namespace {

std::string format_score(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << v;
  return out.str();
}

}  // namespace

void write_report_tsv(const EvalReport& report, std::ostream& out) {
  out << "metric";
  for (const std::string& label : report.dataset_labels) {
    for (const std::uint32_t k : report.ks) out << '\t' << label << "@k=" << k;
  }
  out << '\n';
  for (const char* metric : {"F", "MAP"}) {
    out << metric;
    for (const std::string& label : report.dataset_labels) {
      for (const std::uint32_t k : report.ks) {
        const Aggregate& agg = report.aggregates.at(label).at(k);
        out << '\t' << format_score(metric[0] == 'F' ? agg.f : agg.map);
      }
    }
    out << '\n';
  }
  out << '\n';
  out << "entity\tdataset";
  for (const std::uint32_t k : report.ks) out << "\tF@" << k;
  for (const std::uint32_t k : report.ks) out << "\tAP@" << k;
  out << '\n';
  for (const EntityScores& scores : report.per_entity) {
    out << scores.entity_iri << '\t' << scores.dataset;
    for (const std::uint32_t k : report.ks) out << '\t' << format_score(scores.f.at(k));
    for (const std::uint32_t k : report.ks) out << '\t' << format_score(scores.ap.at(k));
    out << '\n';
  }
}

void write_report_json(const EvalReport& report, std::ostream& out) {
  nlohmann::ordered_json j;
  j["ks"] = report.ks;
  j["datasets"] = report.dataset_labels;
  auto& aggregates = j["aggregates"] = nlohmann::ordered_json::object();
  for (const std::string& label : report.dataset_labels) {
    auto& entry = aggregates[label] = nlohmann::ordered_json::object();
    for (const std::uint32_t k : report.ks) {
      const Aggregate& agg = report.aggregates.at(label).at(k);
      entry[std::to_string(k)] = {{"f", agg.f}, {"map", agg.map}};
    }
  }
  auto& per_entity = j["per_entity"] = nlohmann::ordered_json::array();
  for (const EntityScores& scores : report.per_entity) {
    nlohmann::ordered_json entry;
    entry["entity"] = scores.entity_iri;
    entry["dataset"] = scores.dataset;
    for (const std::uint32_t k : report.ks) {
      entry["f@" + std::to_string(k)] = scores.f.at(k);
      entry["ap@" + std::to_string(k)] = scores.ap.at(k);
    }
    per_entity.push_back(std::move(entry));
  }
  out << j.dump(2) << '\n';
}

}  // namespace entsum
