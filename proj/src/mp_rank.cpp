#include "mp_rank.hpp"

#include <ostream>
#include <unordered_set>

#include "errors.hpp"
#include "json.hpp"

namespace entsum {

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::topic_match: return "topic_match";
    case Phase::new_predicate: return "new_predicate";
    case Phase::remainder: return "remainder";
  }
  return "remainder";
}

RankedSummary mp_rank(const EntityDocument& doc, std::span<const std::string> topic_words) {
  const std::size_t n = doc.triples.size();
  if (n == 0) throw Error(errc::empty_document, "document has no triples");

  std::unordered_set<std::string_view> doc_tokens;
  for (const TokenCount& tc : doc.tokens) doc_tokens.insert(tc.token);

  RankedSummary out;
  out.entity_iri = doc.entity_iri;
  out.ordered_triples.reserve(n);
  out.phase_tags.reserve(n);

  std::vector<bool> emitted(n, false);
  std::unordered_set<std::string_view> predicates;
  const auto emit = [&](std::size_t i, Phase phase) {
    emitted[i] = true;
    out.ordered_triples.push_back(doc.triples[i]);
    out.phase_tags.push_back(phase);
  };

  for (const std::string& tw : topic_words) {
    if (!doc_tokens.contains(tw)) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (emitted[i] || doc.object_tokens[i] != tw) continue;
      if (predicates.contains(doc.predicate_tokens[i])) continue;
      predicates.insert(doc.predicate_tokens[i]);
      emit(i, Phase::topic_match);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (emitted[i] || predicates.contains(doc.predicate_tokens[i])) continue;
    predicates.insert(doc.predicate_tokens[i]);
    emit(i, Phase::new_predicate);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!emitted[i]) emit(i, Phase::remainder);
  }
  return out;
}

RankedSummary summarize_ranked(const LdaModel& model, const Corpus& corpus,
                               std::string_view entity_iri) {
  if (model.corpus_hash != corpus.hash()) {
    throw Error(errc::corpus_mismatch, "model was trained on a different corpus");
  }
  const auto doc_index = corpus.find_entity(entity_iri);
  if (!doc_index) {
    throw Error(errc::unknown_entity, "no entity <" + std::string(entity_iri) + "> in corpus");
  }
  const std::uint32_t topic = select_topic(model, *doc_index);
  return mp_rank(corpus.documents()[*doc_index], rank_topic_words(model, topic));
}

std::vector<Triple> summarize(const LdaModel& model, const Corpus& corpus,
                              std::string_view entity_iri, std::uint32_t k) {
  if (k == 0) throw Error(errc::invalid_argument, "k must be positive");
  RankedSummary full = summarize_ranked(model, corpus, entity_iri);
  const std::size_t take = std::min<std::size_t>(k, full.ordered_triples.size());
  full.ordered_triples.resize(take);
  return std::move(full.ordered_triples);
}

namespace {

std::string term_syntax_of(const Triple& t) { return term_to_ntriples(t.object); }

}  // namespace

void write_summary_jsonl(const RankedSummary& summary, std::uint32_t k, std::ostream& out) {
  const std::size_t take = std::min<std::size_t>(k, summary.ordered_triples.size());
  nlohmann::ordered_json record;
  record["entity"] = summary.entity_iri;
  record["k"] = k;
  auto& triples = record["triples"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < take; ++i) {
    const Triple& t = summary.ordered_triples[i];
    triples.push_back({{"s", t.subject},
                       {"p", t.predicate},
                       {"o", term_syntax_of(t)},
                       {"phase", phase_name(summary.phase_tags[i])}});
  }
  out << record.dump() << '\n';
}

void write_summary_tsv(const RankedSummary& summary, std::uint32_t k, std::ostream& out) {
  const std::size_t take = std::min<std::size_t>(k, summary.ordered_triples.size());
  for (std::size_t i = 0; i < take; ++i) {
    const Triple& t = summary.ordered_triples[i];
    out << summary.entity_iri << '\t' << (i + 1) << '\t' << t.subject << '\t' << t.predicate
        << '\t' << term_syntax_of(t) << '\n';
  }
}

}  // namespace entsum
