#ifndef ENTSUM_MP_RANK_HPP
#define ENTSUM_MP_RANK_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"
#include "lda.hpp"

namespace entsum {

enum class Phase : std::uint8_t { topic_match, new_predicate, remainder };

std::string_view phase_name(Phase phase);

// A total order over one entity's triples. ordered_triples is always a
// permutation of the document's triples; the first P entries (P = distinct
// predicates) have pairwise-distinct predicates.
struct RankedSummary {
  std::string entity_iri;
  std::vector<Triple> ordered_triples;
  std::vector<Phase> phase_tags;
};

// MP ranking. Phase 1 walks the topic words in rank order and, for each
// word present in the document, emits matching triples (object token equal
// to the word) whose predicate is still unused, in document order. Phase 2
// emits the first remaining triple of every unused predicate in document
// order. Phase 3 emits whatever is left in document order.
RankedSummary mp_rank(const EntityDocument& doc, std::span<const std::string> topic_words);

// Full MP order for one entity: pick the document's max-probability topic,
// rank the vocabulary by that topic, then mp_rank.
RankedSummary summarize_ranked(const LdaModel& model, const Corpus& corpus,
                               std::string_view entity_iri);

// First min(k, document size) triples of the MP order.
std::vector<Triple> summarize(const LdaModel& model, const Corpus& corpus,
                              std::string_view entity_iri, std::uint32_t k);

// One JSON object per entity: {"entity", "k", "triples": [{"s","p","o","phase"}]}.
// Objects are written in N-Triples term syntax ("<iri>" or "\"literal\"").
void write_summary_jsonl(const RankedSummary& summary, std::uint32_t k, std::ostream& out);

// entity <TAB> rank <TAB> s <TAB> p <TAB> o, rank starting at 1.
void write_summary_tsv(const RankedSummary& summary, std::uint32_t k, std::ostream& out);

}  // namespace entsum

#endif
