#ifndef ENTSUM_CORPUS_HPP
#define ENTSUM_CORPUS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rdf.hpp"

namespace entsum {

struct TokenCount {
  std::string token;
  std::uint32_t count = 0;

  bool operator==(const TokenCount&) const = default;
};

// All triples sharing one subject; the unit the topic model calls a
// document. `tokens` is a multiset in first-appearance order so that
// vocabulary indexing stays reproducible.
struct EntityDocument {
  std::string entity_iri;
  std::vector<Triple> triples;
  std::vector<std::string> predicate_tokens;  // per triple
  std::vector<std::string> object_tokens;     // per triple; "" when not normalizable
  std::vector<TokenCount> tokens;

  std::uint64_t total_token_count() const {
    std::uint64_t n = 0;
    for (const auto& tc : tokens) n += tc.count;
    return n;
  }
};

// Groups triples into one document per subject, in order of first
// appearance. Documents whose subject has no normalizable object are
// dropped; a note per drop is appended to `warnings` when given.
std::vector<EntityDocument> build_documents(const std::vector<Triple>& triples,
                                            std::vector<std::string>* warnings = nullptr);

// Injects each object token's categories with multiplicity equal to the
// token's occurrence count. Existing triples and counts are untouched.
EntityDocument enrich_categories(const EntityDocument& doc, const CategoryMap& cats);

// Multiplies each token's multiplicity by (1 + number of its categories).
EntityDocument expand_frequency(const EntityDocument& doc, const CategoryMap& cats);

enum class Enrichment { none, categories, expand, both };

std::optional<Enrichment> enrichment_from_name(std::string_view name);
std::string_view enrichment_name(Enrichment mode);

// `both` applies categories first, then frequency expansion.
EntityDocument apply_enrichment(const EntityDocument& doc, const CategoryMap& cats,
                                Enrichment mode);

class Corpus {
 public:
  // Builds vocabularies in first-appearance order and fixes the counts.
  // Throws Error(empty_corpus) when there are no documents or no tokens.
  static Corpus freeze(std::vector<EntityDocument> documents);

  const std::vector<EntityDocument>& documents() const { return documents_; }
  const std::vector<std::string>& predicate_vocab() const { return predicate_vocab_; }
  const std::vector<std::string>& object_vocab() const { return object_vocab_; }

  // Vocabulary ids for documents()[d].tokens, slot for slot.
  const std::vector<std::uint32_t>& token_ids(std::size_t d) const { return doc_token_ids_[d]; }

  std::size_t entity_count() const { return documents_.size(); }        // E
  std::size_t topic_count() const { return predicate_vocab_.size(); }   // K = R
  std::size_t vocab_size() const { return object_vocab_.size(); }       // V
  std::uint64_t total_tokens() const { return total_tokens_; }          // N

  std::optional<std::size_t> find_entity(std::string_view iri) const;
  std::optional<std::uint32_t> object_id(std::string_view token) const;

  // Identity over the vocab lists plus E and N; stored in model dumps.
  std::uint64_t hash() const { return hash_; }

 private:
  std::vector<EntityDocument> documents_;
  std::vector<std::string> predicate_vocab_;
  std::vector<std::string> object_vocab_;
  std::vector<std::vector<std::uint32_t>> doc_token_ids_;
  std::unordered_map<std::string, std::uint32_t> object_index_;
  std::unordered_map<std::string, std::size_t> entity_index_;
  std::uint64_t total_tokens_ = 0;
  std::uint64_t hash_ = 0;
};

// TSV: entity <TAB> num_triples <TAB> num_tokens.
void write_corpus_stats(const Corpus& corpus, std::ostream& out);

// weight(d, t) = tf(d, t) * ln(E / df(t)); zero for tokens absent from d.
class TfidfWeights {
 public:
  explicit TfidfWeights(const Corpus& corpus);

  // Explicit per-document weights, slot for slot against each document's
  // token list.
  explicit TfidfWeights(std::vector<std::vector<double>> per_doc) : per_doc_(std::move(per_doc)) {}

  // Aligned with corpus.documents()[d].tokens.
  const std::vector<double>& document_weights(std::size_t d) const { return per_doc_[d]; }
  double weight(const Corpus& corpus, std::size_t d, std::string_view token) const;

 private:
  std::vector<std::vector<double>> per_doc_;
};

inline TfidfWeights tfidf_weight(const Corpus& corpus) { return TfidfWeights(corpus); }

}  // namespace entsum

#endif
