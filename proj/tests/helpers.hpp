#ifndef ENTSUM_TEST_HELPERS_HPP
#define ENTSUM_TEST_HELPERS_HPP

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "corpus.hpp"
#include "rdf.hpp"

namespace entsum::test {

inline Triple make_triple(const std::string& subject, const std::string& predicate,
                          const RdfTerm& object) {
  Triple t;
  t.subject = subject;
  t.predicate = predicate;
  t.object = object;
  return t;
}

inline RdfTerm iri(std::string lexical) { return {TermKind::iri, std::move(lexical)}; }
inline RdfTerm lit(std::string lexical) { return {TermKind::literal, std::move(lexical)}; }

// (predicate suffix, object literal) pairs for one subject; predicates are
// minted under http://x/.
inline std::vector<Triple> subject_triples(
    const std::string& subject, const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<Triple> out;
  std::size_t order = 0;
  for (const auto& [pred, obj] : pairs) {
    Triple t = make_triple(subject, "http://x/" + pred, lit(obj));
    t.doc_order = order++;
    out.push_back(std::move(t));
  }
  return out;
}

inline Corpus corpus_from(const std::vector<Triple>& triples,
                          const CategoryMap& cats = CategoryMap(),
                          Enrichment mode = Enrichment::none) {
  std::vector<EntityDocument> docs = build_documents(triples);
  for (auto& doc : docs) doc = apply_enrichment(doc, cats, mode);
  return Corpus::freeze(std::move(docs));
}

inline std::uint32_t token_count_of(const EntityDocument& doc, const std::string& token) {
  for (const TokenCount& tc : doc.tokens) {
    if (tc.token == token) return tc.count;
  }
  return 0;
}

}  // namespace entsum::test

#endif
