#include "corpus.hpp"

#include <cmath>
#include <ostream>

#include "util.hpp"

namespace entsum {

namespace {

void add_token(EntityDocument& doc, std::unordered_map<std::string, std::size_t>& pos,
               const std::string& token, std::uint32_t count) {
  const auto it = pos.find(token);
  if (it == pos.end()) {
    pos.emplace(token, doc.tokens.size());
    doc.tokens.push_back({token, count});
  } else {
    doc.tokens[it->second].count += count;
  }
}

}  // namespace

std::vector<EntityDocument> build_documents(const std::vector<Triple>& triples,
                                            std::vector<std::string>* warnings) {
  if (triples.empty()) throw Error(errc::empty_corpus, "no triples to build documents from");

  std::vector<EntityDocument> docs;
  std::unordered_map<std::string, std::size_t> doc_index;
  std::vector<std::unordered_map<std::string, std::size_t>> token_pos;

  for (const Triple& t : triples) {
    auto [it, inserted] = doc_index.emplace(t.subject, docs.size());
    if (inserted) {
      docs.emplace_back();
      docs.back().entity_iri = t.subject;
      token_pos.emplace_back();
    }
    EntityDocument& doc = docs[it->second];
    doc.triples.push_back(t);
    doc.predicate_tokens.push_back(normalize_iri(t.predicate));
    std::string token;
    try {
      token = normalize_term(t.object);
    } catch (const Error& e) {
      if (e.code() != errc::empty_token) throw;
      // object yields no token; the triple stays but contributes nothing
    }
    doc.object_tokens.push_back(token);
    if (!token.empty()) add_token(doc, token_pos[it->second], token, 1);
  }

  std::vector<EntityDocument> kept;
  kept.reserve(docs.size());
  for (auto& doc : docs) {
    if (doc.tokens.empty()) {
      if (warnings) {
        warnings->push_back("dropping <" + doc.entity_iri + ">: no parseable objects");
      }
      continue;
    }
    kept.push_back(std::move(doc));
  }
  return kept;
}

EntityDocument enrich_categories(const EntityDocument& doc, const CategoryMap& cats) {
  EntityDocument out = doc;
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < out.tokens.size(); ++i) pos.emplace(out.tokens[i].token, i);

  // Snapshot: categories injected below must not trigger further injection.
  const std::size_t original = out.tokens.size();
  for (std::size_t i = 0; i < original; ++i) {
    const std::uint32_t occurrences = out.tokens[i].count;
    for (const std::string& cat : cats.lookup(out.tokens[i].token)) {
      add_token(out, pos, cat, occurrences);
    }
  }
  return out;
}

EntityDocument expand_frequency(const EntityDocument& doc, const CategoryMap& cats) {
  EntityDocument out = doc;
  for (TokenCount& tc : out.tokens) {
    const std::size_t m = cats.lookup(tc.token).size();
    tc.count *= static_cast<std::uint32_t>(1 + m);
  }
  return out;
}

std::optional<Enrichment> enrichment_from_name(std::string_view name) {
  if (name == "none") return Enrichment::none;
  if (name == "categories") return Enrichment::categories;
  if (name == "expand") return Enrichment::expand;
  if (name == "both") return Enrichment::both;
  return std::nullopt;
}

std::string_view enrichment_name(Enrichment mode) {
  switch (mode) {
    case Enrichment::none: return "none";
    case Enrichment::categories: return "categories";
    case Enrichment::expand: return "expand";
    case Enrichment::both: return "both";
  }
  return "none";
}

EntityDocument apply_enrichment(const EntityDocument& doc, const CategoryMap& cats,
                                Enrichment mode) {
  switch (mode) {
    case Enrichment::none: return doc;
    case Enrichment::categories: return enrich_categories(doc, cats);
    case Enrichment::expand: return expand_frequency(doc, cats);
    case Enrichment::both: return expand_frequency(enrich_categories(doc, cats), cats);
  }
  return doc;
}

Corpus Corpus::freeze(std::vector<EntityDocument> documents) {
  if (documents.empty()) throw Error(errc::empty_corpus, "corpus has no documents");

  Corpus c;
  c.documents_ = std::move(documents);

  std::unordered_map<std::string, std::uint32_t> predicate_index;
  for (std::size_t d = 0; d < c.documents_.size(); ++d) {
    const EntityDocument& doc = c.documents_[d];
    c.entity_index_.emplace(doc.entity_iri, d);
    for (const std::string& p : doc.predicate_tokens) {
      if (predicate_index.emplace(p, static_cast<std::uint32_t>(c.predicate_vocab_.size())).second) {
        c.predicate_vocab_.push_back(p);
      }
    }
    auto& ids = c.doc_token_ids_.emplace_back();
    ids.reserve(doc.tokens.size());
    for (const TokenCount& tc : doc.tokens) {
      auto [it, inserted] =
          c.object_index_.emplace(tc.token, static_cast<std::uint32_t>(c.object_vocab_.size()));
      if (inserted) c.object_vocab_.push_back(tc.token);
      ids.push_back(it->second);
      c.total_tokens_ += tc.count;
    }
  }

  if (c.total_tokens_ == 0 || c.object_vocab_.empty()) {
    throw Error(errc::empty_corpus, "corpus has no object tokens");
  }

  std::uint64_t h = fnv1a64("entsum-corpus");
  for (const auto& p : c.predicate_vocab_) h = fnv1a64(p, fnv1a64("\x01", h));
  for (const auto& o : c.object_vocab_) h = fnv1a64(o, fnv1a64("\x02", h));
  h = fnv1a64(std::to_string(c.entity_count()), fnv1a64("\x03", h));
  h = fnv1a64(std::to_string(c.total_tokens_), fnv1a64("\x04", h));
  c.hash_ = h;
  return c;
}

std::optional<std::size_t> Corpus::find_entity(std::string_view iri) const {
  const auto it = entity_index_.find(std::string(iri));
  if (it == entity_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Corpus::object_id(std::string_view token) const {
  const auto it = object_index_.find(std::string(token));
  if (it == object_index_.end()) return std::nullopt;
  return it->second;
}

void write_corpus_stats(const Corpus& corpus, std::ostream& out) {
  out << "entity\tnum_triples\tnum_tokens\n";
  for (const EntityDocument& doc : corpus.documents()) {
    out << doc.entity_iri << '\t' << doc.triples.size() << '\t' << doc.total_token_count()
        << '\n';
  }
}

TfidfWeights::TfidfWeights(const Corpus& corpus) {
  const std::size_t E = corpus.entity_count();
  std::vector<std::uint32_t> df(corpus.vocab_size(), 0);
  for (std::size_t d = 0; d < E; ++d) {
    for (std::uint32_t id : corpus.token_ids(d)) ++df[id];
  }

  per_doc_.resize(E);
  for (std::size_t d = 0; d < E; ++d) {
    const EntityDocument& doc = corpus.documents()[d];
    const double total = static_cast<double>(doc.total_token_count());
    const auto& ids = corpus.token_ids(d);
    per_doc_[d].resize(ids.size());
    for (std::size_t j = 0; j < ids.size(); ++j) {
      const double tf = doc.tokens[j].count / total;
      const double idf = std::log(static_cast<double>(E) / df[ids[j]]);
      per_doc_[d][j] = tf * idf;
    }
  }
}

double TfidfWeights::weight(const Corpus& corpus, std::size_t d, std::string_view token) const {
  const EntityDocument& doc = corpus.documents()[d];
  for (std::size_t j = 0; j < doc.tokens.size(); ++j) {
    if (doc.tokens[j].token == token) return per_doc_[d][j];
  }
  return 0.0;
}

}  // namespace entsum
