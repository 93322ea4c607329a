#ifndef ENTSUM_RDF_HPP
#define ENTSUM_RDF_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "errors.hpp"

namespace entsum {

enum class TermKind { iri, literal };

// Raw form as read: no angle brackets around IRIs, no quotes around
// literals. Language tags and datatype suffixes are stripped on parse.
struct RdfTerm {
  TermKind kind = TermKind::iri;
  std::string lexical;

  bool operator==(const RdfTerm&) const = default;
};

struct Triple {
  std::string subject;    // always an IRI
  std::string predicate;  // always an IRI
  RdfTerm object;
  std::size_t source_line = 0;  // 1-based input line
  std::size_t doc_order = 0;    // 0-based position among the subject's triples

  bool operator==(const Triple&) const = default;
};

// Parses the N-Triples subset: one `<s> <p> (<o>|"o") .` statement per line,
// '#' comments and blank lines allowed, LF or CRLF endings. Blank nodes are
// rejected. Throws Error(malformed_line) / Error(invalid_utf8).
std::vector<Triple> parse_ntriples(std::istream& input);
std::vector<Triple> parse_ntriples(std::string_view text);
std::vector<Triple> parse_ntriples_file(const std::string& path);

// Canonical serialization; re-parsing the output yields an equal triple list.
void serialize_ntriples(std::span<const Triple> triples, std::ostream& out);
std::string serialize_ntriples(std::span<const Triple> triples);

// One term in N-Triples syntax: <iri> or "literal" with escapes.
std::string term_to_ntriples(const RdfTerm& term);

// Inverse of term_to_ntriples; also accepts bare strings as literals.
RdfTerm term_from_cell(std::string_view cell, std::size_t line_no);

// IRI: substring after the last '#' (else last '/'), ASCII-lowercased.
// Literal: lowercased, internal whitespace collapsed to single spaces,
// trimmed. Throws Error(empty_token) when the result is empty.
std::string normalize_term(const RdfTerm& term);
std::string normalize_iri(std::string_view lexical);
std::string normalize_literal(std::string_view lexical);

class CategoryMap {
 public:
  // Returns the categories of a normalized object token; empty for unknown.
  const std::vector<std::string>& lookup(std::string_view token) const;

  // Appends a pair unless already present; keeps first-appearance order.
  void add(std::string object_token, std::string category_token);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::unordered_map<std::string, std::vector<std::string>> entries_;
};

// TSV `object_token<TAB>category_token` per line; cells are normalized on
// load (`<...>` cells via the IRI rule, anything else via the literal rule).
CategoryMap load_category_map(std::istream& input);
CategoryMap load_category_map_file(const std::string& path);

}  // namespace entsum

#endif
