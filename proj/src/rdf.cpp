#include "rdf.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace entsum {

namespace {

bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Returns the byte offset of the first invalid UTF-8 sequence, or npos.
std::size_t find_invalid_utf8(std::string_view text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const unsigned char b0 = static_cast<unsigned char>(text[i]);
    std::size_t len;
    unsigned cp_min;
    if (b0 < 0x80) {
      ++i;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp_min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp_min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp_min = 0x10000;
    } else {
      return i;
    }
    if (i + len > n) return i;
    unsigned cp = b0 & (0x7F >> len);
    for (std::size_t j = 1; j < len; ++j) {
      const unsigned char bj = static_cast<unsigned char>(text[i + j]);
      if ((bj & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (bj & 0x3F);
    }
    if (cp < cp_min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::string_view::npos;
}

void append_utf8(std::string& out, unsigned cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// One statement line being consumed left to right.
class LineScanner {
 public:
  LineScanner(std::string_view line, std::size_t line_no)
      : line_(line), line_no_(line_no) {}

  void skip_ws() {
    while (pos_ < line_.size() && is_ws(line_[pos_])) ++pos_;
  }

  bool at_end() const { return pos_ >= line_.size(); }
  char peek() const { return line_[pos_]; }
  void advance() { ++pos_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw_malformed_line(line_no_, what);
  }

  unsigned hex_escape(std::size_t digits) {
    unsigned cp = 0;
    for (std::size_t j = 0; j < digits; ++j) {
      if (at_end()) fail("truncated \\u escape");
      const char c = peek();
      unsigned v;
      if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') v = static_cast<unsigned>(c - 'A' + 10);
      else fail("bad hex digit in \\u escape");
      cp = cp * 16 + v;
      advance();
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("escape is not a Unicode scalar value");
    return cp;
  }

  // '<...>' with \u/\U escapes decoded; result must be non-empty.
  std::string read_iri() {
    if (at_end() || peek() != '<') fail("expected '<'");
    advance();
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      const char c = peek();
      if (c == '>') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        if (at_end()) fail("dangling backslash in IRI");
        const char e = peek();
        advance();
        unsigned cp;
        if (e == 'u') cp = hex_escape(4);
        else if (e == 'U') cp = hex_escape(8);
        else { fail("invalid escape in IRI"); }
        if (cp <= 0x20 || cp == '<' || cp == '>' || cp == '"' || cp == '{' ||
            cp == '}' || cp == '|' || cp == '^' || cp == '`' || cp == '\\') {
          fail("escape decodes to a character not allowed in an IRI");
        }
        append_utf8(out, cp);
        continue;
      }
      if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' || c == '{' ||
          c == '}' || c == '|' || c == '^' || c == '`') {
        fail("invalid character in IRI");
      }
      out.push_back(c);
      advance();
    }
    if (out.empty()) fail("empty IRI");
    return out;
  }

  // '"..."' with the usual escapes; any @lang / ^^<dt> suffix is consumed
  // and discarded.
  std::string read_literal() {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated literal");
      const char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        if (at_end()) fail("dangling backslash in literal");
        const char e = peek();
        advance();
        switch (e) {
          case 't': out.push_back('\t'); break;
          case 'b': out.push_back('\b'); break;
          case 'n': out.push_back('\n'); break;
          case 'r': out.push_back('\r'); break;
          case 'f': out.push_back('\f'); break;
          case '"': out.push_back('"'); break;
          case '\'': out.push_back('\''); break;
          case '\\': out.push_back('\\'); break;
          case 'u': append_utf8(out, hex_escape(4)); break;
          case 'U': append_utf8(out, hex_escape(8)); break;
          default: fail("invalid escape in literal");
        }
        continue;
      }
      out.push_back(c);
      advance();
    }
    if (!at_end() && peek() == '@') {
      advance();
      std::size_t tag_len = 0;
      while (!at_end() && (std::isalpha(static_cast<unsigned char>(peek())) ||
                           (tag_len > 0 && (peek() == '-' || std::isdigit(static_cast<unsigned char>(peek())))))) {
        advance();
        ++tag_len;
      }
      if (tag_len == 0) fail("empty language tag");
    } else if (!at_end() && peek() == '^') {
      advance();
      if (at_end() || peek() != '^') fail("expected '^^' before datatype");
      advance();
      (void)read_iri();  // datatype IRI, discarded
    }
    return out;
  }

  void require_ws() {
    if (at_end() || !is_ws(peek())) fail("expected whitespace between terms");
    skip_ws();
  }

  void require_end_of_statement() {
    skip_ws();
    if (at_end() || peek() != '.') fail("expected '.' terminator");
    advance();
    skip_ws();
    if (!at_end()) fail("trailing content after '.'");
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

Triple parse_statement(std::string_view line, std::size_t line_no) {
  LineScanner sc(line, line_no);
  Triple t;
  t.source_line = line_no;

  sc.skip_ws();
  if (sc.peek() == '_') sc.fail("blank nodes are not supported");
  t.subject = sc.read_iri();
  sc.require_ws();

  t.predicate = sc.read_iri();
  sc.require_ws();

  if (sc.at_end()) sc.fail("missing object");
  const char c = sc.peek();
  if (c == '<') {
    t.object = {TermKind::iri, sc.read_iri()};
  } else if (c == '"') {
    t.object = {TermKind::literal, sc.read_literal()};
  } else if (c == '_') {
    sc.fail("blank nodes are not supported");
  } else {
    sc.fail("object must be an IRI or a literal");
  }
  sc.require_end_of_statement();
  return t;
}

}  // namespace

std::vector<Triple> parse_ntriples(std::string_view text) {
  const std::size_t bad = find_invalid_utf8(text);
  if (bad != std::string_view::npos) {
    throw Error(errc::invalid_utf8, "invalid UTF-8 at byte offset " + std::to_string(bad));
  }

  std::vector<Triple> triples;
  std::unordered_map<std::string, std::size_t> per_subject;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    if (start == text.size() && line_no > 0) break;
    std::size_t end = text.find('\n', start);
    std::string_view line = (end == std::string_view::npos)
                                ? text.substr(start)
                                : text.substr(start, end - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::size_t first = 0;
    while (first < line.size() && is_ws(line[first])) ++first;
    const bool blank = first == line.size();
    const bool comment = !blank && line[first] == '#';
    if (!blank && !comment) {
      Triple t = parse_statement(line, line_no);
      t.doc_order = per_subject[t.subject]++;
      triples.push_back(std::move(t));
    }

    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return triples;
}

std::vector<Triple> parse_ntriples(std::istream& input) {
  std::ostringstream buf;
  buf << input.rdbuf();
  return parse_ntriples(std::string_view(buf.view()));
}

std::vector<Triple> parse_ntriples_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::io_error, "cannot open " + path);
  return parse_ntriples(in);
}

namespace {

void serialize_iri(std::string_view lexical, std::ostream& out) {
  out << '<' << lexical << '>';
}

void serialize_literal(std::string_view lexical, std::ostream& out) {
  out << '"';
  for (char c : lexical) {
    switch (c) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\n': out << "\\n"; break;
      case '\r': out << "\\r"; break;
      case '\t': out << "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static const char* hex = "0123456789ABCDEF";
          out << "\\u00" << hex[(c >> 4) & 0xF] << hex[c & 0xF];
        } else {
          out << c;
        }
    }
  }
  out << '"';
}

}  // namespace

std::string term_to_ntriples(const RdfTerm& term) {
  std::ostringstream out;
  if (term.kind == TermKind::iri) {
    serialize_iri(term.lexical, out);
  } else {
    serialize_literal(term.lexical, out);
  }
  return out.str();
}

RdfTerm term_from_cell(std::string_view cell, std::size_t line_no) {
  if (!cell.empty() && cell.front() == '<') {
    LineScanner sc(cell, line_no);
    std::string iri = sc.read_iri();
    sc.skip_ws();
    if (!sc.at_end()) sc.fail("trailing content after IRI");
    return {TermKind::iri, std::move(iri)};
  }
  if (!cell.empty() && cell.front() == '"') {
    LineScanner sc(cell, line_no);
    std::string lit = sc.read_literal();
    sc.skip_ws();
    if (!sc.at_end()) sc.fail("trailing content after literal");
    return {TermKind::literal, std::move(lit)};
  }
  return {TermKind::literal, std::string(cell)};
}

void serialize_ntriples(std::span<const Triple> triples, std::ostream& out) {
  for (const Triple& t : triples) {
    serialize_iri(t.subject, out);
    out << ' ';
    serialize_iri(t.predicate, out);
    out << ' ';
    if (t.object.kind == TermKind::iri) {
      serialize_iri(t.object.lexical, out);
    } else {
      serialize_literal(t.object.lexical, out);
    }
    out << " .\n";
  }
}

std::string serialize_ntriples(std::span<const Triple> triples) {
  std::ostringstream out;
  serialize_ntriples(triples, out);
  return out.str();
}

std::string normalize_iri(std::string_view lexical) {
  std::string_view tail = lexical;
  const std::size_t hash = lexical.rfind('#');
  if (hash != std::string_view::npos) {
    tail = lexical.substr(hash + 1);
  } else {
    const std::size_t slash = lexical.rfind('/');
    if (slash != std::string_view::npos) tail = lexical.substr(slash + 1);
  }
  std::string out;
  out.reserve(tail.size());
  for (char c : tail) out.push_back(ascii_lower(c));
  if (out.empty()) throw Error(errc::empty_token, "IRI <" + std::string(lexical) + "> normalizes to nothing");
  return out;
}

std::string normalize_literal(std::string_view lexical) {
  std::string out;
  out.reserve(lexical.size());
  bool pending_space = false;
  for (char c : lexical) {
    if (is_ws(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(ascii_lower(c));
  }
  if (out.empty()) throw Error(errc::empty_token, "literal normalizes to nothing");
  return out;
}

std::string normalize_term(const RdfTerm& term) {
  return term.kind == TermKind::iri ? normalize_iri(term.lexical)
                                    : normalize_literal(term.lexical);
}

const std::vector<std::string>& CategoryMap::lookup(std::string_view token) const {
  static const std::vector<std::string> kEmpty;
  const auto it = entries_.find(std::string(token));
  return it == entries_.end() ? kEmpty : it->second;
}

void CategoryMap::add(std::string object_token, std::string category_token) {
  auto& cats = entries_[std::move(object_token)];
  for (const auto& c : cats) {
    if (c == category_token) return;
  }
  cats.push_back(std::move(category_token));
}

namespace {

std::string normalize_cell(std::string_view cell, std::size_t line_no) {
  try {
    if (cell.size() >= 2 && cell.front() == '<' && cell.back() == '>') {
      return normalize_iri(cell.substr(1, cell.size() - 2));
    }
    return normalize_literal(cell);
  } catch (const Error&) {
    throw_malformed_line(line_no, "cell normalizes to an empty token");
  }
}

}  // namespace

CategoryMap load_category_map(std::istream& input) {
  CategoryMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw_malformed_line(line_no, "expected exactly one tab");
    }
    std::string object = normalize_cell(std::string_view(line).substr(0, tab), line_no);
    std::string category = normalize_cell(std::string_view(line).substr(tab + 1), line_no);
    map.add(std::move(object), std::move(category));
  }
  return map;
}

CategoryMap load_category_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::io_error, "cannot open " + path);
  return load_category_map(in);
}

}  // namespace entsum
