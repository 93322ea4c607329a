#ifndef ENTSUM_ERRORS_HPP
#define ENTSUM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entsum {

enum class errc {
  malformed_line,
  invalid_utf8,
  empty_token,
  empty_corpus,
  degenerate_corpus,
  empty_document,
  corpus_mismatch,
  unknown_entity,
  missing_summary,
  io_error,
  invalid_argument,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void throw_malformed_line(std::size_t line_no, const std::string& what) {
  throw Error(errc::malformed_line, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace entsum

#endif
