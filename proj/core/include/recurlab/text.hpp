#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace recur {

/// Character cursor over a literal or config value with line/column errors.
class TextCursor {
 public:
  explicit TextCursor(std::string_view text, int line = 1, int column = 1)
      : text_(text), line_(line), column_(column) {}

  void skip_ws();
  bool eof();
  char peek();
  bool consume(char c);
  void expect(char c);
  /// Consumes `word` if it appears next as a whole identifier.
  bool consume_word(std::string_view word);
  /// True if an identifier followed by a single '=' comes next.
  bool at_named_arg();
  std::string identifier();
  /// Digits with optional fraction and exponent; no sign.
  std::string number_token();
  /// Unsigned decimal integer.
  std::uint64_t natural();
  std::int64_t integer();
  /// Raw text up to the matching close of the bracket just consumed.
  std::string balanced_until(char close);

  std::size_t position() const noexcept { return pos_; }
  void reset(std::size_t pos) noexcept { pos_ = pos; }
  std::string_view text() const noexcept { return text_; }

  [[noreturn]] void fail(const std::string& message) const;

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
  int column_;
};

bool is_ident_start(char c);
bool is_ident_char(char c);

}  // namespace recur
