#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "recurlab/scalar.hpp"
#include "recurlab/text.hpp"

namespace recur {

/// A scalar expression, optionally in the index variable `n`.
///
/// Grammar: `+ - * / ^`, parentheses, numbers (`3`, `0.25`, `1e-3`, `2i`),
/// constants `i pi e`, the variable `n`, and functions
/// `sqrt exp log cos sin abs root`. `root(t)` is exp(2*pi*i*t) and stays
/// exact for rational `t`. Rational arithmetic stays exact.
class Expr {
 public:
  struct Node;

  Expr() = default;

  static Expr parse(std::string_view text);
  /// Parses one expression and leaves the cursor on the first unused char.
  static Expr parse(TextCursor& cursor);
  static Expr constant(const Scalar& value);

  Scalar eval(std::optional<std::int64_t> n = std::nullopt) const;
  bool uses_index() const noexcept { return uses_index_; }
  bool empty() const noexcept { return root_ == nullptr; }
  const std::string& text() const noexcept { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  bool uses_index_ = false;
};

}  // namespace recur
