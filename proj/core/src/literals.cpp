#include "recurlab/literals.hpp"

#include "recurlab/error.hpp"

namespace recur {

namespace {

Scalar constant(TextCursor& c) {
  const Expr e = Expr::parse(c);
  if (e.uses_index()) c.fail("expected a constant, found an expression in n");
  return e.eval();
}

/// A space name such as `l2`, `lp(3)`, `c0_Z`.
SpaceDescriptor space_arg(TextCursor& c) {
  c.skip_ws();
  const std::size_t start = c.position();
  c.identifier();
  if (c.consume('(')) c.balanced_until(')');
  const std::string_view raw = c.text().substr(start, c.position() - start);
  try {
    return parse_sequence_space(raw);
  } catch (const ConfigError& e) {
    c.reset(start);
    c.fail(e.message());
  }
}

std::string arg_name(TextCursor& c) {
  if (!c.at_named_arg()) c.fail("expected a named argument");
  std::string name = c.identifier();
  c.expect('=');
  return name;
}

std::vector<std::vector<Scalar>> matrix_rows(TextCursor& c) {
  std::vector<std::vector<Scalar>> rows;
  c.expect('[');
  do {
    c.expect('[');
    std::vector<Scalar> row;
    do {
      row.push_back(constant(c));
    } while (c.consume(','));
    c.expect(']');
    rows.push_back(std::move(row));
  } while (c.consume(','));
  c.expect(']');
  return rows;
}

OperatorPtr parse_shift(TextCursor& c) {
  std::optional<Expr> weights;
  bool bilateral = false;
  std::optional<SpaceDescriptor> space;
  do {
    const std::size_t at = c.position();
    const std::string name = arg_name(c);
    if (name == "weights") {
      weights = Expr::parse(c);
    } else if (name == "side") {
      const std::string side = c.identifier();
      if (side != "uni" && side != "bi") c.fail("side must be uni or bi");
      bilateral = side == "bi";
    } else if (name == "space") {
      space = space_arg(c);
    } else {
      c.reset(at);
      c.fail("unknown shift argument '" + name + "'");
    }
  } while (c.consume(','));
  if (!weights) c.fail("shift needs weights=");
  SpaceDescriptor s = space.value_or(SpaceDescriptor::lp(2, bilateral));
  if (s.over_integers != bilateral) c.fail("bilateral shifts need a _Z space and unilateral ones an N space");
  try {
    return std::make_shared<ShiftOperator>(*weights, bilateral, s);
  } catch (const ConfigError& e) {
    c.fail(e.what());
  }
}

OperatorPtr parse_diag(TextCursor& c) {
  if (c.consume_word("values")) {
    c.expect(':');
    std::vector<Scalar> values;
    do {
      values.push_back(constant(c));
    } while (c.consume(','));
    return std::make_shared<DiagonalOperator>(std::move(values));
  }
  Expr rule = Expr::parse(c);
  SpaceDescriptor space = SpaceDescriptor::lp(2);
  if (c.consume(',')) {
    if (arg_name(c) != "space") c.fail("diag accepts only space=");
    space = space_arg(c);
  }
  if (space.over_integers) c.fail("diagonal rules act on N-indexed spaces");
  return std::make_shared<DiagonalOperator>(std::move(rule), space);
}

OperatorPtr parse_comp(TextCursor& c) {
  std::optional<Scalar> a;
  std::optional<Scalar> b;
  std::optional<std::uint64_t> deg;
  std::vector<Rational> radii;
  bool more = true;
  while (more) {
    const std::size_t at = c.position();
    const std::string name = arg_name(c);
    more = false;
    if (name == "a") {
      a = constant(c);
    } else if (name == "b") {
      b = constant(c);
    } else if (name == "deg") {
      deg = c.natural();
    } else if (name == "radii") {
      radii.push_back(parse_rational(c.number_token()));
      while (c.consume(',')) {
        if (c.at_named_arg()) {
          more = true;
          break;
        }
        radii.push_back(parse_rational(c.number_token()));
      }
      continue;
    } else {
      c.reset(at);
      c.fail("unknown comp argument '" + name + "'");
    }
    more = c.consume(',');
  }
  if (!a || !deg) c.fail("comp needs a= and deg=");
  if (radii.empty()) radii.push_back(Rational(1));
  for (const auto& r : radii) {
    if (r <= 0) c.fail("radii must be positive");
  }
  return std::make_shared<CompositionOperator>(*a, b.value_or(Scalar(0)),
                                               SpaceDescriptor::polynomials(*deg, std::move(radii)));
}

}  // namespace

OperatorPtr parse_operator(TextCursor& c) {
  const std::size_t at = c.position();
  const std::string kind = c.identifier();
  if (kind == "rowrotation") {
    if (c.consume('(')) c.expect(')');
    return std::make_shared<RowRotationOperator>();
  }
  if (kind == "blockcycle") {
    SpaceDescriptor space = SpaceDescriptor::lp(2);
    if (c.consume('(')) {
      if (c.peek() != ')') {
        if (arg_name(c) != "space") c.fail("blockcycle accepts only space=");
        space = space_arg(c);
      }
      c.expect(')');
    }
    if (space.over_integers) c.fail("blockcycle acts on N-indexed spaces");
    return std::make_shared<BlockCycleOperator>(space);
  }
  c.expect('(');
  OperatorPtr op;
  if (kind == "matrix") {
    try {
      op = std::make_shared<MatrixOperator>(matrix_rows(c));
    } catch (const ConfigError& e) {
      if (e.line() > 0) throw;
      c.fail(e.what());
    }
  } else if (kind == "shift") {
    op = parse_shift(c);
  } else if (kind == "diag") {
    op = parse_diag(c);
  } else if (kind == "comp") {
    op = parse_comp(c);
  } else if (kind == "scaled" || kind == "power") {
    std::optional<Scalar> lambda;
    std::optional<std::uint64_t> p;
    OperatorPtr inner;
    do {
      const std::string name = arg_name(c);
      if (kind == "scaled" && name == "lambda") {
        lambda = constant(c);
      } else if (kind == "power" && name == "p") {
        p = c.natural();
      } else if (name == "op") {
        inner = parse_operator(c);
      } else {
        c.fail("unknown " + kind + " argument '" + name + "'");
      }
    } while (c.consume(','));
    if (!inner) c.fail(kind + " needs op=");
    if (kind == "scaled") {
      if (!lambda) c.fail("scaled needs lambda=");
      op = scaled(*lambda, inner);
    } else {
      if (!p || *p == 0) c.fail("power needs p >= 1");
      op = power(*p, inner);
    }
  } else {
    c.reset(at);
    c.fail("unknown operator '" + kind + "'");
  }
  c.expect(')');
  return op;
}

OperatorPtr parse_operator(std::string_view text) {
  TextCursor c(text);
  OperatorPtr op = parse_operator(c);
  if (!c.eof()) c.fail("unexpected trailing input after operator");
  return op;
}

StateVector block_cycle_test_vector(const SpaceDescriptor& space, std::uint64_t count) {
  if (count == 0 || count > 62) throw ConfigError("gvec needs 1 <= J <= 62");
  StateVector::Sparse coords;
  for (std::uint64_t j = 1; j <= count; ++j) {
    coords[static_cast<std::int64_t>(std::uint64_t{1} << j)] = Scalar(Rational(2, static_cast<long>(j)));
  }
  return StateVector::sparse(space, std::move(coords));
}

namespace {

StateVector parse_rowvec(TextCursor& c) {
  if (c.consume_word("special")) return row_rotation_special_vector();
  StateVector::Rows rows;
  std::optional<std::uint64_t> declared;
  std::vector<std::tuple<std::uint64_t, std::uint64_t, Scalar>> entries;
  do {
    const std::string section = c.identifier();
    c.expect(':');
    if (section == "entries") {
      if (c.peek() == ';' || c.peek() == ')') continue;
      do {
        const std::uint64_t k = c.natural();
        c.expect(':');
        const std::uint64_t j = c.natural();
        c.expect(':');
        entries.emplace_back(k, j, constant(c));
      } while (c.consume(','));
    } else if (section == "rows") {
      declared = c.natural();
    } else if (section == "tail") {
      do {
        StateVector::TailTerm t;
        t.coef = constant(c);
        c.expect('@');
        t.shift = c.natural();
        rows.tail.push_back(std::move(t));
      } while (c.consume(','));
    } else {
      c.fail("unknown rowvec section '" + section + "'");
    }
  } while (c.consume(';'));
  std::uint64_t count = declared.value_or(0);
  for (const auto& e : entries) {
    if (!declared) count = std::max(count, std::get<0>(e) + 1);
  }
  if (count > 62) c.fail("at most 62 materialized rows");
  rows.rows.resize(count);
  for (auto& [k, j, v] : entries) {
    if (k >= count) c.fail("row " + std::to_string(k) + " beyond the declared rows");
    rows.rows[k][j] = v;
  }
  try {
    return StateVector::row_blocks(std::move(rows));
  } catch (const Error& e) {
    c.fail(e.what());
  }
}

}  // namespace

StateVector parse_vector(std::string_view text, const SpaceDescriptor& space) {
  TextCursor c(text);
  const std::string kind = c.identifier();
  c.expect('(');
  StateVector x;
  try {
    if (kind == "rowvec") {
      if (space.kind != SpaceDescriptor::Kind::RowRotationFrechet) c.fail("rowvec needs the row-rotation space");
      x = parse_rowvec(c);
    } else if (kind == "gvec") {
      x = block_cycle_test_vector(space, c.natural());
    } else if (kind == "vec") {
      StateVector::Sparse coords;
      if (c.consume_word("sparse")) {
        c.expect(':');
        if (c.peek() != ')') {
          do {
            const std::int64_t i = c.integer();
            c.expect(':');
            const Scalar v = constant(c);
            if (coords.count(i) != 0) c.fail("index " + std::to_string(i) + " given twice");
            coords[i] = v;
          } while (c.consume(','));
        }
      } else if (c.consume_word("dense")) {
        c.expect(':');
        std::int64_t i = space.kind == SpaceDescriptor::Kind::PolynomialEntire ? 0 : 1;
        do {
          coords[i++] = constant(c);
        } while (c.consume(','));
      } else {
        c.fail("vec needs sparse: or dense:");
      }
      if (space.kind == SpaceDescriptor::Kind::RowRotationFrechet) c.fail("use rowvec in the row-rotation space");
      x = StateVector::sparse(space, std::move(coords));
    } else {
      c.fail("unknown vector literal '" + kind + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    c.fail(e.what());
  }
  c.expect(')');
  if (!c.eof()) c.fail("unexpected trailing input after vector");
  return x;
}

Scalar parse_scalar(std::string_view text) {
  TextCursor c(text);
  const Scalar v = constant(c);
  if (!c.eof()) c.fail("unexpected trailing input after scalar");
  return v;
}

std::vector<Scalar> parse_scalar_list(std::string_view text) {
  TextCursor c(text);
  std::vector<Scalar> out;
  do {
    out.push_back(constant(c));
  } while (c.consume(','));
  if (!c.eof()) c.fail("unexpected trailing input in list");
  return out;
}

}  // namespace recur
