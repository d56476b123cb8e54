#include "recurlab/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "recurlab/error.hpp"
#include "recurlab/literals.hpp"

namespace recur {

const ConfigEntry* ConfigSection::find(std::string_view key) const {
  const ConfigEntry* found = nullptr;
  for (const auto& e : entries) {
    if (e.key == key) found = &e;
  }
  return found;
}

std::vector<const ConfigEntry*> ConfigSection::all(std::string_view key) const {
  std::vector<const ConfigEntry*> out;
  for (const auto& e : entries) {
    if (e.key == key) out.push_back(&e);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<ConfigSection> parse_sections(std::string_view text) {
  std::vector<ConfigSection> sections;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string_view t = trim(line);
    if (t.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const int indent = static_cast<int>(line.find(t.front())) + 1;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("section header must end with ']'", line_no, indent);
      const std::string_view inner = trim(t.substr(1, t.size() - 2));
      ConfigSection s;
      s.line = line_no;
      const auto space = inner.find_first_of(" \t");
      s.kind = std::string(inner.substr(0, space));
      if (space != std::string_view::npos) s.name = std::string(trim(inner.substr(space)));
      if (s.kind.empty()) throw ConfigError("empty section header", line_no, indent);
      sections.push_back(std::move(s));
    } else {
      const auto eq = t.find('=');
      if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no, indent);
      if (sections.empty()) throw ConfigError("entry outside any section", line_no, indent);
      ConfigEntry e;
      e.key = std::string(trim(t.substr(0, eq)));
      const std::string_view raw = t.substr(eq + 1);
      const std::string_view value = trim(raw);
      e.value = std::string(value);
      e.line = line_no;
      e.column = indent + static_cast<int>(eq + 1 + (value.empty() ? 0 : raw.find(value.front())));
      if (e.key.empty()) throw ConfigError("empty key", line_no, indent);
      sections.back().entries.push_back(std::move(e));
    }
    if (end == text.size()) break;
  }
  return sections;
}

Precision Precision::parse(std::string_view text) {
  Precision p;
  if (text == "exact") return p;
  if (text.rfind("float:", 0) == 0) {
    TextCursor c(text.substr(6));
    const std::uint64_t d = c.natural();
    if (!c.eof() || d < 1 || d > 17) throw ConfigError("float precision needs 1..17 digits");
    p.exact = false;
    p.digits = static_cast<int>(d);
    return p;
  }
  throw ConfigError("precision must be 'exact' or 'float:<digits>'");
}

std::string Precision::to_string() const { return exact ? "exact" : "float:" + std::to_string(digits); }

const std::vector<std::string>& check_kinds() {
  static const std::vector<std::string> kinds{"matrix",      "diagonal",     "kronecker",   "span_eigen",
                                              "ansari",      "leon_muller",  "shift_series", "cusp_family",
                                              "urec_avoids_periodic", "translation"};
  return kinds;
}

namespace {

/// Runs a value parser and moves its error position into the config file.
template <class F>
auto located(const ConfigEntry& e, F&& f) -> decltype(f(std::string_view(e.value))) {
  try {
    return f(std::string_view(e.value));
  } catch (const ConfigError& err) {
    const int column = err.line() > 0 ? e.column + err.column() - 1 : e.column;
    throw ConfigError(err.message(), e.line, column);
  } catch (const Error& err) {
    throw ConfigError(err.what(), e.line, e.column);
  }
}

class Reader {
 public:
  explicit Reader(const ConfigSection& s) : s_(s) {}

  const ConfigEntry* get(const std::string& key) {
    used_.insert(key);
    return s_.find(key);
  }
  std::vector<const ConfigEntry*> all(const std::string& key) {
    used_.insert(key);
    return s_.all(key);
  }
  const ConfigEntry& require(const std::string& key) {
    const auto* e = get(key);
    if (e == nullptr) throw ConfigError("[" + title() + "] needs '" + key + "'", s_.line, 1);
    return *e;
  }
  std::uint64_t natural(const std::string& key, std::optional<std::uint64_t> fallback = {}) {
    const auto* e = fallback ? get(key) : &require(key);
    if (e == nullptr) return *fallback;
    return located(*e, [](std::string_view v) {
      TextCursor c(v);
      const std::uint64_t n = c.natural();
      if (!c.eof()) c.fail("expected a natural number");
      return n;
    });
  }
  double real(const std::string& key, std::optional<double> fallback = {}) {
    const auto* e = fallback ? get(key) : &require(key);
    if (e == nullptr) return *fallback;
    return located(*e, [](std::string_view v) {
      const Scalar s = parse_scalar(v);
      const auto z = s.to_complex();
      if (z.imag() != 0) throw ConfigError("expected a real number");
      return z.real();
    });
  }
  std::string text(const std::string& key, std::optional<std::string> fallback = {}) {
    const auto* e = fallback ? get(key) : &require(key);
    return e == nullptr ? *fallback : e->value;
  }
  void finish() const {
    for (const auto& e : s_.entries) {
      if (used_.count(e.key) == 0) {
        throw ConfigError("unknown key '" + e.key + "' in [" + title() + "]", e.line, e.column);
      }
    }
  }
  std::string title() const { return s_.kind + (s_.name.empty() ? "" : " " + s_.name); }

 private:
  const ConfigSection& s_;
  std::set<std::string> used_;
};

std::vector<Rational> epsilon_list(std::string_view v) {
  std::vector<Rational> out;
  for (const auto& s : parse_scalar_list(v)) {
    const auto q = s.as_rational();
    if (!q || *q <= 0) throw ConfigError("epsilons must be positive rationals");
    out.push_back(*q);
  }
  return out;
}

std::vector<std::uint64_t> natural_list(std::string_view v) {
  TextCursor c(v);
  std::vector<std::uint64_t> out;
  do {
    out.push_back(c.natural());
  } while (c.consume(','));
  if (!c.eof()) c.fail("expected a comma-separated list of naturals");
  return out;
}

SweepSettings sweep_settings(Reader& r, std::uint64_t run_seed, bool& seed_given) {
  SweepSettings s;
  if (const auto* e = r.get("epsilons")) s.epsilons = located(*e, epsilon_list);
  if (const auto* e = r.get("seminorms")) s.seminorms = located(*e, natural_list);
  s.horizon = r.natural("horizon");
  if (s.horizon == 0) throw ConfigError("horizon must be at least 1", r.get("horizon")->line, r.get("horizon")->column);
  auto& t = s.thresholds;
  t.delta_low = r.real("delta_low", t.delta_low);
  t.delta_up = r.real("delta_up", t.delta_up);
  t.delta_bd = r.real("delta_bd", t.delta_bd);
  t.m_min = r.natural("m_min", t.m_min);
  if (r.get("burn_in") != nullptr) t.burn_in = r.natural("burn_in");
  if (r.get("margin") != nullptr) t.margin = r.natural("margin");
  t.ip_budget = r.natural("ip_budget", t.ip_budget);
  seed_given = r.get("seed") != nullptr;
  t.seed = r.natural("seed", run_seed);
  try {
    t.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("[" + r.title() + "] " + e.message());
  }
  return s;
}

OperatorPtr operator_entry(Reader& r, const std::string& key = "operator") {
  return located(r.require(key), [](std::string_view v) { return parse_operator(v); });
}

StateVector vector_entry(const ConfigEntry& e, const SpaceDescriptor& space) {
  return located(e, [&](std::string_view v) { return parse_vector(v, space); });
}

StateVector with_precision(const StateVector& x, const Precision& p) { return p.exact ? x : x.to_inexact(); }

/// Re-seeds the thresholds when the section did not fix its own seed.
SweepSettings seeded(SweepSettings s, bool seed_given, const RunContext& ctx) {
  if (!seed_given) s.thresholds.seed = ctx.seed;
  return s;
}

template <class T>
std::shared_ptr<const T> require_kind(const OperatorPtr& op, const ConfigEntry& e, const std::string& what) {
  auto cast = std::dynamic_pointer_cast<const T>(op);
  if (!cast) throw ConfigError("this check needs " + what, e.line, e.column);
  return cast;
}

CheckSpec build_check(const ConfigSection& sec, std::uint64_t run_seed) {
  Reader r(sec);
  CheckSpec spec;
  spec.name = sec.name;
  spec.line = sec.line;
  spec.kind = r.text("kind");
  spec.suite = r.text("suite", std::string("main"));
  const std::string& kind = spec.kind;

  if (kind == "matrix") {
    const auto& e = r.require("operator");
    const auto m = require_kind<MatrixOperator>(operator_entry(r), e, "a matrix operator");
    bool seed_given = false;
    const auto s = sweep_settings(r, run_seed, seed_given);
    spec.run = [m, s, seed_given](const RunContext& ctx) {
      return matrix_recurrence_check(*m, seeded(s, seed_given, ctx));
    };
  } else if (kind == "diagonal") {
    const auto& e = r.require("operator");
    const auto d = require_kind<DiagonalOperator>(operator_entry(r), e, "a diagonal operator");
    const std::uint64_t sample = r.natural("sample", 5);
    const double tol = r.real("tolerance", 1e-10);
    bool seed_given = false;
    const auto s = sweep_settings(r, run_seed, seed_given);
    spec.run = [d, sample, tol, s, seed_given](const RunContext& ctx) {
      return diagonal_recurrence_check(*d, sample, seeded(s, seed_given, ctx), tol);
    };
  } else if (kind == "kronecker") {
    const auto lambdas = located(r.require("lambdas"), parse_scalar_list);
    const double eps = r.real("epsilon");
    const std::uint64_t h = r.natural("horizon");
    IpProbeOptions ip;
    ip.budget = r.natural("ip_budget", ip.budget);
    const bool seed_given = r.get("seed") != nullptr;
    ip.seed = r.natural("seed", run_seed);
    spec.run = [lambdas, eps, h, ip, seed_given](const RunContext& ctx) {
      IpProbeOptions o = ip;
      if (!seed_given) o.seed = ctx.seed;
      return kronecker_check(lambdas, eps, h, o);
    };
  } else if (kind == "span_eigen") {
    const auto op = operator_entry(r);
    std::vector<Eigenpair> pairs;
    for (const auto* e : r.all("pair")) {
      pairs.push_back(located(*e, [&](std::string_view v) {
        const auto bar = v.find('|');
        if (bar == std::string_view::npos) throw ConfigError("pair needs 'lambda | vector'");
        return Eigenpair{parse_scalar(v.substr(0, bar)), parse_vector(trim(v.substr(bar + 1)), op->space())};
      }));
    }
    if (pairs.empty()) throw ConfigError("span_eigen needs at least one 'pair ='", sec.line, 1);
    const auto coefficients = located(r.require("coefficients"), parse_scalar_list);
    bool seed_given = false;
    const auto s = sweep_settings(r, run_seed, seed_given);
    spec.run = [op, pairs, coefficients, s, seed_given](const RunContext& ctx) {
      std::vector<Eigenpair> ps = pairs;
      for (auto& p : ps) p.vector = with_precision(p.vector, ctx.precision);
      return span_eigenvector_check(*op, ps, coefficients, seeded(s, seed_given, ctx));
    };
  } else if (kind == "ansari" || kind == "leon_muller" || kind == "urec_avoids_periodic") {
    const auto op = operator_entry(r);
    const auto x = vector_entry(r.require("vector"), op->space());
    bool seed_given = false;
    if (kind == "ansari") {
      const std::uint64_t p = r.natural("p");
      const auto s = sweep_settings(r, run_seed, seed_given);
      spec.run = [op, x, p, s, seed_given](const RunContext& ctx) {
        return ansari_check(op, with_precision(x, ctx.precision), p, seeded(s, seed_given, ctx));
      };
    } else if (kind == "leon_muller") {
      const Scalar lambda = located(r.require("lambda"), parse_scalar);
      const auto s = sweep_settings(r, run_seed, seed_given);
      spec.run = [op, x, lambda, s, seed_given](const RunContext& ctx) {
        return leon_muller_check(op, with_precision(x, ctx.precision), lambda, seeded(s, seed_given, ctx));
      };
    } else {
      const auto y = vector_entry(r.require("periodic"), op->space());
      const auto s = sweep_settings(r, run_seed, seed_given);
      spec.run = [op, x, y, s, seed_given](const RunContext& ctx) {
        return urec_avoids_periodic_check(*op, with_precision(x, ctx.precision), y, seeded(s, seed_given, ctx));
      };
    }
  } else if (kind == "shift_series") {
    const Expr weights = located(r.require("weights"), [](std::string_view v) { return Expr::parse(v); });
    const std::uint64_t h = r.natural("horizon");
    const auto set = located(r.require("set"), [h](std::string_view v) { return window_from_expression(v, h); });
    SeriesOptions o;
    o.divergence_threshold = r.real("threshold", o.divergence_threshold);
    o.tail_tolerance = r.real("tail_tolerance", o.tail_tolerance);
    if (const auto* e = r.get("space")) o.space = located(*e, parse_sequence_space);
    std::optional<SeriesVerdict> expect;
    if (const auto* e = r.get("expect")) {
      if (e->value == "Converging") {
        expect = SeriesVerdict::Converging;
      } else if (e->value == "Diverging") {
        expect = SeriesVerdict::Diverging;
      } else {
        throw ConfigError("expect must be Converging or Diverging", e->line, e->column);
      }
    }
    spec.run = [weights, set, o, expect](const RunContext&) { return shift_series_check(weights, set, o, expect); };
  } else if (kind == "cusp_family") {
    CuspFamilyOptions o;
    const std::string family = r.text("family");
    o.trials = r.natural("trials", o.trials);
    o.horizon = r.natural("horizon", o.horizon);
    o.max_pieces = r.natural("max_pieces", o.max_pieces);
    o.max_shift = r.natural("max_shift", o.max_shift);
    o.delta = r.real("delta", o.delta);
    o.slack = r.real("slack", o.slack);
    if (o.horizon == 0 || o.max_pieces == 0) {
      throw ConfigError("cusp_family needs horizon, max_pieces >= 1", sec.line, 1);
    }
    const bool seed_given = r.get("seed") != nullptr;
    o.seed = r.natural("seed", run_seed);
    spec.run = [family, o, seed_given](const RunContext& ctx) {
      CuspFamilyOptions oo = o;
      if (!seed_given) oo.seed = ctx.seed;
      oo.thresholds.seed = oo.seed;
      return cusp_family_check(family, oo);
    };
  } else if (kind == "translation") {
    const std::uint64_t h = r.natural("horizon");
    const auto set = located(r.require("set"), [h](std::string_view v) { return window_from_expression(v, h); });
    const std::uint64_t m = r.natural("shift");
    std::optional<std::uint64_t> burn_in;
    if (r.get("burn_in") != nullptr) burn_in = r.natural("burn_in");
    spec.run = [set, m, burn_in](const RunContext&) { return translation_check(set, m, burn_in); };
  } else {
    const auto* e = r.get("kind");
    throw ConfigError("unknown check kind '" + kind + "'", e->line, e->column);
  }
  r.finish();
  return spec;
}

ExperimentSpec build_experiment(const ConfigSection& sec, std::uint64_t run_seed) {
  Reader r(sec);
  ExperimentSpec x;
  x.name = sec.name;
  x.line = sec.line;
  x.op = operator_entry(r);
  const auto vectors = r.all("vector");
  if (vectors.empty()) throw ConfigError("[" + r.title() + "] needs at least one 'vector ='", sec.line, 1);
  for (const auto* e : vectors) x.vectors.push_back(vector_entry(*e, x.op->space()));
  x.settings = sweep_settings(r, run_seed, x.seed_given);
  if (r.get("growth") != nullptr) x.growth = r.natural("growth");
  if (r.get("refute_delta") != nullptr) x.refute_delta = r.real("refute_delta");
  r.finish();
  return x;
}

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (!is_ident_char(c) && c != '-' && c != '.') return false;
  }
  return name != "." && name != "..";
}

}  // namespace

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  const auto sections = parse_sections(text);
  for (const auto& sec : sections) {
    if (sec.kind == "run") {
      Reader r(sec);
      cfg.seed = r.natural("seed", 0);
      if (const auto* e = r.get("precision")) cfg.precision = located(*e, Precision::parse);
      if (r.get("workers") != nullptr) cfg.workers = r.natural("workers");
      r.finish();
    }
  }
  std::set<std::string> names;
  for (const auto& sec : sections) {
    if (sec.kind == "run") continue;
    if (sec.kind != "experiment" && sec.kind != "check") {
      throw ConfigError("unknown section kind '" + sec.kind + "'", sec.line, 2);
    }
    if (!valid_name(sec.name)) throw ConfigError("section name must be [A-Za-z0-9_.-]+", sec.line, 2);
    if (!names.insert(sec.kind + "/" + sec.name).second) {
      throw ConfigError("duplicate " + sec.kind + " name '" + sec.name + "'", sec.line, 2);
    }
    if (sec.kind == "experiment") {
      cfg.experiments.push_back(build_experiment(sec, cfg.seed));
    } else {
      cfg.checks.push_back(build_check(sec, cfg.seed));
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace recur
