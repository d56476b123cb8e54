#include "recurlab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <thread>

#include "recurlab/error.hpp"
#include "recurlab/literals.hpp"

namespace recur {

namespace {

struct FileOut {
  std::filesystem::path path;
  std::string content;
};

struct JobResult {
  SummaryRow row;
  std::vector<FileOut> files;
};

std::string one_line(std::string s) {
  for (auto& c : s) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::string curve_tsv(const std::string& header, const std::vector<std::pair<std::uint64_t, double>>& pts, int digits) {
  std::string s = header + "\n";
  for (const auto& [n, v] : pts) s += std::to_string(n) + "\t" + format_double(v, digits) + "\n";
  return s;
}

std::string gap_histogram(const IndexWindow& w) {
  std::map<std::uint64_t, std::uint64_t> counts;
  const auto& e = w.elements();
  for (std::size_t i = 1; i < e.size(); ++i) ++counts[e[i] - e[i - 1]];
  std::string s = "gap\tcount\n";
  for (const auto& [g, c] : counts) s += std::to_string(g) + "\t" + std::to_string(c) + "\n";
  return s;
}

std::string refutation_record(const RrecRefutation& r) {
  std::string s = "applicable=" + std::string(r.applicable ? "1" : "0") + "\n";
  if (!r.reason.empty()) s += "reason=" + r.reason + "\n";
  s += "j=" + std::to_string(r.j) + "\nn1=" + std::to_string(r.n1) + "\n";
  s += "pairs_verified=" + std::to_string(r.pairs_verified) + "\n";
  s += "max_returns_per_window=" + std::to_string(r.max_returns_per_window) + "\n";
  s += "density_bound=" + format_double(r.density_bound, 10) + "\n";
  return s;
}

JobResult run_experiment(const ExperimentSpec& spec, const RunContext& ctx) {
  JobResult out;
  out.row.kind = "experiment";
  out.row.suite = "-";
  out.row.name = spec.name;
  const std::filesystem::path dir = std::filesystem::path("experiments") / spec.name;
  SweepSettings s = spec.settings;
  if (!spec.seed_given) s.thresholds.seed = ctx.seed;
  const int digits = ctx.precision.digits;
  std::string detail;
  for (std::size_t i = 0; i < spec.vectors.size(); ++i) {
    const StateVector x = ctx.precision.exact ? spec.vectors[i] : spec.vectors[i].to_inexact();
    const std::filesystem::path vdir = dir / ("v" + std::to_string(i));
    auto records = sweep(*spec.op, x, s);
    for (auto& r : records) r.vector_literal = x.to_string(digits);
    const auto verdict = classify(records, s.thresholds);
    std::string v = "experiment=" + spec.name + "\noperator=" + spec.op->literal() + "\nvector=" + x.to_string(digits) +
                    "\nprecision=" + ctx.precision.to_string() + "\nseminorms=";
    for (std::size_t k = 0; k < s.seminorms.size(); ++k) v += (k > 0 ? "," : "") + std::to_string(s.seminorms[k]);
    v += "\n" + verdict.to_record();
    for (std::size_t k = 0; k < records.size(); ++k) {
      const std::string tag = std::to_string(k);
      const auto& r = records[k];
      const auto report = density_report(r.window, s.thresholds.burn_in_for(r.horizon));
      v += "curves eps=" + r.epsilon.get_str() + " returns=returns_" + tag + ".txt density=density_" + tag +
           ".tsv banach=banach_" + tag + ".tsv gaps=gaps_" + tag + ".tsv\n";
      out.files.push_back({vdir / ("returns_" + tag + ".txt"), r.serialize()});
      out.files.push_back({vdir / ("density_" + tag + ".tsv"), curve_tsv("n\tdensity", report.running_density_curve, digits)});
      out.files.push_back({vdir / ("banach_" + tag + ".tsv"), curve_tsv("L\tmax_window_density", report.banach_curve, digits)});
      out.files.push_back({vdir / ("gaps_" + tag + ".tsv"), gap_histogram(r.window)});
    }
    if (spec.growth) {
      const auto g = orbit_growth(*spec.op, x, *spec.growth, s.horizon);
      v += "growth=" + std::string(g.verdict == GrowthCurve::Verdict::GrowthWitness ? "GrowthWitness" : "BoundedWithin") +
           " bound=" + format_double(g.bound, digits) + " curve=growth.tsv\n";
      out.files.push_back({vdir / "growth.tsv", curve_tsv("n\tseminorm", g.samples, digits)});
    }
    if (spec.refute_delta) {
      const auto ref = blockcycle_rrec_refutation(x, *spec.refute_delta);
      v += "refutation=" + std::string(ref.applicable ? "certified" : "inapplicable") + " file=refutation.txt\n";
      out.files.push_back({vdir / "refutation.txt", refutation_record(ref)});
    }
    out.files.push_back({vdir / "verdict.txt", v});
    detail += (detail.empty() ? "" : " ") + ("v" + std::to_string(i) + "=" + verdict.label_text());
  }
  out.row.status = "Done";
  out.row.detail = detail;
  return out;
}

JobResult run_check(const CheckSpec& spec, const RunContext& ctx) {
  JobResult out;
  out.row.kind = "check";
  out.row.suite = spec.suite;
  out.row.name = spec.name;
  const CheckOutcome o = spec.run(ctx);
  out.row.status = to_string(o.status);
  std::string detail = o.reason;
  for (const auto& [k, v] : o.metrics) detail += (detail.empty() ? "" : " ") + k + "=" + v;
  out.row.detail = detail;
  out.files.push_back({std::filesystem::path("checks") / (spec.name + ".txt"),
                       "kind=" + spec.kind + "\nsuite=" + spec.suite + "\n" + o.to_record()});
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << content;
}

}  // namespace

bool RunSummary::any_failure() const {
  return std::any_of(rows.begin(), rows.end(), [](const SummaryRow& r) { return r.status == "Fail" || r.status == "Failed"; });
}

std::string RunSummary::table() const {
  std::string s = "kind\tsuite\tname\tstatus\tdetail\n";
  for (const auto& r : rows) {
    s += r.kind + "\t" + r.suite + "\t" + r.name + "\t" + r.status + "\t" + one_line(r.detail) + "\n";
  }
  return s;
}

RunSummary run(const RunConfig& config, const RunOptions& options) {
  RunContext ctx;
  ctx.seed = options.seed.value_or(config.seed);
  ctx.precision = options.precision.value_or(config.precision);
  const std::size_t jobs = config.experiments.size() + config.checks.size();
  std::vector<JobResult> results(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) {
      const bool experiment = i < config.experiments.size();
      try {
        results[i] = experiment ? run_experiment(config.experiments[i], ctx)
                                : run_check(config.checks[i - config.experiments.size()], ctx);
      } catch (const std::exception& e) {
        JobResult failed;
        failed.row.kind = experiment ? "experiment" : "check";
        failed.row.suite = experiment ? "-" : config.checks[i - config.experiments.size()].suite;
        failed.row.name = experiment ? config.experiments[i].name : config.checks[i - config.experiments.size()].name;
        failed.row.status = experiment ? "Failed" : "Fail";
        failed.row.detail = e.what();
        results[i] = std::move(failed);
      }
    }
  };
  std::size_t n = options.workers.value_or(config.workers.value_or(std::max(1u, std::thread::hardware_concurrency())));
  n = std::max<std::size_t>(1, std::min(n, jobs));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Single collector, declared order.
  RunSummary summary;
  for (auto& r : results) {
    for (const auto& f : r.files) write_file(options.out / f.path, f.content);
    summary.rows.push_back(std::move(r.row));
  }
  write_file(options.out / "summary.tsv", summary.table());
  return summary;
}

std::string describe_literal(std::string_view literal) {
  const OperatorPtr op = parse_operator(literal);
  std::string s = "literal: " + op->literal() + "\n" + op->describe();
  if (const auto* m = dynamic_cast<const MatrixOperator*>(op.get())) {
    const auto e = eigen_structure(*m);
    s += "eigenvalues:";
    for (const auto& c : e.eigenvalues) {
      s += " " + Scalar::inexact(c.value).to_string(10) + " (alg " + std::to_string(c.algebraic) + ", geo " +
           std::to_string(c.geometric) + ")";
    }
    s += "\ndiagonalizable: " + std::string(e.diagonalizable ? "yes" : "no");
    s += "\nunimodular: " + std::string(e.unimodular ? "yes" : "no");
    s += "\ncriterion: " + std::string(e.diagonalizable && e.unimodular ? "recurrent" : "not recurrent") + "\n";
  } else if (const auto* d = dynamic_cast<const DiagonalOperator*>(op.get())) {
    const std::int64_t count = d->is_finite() ? static_cast<std::int64_t>(d->values().size()) : 8;
    bool unimodular = true;
    s += "eigenvalues:";
    for (std::int64_t n = 1; n <= count; ++n) {
      const Scalar l = d->eigenvalue(n);
      s += " " + l.to_string(10);
      const auto a2 = l.abs2_exact();
      unimodular = unimodular && (a2 ? *a2 == 1 : std::abs(l.abs() - 1) <= 1e-10);
    }
    s += "\ncriterion on " + std::string(d->is_finite() ? "all" : "the first 8") +
         " eigenvalues: " + (unimodular ? "recurrent" : "not recurrent") + "\n";
  }
  return s;
}

}  // namespace recur
