#include "rectlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "rectlab/boolmat.hpp"
#include "rectlab/error.hpp"
#include "rectlab/rng.hpp"

namespace rectlab {

using json = nlohmann::ordered_json;

double resolve_p(std::size_t n, const PSpec& spec) {
  const double nd = static_cast<double>(n);
  double p = 0;
  switch (spec.kind) {
    case PKind::p: p = spec.value; break;
    case PKind::lambda: p = 1.0 - spec.value / nd; break;
    case PKind::pbar_exponent: p = 1.0 - std::pow(nd, -spec.value); break;
  }
  if (!(p > 0 && p < 1)) throw DomainError("grid value does not resolve to p in (0,1) at n=" + std::to_string(n));
  return p;
}

const std::vector<std::string>& experiment_catalog() {
  static const std::vector<std::string> names = {"chain_small", "thm1_shape", "cor1_size",     "fool_bounds",
                                                  "frc_bounds",  "log2_lb",    "ratio_gap", "permutahedron_scan"};
  return names;
}

void ExperimentConfig::validate() const {
  const auto& cat = experiment_catalog();
  if (std::find(cat.begin(), cat.end(), name) == cat.end()) throw DomainError("unknown experiment '" + name + "'");
  if (trials < 1) throw DomainError("config: trials must be >= 1");
  if (n_values.empty()) throw DomainError("config: n_values is empty");
  if (name == "permutahedron_scan") {
    for (std::size_t k : n_values)
      if (k < static_cast<std::size_t>(kPermutahedronMinK) || k > static_cast<std::size_t>(kPermutahedronMaxK))
        throw DomainError("config: permutahedron k must lie in [3,8]");
    return;
  }
  if (p_values.empty()) throw DomainError("config: no p, lambda or pbar_exp values");
  for (std::size_t n : n_values)
    for (const auto& s : p_values) resolve_p(n, s);
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    c.name = j.at("name").get<std::string>();
    c.n_values = j.at("n_values").get<std::vector<std::size_t>>();
    for (const auto& [key, kind] : {std::pair{"p", PKind::p}, std::pair{"lambda", PKind::lambda},
                                    std::pair{"pbar_exp", PKind::pbar_exponent}})
      if (j.contains(key))
        for (double v : j[key].get<std::vector<double>>()) c.p_values.push_back({kind, v});
    const auto trials = j.value("trials", std::int64_t{1});
    if (trials < 1) throw DomainError("config: trials must be >= 1");
    c.trials = static_cast<std::size_t>(trials);
    c.master_seed = j.value("master_seed", std::uint64_t{0});
    c.workers = j.value("workers", std::size_t{0});
    c.record_runtime = j.value("record_runtime", false);
    c.emit_dat = j.value("emit_dat", false);
    c.output_path = j.value("output_path", std::string{});
    if (j.contains("budgets")) {
      const auto& b = j["budgets"];
      auto& o = c.budgets;
      o.beam_width = b.value("beam_width", o.beam_width);
      if (b.contains("beam_depth")) o.beam_depth = b["beam_depth"].get<std::size_t>();
      o.fool_budget = b.value("fool_budget", o.fool_budget);
      o.cover_budget = b.value("cover_budget", o.cover_budget);
      o.rectangle_cap = b.value("rectangle_cap", o.rectangle_cap);
      o.search_time_s = b.value("search_time_s", o.search_time_s);
      o.restart_nodes = b.value("restart_nodes", o.restart_nodes);
    }
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      auto& o = c.tolerances;
      o.rel_lo = t.value("rel_lo", o.rel_lo);
      o.rel_hi = t.value("rel_hi", o.rel_hi);
      o.frc_ub_factor = t.value("frc_ub_factor", o.frc_ub_factor);
      o.supp_over_onerec_factor = t.value("supp_over_onerec_factor", o.supp_over_onerec_factor);
      o.distinct_rows_fraction = t.value("distinct_rows_fraction", o.distinct_rows_fraction);
      o.log2_fraction = t.value("log2_fraction", o.log2_fraction);
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

std::string_view to_string(PassFlag f) {
  switch (f) {
    case PassFlag::pass: return "1";
    case PassFlag::fail: return "0";
    case PassFlag::na: return "NA";
    case PassFlag::skipped: return "skipped";
  }
  return "NA";
}

std::size_t effective_workers(std::size_t requested) {
  std::size_t cap = 0;
  if (const char* env = std::getenv("RECTLAB_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) cap = static_cast<std::size_t>(v);
  }
  std::size_t w = requested ? requested : (cap ? cap : std::thread::hardware_concurrency());
  if (cap) w = std::min(w, cap);
  return std::max<std::size_t>(w, 1);
}

namespace {

struct Metric {
  std::string name;
  double value = 0;
  double lo = -kUnbounded;
  double hi = kUnbounded;
  PassFlag pass = PassFlag::na;
};

// pass/fail against whichever bounds are finite; NA when neither is.
Metric windowed(std::string name, double value, double lo, double hi) {
  Metric m{std::move(name), value, lo, hi, PassFlag::na};
  if (std::isfinite(lo) || std::isfinite(hi)) m.pass = (lo <= value && value <= hi) ? PassFlag::pass : PassFlag::fail;
  return m;
}

Metric report_only(std::string name, double value) { return {std::move(name), value, -kUnbounded, kUnbounded, PassFlag::na}; }

Metric skipped(std::string name) {
  return {std::move(name), std::numeric_limits<double>::quiet_NaN(), -kUnbounded, kUnbounded, PassFlag::skipped};
}

struct TrialContext {
  const ExperimentConfig& cfg;
  std::size_t n;
  double p;
  PSpec spec;
  std::uint64_t seed;

  BoolMatrix matrix() const { return gen_bernoulli({n, p, seed}); }
  std::size_t depth(double density) const { return cfg.budgets.beam_depth.value_or(default_beam_depth(density)); }
};

using Metrics = std::vector<Metric>;

Metrics chain_small(const TrialContext& t) {
  const BoolMatrix m = t.matrix();
  BoundsOptions o;
  o.beam_width = t.cfg.budgets.beam_width;
  o.beam_depth = t.cfg.budgets.beam_depth;
  o.fool_budget = t.cfg.budgets.fool_budget;
  o.cover_budget = t.cfg.budgets.cover_budget;
  o.rectangle_cap = t.cfg.budgets.rectangle_cap;
  const BoundsReport r = bounds_report(m, o);
  if (!r.frc_exact || !r.rc_exact || !r.onerec_exact)
    return {skipped("chain_violations"), skipped("frc"), skipped("frc_certified_ub")};
  const double frc = r.frc_exact->get_d();
  const double lb = std::max({static_cast<double>(r.lb_fool), r.lb_supp_over_onerec, r.lb_log2_rows});
  return {windowed("chain_violations", static_cast<double>(chain_violations(r).size()), 0, 0),
          windowed("frc", frc, lb, static_cast<double>(*r.rc_exact)),
          windowed("frc_certified_ub", r.ub_frc_certified, frc, kUnbounded)};
}

Metrics thm1_shape(const TrialContext& t) {
  const BoolMatrix m = t.matrix();
  const auto single = best_single_line(m).size;
  const auto bulky = best_bulky_beam(m, t.cfg.budgets.beam_width, t.depth(t.p)).size;
  const auto pred = predicted_onerec(t.n, t.p).as_bounds(t.cfg.tolerances.rel_lo, t.cfg.tolerances.rel_hi);
  return {windowed("single_ge_bulky", single >= bulky ? 1.0 : 0.0, 1.0, kUnbounded),
          report_only("bulky", static_cast<double>(bulky)),
          windowed("single_line", static_cast<double>(single), pred.lo, pred.hi)};
}

Metrics cor1_size(const TrialContext& t) {
  const BoolMatrix m = t.matrix();
  const auto pred = predicted_onerec(t.n, t.p);
  if (!pred.dense_value) throw DomainError("cor1_size needs p > 1/2");
  const double h = static_cast<double>(onerec_heuristic(m, t.cfg.budgets.beam_width, t.depth(t.p)).size);
  const double c = *pred.dense_value;
  return {windowed("onerec_ratio", h / c, t.cfg.tolerances.rel_lo, t.cfg.tolerances.rel_hi),
          report_only("onerec_heuristic", h)};
}

Metrics fool_bounds(const TrialContext& t) {
  const BoolMatrix m = t.matrix();
  if (t.spec.kind == PKind::pbar_exponent) {
    const auto pred = predicted_fool_bounds(t.n, t.p, t.spec.value);
    const double target = pred.exact.value_or(std::isfinite(pred.hi) ? pred.hi : 1.0);
    FoolSearchOptions so;
    so.target = static_cast<std::size_t>(std::llround(target));
    so.seed = t.seed;
    so.time_limit_s = t.cfg.budgets.search_time_s;
    so.restart_nodes = t.cfg.budgets.restart_nodes;
    const auto res = fool_random_search(m, so);
    return {windowed("fool_witness", static_cast<double>(res.best.size()), pred.lo, pred.hi),
            windowed("witness_valid", is_fooling_set(m, res.best).ok ? 1.0 : 0.0, 1.0, 1.0)};
  }
  const auto pred = predicted_fool_bounds(t.n, t.p);
  const auto c = fool_constructive(m, StableSetStrategy::min_degree);
  const double scale = pred.relative_to_matching ? static_cast<double>(c.matching_size) : 1.0;
  return {windowed("fool_constructive", static_cast<double>(c.fooling.size()), pred.lo * scale, pred.hi * scale)};
}

Metrics frc_bounds(const TrialContext& t) {
  const BoolMatrix m = t.matrix();
  const auto pred = predicted_cover_bounds(t.n, t.p).frc;
  const auto cert = frac_cover_certified_ub(m);
  const auto h = onerec_heuristic(m, t.cfg.budgets.beam_width, t.depth(t.p)).size;
  const auto est = lb_supp_over_onerec(m, h, false);
  return {windowed("frc_certified_ub", cert.bound, -kUnbounded, t.cfg.tolerances.frc_ub_factor * pred.hi),
          windowed("supp_over_onerec", est.value, t.cfg.tolerances.supp_over_onerec_factor * pred.lo, kUnbounded)};
}

Metrics log2_lb(const TrialContext& t) {
  const BoolMatrix m = t.matrix();
  const auto pred = predicted_cover_bounds(t.n, t.p).log2_lb;
  const double d = static_cast<double>(distinct_nonzero_rows(m));
  return {windowed("distinct_rows_fraction", d / static_cast<double>(t.n), t.cfg.tolerances.distinct_rows_fraction,
                   kUnbounded),
          windowed("log2_lb", log2_distinct_rows_lb(m), t.cfg.tolerances.log2_fraction * pred.lo, kUnbounded)};
}

Metrics ratio_gap(const TrialContext& t) {
  const BoolMatrix m = t.matrix();
  const auto cert = frac_cover_certified_ub(m);
  const RectangleSet rs = enumerate_maximal_rectangles(m, t.cfg.budgets.rectangle_cap);
  if (!rs.complete) return {skipped("rc_greedy"), report_only("frc_certified_ub", cert.bound), skipped("ratio")};
  const double g = static_cast<double>(cover_greedy(rs).size());
  return {report_only("rc_greedy", g), report_only("frc_certified_ub", cert.bound),
          report_only("ratio", cert.bound > 0 ? g / cert.bound : 0.0)};
}

template <class F>
void guarded(Metrics& out, const std::string& name, F&& f) {
  try {
    out.push_back(report_only(name, f()));
  } catch (const SizeGuardError&) {
    out.push_back(skipped(name));
  }
}

Metrics permutahedron_scan(const BoolMatrix& m, const ExperimentConfig& cfg, std::uint64_t seed) {
  Metrics out;
  const MatrixStats s = stats(m);
  out.push_back(report_only("rows", static_cast<double>(m.rows())));
  out.push_back(report_only("supp", static_cast<double>(s.supp_size)));
  out.push_back(report_only("z_max", static_cast<double>(s.z_max)));
  out.push_back(report_only("log2_rows", log2_distinct_rows_lb(m)));
  guarded(out, "onerec_exact", [&] { return static_cast<double>(onerec_exact(m).size); });
  out.push_back(report_only("onerec_heuristic",
                            static_cast<double>(onerec_heuristic(m, cfg.budgets.beam_width, 8).size)));
  guarded(out, "fool_exact", [&] {
    const auto f = fool_exact(m, cfg.budgets.fool_budget);
    if (f.lower_bound_only) throw SizeGuardError("fool node budget", "fool_constructive", "budget exhausted");
    return static_cast<double>(f.size);
  });
  out.push_back(report_only("fool_constructive",
                            static_cast<double>(fool_constructive(m, StableSetStrategy::min_degree, seed).fooling.size())));
  out.push_back(report_only("frc_certified_ub", frac_cover_certified_ub(m).bound));
  const RectangleSet rs = enumerate_maximal_rectangles(m, cfg.budgets.rectangle_cap);
  if (!rs.complete) {
    for (const char* name : {"maximal_rectangles", "rc_greedy", "rc_exact", "frc_exact"}) out.push_back(skipped(name));
    return out;
  }
  out.push_back(report_only("maximal_rectangles", static_cast<double>(rs.size())));
  out.push_back(report_only("rc_greedy", static_cast<double>(cover_greedy(rs).size())));
  guarded(out, "rc_exact", [&] { return static_cast<double>(cover_exact(rs, cfg.budgets.cover_budget).size()); });
  guarded(out, "frc_exact", [&] { return frac_cover_exact(rs).value.get_d(); });
  return out;
}

struct Job {
  std::size_t n;
  PSpec spec;
  std::size_t trial;
};

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const bool perm = config.name == "permutahedron_scan";

  std::vector<Job> jobs;
  for (std::size_t n : config.n_values) {
    const std::vector<PSpec> grid = perm ? std::vector<PSpec>{PSpec{}} : config.p_values;
    for (const auto& s : grid)
      for (std::size_t t = 0; t < config.trials; ++t) jobs.push_back({n, s, t});
  }

  std::vector<std::vector<TrialRecord>> slots(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      try {
        const std::uint64_t seed = derive_seed(config.master_seed, job.trial);
        const auto t0 = std::chrono::steady_clock::now();
        Metrics metrics;
        double p = 0;
        if (perm) {
          const BoolMatrix m = gen_permutahedron(static_cast<int>(job.n));
          p = static_cast<double>(m.support_size()) / static_cast<double>(m.rows() * m.cols());
          metrics = permutahedron_scan(m, config, seed);
        } else {
          p = resolve_p(job.n, job.spec);
          const TrialContext ctx{config, job.n, p, job.spec, seed};
          const std::string& e = config.name;
          metrics = e == "chain_small"  ? chain_small(ctx)
                    : e == "thm1_shape" ? thm1_shape(ctx)
                    : e == "cor1_size"  ? cor1_size(ctx)
                    : e == "fool_bounds" ? fool_bounds(ctx)
                    : e == "frc_bounds"  ? frc_bounds(ctx)
                    : e == "log2_lb"     ? log2_lb(ctx)
                                         : ratio_gap(ctx);
        }
        const double ms =
            config.record_runtime
                ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()
                : 0.0;
        for (auto& mt : metrics)
          slots[i].push_back(
              {config.name, job.n, p, job.trial, seed, std::move(mt.name), mt.value, mt.lo, mt.hi, mt.pass, ms});
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const std::size_t workers = std::min(effective_workers(config.workers), jobs.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  result.experiment = config.name;
  for (auto& s : slots) std::move(s.begin(), s.end(), std::back_inserter(result.records));
  result.cells = summarize(result.records);
  return result;
}

std::vector<SummaryCell> summarize(const std::vector<TrialRecord>& records) {
  struct Acc {
    SummaryCell cell;
    std::size_t passes = 0, verdicts = 0;
    std::vector<double> values;
  };
  std::vector<Acc> accs;
  std::map<std::tuple<std::size_t, double, std::string>, std::size_t> where;
  for (const auto& r : records) {
    const auto key = std::make_tuple(r.n, r.p, r.metric);
    auto it = where.find(key);
    if (it == where.end()) {
      it = where.emplace(key, accs.size()).first;
      accs.push_back({});
      accs.back().cell.n = r.n;
      accs.back().cell.p = r.p;
      accs.back().cell.metric = r.metric;
    }
    Acc& a = accs[it->second];
    ++a.cell.trials;
    if (r.pass == PassFlag::pass || r.pass == PassFlag::fail) {
      ++a.verdicts;
      a.passes += r.pass == PassFlag::pass;
    }
    if (r.pass != PassFlag::skipped && std::isfinite(r.value)) a.values.push_back(r.value);
  }
  std::vector<SummaryCell> out;
  for (auto& a : accs) {
    a.cell.pass_fraction = a.verdicts ? static_cast<double>(a.passes) / static_cast<double>(a.verdicts)
                                      : std::numeric_limits<double>::quiet_NaN();
    // Sorting makes the floating-point sums independent of record order.
    std::sort(a.values.begin(), a.values.end());
    const auto k = static_cast<double>(a.values.size());
    double sum = 0;
    for (double v : a.values) sum += v;
    a.cell.mean = a.values.empty() ? std::numeric_limits<double>::quiet_NaN() : sum / k;
    double ss = 0;
    for (double v : a.values) ss += (v - a.cell.mean) * (v - a.cell.mean);
    a.cell.stddev = a.values.size() > 1 ? std::sqrt(ss / (k - 1)) : 0.0;
    out.push_back(a.cell);
  }
  return out;
}

std::string to_csv(const std::vector<TrialRecord>& records) {
  std::string s = "experiment,n,p,trial,seed,metric,value,pred_lo,pred_hi,pass,runtime_ms\n";
  for (const auto& r : records) {
    s += r.experiment + ',' + std::to_string(r.n) + ',' + fmt(r.p) + ',' + std::to_string(r.trial) + ',' +
         std::to_string(r.seed) + ',' + r.metric + ',' + fmt(r.value) + ',' + fmt(r.pred_lo) + ',' + fmt(r.pred_hi) +
         ',' + std::string(to_string(r.pass)) + ',' + fmt(r.runtime_ms) + '\n';
  }
  return s;
}

std::string summary_json(const ExperimentResult& result) {
  json cells = json::array();
  for (const auto& c : result.cells) {
    json j;
    j["n"] = c.n;
    j["p"] = c.p;
    j["metric"] = c.metric;
    j["trials"] = c.trials;
    j["pass_fraction"] = std::isnan(c.pass_fraction) ? json(nullptr) : json(c.pass_fraction);
    j["mean"] = std::isnan(c.mean) ? json(nullptr) : json(c.mean);
    j["stddev"] = c.stddev;
    cells.push_back(std::move(j));
  }
  json out;
  out["experiment"] = result.experiment;
  out["cells"] = std::move(cells);
  return out.dump(2) + '\n';
}

std::string to_dat(const ExperimentResult& result, const ExperimentConfig& config) {
  const bool by_lambda = !config.p_values.empty() &&
                         std::all_of(config.p_values.begin(), config.p_values.end(),
                                     [](const PSpec& s) { return s.kind == PKind::lambda; });
  std::vector<std::string> metrics;
  for (const auto& c : result.cells)
    if (std::find(metrics.begin(), metrics.end(), c.metric) == metrics.end()) metrics.push_back(c.metric);
  std::string s;
  for (std::size_t b = 0; b < metrics.size(); ++b) {
    if (b) s += "\n\n";
    s += "# " + result.experiment + " " + metrics[b] + "\n# " + (by_lambda ? "lambda" : "n") + " mean lo hi\n";
    for (const auto& c : result.cells) {
      if (c.metric != metrics[b]) continue;
      double lo = -kUnbounded, hi = kUnbounded;
      for (const auto& r : result.records)
        if (r.n == c.n && r.p == c.p && r.metric == c.metric) {
          lo = r.pred_lo;
          hi = r.pred_hi;
          break;
        }
      const double x = by_lambda ? (1.0 - c.p) * static_cast<double>(c.n) : static_cast<double>(c.n);
      s += fmt(x) + ' ' + fmt(c.mean) + ' ' + fmt(lo) + ' ' + fmt(hi) + '\n';
    }
  }
  return s;
}

void write_experiment_outputs(const ExperimentResult& result, const ExperimentConfig& config) {
  if (config.output_path.empty()) throw DomainError("config: output_path is empty");
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
  };
  const auto parent = std::filesystem::path(config.output_path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  write(config.output_path, to_csv(result.records));
  write(config.output_path + ".summary.json", summary_json(result));
  if (config.emit_dat) write(config.output_path + ".dat", to_dat(result, config));
}

}  // namespace rectlab
