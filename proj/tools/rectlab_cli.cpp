// rectlab: generators, exact solvers, bounds and experiments over 0/1 matrices.
#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rectlab/boolmat.hpp"
#include "rectlab/cover.hpp"
#include "rectlab/error.hpp"
#include "rectlab/experiments.hpp"
#include "rectlab/fooling.hpp"
#include "rectlab/rect.hpp"

using json = nlohmann::ordered_json;
using namespace rectlab;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;

struct Options {
  std::optional<std::size_t> n;
  std::optional<double> p, lambda, pbar_exp, q;
  std::uint64_t seed = 0;
  std::optional<std::size_t> trials;
  std::size_t beam = kDefaultBeamWidth;
  std::optional<std::uint64_t> budget;
  std::string output;
  std::string input;
  bool witness = false;
  bool pretty = false;
  bool all = false;
  bool onerec = false, fool = false, rc = false, frc = false;
  bool bernoulli = false;
  std::optional<int> permutahedron;
};

json to_json(const Rectangle& r) { return {{"rows", r.rows}, {"cols", r.cols}}; }

json to_json(const FoolingSet& f) {
  json a = json::array();
  for (const auto& e : f.entries) a.push_back({e.row, e.col});
  return a;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const PredictedBounds& b) {
  json j{{"regime", b.regime}, {"lo", number(b.lo)}, {"hi", number(b.hi)}};
  j["exact"] = b.exact ? json(*b.exact) : json(nullptr);
  j["order_only"] = b.order_only;
  j["relative_to_matching"] = b.relative_to_matching;
  if (!b.note.empty()) j["note"] = b.note;
  return j;
}

void emit(const json& j, bool pretty) {
  if (!pretty) {
    std::cout << j.dump() << '\n';
    return;
  }
  std::size_t width = 0;
  for (const auto& [k, v] : j.items()) width = std::max(width, k.size());
  for (const auto& [k, v] : j.items())
    std::cout << k << std::string(width - k.size() + 2, ' ') << (v.is_string() ? v.get<std::string>() : v.dump())
              << '\n';
}

std::optional<double> resolve_grid_p(const Options& o) {
  if (!o.n) return std::nullopt;
  if (o.p) return o.p;
  if (o.lambda) return resolve_p(*o.n, {PKind::lambda, *o.lambda});
  if (o.pbar_exp) return resolve_p(*o.n, {PKind::pbar_exponent, *o.pbar_exp});
  return std::nullopt;
}

BoolMatrix generated(const Options& o) {
  if (o.permutahedron) return gen_permutahedron(*o.permutahedron);
  const auto p = resolve_grid_p(o);
  if (!o.n || !p) throw DomainError("need --n with one of --p, --lambda, --pbar-exp (or --permutahedron)");
  if (!(*p > 0 && *p < 1)) throw DomainError("p must lie in (0,1)");
  return gen_bernoulli({*o.n, *p, o.seed});
}

BoolMatrix input_matrix(const Options& o) {
  if (o.input.empty()) return generated(o);
  if (o.input == "-") return read_matrix(std::cin);
  return read_matrix(std::filesystem::path(o.input));
}

int cmd_gen(const Options& o) {
  const BoolMatrix m = generated(o);
  if (o.output.empty() || o.output == "-")
    write_matrix(m, std::cout);
  else
    write_matrix(m, std::filesystem::path(o.output));
  return 0;
}

int cmd_stats(const Options& o) {
  const BoolMatrix m = input_matrix(o);
  const MatrixStats s = stats(m);
  emit({{"rows", m.rows()},
        {"cols", m.cols()},
        {"supp", s.supp_size},
        {"z_max", s.z_max},
        {"z_per_column", s.z_per_column},
        {"distinct_nonzero_rows", s.distinct_nonzero_rows},
        {"log2_lb", log2_distinct_rows_lb(m)}},
       o.pretty);
  return 0;
}

int cmd_exact(const Options& o) {
  const BoolMatrix m = input_matrix(o);
  const bool any = o.onerec || o.fool || o.rc || o.frc;
  const bool all = o.all || !any;
  json out, witness;
  if (all || o.onerec) {
    const auto r = onerec_exact(m);
    out["onerec"] = r.size;
    witness["onerec"] = to_json(r.witness);
  }
  if (all || o.fool) {
    const auto f = fool_exact(m, o.budget.value_or(kDefaultFoolBudget));
    if (f.lower_bound_only)
      throw SizeGuardError("fool node budget", "construct (fool_constructive)",
                           "fool_exact ran out of budget at size " + std::to_string(f.size));
    out["fool"] = f.size;
    witness["fool"] = to_json(f.witness);
  }
  if (all || o.rc || o.frc) {
    const RectangleSet rs = enumerate_maximal_rectangles(m);
    if (all || o.rc) {
      const auto c = cover_exact(rs, o.budget.value_or(kDefaultCoverBudget));
      out["rc"] = c.size();
      json rects = json::array();
      for (std::size_t i : c.chosen) rects.push_back(to_json(rs.rects[i]));
      witness["rc"] = rects;
    }
    if (all || o.frc) {
      const auto f = frac_cover_exact(rs);
      out["frc"] = f.value.get_d();
      out["frc_rational"] = to_string(f.value);
      json rects = json::array(), weights = json::array();
      for (std::size_t i = 0; i < rs.size(); ++i) {
        if (sgn(f.weights[i]) == 0) continue;
        rects.push_back(to_json(rs.rects[i]));
        weights.push_back(to_string(f.weights[i]));
      }
      witness["frc"] = {{"rects", rects}, {"weights", weights}, {"value", to_string(f.value)}};
    }
  }
  if (o.witness) out["witness"] = witness;
  emit(out, o.pretty);
  return 0;
}

int cmd_bounds(const Options& o) {
  const BoolMatrix m = input_matrix(o);
  BoundsOptions bo;
  bo.beam_width = o.beam;
  bo.q = o.q;
  if (o.budget) bo.fool_budget = bo.cover_budget = *o.budget;
  const BoundsReport r = bounds_report(m, bo);
  auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
  json out{{"rows", m.rows()},
           {"cols", m.cols()},
           {"supp", r.supp_size},
           {"lb_supp_over_onerec", r.lb_supp_over_onerec},
           {"lb_supp_over_onerec_is_bound", r.lb_supp_over_onerec_is_bound},
           {"lb_fool", r.lb_fool},
           {"lb_fool_exact", r.lb_fool_exact},
           {"lb_log2_rows", r.lb_log2_rows},
           {"ub_frc_certified", r.ub_frc_certified},
           {"q_used", r.q_used},
           {"z_max", r.z_max},
           {"onerec_exact", opt(r.onerec_exact)},
           {"onerec_heuristic", r.onerec_heuristic},
           {"frc_exact", r.frc_exact ? json(r.frc_exact->get_d()) : json(nullptr)},
           {"frc_exact_rational", r.frc_exact ? json(to_string(*r.frc_exact)) : json(nullptr)},
           {"rc_exact", opt(r.rc_exact)},
           {"rc_greedy", opt(r.rc_greedy)},
           {"chain_violations", chain_violations(r)},
           {"skipped", r.skipped}};
  if (o.input.empty() && !o.permutahedron) {
    const std::size_t n = *o.n;
    const double p = *resolve_grid_p(o);
    json pred;
    try {
      pred["onerec"] = to_json(predicted_onerec(n, p).as_bounds(1.0, 1.0));
    } catch (const DomainError&) {
      pred["onerec"] = nullptr;
    }
    pred["fool"] = to_json(predicted_fool_bounds(n, p, o.pbar_exp));
    const auto c = predicted_cover_bounds(n, p);
    pred["frc"] = to_json(c.frc);
    pred["rc"] = to_json(c.rc);
    pred["log2_lb"] = to_json(c.log2_lb);
    out["predicted"] = pred;
  }
  emit(out, o.pretty);
  return 0;
}

int cmd_construct(const Options& o) {
  const BoolMatrix m = input_matrix(o);
  const auto f = fool_constructive(m, StableSetStrategy::min_degree, o.seed);
  const auto cert = frac_cover_certified_ub(m, o.q);
  json out{{"fool_constructive", f.fooling.size()},
           {"fool_verified", is_fooling_set(m, f.fooling).ok},
           {"matching_size", f.matching_size},
           {"conflict_edges", f.conflict_edges},
           {"turan_bound", f.turan},
           {"frc_certified_ub", cert.bound},
           {"frc_certified_ub_rational", cert.exact ? json(to_string(*cert.exact)) : json(nullptr)},
           {"q_used", cert.q_used},
           {"z_max", cert.z_max}};
  const RectangleSet rs = enumerate_maximal_rectangles(m);
  json wit{{"fool", to_json(f.fooling)}};
  if (rs.complete) {
    const auto g = cover_greedy(rs);
    out["rc_greedy"] = g.size();
    json rects = json::array();
    for (std::size_t i : g.chosen) rects.push_back(to_json(rs.rects[i]));
    wit["rc_greedy"] = rects;
  } else {
    out["rc_greedy"] = nullptr;
    out["note"] = "maximal rectangle enumeration hit the cap";
  }
  if (o.witness) out["witness"] = wit;
  emit(out, o.pretty);
  return 0;
}

int cmd_experiment(const Options& o) {
  ExperimentConfig c = load_experiment_config(o.input);
  if (!o.output.empty()) c.output_path = o.output;
  if (o.trials) c.trials = *o.trials;
  c.validate();
  const auto r = run_experiment(c);
  if (!c.output_path.empty()) write_experiment_outputs(r, c);
  const json summary = json::parse(summary_json(r));
  if (o.pretty)
    std::cout << summary.dump(2) << '\n';
  else
    std::cout << summary.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rectlab: rectangle covers, fooling sets and fractional covers of 0/1 matrices"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_common = [&](CLI::App* s) { s->add_flag("--pretty", o.pretty, "Human-readable output"); };
  auto add_generator = [&](CLI::App* s) {
    s->add_option("--n", o.n, "Matrix side");
    auto* p = s->add_option("--p", o.p, "Probability of a 1");
    auto* l = s->add_option("--lambda", o.lambda, "Expected zeros per line; p = 1 - lambda/n");
    auto* a = s->add_option("--pbar-exp", o.pbar_exp, "1 - p = n^-a");
    p->excludes(l)->excludes(a);
    l->excludes(a);
    s->add_option("--seed", o.seed, "Random seed");
    auto* b = s->add_flag("--bernoulli", o.bernoulli, "Bernoulli(p) matrix (default)");
    auto* k = s->add_option("--permutahedron", o.permutahedron, "Permutahedron slack matrix for k in [3,8]");
    b->excludes(k);
    k->excludes(p)->excludes(l)->excludes(a);
  };

  auto* gen = app.add_subcommand("gen", "Write a bmat file");
  add_generator(gen);
  gen->add_option("-o,--output", o.output, "Output path (stdout if omitted)");

  auto* st = app.add_subcommand("stats", "Support size, zeros per column and the distinct-rows bound");
  st->add_option("input", o.input, "bmat file, - for stdin");
  add_generator(st);
  add_common(st);

  auto* ex = app.add_subcommand("exact", "Exact onerec, fool, rc and frc under size guards");
  ex->add_option("input", o.input, "bmat file, - for stdin");
  add_generator(ex);
  ex->add_flag("--all", o.all, "All four parameters (default)");
  ex->add_flag("--onerec", o.onerec);
  ex->add_flag("--fool", o.fool);
  ex->add_flag("--rc", o.rc);
  ex->add_flag("--frc", o.frc);
  ex->add_flag("--witness", o.witness, "Include witnesses");
  ex->add_option("--budget", o.budget, "Node budget for the branch and bound solvers");
  add_common(ex);

  auto* bd = app.add_subcommand("bounds", "Bounds report and predicted windows");
  bd->add_option("input", o.input, "bmat file, - for stdin");
  add_generator(bd);
  bd->add_option("--beam", o.beam, "Beam width");
  bd->add_option("--q", o.q, "q for the certified fractional-cover bound");
  bd->add_option("--budget", o.budget, "Node budget for the branch and bound solvers");
  add_common(bd);

  auto* cs = app.add_subcommand("construct", "Constructive fooling set, greedy cover, certified bound");
  cs->add_option("input", o.input, "bmat file, - for stdin");
  add_generator(cs);
  cs->add_option("--q", o.q, "q for the certified fractional-cover bound");
  cs->add_flag("--witness", o.witness, "Include witnesses");
  add_common(cs);

  auto* xp = app.add_subcommand("experiment", "Run a catalog experiment from a JSON config");
  xp->add_option("config", o.input, "Config file")->required();
  xp->add_option("-o,--output", o.output, "CSV output path (overrides the config)");
  xp->add_option("--trials", o.trials, "Override the trial count");
  add_common(xp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*st) return cmd_stats(o);
    if (*ex) return cmd_exact(o);
    if (*bd) return cmd_bounds(o);
    if (*cs) return cmd_construct(o);
    return cmd_experiment(o);
  } catch (const SizeGuardError& e) {
    std::cerr << json{{"error", "size_guard"}, {"guard", e.guard()}, {"fallback", e.fallback()}, {"message", e.what()}}
                     .dump()
              << '\n';
    return kExitGuard;
  } catch (const ParseError& e) {
    std::cerr << json{{"error", "parse"}, {"message", e.what()}}.dump() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "failure"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
}
