#include "ratioref/cli.hpp"

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ratioref/io.hpp"
#include "ratioref/oracle.hpp"

namespace ratioref::cli {
namespace {

using io::json;

constexpr int kExitError = 1;
constexpr int kExitVerifyFailed = 2;

struct Options {
  double penalty_a = 1.0;
  std::string backend = "auto";
  double tol = 1e-12;
  std::uint64_t seed = oracle::InstanceGenerator::kDefaultSeed;
  bool csv = false;

  std::string x, y, s, s1, s2, eps, delta, a, c, id;
  std::string dict, dict1, dict2;
  std::string kind;
  unsigned long k = 1;
  int trials = 0;
  double sweep_lo = 0, sweep_hi = 0;
  int per_decade = 512;
  double trials_scale = 1.0;
};

struct Context {
  Options opt;
  PenaltyParam penalty;
  Tolerance tol;
  std::ostream& out;
};

std::string require(const std::string& value, const char* flag) {
  if (value.empty()) throw ValidationError(std::string("missing required option ") + flag);
  return value;
}

template <class S>
Dictionary<S> load_dict(const std::string& path, const char* flag) {
  return io::dictionary_from_json<S>(io::read_json_file(require(path, flag)));
}

template <class S>
const FiniteDictionary<S>& as_finite(const Dictionary<S>& d) {
  const auto* f = std::get_if<FiniteDictionary<S>>(&d);
  if (!f) throw ValidationError("this command needs a finite dictionary, got " + variant_name(d));
  return *f;
}

template <class S>
ScaleVector<S> parse_vector(const std::string& text) {
  std::vector<S> coords;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) coords.push_back(io::parse_scalar<S>(part));
  Vector<S> v(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) v[static_cast<Eigen::Index>(i)] = coords[i];
  return ScaleVector<S>(v);
}

template <class S>
S scalar(const std::string& text, const char* flag) {
  return io::parse_scalar<S>(require(text, flag));
}

template <class S>
void emit(Context& ctx, const json& j) {
  ctx.out << j.dump() << '\n';
}

// ---- subcommand bodies, templated on the backend scalar ----

template <class S>
int cmd_eval(Context& ctx) {
  const S x = scalar<S>(ctx.opt.x, "--x");
  json j{{"J", io::format(eval(x, ctx.penalty))}};
  if (!ctx.opt.y.empty()) j["dalembert_residual"] = io::format(dalembert_residual(x, scalar<S>(ctx.opt.y, "--y"), ctx.penalty));
  emit<S>(ctx, j);
  return 0;
}

template <class S>
int cmd_sublevel(Context& ctx) {
  const auto sub = sublevel(scalar<S>(ctx.opt.eps, "--eps"), ctx.penalty);
  emit<S>(ctx, {{"level", io::format(sub.level)},
                {"lo", io::format(sub.lo)},
                {"hi", io::format(sub.hi)},
                {"lo_approx", to_double(sub.lo)},
                {"hi_approx", to_double(sub.hi)}});
  return 0;
}

template <class S>
int cmd_mean(Context& ctx) {
  const S s = scalar<S>(ctx.opt.s, "--s");
  const auto dict = load_dict<S>(ctx.opt.dict, "--dict");
  if (dict.index() >= 2) {
    emit<S>(ctx, io::meaning_to_json(mean_md(ScaleVector<S>{s}, dict, ctx.penalty, ctx.tol)));
    return 0;
  }
  emit<S>(ctx, io::meaning_to_json(mean(Scale<S>(s), dict, ctx.penalty, ctx.tol)));
  return 0;
}

template <class S>
int cmd_mean_md(Context& ctx) {
  const auto s = parse_vector<S>(require(ctx.opt.s, "--s"));
  const auto dict = load_dict<S>(ctx.opt.dict, "--dict");
  emit<S>(ctx, io::meaning_to_json(mean_md(s, dict, ctx.penalty, ctx.tol)));
  return 0;
}

template <class S>
int cmd_mean_total(Context& ctx) {
  const S s = scalar<S>(ctx.opt.s, "--s");
  const auto dict = load_dict<S>(ctx.opt.dict, "--dict");
  emit<S>(ctx, io::meaning_to_json(mean_total(Scale<S>(s), dict, ctx.penalty, ctx.tol)));
  return 0;
}

template <class S>
int cmd_boundaries(Context& ctx) {
  const auto dict = load_dict<S>(ctx.opt.dict, "--dict");
  const auto b = boundaries(as_finite(dict));
  json cells = json::array();
  for (std::size_t i = 0; i < b.size(); ++i) cells.push_back({{"cell", i + 1}, {"id", b.id(i)}, {"scale", io::format(b.scale(i))}});
  json bounds = json::array();
  for (std::size_t i = 0; i < b.boundary_count(); ++i)
    bounds.push_back({{"between", {b.id(i), b.id(i + 1)}},
                      {"value", io::format(b.boundary(i))},
                      {"squared", io::format(b.boundary_squared(i))},
                      {"approx", to_double(b.boundary(i))}});
  emit<S>(ctx, {{"cells", cells}, {"boundaries", bounds}});
  return 0;
}

template <class S>
int cmd_classify(Context& ctx) {
  const auto x = Scale<S>(scalar<S>(ctx.opt.x.empty() ? ctx.opt.s : ctx.opt.x, "--x"));
  const auto dict = load_dict<S>(ctx.opt.dict, "--dict");
  const auto b = boundaries(as_finite(dict));
  const Cell cell = classify(x, b, ctx.tol);
  const auto cert = stability_radius(x, b, ctx.penalty, ctx.tol);
  json meanings{b.id(cell.index)};
  json j;
  if (cell.is_tie()) {
    meanings.push_back(b.id(*cell.tie_with));
    j["tie"] = {cell.index + 1, *cell.tie_with + 1};
  } else {
    j["cell"] = cell.index + 1;
  }
  j["meanings"] = meanings;
  j["stable"] = cert.stable;
  j["radius"] = io::format(cert.radius);
  j["margin"] = io::margin_to_json(cert.margin);
  j["max_perturbation"] = io::margin_to_json(cert.max_perturbation);
  emit<S>(ctx, j);
  return 0;
}

int cmd_sweep(Context& ctx) {
  const auto dict = load_dict<double>(ctx.opt.dict, "--dict");
  const auto& f = as_finite(dict);
  f.require_one_dimensional();
  double lo = ctx.opt.sweep_lo, hi = ctx.opt.sweep_hi;
  if (lo <= 0 || hi <= 0) {
    double ymin = f.scale(0), ymax = f.scale(0);
    for (std::size_t i = 1; i < f.size(); ++i) {
      ymin = std::min(ymin, f.scale(i));
      ymax = std::max(ymax, f.scale(i));
    }
    if (lo <= 0) lo = ymin / 10;
    if (hi <= 0) hi = ymax * 10;
  }
  const auto rows = sweep(f, lo, hi, ctx.opt.per_decade, ctx.penalty, ctx.tol);
  if (ctx.opt.csv)
    io::write_sweep_csv(ctx.out, f, rows);
  else
    ctx.out << io::sweep_to_json(f, rows).dump() << '\n';
  return 0;
}

template <class S>
int cmd_window(Context& ctx) {
  const std::string& kind = ctx.opt.kind;
  json j{{"kind", kind}};
  if (kind == "low-cost") {
    const auto w = low_cost_window(Scale<S>(scalar<S>(ctx.opt.s, "--s")), scalar<S>(ctx.opt.eps, "--eps"), ctx.penalty);
    j.update(io::window_to_json(w));
  } else if (kind == "near-balance") {
    j.update(io::window_to_json(near_balance_window(scalar<S>(ctx.opt.eps, "--eps"), ctx.penalty)));
  } else if (kind == "backbone") {
    j.update(io::window_to_json(backbone_window(scalar<S>(ctx.opt.delta, "--delta"), ctx.penalty)));
  } else {
    throw ValidationError("window kind must be low-cost, near-balance or backbone");
  }
  emit<S>(ctx, j);
  return 0;
}

template <class S>
int cmd_capacity(Context& ctx) {
  const auto dict = load_dict<S>(ctx.opt.dict, "--dict");
  const S delta = scalar<S>(ctx.opt.delta, "--delta");
  const std::size_t cap = capacity_bound(dict, delta, ctx.penalty);
  emit<S>(ctx, {{"capacity_bound", cap}, {"window", io::window_to_json(backbone_window(delta, ctx.penalty))}});
  return 0;
}

template <class S>
int cmd_mediate(Context& ctx) {
  const auto dict = load_dict<S>(ctx.opt.dict, "--dict");
  const auto plan = mediate(Scale<S>(scalar<S>(ctx.opt.a, "--a")), Scale<S>(scalar<S>(ctx.opt.c, "--c")), dict,
                            ctx.penalty, ctx.tol);
  emit<S>(ctx, io::mediation_to_json(plan));
  return 0;
}

template <class S>
int cmd_chain(Context& ctx) {
  const S a = scalar<S>(ctx.opt.a, "--a");
  const S c = scalar<S>(ctx.opt.c, "--c");
  json j;
  std::optional<ChainPlan<Rational>> exact;
  if constexpr (is_exact_v<S>) exact = chain_exact(a, c, ctx.opt.k, ctx.penalty);
  if (exact) {
    j = io::chain_to_json(*exact);
    j["exact"] = true;
  } else {
    j = io::chain_to_json(chain(to_double(a), to_double(c), ctx.opt.k, ctx.penalty));
    j["exact"] = false;
  }
  if (ctx.opt.trials > 0)
    j["optimal"] = chain_optimality_check(to_double(a), to_double(c), ctx.opt.k, ctx.opt.trials, ctx.opt.seed, ctx.penalty);
  emit<S>(ctx, j);
  return 0;
}

template <class S>
int cmd_product(Context& ctx) {
  const auto d1 = load_dict<S>(ctx.opt.dict1.empty() ? ctx.opt.dict : ctx.opt.dict1, "--dict1");
  const auto d2 = load_dict<S>(ctx.opt.dict2.empty() ? ctx.opt.dict : ctx.opt.dict2, "--dict2");
  const auto [m1, m2] = product_mean(Scale<S>(scalar<S>(ctx.opt.s1, "--s1")), Scale<S>(scalar<S>(ctx.opt.s2, "--s2")),
                                     d1, d2, ctx.penalty, ctx.tol);
  json pairs = json::array();
  for (const auto& [x, y] : product_meaning_set(m1, m2)) pairs.push_back({x, y});
  emit<S>(ctx, {{"first", io::meaning_to_json(m1)},
                {"second", io::meaning_to_json(m2)},
                {"pairs", pairs},
                {"cost", io::format(S(m1.optimal_cost + m2.optimal_cost))}});
  return 0;
}

template <class S>
int cmd_is_symbol(Context& ctx) {
  const auto s = Scale<S>(scalar<S>(ctx.opt.s, "--s"));
  const auto dict = load_dict<S>(ctx.opt.dict, "--dict");
  const auto& f = as_finite(dict);
  const std::string id = require(ctx.opt.id, "--id");
  const bool symbol = is_symbol(s, id, f, ctx.penalty, ctx.tol);
  const auto m = mean(s, f, ctx.penalty, ctx.tol);
  const bool meaning = std::find(m.minimizers.begin(), m.minimizers.end(), id) != m.minimizers.end();
  emit<S>(ctx, {{"symbol", symbol},
                {"meaning", meaning},
                {"J_s", io::format(eval(s.value(), ctx.penalty))},
                {"J_o", io::format(eval(f.scale(*f.find(id)), ctx.penalty))}});
  return 0;
}

int cmd_verify(Context& ctx) {
  const auto report = oracle::run_verification(ctx.opt.seed, ctx.opt.trials_scale);
  json checks = json::array();
  for (const auto& c : report.checks) {
    json row{{"check", c.name}, {"trials", c.trials}, {"failures", c.failures}, {"status", c.failures ? "FAIL" : "PASS"}};
    if (c.failures) row["first_failure"] = c.first_failure;
    checks.push_back(row);
  }
  ctx.out << json{{"seed", report.seed}, {"passed", report.passed()}, {"checks", checks}}.dump() << '\n';
  return report.passed() ? 0 : kExitVerifyFailed;
}

// Peeks at a dictionary file: log-coordinate variants only run in floats.
bool needs_float(const Options& opt) {
  for (const std::string* path : {&opt.dict, &opt.dict1, &opt.dict2}) {
    if (path->empty()) continue;
    const json j = io::read_json_file(*path);
    if (j.contains("variant") && j["variant"].is_string()) {
      const auto v = j["variant"].get<std::string>();
      if (v == "logbox" || v == "logpolytope") return true;
    }
  }
  return false;
}

template <template <class> class Cmd>
int dispatch(Context& ctx) {
  bool rational;
  if (ctx.opt.backend == "rational")
    rational = true;
  else if (ctx.opt.backend == "float")
    rational = false;
  else
    rational = ctx.penalty.integer_exponent().has_value() && !needs_float(ctx.opt);
  return rational ? Cmd<Rational>::run(ctx) : Cmd<double>::run(ctx);
}

#define RATIOREF_COMMAND(Name, fn) \
  template <class S>               \
  struct Name {                    \
    static int run(Context& ctx) { return fn<S>(ctx); } \
  };

RATIOREF_COMMAND(Eval, cmd_eval)
RATIOREF_COMMAND(Sublevel, cmd_sublevel)
RATIOREF_COMMAND(Mean, cmd_mean)
RATIOREF_COMMAND(MeanMd, cmd_mean_md)
RATIOREF_COMMAND(MeanTotal, cmd_mean_total)
RATIOREF_COMMAND(Boundaries, cmd_boundaries)
RATIOREF_COMMAND(Classify, cmd_classify)
RATIOREF_COMMAND(Window, cmd_window)
RATIOREF_COMMAND(Capacity, cmd_capacity)
RATIOREF_COMMAND(Mediate, cmd_mediate)
RATIOREF_COMMAND(Chain, cmd_chain)
RATIOREF_COMMAND(Product, cmd_product)
RATIOREF_COMMAND(IsSymbol, cmd_is_symbol)
#undef RATIOREF_COMMAND

void write_error(std::ostream& err, const std::string& type, const std::string& message) {
  err << json{{"error", {{"type", type}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Ratio-induced reference calculus: meanings, boundaries, windows and mediation", "ratioref"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--penalty-a", opt.penalty_a, "Penalty exponent a > 0 (J_a = cosh(a log x) - 1)");
  app.add_option("--backend", opt.backend, "rational | float | auto")->check(CLI::IsMember({"auto", "rational", "float"}));
  app.add_option("--tol", opt.tol, "Relative tie tolerance for the float backend");
  app.add_option("--seed", opt.seed, "Seed for randomized checks (RATIOREF_SEED overrides)");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate J_a(x); with --y also the d'Alembert residual");
  eval_cmd->add_option("--x", opt.x)->required();
  eval_cmd->add_option("--y", opt.y);

  auto* sublevel_cmd = app.add_subcommand("sublevel", "Sublevel interval {x : J(x) <= eps}");
  sublevel_cmd->add_option("--eps", opt.eps)->required();

  auto* mean_cmd = app.add_subcommand("mean", "Meaning set of s over a 1-D dictionary");
  mean_cmd->add_option("--s", opt.s)->required();
  mean_cmd->add_option("--dict", opt.dict)->required();

  auto* mean_md_cmd = app.add_subcommand("mean-md", "Meaning of a scale vector over a d-D dictionary");
  mean_md_cmd->add_option("--s", opt.s, "Comma-separated coordinates")->required();
  mean_md_cmd->add_option("--dict", opt.dict)->required();

  auto* mean_total_cmd = app.add_subcommand("mean-total", "Minimize J(s) + J(o) + c(s, o)");
  mean_total_cmd->add_option("--s", opt.s)->required();
  mean_total_cmd->add_option("--dict", opt.dict)->required();

  auto* boundaries_cmd = app.add_subcommand("boundaries", "Geometric-mean decision boundaries");
  boundaries_cmd->add_option("--dict", opt.dict)->required();

  auto* classify_cmd = app.add_subcommand("classify", "Meaning cell and stability certificate of x");
  classify_cmd->add_option("--x", opt.x)->required();
  classify_cmd->add_option("--dict", opt.dict)->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Costs, cells and margins over a log-spaced grid");
  sweep_cmd->add_option("--dict", opt.dict)->required();
  sweep_cmd->add_option("--lo", opt.sweep_lo, "Grid start (default: smallest scale / 10)");
  sweep_cmd->add_option("--hi", opt.sweep_hi, "Grid end (default: largest scale * 10)");
  sweep_cmd->add_option("--per-decade", opt.per_decade, "Grid points per decade")->check(CLI::PositiveNumber);
  sweep_cmd->add_flag("--csv", opt.csv, "Emit CSV instead of JSON");

  auto* window_cmd = app.add_subcommand("window", "Scale windows: low-cost, near-balance, backbone");
  window_cmd->add_option("kind", opt.kind)->required()->check(CLI::IsMember({"low-cost", "near-balance", "backbone"}));
  window_cmd->add_option("--s", opt.s);
  window_cmd->add_option("--eps", opt.eps);
  window_cmd->add_option("--delta", opt.delta);

  auto* capacity_cmd = app.add_subcommand("capacity", "Upper bound on referential capacity of near-balanced scales");
  capacity_cmd->add_option("--dict", opt.dict)->required();
  capacity_cmd->add_option("--delta", opt.delta)->required();

  auto* mediate_cmd = app.add_subcommand("mediate", "Optimal mediator between a and c");
  mediate_cmd->add_option("--a", opt.a)->required();
  mediate_cmd->add_option("--c", opt.c)->required();
  mediate_cmd->add_option("--dict", opt.dict)->required();

  auto* chain_cmd = app.add_subcommand("chain", "Equal-log-increment k-step chain");
  chain_cmd->add_option("--a", opt.a)->required();
  chain_cmd->add_option("--c", opt.c)->required();
  chain_cmd->add_option("--k", opt.k)->required()->check(CLI::PositiveNumber);
  chain_cmd->add_option("--trials", opt.trials, "Random chains for the optimality check");

  auto* product_cmd = app.add_subcommand("product", "Meaning in a product of two reference structures");
  product_cmd->add_option("--s1", opt.s1)->required();
  product_cmd->add_option("--s2", opt.s2)->required();
  product_cmd->add_option("--dict", opt.dict, "Dictionary for both factors");
  product_cmd->add_option("--dict1", opt.dict1);
  product_cmd->add_option("--dict2", opt.dict2);

  auto* symbol_cmd = app.add_subcommand("is-symbol", "Grounding predicate: meaning plus compression");
  symbol_cmd->add_option("--s", opt.s)->required();
  symbol_cmd->add_option("--id", opt.id)->required();
  symbol_cmd->add_option("--dict", opt.dict)->required();

  auto* verify_cmd = app.add_subcommand("verify", "Run the solver-vs-oracle suite");
  verify_cmd->add_option("--trials-scale", opt.trials_scale, "Multiplier on default trial counts")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> argv_storage{"ratioref"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return kExitError;
  }

  if (const char* env = std::getenv("RATIOREF_SEED")) {
    try {
      opt.seed = std::stoull(env, nullptr, 0);
    } catch (const std::exception&) {
      write_error(err, "validation_error", std::string("invalid RATIOREF_SEED '") + env + "'");
      return kExitError;
    }
  }

  try {
    Context ctx{opt, PenaltyParam(opt.penalty_a), Tolerance{opt.tol}, out};
    if (*eval_cmd) return dispatch<Eval>(ctx);
    if (*sublevel_cmd) return dispatch<Sublevel>(ctx);
    if (*mean_cmd) return dispatch<Mean>(ctx);
    if (*mean_md_cmd) return dispatch<MeanMd>(ctx);
    if (*mean_total_cmd) return dispatch<MeanTotal>(ctx);
    if (*boundaries_cmd) return dispatch<Boundaries>(ctx);
    if (*classify_cmd) return dispatch<Classify>(ctx);
    if (*sweep_cmd) return cmd_sweep(ctx);
    if (*window_cmd) return dispatch<Window>(ctx);
    if (*capacity_cmd) return dispatch<Capacity>(ctx);
    if (*mediate_cmd) return dispatch<Mediate>(ctx);
    if (*chain_cmd) return dispatch<Chain>(ctx);
    if (*product_cmd) return dispatch<Product>(ctx);
    if (*symbol_cmd) return dispatch<IsSymbol>(ctx);
    if (*verify_cmd) return cmd_verify(ctx);
  } catch (const DomainError& e) {
    write_error(err, "domain_error", e.what());
    return kExitError;
  } catch (const PreconditionError& e) {
    write_error(err, "precondition_error", e.what());
    return kExitError;
  } catch (const ValidationError& e) {
    write_error(err, "validation_error", e.what());
    return kExitError;
  } catch (const json::exception& e) {
    write_error(err, "validation_error", e.what());
    return kExitError;
  }
  return kExitError;
}

}  // namespace ratioref::cli
