#include "amfc/cli.hpp"

#include "amfc/adding_machine.hpp"
#include "amfc/julia_analysis.hpp"
#include "amfc/probability_sequence.hpp"
#include "amfc/render.hpp"
#include "amfc/spectrum.hpp"
#include "amfc/transition_matrix.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>

namespace amfc {

namespace {

using nlohmann::json;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Common {
  std::string probs_path;
  std::uint64_t seed = 0;
  std::string out_path;
};

void add_common(CLI::App* sub, Common& common)
{
  sub->add_option("--probs", common.probs_path, "JSON parameter-sequence config")->required();
  sub->add_option("--seed", common.seed, "seed for every random draw");
  sub->add_option("--out", common.out_path, "write the main output here instead of stdout");
}

ProbabilitySequence load(const Common& common)
{
  try {
    return load_probability_sequence(common.probs_path, common.seed);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

/// Calls fn with the --out file stream, or with `fallback` when --out is empty.
void with_output(const Common& common, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& fn)
{
  if (common.out_path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(common.out_path);
  if (!file)
    throw std::runtime_error("cannot open " + common.out_path + " for writing");
  fn(file);
  if (!file)
    throw std::runtime_error("write failed for " + common.out_path);
}

std::string g17(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json window_json(const Window& w)
{
  return {{"center_re", w.center_re}, {"center_im", w.center_im}, {"width", w.width},
          {"height", w.height}};
}

// ---- subcommands ----------------------------------------------------------

struct SimulateArgs {
  std::uint64_t start = 0;
  std::uint64_t steps = 1000;
  unsigned hit_levels = 8;
  std::size_t runs = 0;
  unsigned level = 1;
  bool trajectory = false;
};

void run_simulate(const Common& common, const SimulateArgs& a, std::ostream& out)
{
  const auto probs = load(common);
  if (a.runs > 0) {
    const auto est = estimate_hitting(a.level, probs, a.runs, common.seed);
    const auto exact = expected_visits_and_hitting(a.level, probs);
    const json doc = {{"level", a.level},
                      {"runs", est.runs},
                      {"seed", common.seed},
                      {"mean_zero_visits", est.mean_visits},
                      {"stderr_zero_visits", est.stderr_visits},
                      {"expected_zero_visits", exact.expected_visits},
                      {"mean_hitting_time", est.mean_time},
                      {"stderr_hitting_time", est.stderr_time},
                      {"expected_hitting_time", exact.expected_hitting_time}};
    with_output(common, out, [&](std::ostream& o) { o << doc.dump() << '\n'; });
    return;
  }

  if (a.steps < 1)
    throw UsageError("--steps must be >= 1");
  const auto s = simulate(a.start, a.steps, probs, common.seed, a.hit_levels);
  if (a.trajectory) {
    with_output(common, out, [&](std::ostream& o) {
      o << "t,state\n";
      for (std::size_t t = 0; t < s.trajectory.size(); ++t)
        o << t << ',' << s.trajectory[t] << '\n';
    });
    return;
  }
  json hits = json::array();
  for (std::size_t k = 0; k < s.first_hit.size(); ++k) {
    json h = {{"k", k}};
    h["first_hit"] = s.first_hit[k] ? json(*s.first_hit[k]) : json(nullptr);
    h["zero_visits_before"] =
        s.zero_visits_before_hit[k] ? json(*s.zero_visits_before_hit[k]) : json(nullptr);
    hits.push_back(h);
  }
  const auto zero = s.visits.find(0);
  const json doc = {{"start", s.start},
                    {"steps", s.steps},
                    {"seed", s.seed},
                    {"final_state", s.trajectory.back()},
                    {"distinct_states", s.visits.size()},
                    {"visits_to_zero", zero == s.visits.end() ? 0 : zero->second},
                    {"returns_to_start", s.returns_to_start},
                    {"hitting", hits}};
  with_output(common, out, [&](std::ostream& o) { o << doc.dump() << '\n'; });
}

void run_matrix(const Common& common, std::size_t size, std::ostream& out)
{
  const auto probs = load(common);
  if (size < 2)
    throw UsageError("--size must be >= 2");
  const auto op = build_truncated(probs, size);
  with_output(common, out, [&](std::ostream& o) {
    o << "n,m,value\n";
    for (const auto& e : op.entries())
      o << e.row << ',' << e.col << ',' << g17(e.value) << '\n';
  });
}

void run_classify(const Common& common, unsigned budget, std::ostream& out)
{
  const auto probs = load(common);
  const auto rec = classify_recurrence(probs);
  const auto con = classify_connectedness(probs, budget);
  const auto qc = quasicircle_check(probs);

  json levels = json::array();
  for (const auto& r : con.evidence)
    levels.push_back({{"level", r.level},
                      {"status", to_string(r.status)},
                      {"last_index", r.last_index}});
  json doc = {{"recurrence", to_string(rec.verdict)},
              {"recurrence_reason", rec.reason},
              {"partial_products", rec.partial_products},
              {"connectedness", to_string(con.kind)},
              {"connectedness_label", con.label()},
              {"components", con.count},
              {"connectedness_rule", con.rule},
              {"undecided", con.undecided},
              {"critical_levels", levels},
              {"quasicircle", to_string(qc.verdict)},
              {"sup_c", qc.sup_c},
              {"c_tail_bound", qc.tail_bound},
              {"c_limit", qc.limit},
              {"quasicircle_rule", qc.rule},
              {"probs", probs.describe()}};
  doc["product_limit"] = rec.product_limit ? json(*rec.product_limit) : json(nullptr);
  with_output(common, out, [&](std::ostream& o) { o << doc.dump() << '\n'; });
}

void run_member(const Common& common, double re, double im, unsigned levels, std::ostream& out)
{
  const auto probs = load(common);
  if (levels < 1)
    throw UsageError("--levels must be >= 1");
  const Complex z(re, im);
  IterateOptions opts;
  opts.keep_trace = true;
  opts.trace_after_escape = 3;
  const auto r = iterate_f(z, probs, levels, opts);
  const auto q = membership_via_q(z, probs, levels);
  const json doc = {{"re", re},
                    {"im", im},
                    {"classification", to_string(r.status)},
                    {"level", r.level},
                    {"modulus", r.modulus},
                    {"budget", levels},
                    {"trace", r.trace},
                    {"q_inside", q.inside},
                    {"q_level", q.level},
                    {"consistent", !contradicts(r, q, levels)}};
  with_output(common, out, [&](std::ostream& o) { o << doc.dump() << '\n'; });
}

void run_eigenvector(const Common& common, double re, double im, std::size_t size,
                     std::ostream& out, std::ostream& err)
{
  const auto probs = load(common);
  if (size < 2)
    throw UsageError("--size must be >= 2");
  const Complex lambda(re, im);
  const auto slice = eigenvector(lambda, probs, size);
  const auto op = build_truncated(probs, size);
  const double residual = eigen_residual(slice, op);
  with_output(common, out, [&](std::ostream& o) {
    o << "n,re,im\n";
    for (std::size_t n = 0; n < slice.v.size(); ++n)
      o << n << ',' << g17(slice.v[n].real()) << ',' << g17(slice.v[n].imag()) << '\n';
  });
  const json summary = {{"lambda_re", re},
                        {"lambda_im", im},
                        {"size", size},
                        {"residual", residual},
                        {"inside", slice.inside},
                        {"overflow", slice.overflow}};
  (common.out_path.empty() ? err : out) << summary.dump() << '\n';
}

struct GridArgs {
  unsigned width = 512;
  unsigned height = 512;
  unsigned levels = kRenderBudget;
  std::string coords = "E";
  std::optional<double> center_re, center_im, span_re, span_im;
  std::string levels_csv;
};

RenderConfig grid_config(const GridArgs& a, const ProbabilitySequence& probs)
{
  RenderConfig c;
  c.coordinates = a.coords == "K" ? Coordinates::K : Coordinates::E;
  c.window = default_window(probs, c.coordinates);
  if (a.center_re)
    c.window.center_re = *a.center_re;
  if (a.center_im)
    c.window.center_im = *a.center_im;
  if (a.span_re)
    c.window.width = *a.span_re;
  if (a.span_im)
    c.window.height = *a.span_im;
  c.pixels_x = a.width;
  c.pixels_y = a.height;
  c.max_levels = a.levels;
  if (c.pixels_x < 1 || c.pixels_y < 1 || !(c.window.width > 0.0) || !(c.window.height > 0.0) ||
      c.max_levels < 1 || c.max_levels > 65535)
    throw UsageError("invalid grid: need pixels >= 1, positive spans, 1 <= levels <= 65535");
  return c;
}

void run_render(const Common& common, const GridArgs& a, std::ostream& out)
{
  const auto probs = load(common);
  if (common.out_path.empty())
    throw UsageError("render needs --out FILE.pgm");
  const auto config = grid_config(a, probs);
  const auto raster = render(config, probs);
  write_pgm(raster, common.out_path);
  if (!a.levels_csv.empty())
    write_levels_csv(raster, a.levels_csv);
  std::size_t inside = 0;
  for (auto l : raster.levels)
    inside += l == 0;
  const json doc = {{"out", common.out_path},
                    {"width", raster.width},
                    {"height", raster.height},
                    {"coordinates", to_string(raster.coordinates)},
                    {"max_levels", raster.max_levels},
                    {"window", window_json(raster.window)},
                    {"probs_digest", raster.probs_digest},
                    {"inside_pixels", inside},
                    {"components", count_components(raster)},
                    {"no_holes", inside_has_no_holes(raster)},
                    {"note", "points still bounded at the budget are drawn inside"}};
  out << doc.dump() << '\n';
}

void run_green(const Common& common, const GridArgs& a, unsigned n_max, std::ostream& out)
{
  const auto probs = load(common);
  GridArgs e = a;
  e.coords = "E";
  const auto config = grid_config(e, probs);
  const auto grid = green_grid(config, probs, n_max);
  RenderConfig shown = config;
  shown.window = grid.window;
  with_output(common, out, [&](std::ostream& o) {
    o << "x,y,G\n";
    for (unsigned j = 0; j < grid.height; ++j)
      for (unsigned i = 0; i < grid.width; ++i) {
        const Complex z = pixel_center(shown, i, j);
        o << g17(z.real()) << ',' << g17(z.imag()) << ','
          << g17(grid.values[std::size_t(j) * grid.width + i]) << '\n';
      }
  });
}

void run_fibered(const Common& common, unsigned shifts, std::ostream& out)
{
  const auto probs = load(common);
  const auto fc = conjugacy(probs, shifts);
  const auto qc = quasicircle_check(probs);
  const unsigned d = probs.base();
  const json doc = {{"d", d},
                    {"lambda", fc.lambda_p},
                    {"lambda_terms", fc.terms},
                    {"lambda_log_truncation_bound", fc.truncation_bound},
                    {"c", fc.c_values},
                    {"quasicircle", to_string(qc.verdict)},
                    {"sup_c", qc.sup_c},
                    {"c_tail_bound", qc.tail_bound},
                    {"c_limit", qc.limit},
                    {"rho_d", rho_d(d)}};
  with_output(common, out, [&](std::ostream& o) { o << doc.dump() << '\n'; });
}

} // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Fallible adding machine: chain, transition operator, spectra"};
  app.name(args.empty() ? "amfc" : args.front());
  app.set_version_flag("--version", "amfc " + std::string(kVersion));
  app.require_subcommand(1);

  Common common;

  auto* sim = app.add_subcommand("simulate", "simulate the chain or estimate E[N_n], E[tau_n]");
  add_common(sim, common);
  SimulateArgs sa;
  sim->add_option("--start", sa.start, "initial state");
  sim->add_option("--steps", sa.steps, "number of steps");
  sim->add_option("--hit-levels", sa.hit_levels, "track first hits of d^0 .. d^(k-1)");
  sim->add_option("--runs", sa.runs, "Monte Carlo runs from 0 to d^level (estimate mode)");
  sim->add_option("--level", sa.level, "level n for the estimate mode");
  sim->add_flag("--trajectory", sa.trajectory, "emit the trajectory as CSV t,state");

  auto* mat = app.add_subcommand("matrix", "truncated transition matrix as CSV n,m,value");
  add_common(mat, common);
  std::size_t size = 0;
  mat->add_option("--size", size, "truncation size M")->required();

  auto* cls = app.add_subcommand("classify", "recurrence, connectedness and quasicircle report");
  add_common(cls, common);
  unsigned budget = 4096;
  cls->add_option("--budget", budget, "critical-orbit iteration budget");

  auto* mem = app.add_subcommand("spectrum-member", "classify one point against E");
  add_common(mem, common);
  double re = 0.0;
  double im = 0.0;
  unsigned levels = kMembershipBudget;
  mem->add_option("--re", re, "real part")->required();
  mem->add_option("--im", im, "imaginary part")->required();
  mem->add_option("--levels", levels, "iteration budget");

  auto* eig = app.add_subcommand("eigenvector", "eigenvector slice as CSV n,re,im plus residual");
  add_common(eig, common);
  double lre = 0.0;
  double lim = 0.0;
  std::size_t eig_size = 0;
  eig->add_option("--lambda-re", lre, "real part of lambda")->required();
  eig->add_option("--lambda-im", lim, "imaginary part of lambda")->required();
  eig->add_option("--size", eig_size, "number of entries M")->required();

  GridArgs ga;
  const auto add_grid = [&](CLI::App* sub, unsigned default_pixels) {
    ga.width = ga.height = default_pixels;
    sub->add_option("--width", ga.width, "pixels along x");
    sub->add_option("--height", ga.height, "pixels along y");
    sub->add_option("--center-re", ga.center_re, "window center, real part");
    sub->add_option("--center-im", ga.center_im, "window center, imaginary part");
    sub->add_option("--span-re", ga.span_re, "window width");
    sub->add_option("--span-im", ga.span_im, "window height");
  };

  auto* ren = app.add_subcommand("render", "rasterize E or K to a binary PGM");
  add_common(ren, common);
  add_grid(ren, 512);
  ren->add_option("--levels", ga.levels, "iteration budget");
  ren->add_option("--coords", ga.coords, "E or K")->check(CLI::IsMember({"E", "K"}));
  ren->add_option("--levels-csv", ga.levels_csv, "also write exact levels as CSV");

  auto* grn = app.add_subcommand("green", "Green function grid as CSV x,y,G");
  add_common(grn, common);
  GridArgs green_args;
  unsigned n_max = 256;
  grn->add_option("--width", green_args.width, "pixels along x")->default_val(128);
  grn->add_option("--height", green_args.height, "pixels along y")->default_val(128);
  grn->add_option("--center-re", green_args.center_re, "window center, real part");
  grn->add_option("--center-im", green_args.center_im, "window center, imaginary part");
  grn->add_option("--span-re", green_args.span_re, "window width");
  grn->add_option("--span-im", green_args.span_im, "window height");
  grn->add_option("--n-max", n_max, "maximum iterations");

  auto* fib = app.add_subcommand("fibered", "lambda(p), c(tau^k p) and the quasicircle verdict");
  add_common(fib, common);
  unsigned shifts = 16;
  fib->add_option("--shifts", shifts, "number of shifted c-values");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty())
    reversed.pop_back(); // program name
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (sim->parsed())
      run_simulate(common, sa, out);
    else if (mat->parsed())
      run_matrix(common, size, out);
    else if (cls->parsed())
      run_classify(common, budget, out);
    else if (mem->parsed())
      run_member(common, re, im, levels, out);
    else if (eig->parsed())
      run_eigenvector(common, lre, lim, eig_size, out, err);
    else if (ren->parsed())
      run_render(common, ga, out);
    else if (grn->parsed())
      run_green(common, green_args, n_max, out);
    else if (fib->parsed())
      run_fibered(common, shifts, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitOk;
}

} // namespace amfc
