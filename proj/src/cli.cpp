#include "lapgrowth/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "lapgrowth/algebra.hpp"
#include "lapgrowth/config.hpp"
#include "lapgrowth/divisible.hpp"
#include "lapgrowth/errors.hpp"
#include "lapgrowth/estimators.hpp"
#include "lapgrowth/idla.hpp"
#include "lapgrowth/image.hpp"
#include "lapgrowth/persist.hpp"
#include "lapgrowth/rotor.hpp"
#include "lapgrowth/sandpile.hpp"

namespace lapgrowth {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void merge(StatsReport& into, const StatsReport& from, const std::string& prefix = {}) {
  for (const auto& m : from.entries()) into.add(prefix + m.name, m.value, m.stderr_, m.samples);
  for (const auto& n : from.notes()) into.note(prefix + n);
  for (const auto& f : from.failures()) into.fail(prefix + f);
}

void write_stats(const StatsReport& rep, const fs::path& dir) {
  std::ofstream out(dir / "stats.csv", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / "stats.csv").string());
  rep.write_csv(out);
}

void add_radii(StatsReport& rep, const Cluster& c) {
  const Radii r = inradius_outradius(c, Point(c.dim()));
  rep.add("sites", static_cast<double>(c.size()));
  rep.add("r_in", r.inner);
  rep.add("r_out", r.outer);
  rep.add("r_volume", radius_for_volume(static_cast<double>(c.size()), c.dim()));
}

Grid<double> point_mass(const RunConfig& c) {
  Grid<double> s = Grid<double>::centered(c.d, point_source_window(c.m, c.d), 0.0);
  s.at(Point(c.d)) = c.m;
  return s;
}

double divisible_tol(const RunConfig& c) { return c.tolerance > 0 ? c.tolerance : default_divisible_tolerance(c.m); }

SandpileField identity_field(int n) {
  const FiniteMultigraph g = wired_grid(n);
  const SinkedConfig e = identity_element(g);
  SandpileField f{Grid<std::int32_t>(Point{0, 0}, Point{n - 1, n - 1}, 0)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f.heights.at(Point{i, j}) = static_cast<std::int32_t>(e[static_cast<std::size_t>(i * n + j)]);
  return f;
}

// Images are drawn only from files in the run directory, so `render`
// reproduces them byte for byte.
void render_run(const RunConfig& c, const fs::path& dir, const fs::path& into) {
  if (c.d != 2 && c.model != "algebra") return;
  if (c.model == "sandpile" || (c.model == "algebra" && fs::exists(dir / "identity.json"))) {
    const std::string stem = c.model == "sandpile" ? "heights" : "identity";
    emit_ppm(render_heights(SandpileField{read_grid<std::int32_t>(dir / stem)}), into / (stem + ".ppm"));
  } else if (c.model == "divisible") {
    emit_ppm(render_mass(read_grid<double>(dir / "mass")), into / "mass.ppm");
  } else if (c.model == "rotor") {
    RotorState st{read_grid<std::uint8_t>(dir / "rotors"), mechanism_of(c)};
    emit_ppm(render_rotors(st, cluster_from_grid(read_grid<std::int64_t>(dir / "cluster"))), into / "rotors.ppm");
  } else if (c.model == "idla") {
    emit_ppm(render_idla_colors(cluster_from_grid(read_grid<std::int64_t>(dir / "cluster"))), into / "idla.ppm");
  }
}

StatsReport run_algebra(const RunConfig& c, const fs::path* dir, std::ostream& out) {
  StatsReport rep("algebra");
  if (c.graph.empty() && c.op == "identity") {
    const SandpileField f = identity_field(c.grid);
    rep.add("grid", c.grid);
    rep.add("identity_total", static_cast<double>(f.total()));
    if (dir) write_grid(f.heights, *dir / "identity");
    out << "identity of wired_grid_" << c.grid << " (total " << f.total() << " grains)\n";
    return rep;
  }
  std::vector<FiniteMultigraph> graphs;
  if (c.graph.empty()) graphs = graph_library();
  else graphs.push_back(read_graph_file(c.graph));
  const bool all = c.op == "all";
  for (const auto& g : graphs) {
    const std::string p = g.name() + ".";
    out << "graph " << g.name() << ": " << g.size() << " vertices, " << g.edge_count() << " edges, sink " << g.sink()
        << '\n';
    if (all || c.op == "order") {
      const BigInt det = group_order_matrix_tree(g);
      out << "  order " << det << '\n';
      rep.add(p + "order", det.convert_to<double>());
    }
    if (all || c.op == "identity") {
      const SinkedConfig e = identity_element(g);
      out << "  identity";
      for (int v = 0; v < g.size(); ++v)
        if (v != g.sink()) out << ' ' << e[static_cast<std::size_t>(v)];
      out << '\n';
    }
    if (c.op == "recurrents") {
      const auto recs = enumerate_recurrents(g);
      out << "  recurrents " << recs.size() << '\n';
      for (const auto& s : recs) {
        out << "   ";
        for (int v = 0; v < g.size(); ++v)
          if (v != g.sink()) out << ' ' << s[static_cast<std::size_t>(v)];
        out << '\n';
      }
      rep.add(p + "recurrents", static_cast<double>(recs.size()));
    }
    if (c.op == "tutte") out << "  T(x,y) = " << tutte_brute(g).to_string() << '\n';
    if (c.op == "unicycles") {
      const UnicycleCensus u = unicycle_census(g);
      out << "  unicycles " << u.count << ", tutte slope " << format_double(u.tutte_slope) << '\n';
      for (const auto& [len, cnt] : u.lengths) out << "    length " << len << ": " << cnt << '\n';
      rep.add(p + "unicycles", u.count.convert_to<double>());
    }
    if (all) {
      const StatsReport ex = algebra_exactness(g);
      out << "  T(x,y) = " << tutte_brute(g).to_string() << '\n';
      merge(rep, ex, p);
    }
    if (all || c.op == "laws") merge(rep, check_group_laws(g), p + "laws.");
  }
  return rep;
}

std::vector<EstimateResult> run_estimates(const RunConfig& c) {
  std::vector<EstimateResult> rows;
  const bool all = c.what == "all";
  if (all || c.what == "xi") rows.push_back(looping_constant(c.R, c.samples, c.seed));
  if (all || c.what == "zeta") {
    const std::int64_t burnin = c.burnin >= 0 ? c.burnin : default_burnin(c.grid);
    const HeightEstimates h = sandpile_mc_heights(c.grid, burnin, c.samples, c.thin, c.seed);
    rows.insert(rows.end(), h.p.begin(), h.p.end());
    rows.push_back(h.zeta);
  }
  if (all || c.what == "lambda" || c.what == "tau") {
    const UnicycleEstimates u = unicycle_estimators(wired_grid(c.grid), c.samples, c.seed);
    if (c.what != "tau") rows.push_back(u.lambda);
    if (c.what != "lambda") rows.push_back(u.tau);
  }
  return rows;
}

// Runs the model, writes raw grids and the config into dir; returns stats.
StatsReport simulate(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  fs::create_directories(dir);
  RunConfig saved = c;
  saved.out.clear();
  save_config(saved, dir / "config.json");
  StatsReport rep(c.model + " run");
  if (c.model == "sandpile") {
    const SingleSource s = single_source(c.n, c.d, policy_of(c));
    write_grid(s.field.heights, dir / "heights");
    write_grid(s.odometer.counts, dir / "odometer");
    write_grid(cluster_grid(s.cluster), dir / "cluster");
    add_radii(rep, s.cluster);
    std::uint64_t umax = 0;
    for (auto v : s.odometer.counts.values()) umax = std::max(umax, v);
    rep.add("max_odometer", static_cast<double>(umax));
  } else if (c.model == "divisible") {
    const DivisibleResult r = divisible_stabilize(point_mass(c), divisible_tol(c));
    const Cluster occ = occupied_sites(r.mass, divisible_tol(c));
    write_grid(r.mass, dir / "mass");
    write_grid(r.odometer, dir / "odometer");
    write_grid(cluster_grid(occ), dir / "cluster");
    add_radii(rep, occ);
    rep.add("sweeps", static_cast<double>(r.sweeps));
    rep.add("max_excess", r.max_excess);
    rep.add("mass_defect", r.mass_defect);
  } else if (c.model == "rotor") {
    const RotorRun r = rotor_run(c.n, c.d, mechanism_of(c), rotor_init_of(c));
    write_grid(r.odometer, dir / "odometer");
    write_grid(r.state.dirs, dir / "rotors");
    write_grid(cluster_grid(r.cluster), dir / "cluster");
    add_radii(rep, r.cluster);
    merge(rep, check_odometer_flow(r.odometer, r.flow));
  } else if (c.model == "idla") {
    RngStream rng(c.seed);
    const Cluster cl = idla_aggregate(c.n, rng, c.d);
    write_grid(cluster_grid(cl), dir / "cluster");
    add_radii(rep, cl);
    if (c.reps > 1) merge(rep, idla_fluctuations(c.n, c.reps, c.seed, c.d), "reps.");
  } else if (c.model == "algebra") {
    merge(rep, run_algebra(c, &dir, out));
  } else if (c.model == "estimate") {
    const auto rows = run_estimates(c);
    std::ofstream csv(dir / "estimates.csv", std::ios::binary);
    write_estimates_csv(csv, rows);
    for (const auto& e : rows) rep.add(e.name, e.value, e.stderr_, e.samples);
  }
  write_stats(rep, dir);
  render_run(c, dir, dir);
  return rep;
}

StatsReport verify_run(const RunConfig& c, const fs::path& dir) {
  StatsReport rep("verify " + c.model);
  if (c.model == "sandpile") {
    const Grid<std::int32_t> h = read_grid<std::int32_t>(dir / "heights");
    const Grid<std::uint64_t> u = read_grid<std::uint64_t>(dir / "odometer");
    SandpileField start{Grid<std::int32_t>(h.lo(), h.hi(), 0)};
    start.heights.at(Point(c.d)) = static_cast<std::int32_t>(c.n);
    const Stabilization st{SandpileField{h}, Odometer{u}, 0};
    const bool identity = check_stabilization_identity(start, st);
    const LeastActionReport lap = verify_least_action(start, u);
    rep.add("stable", st.field.is_stable());
    rep.add("stabilization_identity", identity);
    rep.add("odometer_satisfies_lap", lap.satisfies_lap);
    rep.add("least_action_dominates", lap.dominates);
    if (!st.field.is_stable()) rep.fail("final heights are not stable");
    if (!identity) rep.fail("final heights != initial + laplacian(odometer)");
    if (!lap.satisfies_lap || !lap.dominates) rep.fail("least action principle check failed");
  } else if (c.model == "divisible") {
    const Grid<double> mass = read_grid<double>(dir / "mass"), u = read_grid<double>(dir / "odometer");
    const Grid<double> s0 = point_mass(c);
    if (!mass.same_shape(s0) || !u.same_shape(s0)) throw std::runtime_error("saved grids do not match the config");
    double defect = 0, excess = 0;
    for (std::size_t k = 0; k < mass.size(); ++k) {
      const Point x = mass.point(k);
      excess = std::max(excess, mass[k] - 1);
      if (mass.on_ring(x)) continue;
      defect = std::max(defect, std::abs(mass[k] - s0[k] - laplacian(u, x) / (2.0 * c.d)));
    }
    const double tol = divisible_tol(c);
    rep.add("identity_defect", defect);
    rep.add("max_excess", excess);
    rep.add("tolerance", tol);
    if (excess >= tol) rep.fail("mass above 1 + tolerance");
    if (defect > 1e-9 * c.m) rep.fail("mass != initial + laplacian(odometer) / 2d");
  } else if (c.model == "rotor") {
    const Grid<std::uint64_t> u = read_grid<std::uint64_t>(dir / "odometer");
    const Grid<std::uint8_t> dirs = read_grid<std::uint8_t>(dir / "rotors");
    const Cluster cl = cluster_from_grid(read_grid<std::int64_t>(dir / "cluster"));
    const RotorMechanism mech = mechanism_of(c);
    const RotorState init = make_rotor_state(c.d, u.hi()[0], mech, rotor_init_of(c));
    merge(rep, check_odometer_flow(u, edge_flow_from_odometer(u, init.dirs, mech)));
    // Final rotor = initial advanced u(x) times.
    const auto& order = mech.order();
    std::int64_t mismatched = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      const auto p0 = static_cast<std::uint64_t>(std::find(order.begin(), order.end(), init.dirs[k]) - order.begin());
      if (order[(p0 + u[k]) % order.size()] != dirs[k]) ++mismatched;
    }
    rep.add("final_rotor_mismatches", static_cast<double>(mismatched));
    if (mismatched) rep.fail("final rotors inconsistent with odometer");
    merge(rep, smoothed_laplacian(u, 4, cl), "smoothing.");
    for (const auto& h : lattice_harmonics(c.d)) merge(rep, harmonic_balance(cl, h), h.name + ".");
  } else if (c.model == "idla") {
    const Cluster cl = cluster_from_grid(read_grid<std::int64_t>(dir / "cluster"));
    rep.add("sites", static_cast<double>(cl.size()));
    if (static_cast<std::int64_t>(cl.size()) != c.n) rep.fail("cluster size != n");
    if (!cl.contains(Point(c.d))) rep.fail("cluster misses the origin");
    if (!cl.is_connected()) rep.fail("cluster is not connected");
  } else {
    throw UsageError("verify supports sandpile, divisible, rotor and idla runs");
  }
  return rep;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Laplacian growth toolkit: sandpiles, rotor and IDLA aggregation, sandpile algebra"};
  app.require_subcommand(1);
  RunConfig flags;
  std::string config_path, run_dir;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--seed", flags.seed, "random seed");
    sub->add_option("--out", flags.out, "output directory (default $LAPGROWTH_OUT or ./lapgrowth_out)");
  };
  auto model_opts = [&](CLI::App* sub) {
    sub->add_option("--model", flags.model, "sandpile|divisible|rotor|idla|algebra|estimate");
    sub->add_option("--d", flags.d, "dimension");
    sub->add_option("--n", flags.n, "grains / walkers / particles");
    sub->add_option("--m", flags.m, "divisible-sandpile mass");
    sub->add_option("--mechanism", flags.mechanism, "clockwise|counterclockwise|standard");
    sub->add_option("--init", flags.rotor_init, "initial rotors: E|W|N|S|random");
    sub->add_option("--policy", flags.policy, "toppling order: fifo|lifo|random|sweep");
    sub->add_option("--tolerance", flags.tolerance, "divisible-sandpile tolerance (0: 1e-10 m)");
    sub->add_option("--reps", flags.reps, "IDLA replicas");
  };
  auto estimate_opts = [&](CLI::App* sub) {
    sub->add_option("--what", flags.what, "xi|zeta|lambda|tau|all");
    sub->add_option("--grid", flags.grid, "wired grid side");
    sub->add_option("--R", flags.R, "loop-erased walk box radius");
    sub->add_option("--samples", flags.samples, "samples");
    sub->add_option("--thin", flags.thin, "chain additions between samples");
    sub->add_option("--burnin", flags.burnin, "chain burn-in past first recurrence (-1: n^2 log n)");
  };
  auto algebra_opts = [&](CLI::App* sub) {
    sub->add_option("--graph", flags.graph, "edge-list file (default: built-in library)");
    sub->add_option("--op", flags.op, "identity|order|recurrents|tutte|unicycles|laws|all");
  };

  CLI::App* sim = app.add_subcommand("simulate", "run a model and save grids, images and stats");
  common(sim);
  model_opts(sim);
  estimate_opts(sim);
  algebra_opts(sim);
  CLI::App* ver = app.add_subcommand("verify", "check the invariants of a saved or fresh run");
  common(ver);
  model_opts(ver);
  ver->add_option("--run", run_dir, "saved run directory");
  CLI::App* est = app.add_subcommand("estimate", "Monte-Carlo estimates, CSV output");
  common(est);
  estimate_opts(est);
  CLI::App* alg = app.add_subcommand("algebra", "sandpile group of a graph");
  common(alg);
  algebra_opts(alg);
  alg->add_option("--grid", flags.grid, "wired grid side for --op identity without --graph");
  CLI::App* ren = app.add_subcommand("render", "re-render the images of a saved run");
  common(ren);
  ren->add_option("--run", run_dir, "saved run directory")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }
  CLI::App* sub = app.get_subcommands().front();

  try {
    if (!run_dir.empty() && !fs::is_directory(run_dir)) throw UsageError("no run directory " + run_dir);
    RunConfig c;
    if (!config_path.empty()) c = load_config(config_path);
    else if (!run_dir.empty() && fs::exists(fs::path(run_dir) / "config.json"))
      c = load_config(fs::path(run_dir) / "config.json");
    auto given = [&](const char* name) {
      const CLI::Option* o = sub->get_option_no_throw(name);
      return o && o->count() > 0;
    };
    if (given("--seed")) c.seed = flags.seed;
    if (given("--out")) c.out = flags.out;
    if (given("--model")) c.model = flags.model;
    if (given("--d")) c.d = flags.d;
    if (given("--n")) c.n = flags.n;
    if (given("--m")) c.m = flags.m;
    if (given("--mechanism")) c.mechanism = flags.mechanism;
    if (given("--init")) c.rotor_init = flags.rotor_init;
    if (given("--policy")) c.policy = flags.policy;
    if (given("--tolerance")) c.tolerance = flags.tolerance;
    if (given("--reps")) c.reps = flags.reps;
    if (given("--what")) c.what = flags.what;
    if (given("--grid")) c.grid = flags.grid;
    if (given("--R")) c.R = flags.R;
    if (given("--samples")) c.samples = flags.samples;
    if (given("--thin")) c.thin = flags.thin;
    if (given("--burnin")) c.burnin = flags.burnin;
    if (given("--graph")) c.graph = flags.graph;
    if (given("--op")) c.op = flags.op;
    if (sub == est) c.model = "estimate";
    if (sub == alg) c.model = "algebra";
    validate(c);

    const std::string name = sub->get_name();
    StatsReport rep;
    if (name == "simulate") {
      const fs::path dir = output_dir(c);
      rep = simulate(c, dir, out);
      out << "wrote " << dir.string() << '\n';
    } else if (name == "verify") {
      if (!run_dir.empty()) {
        rep = verify_run(c, run_dir);
      } else {
        const fs::path dir = output_dir(c);
        simulate(c, dir, out);
        rep = verify_run(c, dir);
      }
    } else if (name == "estimate") {
      const auto rows = run_estimates(c);
      write_estimates_csv(out, rows);
      const fs::path dir = output_dir(c);
      fs::create_directories(dir);
      std::ofstream csv(dir / "estimates.csv", std::ios::binary);
      write_estimates_csv(csv, rows);
      return kExitOk;
    } else if (name == "algebra") {
      std::optional<fs::path> dir;
      if (given("--out")) {
        dir = output_dir(c);
        fs::create_directories(*dir);
      }
      rep = run_algebra(c, dir ? &*dir : nullptr, out);
      if (dir) {
        write_stats(rep, *dir);
        if (c.graph.empty() && c.op == "identity") render_run(c, *dir, *dir);
      }
    } else if (name == "render") {
      const fs::path into = given("--out") ? output_dir(c) : fs::path(run_dir);
      fs::create_directories(into);
      render_run(c, run_dir, into);
      out << "rendered " << into.string() << '\n';
      return kExitOk;
    }
    rep.print(out);
    return rep.passed() ? kExitOk : kExitCheckFailed;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace lapgrowth
