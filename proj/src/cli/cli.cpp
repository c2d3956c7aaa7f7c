#include "imdd/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "imdd/analysis.hpp"
#include "imdd/catalog.hpp"
#include "imdd/constellation_io.hpp"
#include "imdd/lattice.hpp"
#include "imdd/optimizer.hpp"
#include "imdd/parallel.hpp"
#include "imdd/reproduce.hpp"
#include "imdd/simulator.hpp"
#include "manifest.hpp"

namespace imdd::cli {
namespace {

using nlohmann::json;

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

// Text sink that is either stdout or a file registered with the manifest.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorKind::invalid_argument, "cannot write " + path);
    }
    stream_ = file_ ? file_.get() : &fallback;
  }

  std::ostream& stream() { return *stream_; }

  void finish(RunManifest& manifest) {
    if (!file_) return;
    file_->close();
    manifest.add_output(path_);
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

std::string fixed(double v, int decimals) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(decimals) << v;
  return s.str();
}

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(6) << v;
  return s.str();
}

std::uint64_t count_from_double(double v, const char* what) {
  if (!(v >= 0.0) || v > 1.8e19 || std::floor(v) != v) {
    throw Error(ErrorKind::invalid_argument, std::string(what) + " must be a nonnegative integer");
  }
  return static_cast<std::uint64_t>(v);
}

struct Source {
  std::string id;
  std::string in;

  void attach(CLI::App* app) {
    auto* id_opt = app->add_option("--id", id, "catalog id");
    auto* in_opt = app->add_option("--in", in, "constellation JSON file");
    id_opt->excludes(in_opt);
  }

  Constellation load() const {
    if (!id.empty()) return catalog::get(id).constellation;
    if (!in.empty()) return load_constellation(in);
    throw Error(ErrorKind::invalid_argument, "give either --id or --in");
  }

  void record(json& params) const {
    if (!id.empty()) params["id"] = id;
    if (!in.empty()) params["in"] = in;
  }
};

unsigned resolve_threads(unsigned requested) { return requested == 0 ? default_thread_count() : requested; }

// ---------------------------------------------------------------------------

int cmd_catalog_list(Streams io) {
  io.out << "id,M,eta,bandwidth_model,provenance\n";
  for (const auto& row : catalog::list()) {
    io.out << row.id << ',' << row.size << ',' << fmt(row.spectral_efficiency) << ','
           << to_string(row.bandwidth_model) << ',' << catalog::to_string(catalog::get(row.id).provenance) << '\n';
  }
  return kOk;
}

int cmd_catalog_export(Streams io, const std::string& id, const std::string& out_path) {
  RunManifest manifest("catalog export");
  manifest.parameters()["id"] = id;
  const auto& entry = catalog::get(id);
  Sink sink(out_path, io.out);
  sink.stream() << to_json(entry.constellation);
  sink.finish(manifest);
  manifest.write();
  return kOk;
}

int cmd_evaluate(Streams io, const Source& src, double tol) {
  const Constellation c = src.load();
  const auto eta = spectral_efficiency(c);
  const auto cone = cone_contains(c, tol);
  io.out << "name: " << c.name() << '\n'
         << "M: " << c.size() << '\n'
         << "dim: " << c.dim() << '\n'
         << "bandwidth_model: " << to_string(c.bandwidth_model()) << '\n'
         << "d_min: " << fmt(min_distance(c), 12) << '\n'
         << "K: " << kissing_count(c) << '\n'
         << "E_s: " << fmt(avg_electrical_energy(c), 12) << '\n';
  if (c.points().size() > 0 && std::all_of(c.points().begin(), c.points().end(), [&](const Vec3& p) { return p[0] >= -tol; })) {
    io.out << "E[s1]: " << fmt(avg_optical_amplitude(c, tol), 12) << '\n';
  } else {
    io.out << "E[s1]: n/a (negative DC coordinate)\n";
  }
  io.out << "eta: " << fmt(eta.bits_per_hz) << (eta.power_of_two ? "" : " (M is not a power of two)") << '\n'
         << "cone (tol " << tol << "): " << (cone.admissible ? "inside" : "VIOLATED") << '\n';
  for (const auto& v : cone.violations) {
    io.out << "  point " << v.index << " violation " << sci(v.magnitude) << '\n';
  }
  return kOk;
}

int cmd_optimize(Streams io, optimizer::PackingProblem problem, unsigned threads, const std::string& out_path,
                 const std::string& report_path) {
  RunManifest manifest("optimize");
  manifest.parameters() = {{"M", problem.m},
                           {"objective", std::string(to_string(problem.objective))},
                           {"d_min", problem.d_min},
                           {"starts", problem.starts},
                           {"penalty",
                            {{"initial_weight", problem.penalty.initial_weight},
                             {"growth", problem.penalty.growth},
                             {"rounds", problem.penalty.rounds}}}};
  manifest.add_seed(problem.seed);

  const auto outcome = optimizer::solve(problem, threads);
  const auto& best = outcome.best;
  Sink sink(out_path, io.out);
  sink.stream() << to_json(best.constellation);
  sink.finish(manifest);

  std::size_t feasible = 0;
  std::size_t converged = 0;
  for (const auto& s : outcome.starts) {
    feasible += s.feasible;
    converged += s.converged;
  }
  json report{{"objective", std::string(to_string(best.objective))},
              {"objective_value", best.objective_value},
              {"start_index", best.start_index},
              {"converged", best.converged},
              {"feasibility",
               {{"max_cone_violation", best.feasibility.max_cone_violation},
                {"min_pair_distance", best.feasibility.min_pair_distance}}},
              {"energy", avg_electrical_energy(best.constellation)},
              {"dc_amplitude", avg_optical_amplitude(best.constellation)},
              {"kissing_count", kissing_count(best.constellation)},
              {"starts", outcome.starts.size()},
              {"feasible_starts", feasible},
              {"converged_starts", converged}};
  // Catalog references for the same size, if any.
  json refs = json::array();
  for (const auto& id : {"c4", "c-pe-8", "c-po-8", "l8"}) {
    const auto& ref = catalog::get(id).constellation;
    if (ref.size() != problem.m) continue;
    const auto cmp = optimizer::compare_to_reference(best, ref);
    refs.push_back({{"id", id},
                    {"objective_gap", cmp.objective_gap},
                    {"hausdorff", cmp.hausdorff},
                    {"distance_multiset_deviation", cmp.distance_multiset_deviation}});
  }
  report["references"] = refs;
  if (!report_path.empty()) {
    Sink rep(report_path, io.out);
    rep.stream() << report.dump(2) << '\n';
    rep.finish(manifest);
  } else {
    io.err << report.dump(2) << '\n';
  }
  manifest.write();
  return best.converged ? kOk : kInfeasible;
}

int cmd_lattice(Streams io, std::size_t m, Objective objective, double h_max, const std::string& frames,
                const std::string& out_path) {
  lattice::FrameGrid grid;
  if (frames == "default") {
    grid = lattice::FrameGrid::aligned_only;
  } else if (frames == "grid") {
    grid = lattice::FrameGrid::grid;
  } else {
    throw Error(ErrorKind::invalid_argument, "--frames must be 'default' or 'grid'");
  }
  RunManifest manifest("lattice-search");
  manifest.parameters() = {{"M", m}, {"objective", std::string(to_string(objective))}, {"hmax", h_max}, {"frames", frames}};
  const auto result = lattice::optimize_frame(m, objective, grid, h_max);
  Sink sink(out_path, io.out);
  sink.stream() << to_json(result.constellation);
  sink.finish(manifest);
  io.err << "frame " << result.frame_index << " of " << result.frames_evaluated << ", objective "
         << fmt(result.objective, 12) << ", offset (" << fmt(result.frame.offset[0]) << ", "
         << fmt(result.frame.offset[1]) << ", " << fmt(result.frame.offset[2]) << ")\n";
  manifest.write();
  return kOk;
}

int cmd_bound(Streams io, const Source& src, const std::string& grid_spec, const std::string& definition_text,
              const std::string& mode, const std::string& out_path) {
  if (mode != "both" && mode != "nn" && mode != "full") {
    throw Error(ErrorKind::invalid_argument, "--mode must be nn, full or both");
  }
  const Constellation c = src.load();
  const auto definition = analysis::parse_definition(definition_text);
  const auto grid = analysis::parse_db_grid(grid_spec);
  RunManifest manifest("bound");
  src.record(manifest.parameters());
  manifest.parameters()["snr_db"] = grid_spec;
  manifest.parameters()["definition"] = std::string(analysis::to_string(definition));
  manifest.parameters()["mode"] = mode;

  Sink sink(out_path, io.out);
  auto& os = sink.stream();
  os << "snr_db";
  if (mode != "full") os << ",ser_nn";
  if (mode != "nn") os << ",ser_full";
  os << '\n';
  for (const auto& row : analysis::bound_curve(c, grid, definition)) {
    os << fmt(row.snr.value_db, 10);
    if (mode != "full") os << ',' << sci(row.ser_nearest);
    if (mode != "nn") os << ',' << sci(row.ser_full);
    os << '\n';
  }
  sink.finish(manifest);
  manifest.write();
  return kOk;
}

int cmd_simulate(Streams io, const Source& src, simulator::SimConfig cfg, const std::string& grid_spec,
                 const std::string& out_path) {
  const Constellation c = src.load();
  cfg.snr_db = analysis::parse_db_grid(grid_spec);
  RunManifest manifest("simulate");
  src.record(manifest.parameters());
  manifest.parameters()["snr_db"] = grid_spec;
  manifest.parameters()["definition"] = std::string(analysis::to_string(cfg.definition));
  manifest.parameters()["min_errors"] = cfg.stop.min_errors;
  manifest.parameters()["max_symbols"] = cfg.stop.max_symbols;
  manifest.parameters()["batch"] = cfg.batch_size;
  manifest.add_seed(cfg.seed);

  const auto estimates = simulator::simulate_curve(c, cfg);
  Sink sink(out_path, io.out);
  auto& os = sink.stream();
  os << "snr_db,definition,errors,trials,ser,ci95\n";
  for (const auto& e : estimates) {
    os << fmt(e.snr.value_db, 10) << ',' << analysis::to_string(e.snr.definition) << ',' << e.errors << ','
       << e.trials << ',' << sci(e.ser) << ',' << sci(e.ci95_halfwidth) << '\n';
    if (!e.reliable()) io.err << "warning: no errors at " << e.snr.value_db << " dB; estimate unreliable\n";
  }
  sink.finish(manifest);
  manifest.write();
  return kOk;
}

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> ids;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) ids.push_back(item);
  }
  return ids;
}

int cmd_gains(Streams io, const std::string& ids_text, double target, const std::string& definition_text,
              const std::string& mode_text, const std::string& out_path) {
  const auto definition = analysis::parse_definition(definition_text);
  analysis::BoundMode mode;
  if (mode_text == "nn") {
    mode = analysis::BoundMode::nearest_neighbor;
  } else if (mode_text == "full") {
    mode = analysis::BoundMode::full;
  } else {
    throw Error(ErrorKind::invalid_argument, "--mode must be nn or full");
  }
  const auto ids = split_ids(ids_text);
  if (ids.empty()) throw Error(ErrorKind::invalid_argument, "--ids needs at least one id");
  std::vector<Constellation> cs;
  for (const auto& id : ids) cs.push_back(catalog::get(id).constellation);
  const auto table = analysis::gain_table(cs, target, definition, mode);
  if (table.mixed_spectral_efficiency) {
    io.err << "warning: formats differ in spectral efficiency; gains are not like-for-like\n";
  }
  RunManifest manifest("gains");
  manifest.parameters() = {{"ids", ids},
                           {"ser", target},
                           {"definition", std::string(analysis::to_string(definition))},
                           {"mode", std::string(analysis::to_string(mode))}};
  Sink sink(out_path, io.out);
  auto& os = sink.stream();
  os << "format,required_db";
  for (const auto& id : ids) os << ",gain_over_" << id;
  os << '\n';
  for (std::size_t a = 0; a < ids.size(); ++a) {
    os << ids[a] << ',' << fixed(table.required_db[a], 4);
    for (std::size_t b = 0; b < ids.size(); ++b) os << ',' << fixed(table.gain(a, b), 4);
    os << '\n';
  }
  sink.finish(manifest);
  manifest.write();
  return kOk;
}

int cmd_reproduce(Streams io, double target, bool mc, simulator::StoppingRule stop, std::uint64_t seed,
                  unsigned threads, const std::string& out_path) {
  std::optional<reproduce::McOptions> mc_options;
  RunManifest manifest("reproduce");
  manifest.parameters() = {{"target_ser", target}, {"mc", mc}};
  if (mc) {
    mc_options = reproduce::McOptions{stop, seed, threads};
    manifest.parameters()["min_errors"] = stop.min_errors;
    manifest.parameters()["max_symbols"] = stop.max_symbols;
    manifest.add_seed(seed);
  }
  const auto rows = reproduce::reproduce_gains(target, mc_options);
  Sink sink(out_path, io.out);
  auto& os = sink.stream();
  os << "definition,format,over,reference_db,nn_db,full_db,delta_nn,delta_full,match";
  if (mc) os << ",mc_db,delta_mc";
  os << '\n';
  bool all_match = true;
  for (const auto& r : rows) {
    const bool nn = r.nearest_matches();
    const bool full = r.full_matches();
    all_match = all_match && (nn || full);
    os << analysis::to_string(r.reference.definition) << ',' << r.reference.format << ',' << r.reference.over << ','
       << fixed(r.reference.gain_db, 2) << ',' << fixed(r.nearest_db, 4) << ',' << fixed(r.full_db, 4) << ','
       << fixed(r.nearest_db - r.reference.gain_db, 4) << ',' << fixed(r.full_db - r.reference.gain_db, 4) << ','
       << (nn && full ? "both" : nn ? "nn" : full ? "full" : "none");
    if (r.mc_db) os << ',' << fixed(*r.mc_db, 4) << ',' << fixed(*r.mc_db - r.reference.gain_db, 4);
    os << '\n';
  }
  sink.finish(manifest);
  manifest.write();
  if (!all_match) io.err << "some gains differ from the reference by more than " << reproduce::kGainToleranceDb << " dB\n";
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::infeasible: return kInfeasible;
    case ErrorKind::resource_cap: return kResourceCap;
    case ErrorKind::invalid_argument:
    case ErrorKind::catalog_miss:
    case ErrorKind::invalid_constellation:
    case ErrorKind::dimension_mismatch: return kUsage;
    default: return kFailure;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Streams io{out, err};
  CLI::App app{"Constellation design and link analysis for IM/DD channels", "imdd"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", IMDD_VERSION);

  unsigned threads = 0;
  app.add_option("--threads", threads, "worker cap (default: IMDD_THREADS or all cores)");

  // catalog
  auto* catalog_cmd = app.add_subcommand("catalog", "list or export reference constellations");
  catalog_cmd->require_subcommand(1);
  auto* catalog_list = catalog_cmd->add_subcommand("list", "list catalog entries");
  auto* catalog_export = catalog_cmd->add_subcommand("export", "write an entry as JSON");
  std::string export_id, export_out;
  catalog_export->add_option("--id", export_id, "catalog id")->required();
  catalog_export->add_option("--out", export_out, "output file (default stdout)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "metrics of a constellation");
  Source eval_src;
  eval_src.attach(evaluate);
  double eval_tol = 1e-9;
  evaluate->add_option("--tol", eval_tol, "cone membership tolerance");

  // optimize
  auto* optimize = app.add_subcommand("optimize", "multistart packing in the admissible cone");
  optimizer::PackingProblem problem;
  std::string objective_text = "electrical";
  std::optional<std::size_t> starts;
  std::string opt_out, opt_report;
  optimize->add_option("--M", problem.m, "constellation size")->required()->check(CLI::Range(2, 16));
  optimize->add_option("--objective", objective_text, "electrical | optical");
  optimize->add_option("--starts", starts, "random starts (default 200 for M<=4, else 2000)");
  optimize->add_option("--seed", problem.seed, "master seed");
  optimize->add_option("--dmin", problem.d_min, "minimum distance");
  optimize->add_option("--rounds", problem.penalty.rounds, "penalty rounds");
  optimize->add_option("--out", opt_out, "constellation JSON (default stdout)");
  optimize->add_option("--report", opt_report, "report JSON (default stderr)");

  // lattice-search
  auto* lattice_cmd = app.add_subcommand("lattice-search", "best A3 lattice subset inside the cone");
  std::size_t lat_m = 8;
  std::string lat_objective = "electrical", lat_frames = "default", lat_out;
  double lat_hmax = 3.0;
  lattice_cmd->add_option("--M", lat_m, "constellation size")->required()->check(CLI::Range(2, 64));
  lattice_cmd->add_option("--objective", lat_objective, "electrical | optical");
  lattice_cmd->add_option("--hmax", lat_hmax, "DC cutoff for candidates");
  lattice_cmd->add_option("--frames", lat_frames, "default | grid");
  lattice_cmd->add_option("--out", lat_out, "constellation JSON (default stdout)");

  // bound
  auto* bound = app.add_subcommand("bound", "union-bound SER curve");
  Source bound_src;
  bound_src.attach(bound);
  std::string bound_grid = "0:20:0.25", bound_def = "electrical", bound_mode = "both", bound_out;
  bound->add_option("--snr-db", bound_grid, "start:stop:step");
  bound->add_option("--definition", bound_def, "electrical | optical");
  bound->add_option("--mode", bound_mode, "nn | full | both");
  bound->add_option("--out", bound_out, "CSV file (default stdout)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo SER curve");
  Source sim_src;
  sim_src.attach(simulate);
  simulator::SimConfig sim_cfg;
  std::string sim_grid = "0:20:0.25", sim_def = "electrical", sim_out;
  double sim_min_errors = 200, sim_max_symbols = 1e9;
  simulate->add_option("--snr-db", sim_grid, "start:stop:step");
  simulate->add_option("--definition", sim_def, "electrical | optical");
  simulate->add_option("--min-errors", sim_min_errors, "stop after this many errors");
  simulate->add_option("--max-symbols", sim_max_symbols, "symbol budget per point");
  simulate->add_option("--seed", sim_cfg.seed, "master seed");
  simulate->add_option("--batch", sim_cfg.batch_size, "symbols per batch");
  simulate->add_option("--out", sim_out, "CSV file (default stdout)");

  // gains
  auto* gains = app.add_subcommand("gains", "pairwise dB gains at a target SER");
  std::string gains_ids, gains_def = "electrical", gains_mode = "nn", gains_out;
  double gains_ser = 1e-6;
  gains->add_option("--ids", gains_ids, "comma separated catalog ids")->required();
  gains->add_option("--ser", gains_ser, "target SER");
  gains->add_option("--definition", gains_def, "electrical | optical");
  gains->add_option("--mode", gains_mode, "nn | full");
  gains->add_option("--out", gains_out, "CSV file (default stdout)");

  // reproduce
  auto* repro = app.add_subcommand("reproduce", "recompute the reference gain table");
  double repro_ser = 1e-6, repro_min_errors = 200, repro_max_symbols = 1e9;
  bool repro_mc = false;
  std::uint64_t repro_seed = 1;
  std::string repro_out;
  repro->add_option("--target-ser", repro_ser, "target SER");
  repro->add_flag("--mc", repro_mc, "also estimate crossings by simulation");
  repro->add_option("--min-errors", repro_min_errors, "simulation stopping errors");
  repro->add_option("--max-symbols", repro_max_symbols, "simulation symbol budget per point");
  repro->add_option("--seed", repro_seed, "simulation seed");
  repro->add_option("--out", repro_out, "CSV file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // --help and --version are successful exits
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const unsigned workers = resolve_threads(threads);
    if (catalog_list->parsed()) return cmd_catalog_list(io);
    if (catalog_export->parsed()) return cmd_catalog_export(io, export_id, export_out);
    if (evaluate->parsed()) return cmd_evaluate(io, eval_src, eval_tol);
    if (optimize->parsed()) {
      problem.objective = parse_objective(objective_text);
      problem.starts = starts.value_or(optimizer::PackingProblem::default_starts(problem.m));
      return cmd_optimize(io, problem, workers, opt_out, opt_report);
    }
    if (lattice_cmd->parsed()) {
      return cmd_lattice(io, lat_m, parse_objective(lat_objective), lat_hmax, lat_frames, lat_out);
    }
    if (bound->parsed()) return cmd_bound(io, bound_src, bound_grid, bound_def, bound_mode, bound_out);
    if (simulate->parsed()) {
      sim_cfg.definition = analysis::parse_definition(sim_def);
      sim_cfg.stop.min_errors = count_from_double(sim_min_errors, "--min-errors");
      sim_cfg.stop.max_symbols = count_from_double(sim_max_symbols, "--max-symbols");
      sim_cfg.threads = workers;
      return cmd_simulate(io, sim_src, sim_cfg, sim_grid, sim_out);
    }
    if (gains->parsed()) return cmd_gains(io, gains_ids, gains_ser, gains_def, gains_mode, gains_out);
    if (repro->parsed()) {
      simulator::StoppingRule stop{count_from_double(repro_min_errors, "--min-errors"),
                                   count_from_double(repro_max_symbols, "--max-symbols")};
      return cmd_reproduce(io, repro_ser, repro_mc, stop, repro_seed, workers, repro_out);
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  err << app.help();
  return kUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace imdd::cli
