#include "cfq/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfq/discrete/chsh.hpp"
#include "cfq/discrete/json_io.hpp"
#include "cfq/error.hpp"
#include "cfq/fpe/solver.hpp"
#include "cfq/io/csv.hpp"
#include "cfq/io/records.hpp"
#include "cfq/qubit/dynamics.hpp"
#include "cfq/qubit/trajectories.hpp"
#include "cfq/smoothing/ensemble.hpp"
#include "cfq/smoothing/rate.hpp"
#include "cfq/smoothing/suspectation.hpp"

namespace cfq::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string fixed12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

/// Output bookkeeping shared by the file-producing commands.
class Run {
 public:
  Run(const RunConfig& c, std::string command) : c_(c), command_(std::move(command)), start_(Clock::now()) {
    fs::create_directories(c_.out_dir);
  }

  std::string path(const std::string& default_name, bool primary = false) {
    const std::string name = primary && !c_.out.empty() ? c_.out : default_name;
    const fs::path p = fs::path(name).is_absolute() ? fs::path(name) : fs::path(c_.out_dir) / name;
    outputs_.push_back(p.filename().string());
    return p.string();
  }

  json& results() { return results_; }

  void finish(std::ostream& out) {
    const auto& s = c_.sim;
    json m;
    m["command"] = command_;
    m["version"] = CFQ_VERSION;
    m["seed"] = s.seed;
    m["parameters"] = {{"gamma", s.gamma},       {"omega", s.omega},           {"eta_a", s.eta_a},
                       {"eta_b", s.eta_b},       {"t_final", s.t_final},       {"dt", s.dt},
                       {"t_click", c_.t_click},  {"stride", c_.stride},        {"full_scale", c_.full_scale},
                       {"n_ostensible", c_.n_ostensible}, {"n_resample", c_.n_resample},
                       {"n_suspect", c_.n_suspect},       {"bin_width", c_.bin_width},
                       {"n_grid", c_.n_grid},   {"sigma0", c_.sigma0},        {"tau", c_.tau}};
    m["outputs"] = outputs_;
    m["results"] = results_;
    m["wall_time_seconds"] = std::chrono::duration<double>(Clock::now() - start_).count();
    const fs::path p = fs::path(c_.out_dir) / ("manifest_" + command_ + ".json");
    io::write_json(p.string(), m);
    out << "wrote";
    for (const auto& o : outputs_) out << ' ' << o;
    out << " and " << p.filename().string() << '\n';
  }

 private:
  const RunConfig& c_;
  std::string command_;
  Clock::time_point start_;
  std::vector<std::string> outputs_;
  json results_ = json::object();
};

std::vector<double> grid(const RunConfig& c) {
  std::vector<double> t;
  for (std::size_t k = 0; k <= c.sim.steps(); k += c.stride) t.push_back(static_cast<double>(k) * c.sim.dt);
  return t;
}

qubit::ClickRecord alice_record(const RunConfig& c) { return qubit::ClickRecord{{c.t_click}}; }

std::vector<smoothing::WeightedEnsemble> ensembles(const RunConfig& c, const smoothing::PiecewiseLinearRate& rate) {
  return smoothing::build_ostensible_ensemble(alice_record(c), c.sim, c.n_ostensible, rate);
}

json ensemble_summary(const std::vector<smoothing::WeightedEnsemble>& es) {
  json out = json::array();
  for (const auto& e : es) {
    const std::vector<double> w = e.normalized_weights();
    double sq = 0.0;
    for (double x : w) sq += x * x;
    std::size_t zero = 0;
    for (double l : e.log_weights) zero += l == -std::numeric_limits<double>::infinity();
    out.push_back({{"interval", e.interval},
                   {"t0", e.t0},
                   {"t1", e.t1},
                   {"records", e.records.size()},
                   {"zero_weight", zero},
                   {"effective_size", 1.0 / sq}});
  }
  return out;
}

std::vector<io::RecordLine> lines_of(const smoothing::WeightedEnsemble& e) {
  std::vector<io::RecordLine> lines;
  for (std::size_t i = 0; i < e.records.size(); ++i) lines.push_back({i, e.records[i], e.log_weights[i]});
  return lines;
}

std::vector<io::RecordLine> lines_of(const std::vector<qubit::ClickRecord>& records) {
  std::vector<io::RecordLine> lines;
  for (std::size_t i = 0; i < records.size(); ++i) lines.push_back({i, records[i], 0.0});
  return lines;
}

void print_terms(const discrete::Scenario& s, const discrete::SupposabilityResult& r, std::ostream& out) {
  for (const auto& term : r.terms) {
    out << "  fixture";
    for (const auto& [event, value] : term.fixture) {
      const auto& e = s.system.event(event);
      out << ' ' << e.id << '=' << e.domain[static_cast<std::size_t>(value)];
    }
    out << ": posterior = " << fixed12(term.posterior) << ", counterfactual = " << fixed12(term.counterfactual)
        << '\n';
  }
}

}  // namespace

void validate(const RunConfig& c, const std::string& command) {
  qubit::validate(c.sim);
  if (command == "chsh") {
    if (!std::isfinite(c.alice_angle) || !std::isfinite(c.bob_angle) || !std::isfinite(c.cf_angle)) {
      throw InputError("angles must be finite");
    }
    return;
  }
  if (command == "supposability") {
    if (c.scenario_path.empty()) throw InputError("supposability needs a scenario file");
    return;
  }
  if (c.stride == 0) throw InputError("--stride must be positive");
  if (command == "filter" || command == "jumprate" || command == "suspect") {
    if (!(c.t_click > 0.0 && c.t_click < c.sim.t_final)) throw InputError("--t-click must lie inside (0, t_final)");
  }
  if (command == "jumprate" || command == "suspect") {
    if (c.n_ostensible == 0) throw InputError("--n-ostensible must be positive");
  }
  if (command == "jumprate") {
    if (c.n_resample == 0) throw InputError("--n-resample must be positive");
    if (!(c.bin_width > 0.0)) throw InputError("--bin-width must be positive");
  }
  if (command == "suspect" && c.n_suspect == 0) throw InputError("--n-suspect must be positive");
  if (command == "fpe") {
    fpe::FpeParams fp = fpe::FpeParams::from(c.sim);
    fp.n_grid = c.n_grid;
    fp.sigma = c.sigma0;
    fpe::validate(fp);
    if (!(c.tau >= 0.0)) throw InputError("--tau must be non-negative");
  }
}

int cmd_chsh(const RunConfig& c, std::ostream& out) {
  const auto problem = discrete::chsh_scenario(c.alice_angle, c.bob_angle, c.cf_angle);
  const auto r = discrete::supposability(problem.scenario, problem.query);
  out << "supposability = " << fixed12(r.value) << '\n';
  if (c.verbose) print_terms(problem.scenario, r, out);
  return 0;
}

int cmd_supposability(const RunConfig& c, std::ostream& out) {
  const auto doc = discrete::load_scenario(c.scenario_path);
  const auto r = discrete::supposability(doc.scenario, doc.query);
  out << "supposability = " << fixed12(r.value) << '\n';
  if (c.verbose) print_terms(doc.scenario, r, out);
  return 0;
}

int cmd_lindblad(const RunConfig& c, std::ostream& out) {
  Run run(c, "lindblad");
  std::vector<qubit::QubitOperator> states;
  std::vector<double> traces;
  qubit::QubitOperator rho = qubit::ground_projector();
  for (std::size_t k = 0; k <= c.sim.steps(); ++k) {
    if (k % c.stride == 0) {
      states.push_back(rho);
      traces.push_back(qubit::trace(rho));
    }
    if (k < c.sim.steps()) rho = qubit::lindblad_step(rho, c.sim, c.sim.dt);
  }
  io::write_csv(run.path("lindblad.csv", true), io::bloch_table(grid(c), states, traces));
  run.finish(out);
  return 0;
}

int cmd_filter(const RunConfig& c, std::ostream& out) {
  Run run(c, "filter");
  const auto f = qubit::filter_jump_record(alice_record(c), c.sim);
  std::vector<qubit::QubitOperator> states;
  std::vector<double> traces;
  for (std::size_t k = 0; k < f.states.size(); k += c.stride) {
    states.push_back(f.states[k]);
    traces.push_back(std::exp(f.log_density[k]));
  }
  io::write_csv(run.path("filter.csv", true), io::bloch_table(grid(c), states, traces));
  run.results()["log_record_density"] = f.log_density.back();
  run.finish(out);
  return 0;
}

int cmd_jumprate(const RunConfig& c, std::ostream& out) {
  Run run(c, "jumprate");
  const auto rate = smoothing::ostensible_rate(alice_record(c), c.sim);
  const auto es = ensembles(c, rate);
  const auto resampled = smoothing::resample_joint(es, c.n_resample, c.sim.seed);
  const auto curve = smoothing::conditioned_jump_rate(resampled, 0.0, c.sim.t_final, c.bin_width);
  const auto ostensible = smoothing::tabulate_rate(rate, 0.0, c.sim.t_final, c.bin_width);

  io::write_csv(run.path("jump_rate.csv", true), io::curve_table(curve.t, curve.value, curve.stderr_));
  io::write_csv(run.path("ostensible_rate.csv"),
                io::curve_table(ostensible.t, ostensible.value, ostensible.stderr_));
  for (const auto& e : es) {
    io::write_records(run.path("ensemble_interval" + std::to_string(e.interval) + ".jsonl"), lines_of(e));
  }
  io::write_records(run.path("resampled.jsonl"), lines_of(resampled));

  // The conditioned rate has a comparable maximum in the initial transient, so
  // the search covers only the last Rabi period before the click.
  const double period = 2.0 * std::numbers::pi / c.sim.omega_prime();
  const double lo = std::isfinite(period) ? std::max(0.0, c.t_click - period) : 0.0;
  const auto peak = smoothing::smoothed_peak(curve, lo, c.t_click, 0.25);
  const auto click_bin = static_cast<std::size_t>(std::floor(c.t_click / c.bin_width + 1e-9));
  double clicks = 0.0;
  for (const auto& r : resampled) clicks += static_cast<double>(r.size());
  run.results() = {{"peak_time", peak.t},
                   {"peak_rate", peak.height},
                   {"rate_at_click_bin", curve.value.at(click_bin)},
                   {"mean_clicks_per_record", clicks / static_cast<double>(resampled.size())},
                   {"ensembles", ensemble_summary(es)}};
  out << "peak rate " << peak.height << " at t = " << peak.t << "; rate at t_click bin " << curve.value.at(click_bin)
      << '\n';
  run.finish(out);
  return 0;
}

int cmd_suspect(const RunConfig& c, std::ostream& out) {
  Run run(c, "suspect");
  const auto rate = smoothing::ostensible_rate(alice_record(c), c.sim);
  const auto es = ensembles(c, rate);
  const auto resampled = smoothing::resample_joint(es, c.n_suspect, c.sim.seed);
  const auto curve = smoothing::suspectation_curve(resampled, c.sim, c.stride);

  std::vector<double> unconditioned;
  qubit::QubitOperator rho = qubit::ground_projector();
  for (std::size_t k = 0; k <= c.sim.steps(); ++k) {
    if (k % c.stride == 0) unconditioned.push_back(qubit::expectation(rho, qubit::sigma_y()));
    if (k < c.sim.steps()) rho = qubit::lindblad_step(rho, c.sim, c.sim.dt);
  }
  io::write_csv(run.path("suspectation.csv", true), io::curve_table(curve.t, curve.value, curve.stderr_));
  io::write_csv(run.path("unconditioned.csv"),
                io::curve_table(curve.t, unconditioned, std::vector<double>(unconditioned.size(), 0.0)));

  std::size_t best = 0;
  for (std::size_t j = 1; j < curve.value.size(); ++j) {
    if (curve.value[j] > curve.value[best]) best = j;
  }
  double max_se = 0.0;
  for (double s : curve.stderr_) max_se = std::max(max_se, s);
  run.results() = {{"peak_time", curve.t[best]},
                   {"peak_value", curve.value[best]},
                   {"unconditioned_at_peak", unconditioned[best]},
                   {"records", curve.n_records},
                   {"excluded", curve.n_excluded},
                   {"max_stderr", max_se},
                   {"ensembles", ensemble_summary(es)}};
  out << "suspectation peak " << curve.value[best] << " at t = " << curve.t[best] << " (" << curve.n_excluded
      << " records excluded)\n";
  run.finish(out);
  return 0;
}

int cmd_fpe(const RunConfig& c, std::ostream& out) {
  Run run(c, "fpe");
  fpe::FpeParams fp = fpe::FpeParams::from(c.sim);
  fp.n_grid = c.n_grid;
  fp.sigma = c.sigma0;
  fpe::EvolveStats stats;
  const auto pdf = fpe::characteristic_record_protocol(fp, c.tau, &stats);
  io::write_csv(run.path("theta_pdf.csv", true), io::theta_table(pdf));
  const double pm = fpe::positive_mass(pdf);
  run.results() = {{"positive_mass", pm},
                   {"clipped_mass", pdf.clipped_mass},
                   {"advection_steps", stats.advection_steps},
                   {"diffusion_substeps", stats.diffusion_substeps}};
  out << "positive_mass = " << fixed12(pm) << '\n';
  run.finish(out);
  return 0;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counterfactual measurement-setting calculus and quantum-trajectory toolkit"};
  app.require_subcommand(1);
  RunConfig c;
  double omega = c.sim.omega, gamma = c.sim.gamma, eta_a = c.sim.eta_a, t_final = c.sim.t_final, dt = c.sim.dt;
  std::uint64_t seed = c.sim.seed;

  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--gamma", gamma, "total decay rate")->capture_default_str();
    sub->add_option("--omega", omega, "Rabi frequency (units of gamma)")->capture_default_str();
    sub->add_option("--eta-a", eta_a, "Alice's detection efficiency; Bob gets 1 - eta_a")->capture_default_str();
    sub->add_option("--t-final", t_final, "horizon T (1/gamma)")->capture_default_str();
    sub->add_option("--t-click", c.t_click, "time of Alice's actual click (1/gamma)")->capture_default_str();
    sub->add_option("--dt", dt, "integration step (1/gamma)")->capture_default_str();
    sub->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sub->add_option("--out-dir", c.out_dir, "directory for all outputs")->capture_default_str();
    sub->add_option("--out", c.out, "name of the primary output file");
    sub->add_option("--stride", c.stride, "write every stride-th step")->capture_default_str();
    sub->add_flag("--full-scale", c.full_scale, "use the large ensemble sizes");
  };

  auto* chsh = app.add_subcommand("chsh", "Bell-CHSH supposability");
  chsh->add_option("--alice-angle", c.alice_angle, "Alice's actual setting (Bloch angle)")->capture_default_str();
  chsh->add_option("--bob-angle", c.bob_angle, "Bob's setting (Bloch angle)")->capture_default_str();
  chsh->add_option("--cf-angle", c.cf_angle, "Alice's counterfactual setting")->capture_default_str();
  chsh->add_flag("-v,--verbose", c.verbose, "print the per-fixture factors");

  auto* supp = app.add_subcommand("supposability", "supposability of a JSON scenario document");
  supp->add_option("scenario", c.scenario_path, "scenario JSON file")->required();
  supp->add_flag("-v,--verbose", c.verbose, "print the per-fixture factors");

  auto* lindblad = app.add_subcommand("lindblad", "unconditioned master-equation evolution");
  auto* filter = app.add_subcommand("filter", "Alice's photon-counting filter for a click at --t-click");
  auto* jumprate = app.add_subcommand("jumprate", "ostensible and conditioned Bob jump rates");
  auto* suspect = app.add_subcommand("suspect", "counterfactual homodyne suspectation curve");
  auto* fpe_cmd = app.add_subcommand("fpe", "Bloch-angle distribution for the characteristic Bob record");
  for (auto* sub : {lindblad, filter, jumprate, suspect, fpe_cmd}) add_sim(sub);

  std::size_t n_ost = 0, n_res = 0, n_sus = 0;
  for (auto* sub : {jumprate, suspect}) {
    sub->add_option("--n-ostensible", n_ost, "ostensible records per interval (default 2000)");
  }
  jumprate->add_option("--n-resample", n_res, "resampled records (default 2000)");
  jumprate->add_option("--bin-width", c.bin_width, "histogram bin width (1/gamma)")->capture_default_str();
  suspect->add_option("--n-suspect", n_sus, "records averaged (default 1000)");
  fpe_cmd->add_option("--n-grid", c.n_grid, "angle grid points")->capture_default_str();
  fpe_cmd->add_option("--sigma0", c.sigma0, "initial Gaussian width")->capture_default_str();
  fpe_cmd->add_option("--tau", c.tau, "evolution time after Bob's click (1/gamma)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every other parse failure is a usage error.
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  c.sim.gamma = gamma;
  c.sim.omega = omega;
  c.sim.eta_a = eta_a;
  c.sim.eta_b = 1.0 - eta_a;
  c.sim.t_final = t_final;
  c.sim.dt = dt;
  c.sim.seed = seed;
  if (c.full_scale) {
    c.n_ostensible = 20000;
    c.n_resample = 40000;
  }
  if (n_ost) c.n_ostensible = n_ost;
  if (n_res) c.n_resample = n_res;
  if (n_sus) c.n_suspect = n_sus;

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    validate(c, name);
  } catch (const Error& e) {
    err << "cfq " << name << ": " << e.what() << '\n';
    return 2;
  }
  try {
    if (name == "chsh") return cmd_chsh(c, out);
    if (name == "supposability") return cmd_supposability(c, out);
    if (name == "lindblad") return cmd_lindblad(c, out);
    if (name == "filter") return cmd_filter(c, out);
    if (name == "jumprate") return cmd_jumprate(c, out);
    if (name == "suspect") return cmd_suspect(c, out);
    if (name == "fpe") return cmd_fpe(c, out);
  } catch (const std::exception& e) {
    err << "cfq " << name << ": " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace cfq::cli
