// fraccoop command-line front end:
//   reproduce  -- run a built-in example end to end (simulate + verify + plot)
//   analyze    -- hypothesis screening report for a field-definition file
//   envelope   -- decay-envelope construction and overlay plot
//   simulate   -- plain integration with CSV/SVG output
//
// Exit codes: 0 success, 1 verdict failure, 2 input error, 3 infeasibility.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fraccoop/attractivity.hpp"
#include "fraccoop/builtin_examples.hpp"
#include "fraccoop/field_checks.hpp"
#include "fraccoop/field_parser.hpp"
#include "fraccoop/kolmogorov.hpp"
#include "fraccoop/mittag_leffler.hpp"
#include "fraccoop/solver.hpp"
#include "fraccoop/svg_plot.hpp"
#include "fraccoop/vector_field.hpp"

namespace fs = std::filesystem;
using namespace fraccoop;

namespace {

const char* kSeriesColors[] = {"#1f6fb2", "#c44e52", "#55a868", "#8172b2", "#ccb974"};

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw std::invalid_argument("malformed number list: " + s);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

SvgPlot time_series_panel(const Trajectory& traj, const std::string& title,
                          std::optional<std::size_t> only_component = std::nullopt) {
  SvgPlot p;
  p.title = title;
  p.xlabel = "t";
  p.ylabel = "w";
  for (std::size_t i = 0; i < traj.dimension(); ++i) {
    if (only_component && *only_component != i) continue;
    SvgSeries s;
    s.label = "w" + std::to_string(i + 1);
    s.color = kSeriesColors[i % 5];
    s.x = traj.times;
    s.y.reserve(traj.states.size());
    for (const auto& w : traj.states) s.y.push_back(w[i]);
    p.add_series(std::move(s));
  }
  return p;
}

void write_orbit_svg(const std::string& path, const Trajectory& traj, const std::string& title) {
  std::vector<SvgPlot> panels;
  if (traj.dimension() == 3) {
    for (std::size_t i = 0; i < 3; ++i)
      panels.push_back(time_series_panel(traj, title + " (w" + std::to_string(i + 1) + ")", i));
  } else {
    panels.push_back(time_series_panel(traj, title));
    if (traj.dimension() == 2) {
      SvgPlot phase;
      phase.title = title + " (phase)";
      phase.xlabel = "w1";
      phase.ylabel = "w2";
      SvgSeries s;
      s.color = kSeriesColors[1];
      for (const auto& w : traj.states) {
        s.x.push_back(w[0]);
        s.y.push_back(w[1]);
      }
      phase.add_series(std::move(s));
      panels.push_back(std::move(phase));
    }
  }
  write_svg_panels(path, panels);
}

void write_envelope_svg(const std::string& path, const Trajectory& traj,
                        const EnvelopeParams& env, const std::string& title) {
  SvgPlot p = time_series_panel(traj, title);
  for (std::size_t i = 0; i < traj.dimension(); ++i) {
    SvgSeries s;
    s.label = "C" + std::to_string(i + 1) + " E(-eta t^beta)";
    s.color = kSeriesColors[i % 5];
    s.dashed = true;
    s.x = traj.times;
    s.y.reserve(traj.times.size());
    for (double t : traj.times)
      s.y.push_back(env.m == 0.0
                        ? 0.0
                        : env.amplitudes[i] * ml_one(env.beta, -env.eta * std::pow(t, env.beta)));
    p.add_series(std::move(s));
  }
  write_svg_panels(path, {p});
}

struct VerdictLog {
  std::vector<std::string> lines;
  bool any_fail = false;

  void add(const Verdict& v) {
    lines.push_back(v.report_line());
    if (!v.passed) any_fail = true;
  }
  void info(const std::string& s) { lines.push_back("INFO " + s); }

  void write(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    for (const auto& l : lines) os << l << "\n";
  }
  void print() const {
    for (const auto& l : lines) std::cout << l << "\n";
  }
};

int run_reproduce(int id, const std::string& out_dir, double t_final, double step) {
  fs::create_directories(out_dir);
  const ExampleSystem ex = builtin_example(id);

  SolveConfig cfg;
  cfg.t_final = t_final;
  cfg.step = step;
  const Trajectory traj = integrate(clamped_to_orthant(ex.field), ex.orders, ex.omega, cfg);
  write_trajectory_csv(out_dir + "/trajectory.csv", traj);
  write_orbit_svg(out_dir + "/orbit.svg", traj, "example " + std::to_string(id));

  VerdictLog log;
  for (const auto& w : traj.warnings) log.info("solver warning: " + w);
  log.add(positivity_check(traj));

  if (!ex.is_kolmogorov) {
    log.add(boundedness_check(traj, *ex.v));
    const EnvelopeParams env =
        make_envelope(ex.field, *ex.v, ex.orders, ex.degree, ex.omega);
    {
      std::ostringstream os;
      os << "envelope eta=" << env.eta << " beta=" << env.beta;
      log.info(os.str());
    }
    log.add(envelope_check(traj, env));
    if (id == 2) {
      // informational sharpness probe: scaled trajectory stays away from 0
      double lower = std::numeric_limits<double>::infinity();
      const double alpha = ex.orders.min_order();
      for (std::size_t n = 0; n < traj.times.size(); ++n) {
        const double t = traj.times[n];
        if (t < 10.0) continue;
        lower = std::min(lower, inf_norm(traj.states[n]) * std::pow(t, alpha));
      }
      std::ostringstream os;
      os << "sharpness (informational): min_t ||Phi(t)||_inf t^" << alpha << " = " << lower
         << " on [10," << t_final << "]";
      log.info(os.str());
    }
  } else {
    const KolmogorovSystem sys = assemble(ex.b, ex.interaction);
    const Equilibrium eq = find_equilibrium(sys, Vec{0.5, 0.5});
    {
      std::ostringstream os;
      os << "equilibrium point (";
      for (std::size_t i = 0; i < eq.point.size(); ++i) os << (i ? "," : "") << eq.point[i];
      os << ")";
      log.add(make_verdict("equilibrium", 0.0, 1e-10 - eq.residual, 0.0, os.str()));
    }
    SolveConfig rate_cfg;
    rate_cfg.t_final = 1000.0;
    rate_cfg.step = 1e-2;
    log.add(rate_check(sys, ex.orders, ex.omega, eq, rate_cfg));
  }

  log.write(out_dir + "/verdicts.txt");
  log.print();
  return log.any_fail ? 1 : 0;
}

int run_analyze(const std::string& field_file, bool strict) {
  const VectorFieldHandle f = to_handle(parse_field_file(field_file));
  const HypothesisReport report = analyze_field(f);
  std::cout << report.to_string();
  const bool ok = report.cooperative.cooperative && report.v_candidate.has_value();
  return (strict && !ok) ? 1 : 0;
}

int run_envelope(const std::string& field_file, const std::vector<double>& orders_in,
                 const std::vector<double>& omega, const std::vector<double>& v_in,
                 const std::string& out_dir, double t_final, double step) {
  const VectorFieldHandle f = to_handle(parse_field_file(field_file));
  if (omega.size() != f.dimension || orders_in.size() != f.dimension)
    throw std::invalid_argument("envelope: orders/omega must match the field dimension");
  const MultiOrder orders{orders_in};

  const CooperativityVerdict coop = check_cooperative(f, 256, 1.0);
  const HomogeneityEstimate hom = estimate_homogeneity_degree(f, 16);
  if (!coop.cooperative || hom.residual > 1e-6) {
    std::cerr << "envelope: field fails the cooperativity/homogeneity screening\n";
    return 3;
  }

  std::optional<WeightVector> v;
  if (!v_in.empty()) {
    v = WeightVector(v_in);
    for (double fi : f.eval(v->v))
      if (!(fi < 0.0)) {
        std::cerr << "envelope: supplied v does not satisfy f(v) < 0\n";
        return 3;
      }
  } else {
    v = find_decay_direction(f, 64);
    if (!v) {
      std::cerr << "envelope: no decay direction found (f(v) < 0 unsatisfiable within budget)\n";
      return 3;
    }
  }

  fs::create_directories(out_dir);
  const EnvelopeParams env = make_envelope(f, *v, orders, hom.degree, omega);
  std::printf("eta = %.10g\nbeta = %.10g\n", env.eta, env.beta);
  for (std::size_t i = 0; i < env.amplitudes.size(); ++i)
    std::printf("C%zu = %.10g\n", i + 1, env.amplitudes[i]);

  SolveConfig cfg;
  cfg.t_final = t_final;
  cfg.step = step;
  const Trajectory traj = integrate(clamped_to_orthant(f), orders, omega, cfg);
  write_trajectory_csv(out_dir + "/trajectory.csv", traj);
  write_envelope_svg(out_dir + "/envelope.svg", traj, env, "envelope overlay");

  VerdictLog log;
  log.add(envelope_check(traj, env));
  log.write(out_dir + "/verdicts.txt");
  log.print();
  return log.any_fail ? 1 : 0;
}

int run_simulate(const std::string& field_file, const std::vector<double>& orders_in,
                 const std::vector<double>& omega, double t_final, double step,
                 const std::string& out_dir) {
  const VectorFieldHandle f = to_handle(parse_field_file(field_file));
  if (omega.size() != f.dimension || orders_in.size() != f.dimension)
    throw std::invalid_argument("simulate: orders/omega must match the field dimension");
  fs::create_directories(out_dir);

  SolveConfig cfg;
  cfg.t_final = t_final;
  cfg.step = step;
  const Trajectory traj = integrate(clamped_to_orthant(f), MultiOrder{orders_in}, omega, cfg);
  write_trajectory_csv(out_dir + "/trajectory.csv", traj);
  write_orbit_svg(out_dir + "/orbit.svg", traj, "trajectory");
  for (const auto& w : traj.warnings) std::cout << "INFO solver warning: " << w << "\n";
  std::cout << "wrote " << out_dir << "/trajectory.csv (" << traj.times.size() << " rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional cooperative systems toolkit"};
  app.require_subcommand(1);

  int ex_id = 1;
  std::string out_dir, field_file, orders_s, omega_s, v_s;
  double t_final = 50.0, step = 1e-3;
  bool strict = false;

  auto* rep = app.add_subcommand("reproduce", "run a built-in example end to end");
  rep->add_option("--example", ex_id, "example id")->required()->check(CLI::Range(1, 3));
  rep->add_option("--out", out_dir, "output directory")->required();
  rep->add_option("--tfinal", t_final, "final time");
  rep->add_option("--step", step, "time step");

  auto* ana = app.add_subcommand("analyze", "hypothesis screening for a field file");
  ana->add_option("field", field_file, "field-definition file")->required();
  ana->add_flag("--strict", strict, "nonzero exit on hypothesis failure");

  auto* env = app.add_subcommand("envelope", "decay envelope for a field file");
  env->add_option("field", field_file, "field-definition file")->required();
  env->add_option("--orders", orders_s, "comma-separated orders")->required();
  env->add_option("--omega", omega_s, "comma-separated initial condition")->required();
  env->add_option("--v", v_s, "comma-separated decay direction (found if omitted)");
  env->add_option("--out", out_dir, "output directory")->required();
  env->add_option("--tfinal", t_final, "final time");
  env->add_option("--step", step, "time step");

  auto* sim = app.add_subcommand("simulate", "integrate a field file");
  sim->add_option("field", field_file, "field-definition file")->required();
  sim->add_option("--orders", orders_s, "comma-separated orders")->required();
  sim->add_option("--omega", omega_s, "comma-separated initial condition")->required();
  sim->add_option("--tfinal", t_final, "final time")->required();
  sim->add_option("--step", step, "time step")->required();
  sim->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (rep->parsed()) return run_reproduce(ex_id, out_dir, t_final, step);
    if (ana->parsed()) return run_analyze(field_file, strict);
    if (env->parsed())
      return run_envelope(field_file, parse_csv_doubles(orders_s), parse_csv_doubles(omega_s),
                          v_s.empty() ? std::vector<double>{} : parse_csv_doubles(v_s), out_dir,
                          t_final, step);
    if (sim->parsed())
      return run_simulate(field_file, parse_csv_doubles(orders_s), parse_csv_doubles(omega_s),
                          t_final, step, out_dir);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const InfeasibleEtaError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const BlowupError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
