#include "cli_app.hpp"

#include "cdeg/scenario.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace cdeg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_document(const RunConfig& cfg) {
  if (cfg.scenario.empty()) throw InvalidInput("no scenario given (use --scenario PATH or a bundled name)");
  if (fs::is_regular_file(cfg.scenario)) {
    std::ifstream in(cfg.scenario, std::ios::binary);
    if (!in) throw InvalidInput("cannot read scenario file " + cfg.scenario);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), cfg.scenario);
  }
  const auto names = bundled_scenario_names();
  if (std::find(names.begin(), names.end(), cfg.scenario) != names.end()) return bundled_scenario(cfg.scenario);
  throw InvalidInput("scenario '" + cfg.scenario + "' is neither a readable file nor a bundled name");
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  os << content;
  if (!os) throw InvalidInput("cannot write " + path.string());
}

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

int cmd_verify(const Scenario& s, const fs::path& out, std::ostream& os) {
  const VerificationReport r = verify(s);
  json j = to_json(r);
  if (s.expected_degree) j["expected_degree"] = {{"value", *s.expected_degree}, {"note", s.expected_note}};
  write_file(out / "report.json", j.dump(2) + "\n");
  std::ostringstream csv;
  write_report_csv(csv, r);
  write_file(out / "report.csv", csv.str());
  const bool expected_ok = !s.expected_degree || *s.expected_degree == r.rhs_certificate.value;
  os << s.name << ": degree " << r.rhs_certificate.value << ", index agrees at the " << r.agreeing_smallest
     << " smallest t";
  if (r.t_star) os << " (t_star = " << *r.t_star << ")";
  if (!expected_ok) os << "; expected degree " << *s.expected_degree;
  os << " -> " << (r.pass && expected_ok ? "PASS" : "FAIL") << "\n";
  return r.pass && expected_ok ? kPass : kVerificationFailure;
}

int cmd_degree(const Scenario& s, const fs::path& out, std::ostream& os) {
  s.sweeps.validate();
  RhsOptions ro;
  ro.index = s.index;
  ro.selection_seed = s.seeds.front();
  const DegreeCertificate c = degree_rhs(s.op, s.f, s.require_region(), s.sweeps.degree_sweep(), ro);
  write_file(out / "certificate.json", to_json(c).dump(2) + "\n");
  os << s.name << ": degree " << c.value << " (min boundary residual " << c.min_boundary_residual << ")\n";
  if (s.expected_degree && *s.expected_degree != c.value) {
    os << "expected degree " << *s.expected_degree << "\n";
    return kVerificationFailure;
  }
  return kPass;
}

const Vector& require_initial_state(const Scenario& s) {
  if (!s.initial_state) throw InvalidInput("scenario '" + s.name + "' has no initial_state");
  return *s.initial_state;
}

int cmd_simulate(const Scenario& s, const fs::path& out, std::ostream& os) {
  const Trajectory traj = solve(s.op, s.k, s.field(), require_initial_state(s), s.t_end, s.sweeps.integration_h, s.scheme);
  std::ostringstream csv;
  write_trajectory_csv(csv, traj, s.k);
  write_file(out / "trajectory.csv", csv.str());
  os << s.name << ": " << traj.states.size() - 1 << " steps to t = " << traj.times.back()
     << ", max d(u;K) = " << traj.max_constraint_violation(s.k) << "\n";
  return kPass;
}

int cmd_funnel(const Scenario& s, const fs::path& out, std::ostream& os) {
  const auto members = funnel(s.op, s.k, s.f, require_initial_state(s), s.t_end, s.sweeps.integration_h,
                              default_strategies(s.f, s.seeds.front()), s.sweeps.alpha.back(), s.scheme);
  std::ostringstream csv;
  const auto n = s.op.dim();
  csv << "strategy,t";
  for (Eigen::Index i = 0; i < n; ++i) csv << ",u_" << i + 1;
  csv << "\n";
  int failed = 0;
  for (const auto& m : members) {
    if (!m.trajectory) {
      ++failed;
      os << "strategy " << m.strategy.name() << " stopped: " << m.error << "\n";
      continue;
    }
    for (std::size_t k = 0; k < m.trajectory->times.size(); ++k) {
      csv << m.strategy.name() << ',' << csv_number(m.trajectory->times[k]);
      for (Eigen::Index i = 0; i < n; ++i) csv << ',' << csv_number(m.trajectory->states[k][i]);
      csv << "\n";
    }
  }
  write_file(out / "funnel.csv", csv.str());
  os << s.name << ": " << members.size() - failed << " of " << members.size() << " strategies reached t = " << s.t_end
     << "\n";
  return kPass;
}

int cmd_scan(const Scenario& s, const json& canonical, const fs::path& out, std::ostream& os) {
  json ex = canonical.contains("exclusion") ? canonical.at("exclusion") : json::object();
  const double big_t = ex.value("T", 2.0 * s.sweeps.t.front());
  const auto z = ex.value("z_samples", std::vector<double>{0.0, 0.5, 1.0});
  const auto t = ex.value("t_samples", s.sweeps.t);
  const ExclusionReport r = boundary_exclusion_scan(s, big_t, z, t);
  write_file(out / "exclusion.json", to_json(r).dump(2) + "\n");
  std::ostringstream csv;
  csv << "t,floor,z\n";
  for (const auto& row : r.rows) csv << csv_number(row.t) << ',' << csv_number(row.floor) << ',' << csv_number(row.z_at_floor) << "\n";
  write_file(out / "exclusion.csv", csv.str());
  os << s.name << ": exclusion floor " << r.global_floor;
  if (r.t_star_candidate) os << ", positive for t <= " << *r.t_star_candidate;
  os << "\n";
  return kPass;
}

void print_table(const DegreeCertificate& c, std::ostream& err) {
  err << "sweep table:\n";
  for (const auto& e : c.stability) {
    err << "  " << e.param << "  " << (e.value ? std::to_string(*e.value) : std::string("-"));
    if (!e.note.empty()) err << "  (" << e.note << ")";
    err << "\n";
  }
}

}  // namespace

void list_scenarios(std::ostream& out) {
  for (const auto& name : bundled_scenario_names()) {
    out << name << "  " << bundled_scenario(name).value("description", "") << "\n";
  }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  json canonical;
  std::optional<Scenario> scenario;
  fs::path dir(cfg.out_dir);
  try {
    json doc = load_document(cfg);
    for (const auto& o : cfg.overrides) apply_override(doc, o);
    if (cfg.seed) {
      if (*cfg.seed < 0) throw InvalidInput("--seed must be non-negative");
      if (!doc.contains("seeds") || !doc["seeds"].is_array() || doc["seeds"].empty()) doc["seeds"] = json::array({0});
      doc["seeds"][0] = *cfg.seed;
    }
    canonical = canonicalize(doc);
    scenario = build_scenario(canonical);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw InvalidInput("output directory " + dir.string() + " is not writable");
    write_file(dir / "scenario.json", canonical.dump(2) + "\n");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  const Scenario& s = *scenario;
  try {
    if (cfg.command == "verify") return cmd_verify(s, dir, out);
    if (cfg.command == "degree") return cmd_degree(s, dir, out);
    if (cfg.command == "simulate") return cmd_simulate(s, dir, out);
    if (cfg.command == "funnel") return cmd_funnel(s, dir, out);
    if (cfg.command == "scan") return cmd_scan(s, canonical, dir, out);
    err << "error: unknown command '" << cfg.command << "' (verify, degree, simulate, funnel, scan)\n";
    return kInputError;
  } catch (const DegreeInconclusive& e) {
    err << "inconclusive: " << e.what() << "\n";
    print_table(e.partial(), err);
    try {
      write_file(dir / "certificate.json", to_json(e.partial()).dump(2) + "\n");
    } catch (const Error&) {
    }
    return kInconclusive;
  } catch (const Inconclusive& e) {
    err << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const NumericalError& e) {
    err << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const ZeroOnBoundary& e) {
    err << "verification failure: " << e.what() << "\n";
    return kVerificationFailure;
  } catch (const SolveError& e) {
    err << "verification failure: " << e.what() << "\n";
    return kVerificationFailure;
  } catch (const TangencyViolation& e) {
    err << "verification failure: " << e.what() << "\n";
    return kVerificationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constrained degree and fixed-point index verification"};
  RunConfig cfg;
  long long seed = 0;
  app.add_option("--scenario", cfg.scenario, "Scenario file or bundled scenario name");
  app.add_option("--command", cfg.command, "verify, degree, simulate, funnel or scan")
      ->check(CLI::IsMember({"verify", "degree", "simulate", "funnel", "scan"}));
  app.add_option("--out", cfg.out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Selection and funnel seed");
  app.add_option("--set", cfg.overrides, "Override key=value (dotted path)")->take_all()->allow_extra_args(false);
  auto* list = app.add_subcommand("list", "Print the bundled scenarios");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kPass;
    }
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  if (list->parsed()) {
    list_scenarios(out);
    return kPass;
  }
  if (seed_opt->count() > 0) cfg.seed = seed;
  return run(cfg, out, err);
}

}  // namespace cdeg::cli
