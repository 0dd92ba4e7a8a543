#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vsw/fuzz.hpp"
#include "vsw/io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;
constexpr int kAuditError = 4;

int run_spec(const vsw::RunSpec& spec) {
  const auto report = vsw::execute_run(spec, &std::cerr);
  const auto& h = report.history;
  long failed = 0, faces = 0;
  double worst = 0;
  for (const auto& d : h.steps) {
    failed += d.failed_faces;
    faces += d.faces;
    worst = std::max(worst, d.max_residual);
  }
  std::cout << "steps " << h.steps.size() << ", t = " << h.state.t << '\n'
            << "fail-soft faces " << failed << " / " << faces << '\n'
            << "max entropy residual " << worst << '\n'
            << "output in " << spec.output_dir << '\n';
  return kOk;
}

int compare(const std::string& a_path, const std::string& b_path, const std::string& norm,
            const std::vector<std::string>& columns, double max_allowed) {
  if (norm != "l1") throw vsw::ConfigError("only --norm l1 is supported");
  const auto a = vsw::read_csv_file(a_path);
  const auto b = vsw::read_csv_file(b_path);
  if (a.rows.size() != b.rows.size()) throw vsw::IoError("files have different row counts");
  std::vector<std::string> cols = columns;
  if (cols.empty())
    for (const auto& c : a.header)
      if (c != "x" && c != "y" && c != "s" && b.column(c) >= 0) cols.push_back(c);
  double worst = 0;
  for (const auto& c : cols) {
    const int ia = a.column(c), ib = b.column(c);
    if (ia < 0 || ib < 0) throw vsw::IoError("column " + c + " missing");
    double diff = 0, ref = 0;
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      diff += std::abs(a.rows[r][ia] - b.rows[r][ib]);
      ref += std::abs(b.rows[r][ib]);
    }
    const double rel = ref > 0 ? diff / ref : diff;
    worst = std::max(worst, rel);
    std::cout << c << " l1_abs " << diff << " l1_rel " << rel << '\n';
  }
  return worst <= max_allowed ? kOk : kAuditError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viscoelastic shallow-water finite-volume solver"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run a configuration file");
  run->add_option("config", config_path, "INI file")->required();

  std::string preset;
  std::vector<std::string> overrides;
  auto* bench = app.add_subcommand("bench", "run a benchmark preset (stoker, stoker1d, column, cavity)");
  bench->add_option("preset", preset)->required();
  bench->add_option("--override,-o", overrides, "key=value or section.key=value");

  long fuzz_pairs = 10000;
  std::uint64_t seed = 1;
  double audit_tol = 1e-10;
  auto* audit = app.add_subcommand("audit", "fuzz the Riemann solver against its invariant and entropy oracles");
  audit->add_option("--fuzz", fuzz_pairs, "number of random pairs per model");
  audit->add_option("--seed", seed);
  audit->add_option("--tol", audit_tol, "largest accepted invariant residual");

  std::string csv_a, csv_b, norm = "l1";
  std::vector<std::string> columns;
  double max_rel = std::numeric_limits<double>::infinity();
  auto* cmp = app.add_subcommand("compare", "l1 distance between two csv files of equal layout");
  cmp->add_option("a", csv_a)->required();
  cmp->add_option("b", csv_b)->required();
  cmp->add_option("--norm", norm);
  cmp->add_option("--column", columns);
  cmp->add_option("--max", max_rel, "exit with status 4 above this relative distance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  vsw::RunSpec spec;
  try {
    if (*run) {
      std::ifstream in(config_path);
      if (!in) throw vsw::ConfigError("cannot read " + config_path);
      std::stringstream text;
      text << in.rdbuf();
      spec = vsw::parse_config(text.str());
    } else if (*bench) {
      spec = vsw::preset_spec(preset);
      spec.output_dir = "out/" + preset;
      for (const auto& o : overrides) vsw::apply_override(spec, o);
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (*run || *bench) return run_spec(spec);
    if (*audit) {
      bool ok = true;
      for (auto model : {vsw::ModelKind::SVTM, vsw::ModelKind::SVUCM}) {
        const auto s = vsw::fuzz_riemann(fuzz_pairs, seed, model);
        std::cout << vsw::to_string(model) << ": pairs " << s.pairs << ", max invariant residual "
                  << s.max_audit_residual << " (" << s.worst_invariant << "), fail-soft " << s.failed_conditions
                  << ", entropy violations " << s.entropy_violations << ", inadmissible states "
                  << s.admissibility_violations << '\n';
        ok = ok && s.ok(audit_tol);
      }
      return ok ? kOk : kAuditError;
    }
    if (*cmp) return compare(csv_a, csv_b, norm, columns, max_rel);
  } catch (const vsw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
