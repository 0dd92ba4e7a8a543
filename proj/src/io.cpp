#include "vsw/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace vsw {

ParseError::ParseError(int l, int c, const std::string& what)
    : ConfigError("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + what), line(l), column(c) {}

UnknownKey::UnknownKey(int line, const std::string& section, const std::string& key)
    : ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "' in [" + section + "]") {}

OutOfRange::OutOfRange(int line, const std::string& key, const std::string& why)
    : ConfigError("line " + std::to_string(line) + ": " + key + " " + why) {}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Vtk: return "vtk";
    case OutputFormat::Gnuplot: return "gnuplot";
  }
  return "?";
}

bool RunSpec::operator==(const RunSpec& o) const {
  auto same_line = [](const Line& a, const Line& b) { return a.kind == b.kind && a.value == b.value; };
  return model == o.model && case_name == o.case_name && nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly &&
         params.g == o.params.g && params.G == o.params.G && params.lambda == o.params.lambda &&
         params.k == o.params.k && params.nu_s == o.params.nu_s && cfl == o.cfl && t_end == o.t_end &&
         regularized_lid == o.regularized_lid && output_dir == o.output_dir && every == o.every &&
         formats == o.formats && sections.size() == o.sections.size() &&
         std::equal(sections.begin(), sections.end(), o.sections.begin(), same_line);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

struct Cursor {
  int line;
  int column;  // 1-based column of the value
};

double parse_double(const std::string& v, Cursor at) {
  double x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x))
    throw ParseError(at.line, at.column, "expected a number, got '" + v + "'");
  return x;
}

int parse_int(const std::string& v, Cursor at) {
  int x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ParseError(at.line, at.column, "expected an integer, got '" + v + "'");
  return x;
}

OutputFormat parse_format(const std::string& v, Cursor at) {
  if (v == "csv") return OutputFormat::Csv;
  if (v == "vtk") return OutputFormat::Vtk;
  if (v == "gnuplot") return OutputFormat::Gnuplot;
  throw ParseError(at.line, at.column, "unknown output format '" + v + "'");
}

void set_key(RunSpec& s, const std::string& section, const std::string& key, const std::string& value, Cursor at) {
  auto positive = [&](double x) {
    if (!(x > 0)) throw OutOfRange(at.line, key, "must be > 0");
    return x;
  };
  auto non_negative = [&](double x) {
    if (!(x >= 0)) throw OutOfRange(at.line, key, "must be >= 0");
    return x;
  };
  if (section == "run") {
    if (key == "model") {
      try {
        s.model = parse_model(value);
      } catch (const std::invalid_argument&) {
        throw ParseError(at.line, at.column, "unknown model '" + value + "'");
      }
    } else if (key == "case") {
      const auto names = preset_names();
      if (value != "stoker1d" && std::find(names.begin(), names.end(), value) == names.end())
        throw ParseError(at.line, at.column, "unknown case '" + value + "'");
      s.case_name = value;
    } else if (key == "nx" || key == "ny") {
      const int n = parse_int(value, at);
      if (n < 1) throw OutOfRange(at.line, key, "must be >= 1");
      (key == "nx" ? s.nx : s.ny) = n;
    } else if (key == "lx") {
      s.lx = positive(parse_double(value, at));
    } else if (key == "ly") {
      s.ly = positive(parse_double(value, at));
    } else if (key == "cfl") {
      const double c = parse_double(value, at);
      if (!(c > 0) || c > 1) throw OutOfRange(at.line, key, "must lie in (0, 1]");
      s.cfl = c;
    } else if (key == "t_end") {
      s.t_end = positive(parse_double(value, at));
    } else if (key == "lid") {
      if (value != "plain" && value != "regularized")
        throw ParseError(at.line, at.column, "lid must be plain or regularized");
      s.regularized_lid = value == "regularized";
    } else {
      throw UnknownKey(at.line, section, key);
    }
  } else if (section == "physics") {
    if (key == "g") {
      s.params.g = positive(parse_double(value, at));
    } else if (key == "G") {
      s.params.G = non_negative(parse_double(value, at));
    } else if (key == "lambda") {
      s.params.lambda = positive(parse_double(value, at));
    } else if (key == "k") {
      s.params.k = non_negative(parse_double(value, at));
    } else if (key == "nu_s") {
      s.params.nu_s = non_negative(parse_double(value, at));
    } else {
      throw UnknownKey(at.line, section, key);
    }
  } else if (section == "output") {
    if (key == "dir") {
      if (value.empty()) throw OutOfRange(at.line, key, "must not be empty");
      s.output_dir = value;
    } else if (key == "every") {
      const int n = parse_int(value, at);
      if (n < 0) throw OutOfRange(at.line, key, "must be >= 0");
      s.every = n;
    } else if (key == "sections") {
      s.sections.clear();
      for (const auto& item : split_list(value)) {
        try {
          s.sections.push_back(parse_line(item));
        } catch (const std::exception&) {
          throw ParseError(at.line, at.column, "bad cross-section '" + item + "'");
        }
      }
    } else if (key == "formats") {
      s.formats.clear();
      for (const auto& item : split_list(value)) s.formats.push_back(parse_format(item, at));
      if (s.formats.empty()) throw OutOfRange(at.line, key, "must list at least one format");
    } else {
      throw UnknownKey(at.line, section, key);
    }
  } else {
    throw UnknownKey(at.line, section, key);
  }
}

}  // namespace

RunSpec parse_config(const std::string& text) {
  RunSpec spec;
  std::stringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto cut = raw.find_first_of("#;");
    const std::string body = cut == std::string::npos ? raw : raw.substr(0, cut);
    const std::string line = trim(body);
    if (line.empty()) continue;
    const int indent = static_cast<int>(body.find_first_not_of(" \t")) + 1;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(line_no, indent + static_cast<int>(line.size()), "expected ']'");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "run" && section != "physics" && section != "output")
        throw ParseError(line_no, indent + 1, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, indent, "expected key=value");
    if (section.empty()) throw ParseError(line_no, indent, "key outside of a section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, indent, "empty key");
    const std::string value = trim(line.substr(eq + 1));
    const auto value_pos = body.find(value, body.find('=') + 1);
    set_key(spec, section, key, value, {line_no, static_cast<int>(value_pos) + 1});
  }
  return spec;
}

std::string render_config(const RunSpec& s) {
  std::ostringstream out;
  out << "[run]\n"
      << "model=" << to_string(s.model) << '\n'
      << "case=" << s.case_name << '\n'
      << "nx=" << s.nx << '\n'
      << "ny=" << s.ny << '\n'
      << "lx=" << format_double(s.lx) << '\n'
      << "ly=" << format_double(s.ly) << '\n'
      << "cfl=" << format_double(s.cfl) << '\n'
      << "t_end=" << format_double(s.t_end) << '\n'
      << "lid=" << (s.regularized_lid ? "regularized" : "plain") << '\n'
      << "[physics]\n"
      << "g=" << format_double(s.params.g) << '\n'
      << "G=" << format_double(s.params.G) << '\n'
      << "lambda=" << format_double(s.params.lambda) << '\n'
      << "k=" << format_double(s.params.k) << '\n'
      << "nu_s=" << format_double(s.params.nu_s) << '\n'
      << "[output]\n"
      << "dir=" << s.output_dir << '\n'
      << "every=" << s.every << '\n'
      << "sections=";
  for (std::size_t i = 0; i < s.sections.size(); ++i) {
    if (i) out << ',';
    const auto& l = s.sections[i];
    if (l.kind == Line::Kind::Diagonal)
      out << "diag";
    else
      out << (l.kind == Line::Kind::X ? "x=" : "y=") << format_double(l.value);
  }
  out << "\nformats=";
  for (std::size_t i = 0; i < s.formats.size(); ++i) out << (i ? "," : "") << to_string(s.formats[i]);
  out << '\n';
  return out.str();
}

void apply_override(RunSpec& spec, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ParseError(1, 1, "override needs key=value: " + assignment);
  std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  std::string section;
  const auto dot = key.find('.');
  if (dot != std::string::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  } else {
    static const std::vector<std::string> run{"model", "case", "nx", "ny", "lx", "ly", "cfl", "t_end", "lid"};
    static const std::vector<std::string> physics{"g", "G", "lambda", "k", "nu_s"};
    if (std::find(run.begin(), run.end(), key) != run.end())
      section = "run";
    else if (std::find(physics.begin(), physics.end(), key) != physics.end())
      section = "physics";
    else
      section = "output";
  }
  set_key(spec, section, key, value, {1, static_cast<int>(eq) + 2});
}

RunSpec preset_spec(const std::string& name) {
  RunSpec s;
  s.case_name = name;
  s.sections = {Line::diagonal()};
  if (name == "stoker") {
    s.model = ModelKind::SVUCM;
  } else if (name == "stoker1d") {
    s.model = ModelKind::SVUCM;
    s.nx = 513;
    s.ny = 1;
    s.lx = std::sqrt(2.0);
    s.ly = s.lx / s.nx;
    s.sections = {Line::y(s.ly / 2)};
  } else if (name == "column") {
    s.params.G = 1;
  } else if (name == "cavity") {
    s.params = {1000, 0.1, 1, 0, 0.1};
    s.t_end = 1;
    s.sections = {Line::x(0.5), Line::y(0.5)};
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return s;
}

BenchmarkPreset preset_from_spec(const RunSpec& s) {
  BenchmarkPreset p;
  if (s.case_name == "stoker1d") {
    p.name = "stoker1d";
    const double mid = s.lx / 2;
    p.ic = [mid](double x, double) { return PrimitiveState<double>::rest(x < mid ? 3.0 : 1.0); };
    p.bc = BoundarySpec::all(BoundaryCondition::translation_invariant(0, 1));
    p.bc.at(Edge::kWest) = BoundaryCondition::outflow();
    p.bc.at(Edge::kEast) = BoundaryCondition::outflow();
  } else if (s.case_name == "cavity") {
    p = cavity_preset(s.params.G, s.params.lambda, s.params.nu_s, s.params.g, s.regularized_lid);
  } else {
    p = preset_by_name(s.case_name);
  }
  p.params = s.params;
  p.model = s.model;
  p.nx = s.nx;
  p.ny = s.ny;
  p.lx = s.lx;
  p.ly = s.ly;
  p.t_end = s.t_end;
  return p;
}

// ---------------------------------------------------------------------------------------------

void write_fields_csv(std::ostream& out, const FieldState& state, const Mesh& mesh, const PhysParams<double>& params,
                      ModelKind model) {
  out << "x,y,h,u,v,cxx,cyy,cxy,czz,sxx,syy,sxy,szz,energy\n";
  out << std::setprecision(17);
  for (int j = 0; j < mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      const auto c = mesh.center(i, j);
      const auto p = conserved_to_primitive(state.q[mesh.index(i, j)]);
      const auto s = stress(p, params.G, model);
      out << c.x() << ',' << c.y() << ',' << p.h << ',' << p.u << ',' << p.v << ',' << p.cxx << ',' << p.cyy << ','
          << p.cxy << ',' << p.czz << ',' << s.sigma_h(0, 0) << ',' << s.sigma_h(1, 1) << ',' << s.sigma_h(0, 1)
          << ',' << s.sigma_zz << ',' << free_energy(p, params) << '\n';
    }
  }
}

void write_fields_vtk(std::ostream& out, const FieldState& state, const Mesh& mesh, const PhysParams<double>& params,
                      ModelKind model) {
  const int n = mesh.cells();
  std::vector<PrimitiveState<double>> prim(n);
  for (int c = 0; c < n; ++c) prim[c] = conserved_to_primitive(state.q[c]);
  out << std::setprecision(17);
  out << "# vtk DataFile Version 3.0\n"
      << "viscoelastic shallow water t=" << state.t << "\n"
      << "ASCII\n"
      << "DATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << mesh.nx + 1 << ' ' << mesh.ny + 1 << " 1\n"
      << "ORIGIN 0 0 0\n"
      << "SPACING " << mesh.dx << ' ' << mesh.dy << " 1\n"
      << "CELL_DATA " << n << '\n';
  auto scalar = [&](const char* name, auto&& f) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (const auto& p : prim) out << f(p) << '\n';
  };
  scalar("h", [](const auto& p) { return p.h; });
  scalar("czz", [](const auto& p) { return p.czz; });
  scalar("energy", [&](const auto& p) { return free_energy(p, params); });
  scalar("szz", [&](const auto& p) { return stress(p, params.G, model).sigma_zz; });
  out << "VECTORS velocity double\n";
  for (const auto& p : prim) out << p.u << ' ' << p.v << " 0\n";
  out << "TENSORS conformation double\n";
  for (const auto& p : prim)
    out << p.cxx << ' ' << p.cxy << " 0\n" << p.cxy << ' ' << p.cyy << " 0\n0 0 " << p.czz << "\n\n";
}

void write_fields(const FieldState& state, const Mesh& mesh, const PhysParams<double>& params, ModelKind model,
                  OutputFormat format, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string());
  if (format == OutputFormat::Vtk)
    write_fields_vtk(out, state, mesh, params, model);
  else
    write_fields_csv(out, state, mesh, params, model);
  if (!out) throw IoError("write failed: " + path.string());
}

int CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty csv");
  t.header = split_list(line);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& item : split_list(line)) {
      double x = 0;
      const auto r = std::from_chars(item.data(), item.data() + item.size(), x);
      if (r.ec != std::errc() || r.ptr != item.data() + item.size())
        throw IoError("csv line " + std::to_string(line_no) + ": bad number '" + item + "'");
      row.push_back(x);
    }
    if (row.size() != t.header.size()) throw IoError("csv line " + std::to_string(line_no) + ": wrong column count");
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_csv(in);
}

FieldState read_fields_csv(std::istream& in, const Mesh& mesh) {
  const auto t = read_csv(in);
  if (static_cast<int>(t.rows.size()) != mesh.cells()) throw IoError("field csv does not match the mesh");
  const std::array<const char*, 7> names{"h", "u", "v", "cxx", "cyy", "cxy", "czz"};
  std::array<int, 7> col{};
  for (int k = 0; k < 7; ++k) {
    col[k] = t.column(names[k]);
    if (col[k] < 0) throw IoError(std::string("field csv lacks column ") + names[k]);
  }
  FieldState s;
  s.q.resize(mesh.cells());
  for (int c = 0; c < mesh.cells(); ++c) {
    const auto& r = t.rows[c];
    const PrimitiveState<double> p{r[col[0]], r[col[1]], r[col[2]], r[col[3]], r[col[4]], r[col[5]], r[col[6]]};
    s.q[c] = primitive_to_conserved(p);
  }
  return s;
}

void emit_plot_script(const std::vector<PlotSeries>& series, const std::vector<std::string>& quantities,
                      const std::filesystem::path& path, const std::string& abscissa) {
  if (series.empty() || quantities.empty()) throw IoError("plot script needs series and quantities");
  std::vector<CsvTable> heads;
  // Relative series paths are resolved against the script's directory, where gnuplot runs.
  for (const auto& s : series) heads.push_back(read_csv_file(s.csv.is_relative() ? path.parent_path() / s.csv : s.csv));

  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string());
  const int panels = static_cast<int>(quantities.size());
  const int cols = panels == 1 ? 1 : 2;
  const int rows = (panels + cols - 1) / cols;
  out << "set datafile separator ','\n"
      << "set terminal pngcairo size " << 640 * cols << ',' << 420 * rows << '\n'
      << "set output '" << path.stem().string() << ".png'\n";
  if (panels > 1) out << "set multiplot layout " << rows << ',' << cols << '\n';
  for (const auto& q : quantities) {
    out << "set title '" << q << "'\nset xlabel '" << abscissa << "'\n";
    out << "plot ";
    for (std::size_t k = 0; k < series.size(); ++k) {
      const int xc = heads[k].column(abscissa), yc = heads[k].column(q);
      if (xc < 0 || yc < 0) throw IoError(series[k].csv.string() + " lacks column " + (xc < 0 ? abscissa : q));
      if (k) out << ", \\\n     ";
      out << '\'' << series[k].csv.string() << "' every ::1 using " << xc + 1 << ':' << yc + 1
          << " with lines title '" << series[k].label << '\'';
    }
    out << '\n';
  }
  if (panels > 1) out << "unset multiplot\n";
  if (!out) throw IoError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------------------------

namespace {

std::string section_file_name(const Line& l) {
  switch (l.kind) {
    case Line::Kind::Diagonal: return "section_diag.csv";
    case Line::Kind::X: return "section_x" + format_double(l.value) + ".csv";
    case Line::Kind::Y: return "section_y" + format_double(l.value) + ".csv";
  }
  return "section.csv";
}

}  // namespace

RunReport execute_run(const RunSpec& spec, std::ostream* log) {
  namespace fs = std::filesystem;
  const auto preset = preset_from_spec(spec);
  const auto mesh = preset_mesh(preset);
  const fs::path dir = spec.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  RunReport report;
  auto field_outputs = [&](const FieldState& s, const std::string& stem) {
    for (auto f : spec.formats) {
      if (f == OutputFormat::Gnuplot) continue;
      const fs::path p = dir / (stem + (f == OutputFormat::Vtk ? ".vtk" : ".csv"));
      write_fields(s, mesh, preset.params, preset.model, f, p);
      report.files.push_back(p);
    }
  };

  const fs::path diag_path = dir / "diagnostics.csv";
  std::ofstream diag(diag_path);
  if (!diag) throw IoError("cannot open " + diag_path.string());
  write_diagnostics_header(diag);
  report.files.push_back(diag_path);

  {
    std::ofstream cfg(dir / "run.ini");
    cfg << render_config(spec);
    report.files.push_back(dir / "run.ini");
  }

  auto state = preset_initial_state(preset, mesh);
  field_outputs(state, "fields_000000");
  EngineOptions opt;
  opt.cfl = spec.cfl;
  report.history = run_until(state, mesh, preset.bc, preset.params, preset.model, preset.t_end, opt,
                             [&](const FieldState&, const StepResult& r) {
                               write_diagnostics_row(diag, r.diag);
                               if (spec.every > 0 && r.state.step % spec.every == 0) {
                                 std::ostringstream stem;
                                 stem << "fields_" << std::setw(6) << std::setfill('0') << r.state.step;
                                 field_outputs(r.state, stem.str());
                               }
                               if (log && r.state.step % 100 == 0)
                                 *log << "step " << r.state.step << " t=" << r.state.t << '\n';
                             });
  field_outputs(report.history.state, "fields_final");

  std::vector<PlotSeries> series;
  for (const auto& line : spec.sections) {
    const fs::path p = dir / section_file_name(line);
    std::ofstream out(p);
    if (!out) throw IoError("cannot open " + p.string());
    write_profile_csv(out, cross_section(report.history.state, mesh, line, preset.params, preset.model));
    report.files.push_back(p);
    series.push_back({p.filename(), to_string(line)});
  }
  const bool gnuplot = std::find(spec.formats.begin(), spec.formats.end(), OutputFormat::Gnuplot) != spec.formats.end();
  if (gnuplot && !series.empty()) {
    const fs::path script = dir / "plot.gp";
    const std::vector<std::string> quantities =
        spec.case_name == "cavity" ? std::vector<std::string>{"u", "v", "cxx", "cyy", "czz"}
                                   : std::vector<std::string>{"h", "un", "cnn", "czz"};
    emit_plot_script(series, quantities, script);
    report.files.push_back(script);
  }
  if (log) *log << "finished at t=" << report.history.state.t << " after " << report.history.steps.size() << " steps\n";
  return report;
}

}  // namespace vsw
