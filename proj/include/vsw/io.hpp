#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vsw/bench.hpp"
#include "vsw/diagnostics.hpp"

namespace vsw {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ConfigError {
 public:
  ParseError(int line, int column, const std::string& what);
  int line;
  int column;
};

class UnknownKey : public ConfigError {
 public:
  UnknownKey(int line, const std::string& section, const std::string& key);
};

class OutOfRange : public ConfigError {
 public:
  OutOfRange(int line, const std::string& key, const std::string& why);
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Vtk, Gnuplot };

struct RunSpec {
  ModelKind model = ModelKind::SVTM;
  std::string case_name = "stoker";
  int nx = 33;
  int ny = 33;
  double lx = 1;
  double ly = 1;
  PhysParams<double> params{};
  double cfl = 0.9;
  double t_end = 0.2;
  bool regularized_lid = false;
  std::string output_dir = "out";
  int every = 0;  // write fields every N steps; 0 writes only the final state
  std::vector<Line> sections{};
  std::vector<OutputFormat> formats{OutputFormat::Csv};

  bool operator==(const RunSpec& o) const;
};

/// Sectioned key=value text:
///   [run]     model, case, nx, ny, lx, ly, cfl, t_end, lid (plain|regularized)
///   [physics] g, G, lambda, k, nu_s
///   [output]  dir, every, sections (diag, x=c, y=c; comma separated), formats (csv, vtk, gnuplot)
/// '#' and ';' start comments.
RunSpec parse_config(const std::string& text);
std::string render_config(const RunSpec& spec);
void apply_override(RunSpec& spec, const std::string& assignment);  // "section.key=value" or "key=value"

/// Spec for a benchmark preset with its own defaults.
RunSpec preset_spec(const std::string& name);
BenchmarkPreset preset_from_spec(const RunSpec& spec);

std::string to_string(OutputFormat f);

// ---------------------------------------------------------------------------------------------
// Fields

void write_fields_csv(std::ostream& out, const FieldState& state, const Mesh& mesh, const PhysParams<double>& params,
                      ModelKind model);
void write_fields_vtk(std::ostream& out, const FieldState& state, const Mesh& mesh, const PhysParams<double>& params,
                      ModelKind model);
void write_fields(const FieldState& state, const Mesh& mesh, const PhysParams<double>& params, ModelKind model,
                  OutputFormat format, const std::filesystem::path& path);

/// Reads a field CSV back onto `mesh` (cells matched by row order).
FieldState read_fields_csv(std::istream& in, const Mesh& mesh);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  int column(const std::string& name) const;  // -1 if absent
};
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);

struct PlotSeries {
  std::filesystem::path csv;
  std::string label;
};

/// Gnuplot script with one panel per quantity, every series overlaid in each panel.
void emit_plot_script(const std::vector<PlotSeries>& series, const std::vector<std::string>& quantities,
                      const std::filesystem::path& path, const std::string& abscissa = "s");

// ---------------------------------------------------------------------------------------------
// Runs

struct RunReport {
  RunHistory history;
  std::vector<std::filesystem::path> files;
};

/// Runs the spec and writes fields, cross sections, the diagnostics series and plot scripts
/// under spec.output_dir.
RunReport execute_run(const RunSpec& spec, std::ostream* log = nullptr);

}  // namespace vsw
