#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vsw/engine.hpp"

namespace vsw {

struct Totals {
  double mass = 0;
  Vector2<double> momentum{0.0, 0.0};
  double entropy = 0;
};

/// Sums of H, HU, HV and S = H E weighted by the cell areas (exactly rounded).
Totals totals(const FieldState& state, const Mesh& mesh, const PhysParams<double>& params);

struct EntropyBudget {
  std::vector<double> residual;  // S_new - S_old + tau sum G + tau k H |U|^2 + tau H D, per cell
  std::vector<double> scale;     // |S_old| + tau sum |G| + 1e-30
};

/// Per-cell discrete entropy balance of a hyperbolic + source step; residual <= 0 expected where
/// every face passed its entropy conditions.
EntropyBudget entropy_budget(const FieldState& before, const FieldState& after,
                             const std::vector<double>& flux_sum, const std::vector<double>& flux_abs,
                             double tau, const PhysParams<double>& params);

/// Admissibility over a whole field: number of violated inequalities and the worst margin (<= 0).
struct FieldAdmissibility {
  long violations = 0;
  double worst_margin = 0;
};
FieldAdmissibility check_field(const FieldState& state);

// ---------------------------------------------------------------------------------------------
// Cross sections

struct Line {
  enum class Kind { Diagonal, X, Y };
  Kind kind = Kind::Diagonal;
  double value = 0;  // x = value or y = value

  static Line diagonal() { return {}; }
  static Line x(double c) { return {Kind::X, c}; }
  static Line y(double c) { return {Kind::Y, c}; }
};

std::string to_string(const Line& line);
Line parse_line(const std::string& text);  // "diag", "x=0.5", "y=0.5"

struct ProfileRow {
  double s = 0;  // arc length along the line
  double x = 0;
  double y = 0;
  PrimitiveState<double> p;
  double un = 0;   // U . n for the diagonal, n = (1, 1)/sqrt 2
  double cnn = 0;  // C_h n . n
  double snn = 0;  // Sigma_h n . n
  double szz = 0;
};

using Profile = std::vector<ProfileRow>;

/// Cell-centre samples nearest to the line (no interpolation).
Profile cross_section(const FieldState& state, const Mesh& mesh, const Line& line,
                      const PhysParams<double>& params, ModelKind model);

/// Profile along a 1D strip (n = x axis), in the same row layout.
Profile strip_profile(const FieldState& state, const Mesh& mesh, const PhysParams<double>& params, ModelKind model);

/// Relative l1 distance of a profile quantity after resampling `b` onto the abscissae of `a`
/// (piecewise-constant lookup by arc length fraction).
double relative_l1(const Profile& a, const Profile& b, double (*quantity)(const ProfileRow&));

namespace quantity {
inline double h(const ProfileRow& r) { return r.p.h; }
inline double un(const ProfileRow& r) { return r.un; }
inline double cnn(const ProfileRow& r) { return r.cnn; }
inline double czz(const ProfileRow& r) { return r.p.czz; }
inline double cxx(const ProfileRow& r) { return r.p.cxx; }
inline double szz(const ProfileRow& r) { return r.szz; }
}  // namespace quantity

void write_profile_csv(std::ostream& out, const Profile& profile);

// ---------------------------------------------------------------------------------------------
// Time series

void write_diagnostics_header(std::ostream& out);
void write_diagnostics_row(std::ostream& out, const StepDiagnostics& d);

}  // namespace vsw
