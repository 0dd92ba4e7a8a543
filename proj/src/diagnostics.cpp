#include "vsw/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "vsw/exact_sum.hpp"

namespace vsw {

Totals totals(const FieldState& state, const Mesh& mesh, const PhysParams<double>& params) {
  ExactSum m, mx, my, s;
  for (const auto& q : state.q) {
    m.add(q[0]);
    mx.add(q[1]);
    my.add(q[2]);
    s.add(entropy(q, params));
  }
  const double a = mesh.area();
  Totals t;
  t.mass = a * m.value();
  t.momentum = {a * mx.value(), a * my.value()};
  t.entropy = a * s.value();
  return t;
}

EntropyBudget entropy_budget(const FieldState& before, const FieldState& after,
                             const std::vector<double>& flux_sum, const std::vector<double>& flux_abs,
                             double tau, const PhysParams<double>& params) {
  const std::size_t n = before.q.size();
  if (after.q.size() != n || flux_sum.size() != n || flux_abs.size() != n)
    throw std::invalid_argument("entropy_budget: mismatched fields");
  EntropyBudget b;
  b.residual.resize(n);
  b.scale.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    const auto p = conserved_to_primitive(after.q[c]);
    const double s_old = entropy(before.q[c], params);
    const double s_new = p.h * free_energy(p, params);
    const double friction = tau * params.k * p.h * (p.u * p.u + p.v * p.v);
    const double relax = tau * p.h * dissipation(p, params);
    ExactSum r;
    for (double x : {s_new, -s_old, tau * flux_sum[c], friction, relax}) r.add(x);
    b.residual[c] = r.value();
    b.scale[c] = std::abs(s_old) + tau * flux_abs[c] + 1e-30;
  }
  return b;
}

FieldAdmissibility check_field(const FieldState& state) {
  FieldAdmissibility a;
  for (const auto& q : state.q) {
    const auto rep = check_admissible(q);
    a.violations += static_cast<long>(rep.violations.size());
    for (const auto& v : rep.violations) a.worst_margin = std::min(a.worst_margin, v.margin);
  }
  return a;
}

std::string to_string(const Line& line) {
  std::ostringstream s;
  switch (line.kind) {
    case Line::Kind::Diagonal: return "diag";
    case Line::Kind::X: s << "x=" << line.value; break;
    case Line::Kind::Y: s << "y=" << line.value; break;
  }
  return s.str();
}

Line parse_line(const std::string& text) {
  if (text == "diag" || text == "diagonal") return Line::diagonal();
  if (text.size() > 2 && (text[0] == 'x' || text[0] == 'y') && text[1] == '=') {
    std::size_t used = 0;
    const double v = std::stod(text.substr(2), &used);
    if (used != text.size() - 2) throw std::invalid_argument("bad cross-section value: " + text);
    return text[0] == 'x' ? Line::x(v) : Line::y(v);
  }
  throw std::invalid_argument("unknown cross-section: " + text);
}

namespace {

ProfileRow make_row(const PrimitiveState<double>& p, double s, double x, double y, const Vector2<double>& n,
                    const PhysParams<double>& params, ModelKind model) {
  ProfileRow r;
  r.s = s;
  r.x = x;
  r.y = y;
  r.p = p;
  r.un = p.velocity().dot(n);
  r.cnn = n.dot(p.conformation() * n);
  const auto st = stress(p, params.G, model);
  r.snn = n.dot(st.sigma_h * n);
  r.szz = st.sigma_zz;
  return r;
}

}  // namespace

Profile cross_section(const FieldState& state, const Mesh& mesh, const Line& line, const PhysParams<double>& params,
                      ModelKind model) {
  Profile out;
  auto prim = [&](int i, int j) { return conserved_to_primitive(state.q[mesh.index(i, j)]); };
  switch (line.kind) {
    case Line::Kind::Diagonal: {
      const Vector2<double> n = Vector2<double>(1, 1) / std::sqrt(2.0);
      for (int i = 0; i < mesh.nx; ++i) {
        const auto c = mesh.center(i, 0);
        const int j = std::clamp(static_cast<int>(std::floor(c.x() / mesh.dy)), 0, mesh.ny - 1);
        const auto cc = mesh.center(i, j);
        if (std::abs(cc.y() - cc.x()) > mesh.dy) continue;
        out.push_back(make_row(prim(i, j), (cc.x() + cc.y()) / std::sqrt(2.0), cc.x(), cc.y(), n, params, model));
      }
      break;
    }
    case Line::Kind::X: {
      if (line.value < 0 || line.value > mesh.lx) throw std::invalid_argument("cross-section outside the domain");
      const int i = std::clamp(static_cast<int>(std::floor(line.value / mesh.dx)), 0, mesh.nx - 1);
      for (int j = 0; j < mesh.ny; ++j) {
        const auto c = mesh.center(i, j);
        out.push_back(make_row(prim(i, j), c.y(), c.x(), c.y(), {1.0, 0.0}, params, model));
      }
      break;
    }
    case Line::Kind::Y: {
      if (line.value < 0 || line.value > mesh.ly) throw std::invalid_argument("cross-section outside the domain");
      const int j = std::clamp(static_cast<int>(std::floor(line.value / mesh.dy)), 0, mesh.ny - 1);
      for (int i = 0; i < mesh.nx; ++i) {
        const auto c = mesh.center(i, j);
        out.push_back(make_row(prim(i, j), c.x(), c.x(), c.y(), {1.0, 0.0}, params, model));
      }
      break;
    }
  }
  return out;
}

Profile strip_profile(const FieldState& state, const Mesh& mesh, const PhysParams<double>& params, ModelKind model) {
  return cross_section(state, mesh, Line::y(mesh.ly / 2), params, model);
}

double relative_l1(const Profile& a, const Profile& ref, double (*q)(const ProfileRow&)) {
  if (a.empty() || ref.empty()) throw std::invalid_argument("relative_l1: empty profile");
  ExactSum diff, norm;
  for (const auto& row : a) {
    auto it = std::lower_bound(ref.begin(), ref.end(), row.s, [](const ProfileRow& r, double s) { return r.s < s; });
    if (it == ref.end()) {
      --it;
    } else if (it != ref.begin() && std::abs(std::prev(it)->s - row.s) <= std::abs(it->s - row.s)) {
      --it;
    }
    diff.add(std::abs(q(row) - q(*it)));
    norm.add(std::abs(q(*it)));
  }
  const double nv = norm.value();
  return nv > 0 ? diff.value() / nv : diff.value();
}

void write_profile_csv(std::ostream& out, const Profile& profile) {
  out << "s,x,y,h,u,v,cxx,cyy,cxy,czz,un,cnn,snn,szz\n";
  out << std::setprecision(17);
  for (const auto& r : profile) {
    out << r.s << ',' << r.x << ',' << r.y << ',' << r.p.h << ',' << r.p.u << ',' << r.p.v << ',' << r.p.cxx << ','
        << r.p.cyy << ',' << r.p.cxy << ',' << r.p.czz << ',' << r.un << ',' << r.cnn << ',' << r.snn << ',' << r.szz
        << '\n';
  }
}

void write_diagnostics_header(std::ostream& out) {
  out << "t,tau,mass,momx,momy,entropy,max_residual,failed_faces\n";
}

void write_diagnostics_row(std::ostream& out, const StepDiagnostics& d) {
  out << std::setprecision(17) << d.t << ',' << d.tau << ',' << d.mass << ',' << d.momentum.x() << ','
      << d.momentum.y() << ',' << d.entropy << ',' << d.max_residual << ',' << d.failed_faces << '\n';
}

}  // namespace vsw
