#include "scenario_common.hpp"

#include "tubenet/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace tubenet {

namespace {

constexpr double kPi = std::numbers::pi;

ExactSolution exact_kind(CouplingMethod m) {
  switch (m) {
    case CouplingMethod::LineSource: return ExactSolution::LineSource;
    case CouplingMethod::CylinderSurface: return ExactSolution::CylinderSurface;
    default: return ExactSolution::Projection;
  }
}

// d p_3D / d x3 of the method's exact field
double exact_dz(const CylinderBenchmark& b, const Point3& x, CouplingMethod m) {
  const double r = std::hypot(x.x(), x.y());
  const double g = m == CouplingMethod::CylinderSurface ? std::log(std::max(r, b.radius)) : std::log(r);
  return -g / (2.0 * kPi);
}

BoundaryConditions benchmark_bcs(const CylinderBenchmark& b, CouplingMethod m) {
  const ExactSolution kind = exact_kind(m);
  BoundaryConditions bcs;
  const auto dirichlet = BoundaryCondition::dirichlet([b, kind](const Point3& x) { return b.p3d(x, kind); });
  for (int marker : {facet_marker::xmin, facet_marker::xmax, facet_marker::ymin, facet_marker::ymax})
    bcs[marker] = dirichlet;
  // outward flux -dp/dn: +dp/dz at the bottom, -dp/dz at the top
  bcs[facet_marker::zmin] = BoundaryCondition::neumann([b, m](const Point3& x) { return exact_dz(b, x, m); });
  bcs[facet_marker::zmax] = BoundaryCondition::neumann([b, m](const Point3& x) { return -exact_dz(b, x, m); });
  return bcs;
}

int cells_for(double length, double h) {
  const int n = static_cast<int>(std::lround(length / h));
  require(n >= 1 && std::abs(n * h - length) <= 1e-9 * length, "mesh size must divide the domain extent");
  return n;
}

NetworkOperator benchmark_network(const CylinderBenchmark& b, int cells) {
  NetworkGrid grid =
      build_network_grid(NetworkGeometry::straight_tube(Point3(0, 0, 0), Point3(0, 0, 1), b.radius), std::vector<int>{cells});
  NetworkPhysics phys;
  for (const auto& c : grid.cells) phys.axial_conductivity.push_back(b.axial_conductivity(c.center.z()));
  phys.node_bcs[0] = BoundaryCondition::dirichlet(b.p1d(0.0));
  phys.node_bcs[1] = BoundaryCondition::dirichlet(b.p1d(1.0));
  return NetworkOperator(std::move(grid), std::move(phys));
}

struct BuiltProblem {
  std::unique_ptr<CoupledProblem> problem;
  std::vector<double> bulk_exact;
  std::vector<double> volumes;
};

BuiltProblem build_benchmark(const CylinderBenchmark& b, CouplingMethod method, double h, int network_cells,
                             int n_theta, int lvlmax) {
  NetworkOperator network = benchmark_network(b, network_cells);
  const std::vector<double> kr(network.size(), b.wall_conductivity());
  BuiltProblem out;
  std::unique_ptr<BulkOperator> bulk;
  Coupling coupling;
  if (is_projection(method)) {
    TetMesh mesh = cylinder_benchmark_mesh(h, b.radius);
    const auto quad = build_interface_quadrature(
        mesh, facet_marker::interface, network.grid(),
        method == CouplingMethod::ProjectionExact ? QuadratureRule::Exact : QuadratureRule::Approximate, lvlmax);
    coupling = build_projection(quad, kr, method);
    bulk = std::make_unique<BoxOperator>(std::move(mesh), BulkPhysics::darcy(1.0), benchmark_bcs(b, method));
  } else {
    const int nxy = cells_for(2.0, h), nz = cells_for(1.0, h);
    CartesianGrid grid = build_cartesian(Point3(-1, -1, 0), Point3(1, 1, 1), {nxy, nxy, nz});
    if (method == CouplingMethod::LineSource) {
      coupling = build_line_source(grid, network.grid(), kr, 1, n_theta);
    } else {
      CylinderSurfaceOptions opt;
      opt.n_theta = n_theta;
      opt.n_distribution = 4 * n_theta;
      coupling = build_cylinder_surface(grid, network.grid(), kr, opt);
    }
    bulk = std::make_unique<TpfaOperator>(std::move(grid), BulkPhysics::darcy(1.0), benchmark_bcs(b, method));
  }
  const ExactSolution kind = exact_kind(method);
  for (std::size_t i = 0; i < bulk->size(); ++i) {
    out.bulk_exact.push_back(b.p3d(bulk->position(i), kind));
    out.volumes.push_back(bulk->control_volume(i));
  }
  out.problem = std::make_unique<CoupledProblem>(std::move(bulk), std::move(network), std::move(coupling));
  return out;
}

std::vector<double> exact_cell_sources(const CylinderBenchmark& b, const NetworkGrid& grid) {
  std::vector<double> q;
  for (std::size_t c = 0; c < grid.size(); ++c)
    q.push_back(integrate_over_cell(grid, c, [&](const Point3& x) { return b.source(x.z()); }));
  return q;
}

}  // namespace

TetMesh cylinder_benchmark_mesh(double h, double radius) {
  require(h > 0.0 && radius > 0.0, "mesh size and radius must be positive");
  const int nz = cells_for(1.0, h);
  // radial spacing twice the local azimuthal spacing, capped at h
  int nt = static_cast<int>(std::lround(3.0 / h));
  nt = std::max(8, (nt + 7) / 8 * 8);
  OgridSpec spec;
  spec.half_width = 1.0;
  spec.radius = radius;
  for (int k = 0; k <= nz; ++k) spec.z_levels.push_back(static_cast<double>(k) / nz);
  spec.hole_z0 = 0.0;
  spec.hole_z1 = 1.0;
  spec.n_azimuthal = nt;
  spec.aspect = 2.0;
  spec.max_radial_spacing = h;
  return build_cylinder_ogrid(spec);
}

CylinderLevel solve_cylinder_level(const CylinderStudyOptions& options, CouplingMethod method, double h) {
  const CylinderBenchmark b(options.radius);
  const int ncells = options.network_cells > 0 ? options.network_cells : cells_for(1.0, h);
  BuiltProblem built = build_benchmark(b, method, h, ncells, options.n_theta, options.lvlmax);
  const CoupledProblem& problem = *built.problem;
  const auto& ngrid = problem.network().grid();

  CylinderLevel level;
  level.method = method;
  level.h = h;
  level.bulk_dofs = problem.dofs().bulk;
  level.network_cells = problem.dofs().network;

  const std::vector<double> q_exact = exact_cell_sources(b, ngrid);
  std::vector<double> lengths, p1d_exact;
  for (const auto& c : ngrid.cells) {
    lengths.push_back(c.length);
    p1d_exact.push_back(b.p1d(c.center.z()));
  }

  Eigen::VectorXd x = problem.uniform_state(0.0, 1.5);
  if (options.inject_exact) {
    for (std::size_t i = 0; i < built.bulk_exact.size(); ++i) x[static_cast<long>(i)] = built.bulk_exact[i];
    for (std::size_t c = 0; c < p1d_exact.size(); ++c) x[static_cast<long>(level.bulk_dofs + c)] = p1d_exact[c];
    level.solve.converged = true;
    level.solve.balance = problem.balance(x);
    level.sources = q_exact;
  } else {
    level.solve = detail::solve_coupled(problem, x, options.newton);
    level.sources = problem.network_sources(x);
  }
  const std::vector<double> bulk(x.data(), x.data() + level.bulk_dofs);
  const std::vector<double> net(x.data() + level.bulk_dofs, x.data() + x.size());
  level.p3d_error = normalized_error(built.volumes, bulk, built.bulk_exact);
  level.p1d_error = normalized_error(lengths, net, p1d_exact);
  level.q_error = normalized_error(lengths, level.sources, q_exact);
  return level;
}

CylinderStudy run_cylinder_study(const CylinderStudyOptions& options) {
  require(!options.h.empty(), "at least one refinement level is required");
  require(!options.methods.empty(), "at least one coupling method is required");
  for (std::size_t i = 1; i < options.h.size(); ++i)
    require(options.h[i] < options.h[i - 1], "mesh sizes must strictly decrease");
  for (double h : options.h) {
    cells_for(1.0, h);
    require(options.radius < 1.0 - 1.5 * h, "tube does not fit the coarsest O-grid");
  }
  CylinderStudy study;
  for (CouplingMethod m : options.methods)
    for (double h : options.h) study.levels.push_back(solve_cylinder_level(options, m, h));
  return study;
}

std::vector<const CylinderLevel*> CylinderStudy::of(CouplingMethod method) const {
  std::vector<const CylinderLevel*> out;
  for (const auto& l : levels)
    if (l.method == method) out.push_back(&l);
  return out;
}

ConvergenceRates CylinderStudy::rates(CouplingMethod method, int norm) const {
  require(norm >= 0 && norm <= 2, "norm index must be 0, 1 or 2");
  std::vector<double> h, e;
  for (const auto* l : of(method)) {
    h.push_back(l->h);
    e.push_back(norm == 0 ? l->p3d_error : norm == 1 ? l->p1d_error : l->q_error);
  }
  return convergence_rates(h, e);
}

bool CylinderStudy::all_converged() const {
  return std::all_of(levels.begin(), levels.end(), [](const CylinderLevel& l) { return l.solve.converged; });
}

std::string format_cylinder_csv(const CylinderStudy& study) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "method,h,bulk_dofs,network_cells,err_p3d,err_p1d,err_q,order_p3d,order_p1d,order_q,balance,"
         "newton_iterations,seconds\n";
  const CylinderLevel* prev = nullptr;
  for (const auto& l : study.levels) {
    if (prev && prev->method != l.method) prev = nullptr;
    out << to_string(l.method) << ',' << l.h << ',' << l.bulk_dofs << ',' << l.network_cells << ',' << l.p3d_error
        << ',' << l.p1d_error << ',' << l.q_error;
    const double e[3] = {l.p3d_error, l.p1d_error, l.q_error};
    for (int k = 0; k < 3; ++k) {
      out << ',';
      if (prev) {
        const double ep[3] = {prev->p3d_error, prev->p1d_error, prev->q_error};
        if (ep[k] > 0.0 && e[k] > 0.0) out << std::log(ep[k] / e[k]) / std::log(prev->h / l.h);
      }
    }
    out << ',' << l.solve.balance.relative_error << ',' << l.solve.newton_iterations << ',' << std::setprecision(4)
        << l.solve.seconds << std::setprecision(10) << '\n';
    prev = &l;
  }
  return out.str();
}

std::string format_cylinder_orders_csv(const CylinderStudy& study) {
  static const char* names[3] = {"p3d", "p1d", "q"};
  std::ostringstream out;
  out << std::setprecision(6) << "method,norm,fitted_order,pairwise_orders\n";
  std::vector<CouplingMethod> seen;
  for (const auto& l : study.levels)
    if (std::find(seen.begin(), seen.end(), l.method) == seen.end()) seen.push_back(l.method);
  for (CouplingMethod m : seen) {
    if (study.of(m).size() < 2) continue;
    for (int k = 0; k < 3; ++k) {
      const auto r = study.rates(m, k);
      out << to_string(m) << ',' << names[k] << ',' << r.fitted << ',';
      for (std::size_t i = 0; i < r.orders.size(); ++i) out << (i ? " " : "") << (r.exact[i] ? "exact" : "") << r.orders[i];
      out << '\n';
    }
  }
  return out.str();
}

ProjectionRuleComparison compare_projection_rules(double h, int network_cells, const std::vector<int>& lvlmax,
                                                  double radius) {
  require(network_cells >= 1 && !lvlmax.empty(), "need network cells and at least one refinement level");
  const CylinderBenchmark b(radius);
  NewtonOptions newton;
  ProjectionRuleComparison cmp;
  auto solve = [&](CouplingMethod m, int lv) {
    BuiltProblem built = build_benchmark(b, m, h, network_cells, 16, lv);
    Eigen::VectorXd x = built.problem->uniform_state(0.0, 1.5);
    const SolveSummary s = detail::solve_coupled(*built.problem, x, newton);
    if (!s.converged) fail(ErrorCode::NotConverged, "projection comparison solve failed: " + s.message);
    cmp.balances.push_back(s.balance);
    return built.problem->network_sources(x);
  };
  cmp.exact_sources = solve(CouplingMethod::ProjectionExact, 0);
  double scale = 0.0;
  for (double q : cmp.exact_sources) scale = std::max(scale, std::abs(q));
  for (int lv : lvlmax) {
    const auto qa = solve(CouplingMethod::ProjectionApprox, lv);
    double d = 0.0;
    for (std::size_t c = 0; c < qa.size(); ++c) d = std::max(d, std::abs(qa[c] - cmp.exact_sources[c]));
    cmp.lvlmax.push_back(lv);
    cmp.difference.push_back(d / scale);
  }
  return cmp;
}

CylinderStudyOptions cylinder_options(const Config& config) {
  CylinderStudyOptions o;
  o.radius = config.number("cylinder.radius", o.radius);
  o.h = config.numbers("mesh.h", o.h);
  const int levels = config.integer("mesh.levels", static_cast<int>(o.h.size()));
  require(levels >= 1 && levels <= static_cast<int>(o.h.size()), "mesh.levels out of range");
  o.h.resize(static_cast<std::size_t>(levels));
  o.network_cells = config.integer("network.cells", 0);
  o.methods = detail::methods_from_config(config, o.methods);
  o.lvlmax = config.integer("coupling.lvlmax", o.lvlmax);
  o.n_theta = config.integer("coupling.n_theta", o.n_theta);
  o.inject_exact = config.boolean("cylinder.inject_exact", false);
  o.newton = detail::newton_from_config(config, o.newton);
  require(o.lvlmax >= 0 && o.n_theta >= 0, "lvlmax and n_theta must be non-negative");
  return o;
}

}  // namespace tubenet
