#pragma once

// Finite volume operators for the bulk (cell-centered TPFA, vertex-centered
// box) and the network (cell-centered TPFA with junction elimination).
// Residuals are written as outflow minus source.

#include "tubenet/constitutive.hpp"
#include "tubenet/mesh.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace tubenet {

using ScalarField = std::function<double(const Point3&)>;
using Triplet = Eigen::Triplet<double>;

enum class BcType { NoFlow, Dirichlet, Neumann };

/// Dirichlet value is a pressure; Neumann value is the outward flux density.
struct BoundaryCondition {
  BcType type = BcType::NoFlow;
  ScalarField value;

  static BoundaryCondition no_flow() { return {}; }
  static BoundaryCondition dirichlet(ScalarField f) { return {BcType::Dirichlet, std::move(f)}; }
  static BoundaryCondition dirichlet(double v) { return dirichlet([v](const Point3&) { return v; }); }
  static BoundaryCondition neumann(ScalarField f) { return {BcType::Neumann, std::move(f)}; }
  static BoundaryCondition neumann(double v) { return neumann([v](const Point3&) { return v; }); }
};

/// Keyed by facet marker; missing markers are no-flow.
using BoundaryConditions = std::map<int, BoundaryCondition>;

struct BulkPhysics {
  double mobility = 1.0;  // K / mu
  std::optional<VanGenuchtenParams> richards;
  double density = 0.0;
  Point3 gravity = Point3::Zero();

  static BulkPhysics darcy(double mobility) { return {mobility, std::nullopt, 0.0, Point3::Zero()}; }
  static BulkPhysics richards_model(const VanGenuchtenParams& vg, bool with_gravity);

  RelativeMobility relative(double p) const { return richards ? vg_mobility(p, *richards) : RelativeMobility{}; }
  double potential(double p, const Point3& x) const { return p - density * gravity.dot(x); }
  bool linear() const { return !richards.has_value(); }
};

struct DofMap {
  std::size_t bulk = 0;
  std::size_t network = 0;
  std::size_t size() const { return bulk + network; }
  std::size_t network_offset() const { return bulk; }
};

/// Residual plus optional Jacobian triplets in global numbering.
struct Assembly {
  Eigen::VectorXd residual;
  std::vector<Triplet> triplets;
  bool with_jacobian = true;
  double boundary_outflow = 0.0;  // net flux leaving the bulk through its outer boundary
};

class BulkOperator {
public:
  virtual ~BulkOperator() = default;
  virtual std::size_t size() const = 0;
  virtual Point3 position(std::size_t dof) const = 0;
  virtual double control_volume(std::size_t dof) const = 0;
  virtual const BulkPhysics& physics() const = 0;
  /// Adds flux and boundary terms of all bulk rows (bulk dofs come first).
  virtual void assemble(const Eigen::VectorXd& x, Assembly& out) const = 0;
  /// Rows replaced by p = value after assembly; their full residual is the
  /// negative boundary outflow of that control volume.
  virtual const std::vector<std::pair<std::size_t, double>>& constrained() const = 0;
};

enum class MobilityAveraging { Upwind, Arithmetic };

/// Cell-centered TPFA on a rectilinear grid; harmonic transmissibilities,
/// half-cell Dirichlet faces, Neumann faces integrated with 2x2 Gauss points.
class TpfaOperator final : public BulkOperator {
public:
  TpfaOperator(CartesianGrid grid, BulkPhysics physics, BoundaryConditions bcs,
               std::vector<double> cell_mobility = {});

  std::size_t size() const override { return grid_.size(); }
  Point3 position(std::size_t dof) const override { return grid_.center(dof); }
  double control_volume(std::size_t dof) const override { return grid_.volume(dof); }
  const BulkPhysics& physics() const override { return physics_; }
  void assemble(const Eigen::VectorXd& x, Assembly& out) const override;
  const std::vector<std::pair<std::size_t, double>>& constrained() const override { return none_; }
  const CartesianGrid& grid() const { return grid_; }

private:
  double cell_mobility(std::size_t c) const { return cell_mobility_.empty() ? physics_.mobility : cell_mobility_[c]; }

  CartesianGrid grid_;
  BulkPhysics physics_;
  BoundaryConditions bcs_;
  std::vector<double> cell_mobility_;
  std::vector<std::pair<std::size_t, double>> none_;
};

/// Vertex-centered box method on tets with P1 gradients and a barycentric dual.
class BoxOperator final : public BulkOperator {
public:
  BoxOperator(TetMesh mesh, BulkPhysics physics, BoundaryConditions bcs,
              MobilityAveraging averaging = MobilityAveraging::Upwind);

  std::size_t size() const override { return mesh_.vertices.size(); }
  Point3 position(std::size_t dof) const override { return mesh_.vertices[dof]; }
  double control_volume(std::size_t dof) const override { return dual_volume_[dof]; }
  const BulkPhysics& physics() const override { return physics_; }
  void assemble(const Eigen::VectorXd& x, Assembly& out) const override;
  const std::vector<std::pair<std::size_t, double>>& constrained() const override { return dirichlet_; }
  const TetMesh& mesh() const { return mesh_; }

  /// Element matrix of -div(grad) for tet t: entries (grad phi_a . scvf normals).
  Eigen::Matrix4d element_matrix(std::size_t t) const;

private:
  struct EdgeFace {
    int a, b;       // local vertex indices
    Point3 normal;  // area-weighted, oriented from a to b
  };
  struct NeumannPiece {
    std::size_t vertex;
    double flux;  // integrated outward flux
  };

  TetMesh mesh_;
  BulkPhysics physics_;
  MobilityAveraging averaging_;
  std::vector<std::array<Point3, 4>> gradients_;
  std::vector<std::array<EdgeFace, 6>> faces_;
  std::vector<double> dual_volume_;
  std::vector<NeumannPiece> neumann_;
  std::vector<std::pair<std::size_t, double>> dirichlet_;
};

struct NetworkPhysics {
  std::vector<double> axial_conductivity;               // per network cell
  std::map<std::size_t, BoundaryCondition> node_bcs;    // degree-1 nodes default to no-flow
  std::map<std::size_t, double> fixed_cells;            // cells held at a given pressure
};

/// 1D TPFA: every junction eliminates its node pressure by flux continuity,
/// which reduces to harmonic averaging between two cells.
class NetworkOperator {
public:
  NetworkOperator(NetworkGrid grid, NetworkPhysics physics);

  std::size_t size() const { return grid_.size(); }
  const NetworkGrid& grid() const { return grid_; }
  const NetworkPhysics& physics() const { return physics_; }
  /// x holds all dofs; the network block starts at `offset`.
  void assemble(const Eigen::VectorXd& x, std::size_t offset, Assembly& out) const;
  /// Net flux leaving the network through its end nodes.
  double end_outflow(const Eigen::VectorXd& x, std::size_t offset) const;
  /// Pressure at a geometry node after elimination.
  double node_pressure(const Eigen::VectorXd& x, std::size_t offset, std::size_t node) const;
  /// Rejects networks whose connected components lack a Dirichlet node or fixed cell.
  void check_well_posed() const;

private:
  NetworkGrid grid_;
  NetworkPhysics physics_;
};

/// sqrt(sum |K| e^2) / sum |K|
double normalized_error(const std::vector<double>& volumes, const std::vector<double>& values,
                        const std::vector<double>& exact);

/// Integral of f over a network cell with 3-point Gauss.
double integrate_over_cell(const NetworkGrid& grid, std::size_t cell, const ScalarField& f);

}  // namespace tubenet
