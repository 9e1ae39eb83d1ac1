#pragma once

// Centerline network description: straight segments with a radius function,
// capsule signed distance functions and the closest-segment projection.

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tubenet {

using Point3 = Eigen::Vector3d;

/// Piecewise-linear radius R(s) over the local segment parameter s in [0,1].
class RadiusFunction {
public:
  RadiusFunction() = default;
  explicit RadiusFunction(double constant);
  RadiusFunction(double at_start, double at_end);
  /// Knots must have strictly increasing s covering [0,1] and positive radii.
  explicit RadiusFunction(std::vector<std::pair<double, double>> knots);

  double operator()(double s) const;
  double mean() const;
  double min() const;
  double max() const;
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
  std::vector<std::pair<double, double>> knots_{{0.0, 1.0}, {1.0, 1.0}};
};

struct Segment {
  Point3 p = Point3::Zero();
  Point3 q = Point3::UnitZ();
  RadiusFunction radius;

  Point3 direction() const { return q - p; }
  double length() const { return (q - p).norm(); }
};

struct NetworkNode {
  int id = 0;
  Point3 position = Point3::Zero();
};

struct NetworkEdge {
  int id = 0;
  std::size_t node_a = 0;  // index into nodes()
  std::size_t node_b = 0;
  std::map<std::string, double> parameters;  // per-edge physics, e.g. kax, kr, age
};

/// Result of the network distance query: the capsule distance and the
/// minimizing segment (lowest index on exact ties).
struct NetworkDistance {
  double distance = 0.0;
  std::size_t segment = 0;
  double parameter = 0.0;  // clamped projection onto that segment
};

class NetworkGeometry {
public:
  NetworkGeometry() = default;

  std::size_t add_node(int id, const Point3& position);
  std::size_t add_edge(int id, std::size_t node_a, std::size_t node_b, RadiusFunction radius,
                       std::map<std::string, double> parameters = {});

  /// Convenience: single straight tube with constant radius.
  static NetworkGeometry straight_tube(const Point3& a, const Point3& b, double radius);

  const std::vector<NetworkNode>& nodes() const { return nodes_; }
  const std::vector<NetworkEdge>& edges() const { return edges_; }
  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }

  /// Number of segments incident to each node.
  std::vector<int> node_degrees() const;
  double total_length() const;
  double min_radius() const;
  /// Axis-aligned bounding box of all capsules.
  std::pair<Point3, Point3> bounding_box() const;

  /// Checks the structural invariants; throws on violation.
  void validate() const;

private:
  std::vector<NetworkNode> nodes_;
  std::vector<NetworkEdge> edges_;
  std::vector<Segment> segments_;
};

/// x(s) = p + s (q - p); s must lie in [0,1].
Point3 parameterize(const Segment& segment, double s);

/// Clamped orthogonal projection parameter of x onto the segment.
double project_to_segment(const Point3& x, const Segment& segment);

/// Capsule signed distance: negative inside, zero on the surface.
double capsule_sdf(const Point3& x, const Segment& segment);

NetworkDistance network_sdf(const Point3& x, const NetworkGeometry& network);

/// Polynomial smooth minimum; k > 0.
double smooth_min(double a, double b, double k);

/// Network distance blended pairwise with smooth_min (segment index of the plain minimum).
NetworkDistance network_sdf_smooth(const Point3& x, const NetworkGeometry& network, double k);

// Network file format ("# tubenet-network v1").
NetworkGeometry read_network(const std::string& path);
NetworkGeometry parse_network(const std::string& text);
void write_network(const std::string& path, const NetworkGeometry& network);
std::string format_network(const NetworkGeometry& network);

}  // namespace tubenet
