#include "tubenet/geometry.hpp"

#include "tubenet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tubenet {

RadiusFunction::RadiusFunction(double constant) : RadiusFunction(constant, constant) {}

RadiusFunction::RadiusFunction(double at_start, double at_end)
    : RadiusFunction(std::vector<std::pair<double, double>>{{0.0, at_start}, {1.0, at_end}}) {}

RadiusFunction::RadiusFunction(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  require(knots_.size() >= 2, "radius function needs at least two knots");
  require(knots_.front().first == 0.0 && knots_.back().first == 1.0, "radius knots must span [0,1]");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    require(knots_[i].second > 0.0 && std::isfinite(knots_[i].second), "radius must be positive");
    if (i > 0) require(knots_[i].first > knots_[i - 1].first, "radius knots must be increasing");
  }
}

double RadiusFunction::operator()(double s) const {
  if (s <= knots_.front().first) return knots_.front().second;
  if (s >= knots_.back().first) return knots_.back().second;
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), s,
                             [](double v, const auto& k) { return v < k.first; });
  auto lo = hi - 1;
  const double t = (s - lo->first) / (hi->first - lo->first);
  return (1.0 - t) * lo->second + t * hi->second;
}

double RadiusFunction::mean() const {
  double integral = 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i)
    integral += 0.5 * (knots_[i].second + knots_[i - 1].second) * (knots_[i].first - knots_[i - 1].first);
  return integral;
}

double RadiusFunction::min() const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& k : knots_) r = std::min(r, k.second);
  return r;
}

double RadiusFunction::max() const {
  double r = 0.0;
  for (const auto& k : knots_) r = std::max(r, k.second);
  return r;
}

std::size_t NetworkGeometry::add_node(int id, const Point3& position) {
  require(position.allFinite(), "node coordinates must be finite");
  for (const auto& n : nodes_) require(n.id != id, "duplicate node id " + std::to_string(id));
  nodes_.push_back({id, position});
  return nodes_.size() - 1;
}

std::size_t NetworkGeometry::add_edge(int id, std::size_t node_a, std::size_t node_b, RadiusFunction radius,
                                      std::map<std::string, double> parameters) {
  require(node_a < nodes_.size() && node_b < nodes_.size(), "edge references unknown node");
  for (const auto& e : edges_) require(e.id != id, "duplicate edge id " + std::to_string(id));
  Segment seg{nodes_[node_a].position, nodes_[node_b].position, std::move(radius)};
  if (!(seg.length() > 0.0)) fail(ErrorCode::Geometry, "edge " + std::to_string(id) + " has zero length");
  edges_.push_back({id, node_a, node_b, std::move(parameters)});
  segments_.push_back(std::move(seg));
  return segments_.size() - 1;
}

NetworkGeometry NetworkGeometry::straight_tube(const Point3& a, const Point3& b, double radius) {
  NetworkGeometry net;
  const auto na = net.add_node(0, a);
  const auto nb = net.add_node(1, b);
  net.add_edge(0, na, nb, RadiusFunction(radius));
  return net;
}

std::vector<int> NetworkGeometry::node_degrees() const {
  std::vector<int> deg(nodes_.size(), 0);
  for (const auto& e : edges_) {
    ++deg[e.node_a];
    ++deg[e.node_b];
  }
  return deg;
}

double NetworkGeometry::total_length() const {
  double l = 0.0;
  for (const auto& s : segments_) l += s.length();
  return l;
}

double NetworkGeometry::min_radius() const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& s : segments_) r = std::min(r, s.radius.min());
  return r;
}

std::pair<Point3, Point3> NetworkGeometry::bounding_box() const {
  require(!segments_.empty(), "empty network");
  Point3 lo = Point3::Constant(std::numeric_limits<double>::infinity());
  Point3 hi = -lo;
  for (const auto& s : segments_) {
    const double r = s.radius.max();
    lo = lo.cwiseMin(s.p - Point3::Constant(r)).cwiseMin(s.q - Point3::Constant(r));
    hi = hi.cwiseMax(s.p + Point3::Constant(r)).cwiseMax(s.q + Point3::Constant(r));
  }
  return {lo, hi};
}

void NetworkGeometry::validate() const {
  if (segments_.empty()) fail(ErrorCode::Geometry, "network has no segments");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    const auto& s = segments_[i];
    // endpoints are copied from the node table, so shared nodes coincide bitwise
    if (s.p != nodes_[e.node_a].position || s.q != nodes_[e.node_b].position)
      fail(ErrorCode::Internal, "segment endpoints out of sync with node table");
    if (!(s.length() > 0.0)) fail(ErrorCode::Geometry, "zero-length segment");
  }
}

Point3 parameterize(const Segment& segment, double s) {
  require(s >= 0.0 && s <= 1.0, "segment parameter must lie in [0,1]");
  return segment.p + s * (segment.q - segment.p);
}

double project_to_segment(const Point3& x, const Segment& segment) {
  const Point3 m = segment.q - segment.p;
  const double t = (x - segment.p).dot(m) / m.squaredNorm();
  return std::max(0.0, std::min(t, 1.0));
}

double capsule_sdf(const Point3& x, const Segment& segment) {
  const double s = project_to_segment(x, segment);
  const Point3 foot = segment.p + s * (segment.q - segment.p);
  return (foot - x).norm() - segment.radius(s);
}

NetworkDistance network_sdf(const Point3& x, const NetworkGeometry& network) {
  require(!network.empty(), "network_sdf on empty network");
  NetworkDistance best{std::numeric_limits<double>::infinity(), 0, 0.0};
  const auto& segs = network.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double s = project_to_segment(x, segs[i]);
    const Point3 foot = segs[i].p + s * (segs[i].q - segs[i].p);
    const double d = (foot - x).norm() - segs[i].radius(s);
    if (d < best.distance) best = {d, i, s};  // strict: lowest index wins ties
  }
  return best;
}

double smooth_min(double a, double b, double k) {
  require(k > 0.0, "smooth_min requires k > 0");
  const double h = std::max(k - std::abs(a - b), 0.0) / k;
  return std::min(a, b) - h * h * h * k / 6.0;
}

NetworkDistance network_sdf_smooth(const Point3& x, const NetworkGeometry& network, double k) {
  NetworkDistance plain = network_sdf(x, network);
  const auto& segs = network.segments();
  double d = capsule_sdf(x, segs[0]);
  for (std::size_t i = 1; i < segs.size(); ++i) d = smooth_min(d, capsule_sdf(x, segs[i]), k);
  plain.distance = d;
  return plain;
}

}  // namespace tubenet
