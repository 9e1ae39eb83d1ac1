#include "tubenet/error.hpp"
#include "tubenet/geometry.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace tubenet {

namespace {

constexpr const char* kNetworkHeader = "# tubenet-network v1";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(int line, const std::string& msg) {
  fail(ErrorCode::Parse, "network file line " + std::to_string(line) + ": " + msg);
}

}  // namespace

NetworkGeometry parse_network(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool header_seen = false;
  NetworkGeometry net;
  std::unordered_map<int, std::size_t> node_index;

  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kNetworkHeader) parse_error(lineno, "missing header '" + std::string(kNetworkHeader) + "'");
      header_seen = true;
      continue;
    }
    if (line[0] == '#') continue;

    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "node") {
      int id;
      double x, y, z;
      if (!(ls >> id >> x >> y >> z)) parse_error(lineno, "expected 'node <id> <x1> <x2> <x3>'");
      if (node_index.count(id)) parse_error(lineno, "duplicate node id");
      node_index[id] = net.add_node(id, Point3(x, y, z));
    } else if (kind == "edge") {
      int id, a, b;
      double ra, rb;
      if (!(ls >> id >> a >> b >> ra >> rb))
        parse_error(lineno, "expected 'edge <id> <node_a> <node_b> <radius_a> <radius_b>'");
      if (!node_index.count(a) || !node_index.count(b)) parse_error(lineno, "edge references undefined node");
      if (!(ra > 0.0) || !(rb > 0.0)) parse_error(lineno, "radii must be positive");
      std::map<std::string, double> params;
      std::string kv;
      while (ls >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) parse_error(lineno, "malformed key=value '" + kv + "'");
        try {
          std::size_t used = 0;
          const double v = std::stod(kv.substr(eq + 1), &used);
          if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
          params[kv.substr(0, eq)] = v;
        } catch (const std::exception&) {
          parse_error(lineno, "non-numeric value in '" + kv + "'");
        }
      }
      try {
        net.add_edge(id, node_index[a], node_index[b], RadiusFunction(ra, rb), std::move(params));
      } catch (const Error& e) {
        parse_error(lineno, e.what());
      }
    } else {
      parse_error(lineno, "unknown record '" + kind + "'");
    }
  }
  if (!header_seen) fail(ErrorCode::Parse, "network file is empty");
  if (net.empty()) fail(ErrorCode::Parse, "network file defines no edges");
  return net;
}

NetworkGeometry read_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open network file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

std::string format_network(const NetworkGeometry& network) {
  std::ostringstream out;
  out << kNetworkHeader << '\n' << std::setprecision(17);
  for (const auto& n : network.nodes())
    out << "node " << n.id << ' ' << n.position.x() << ' ' << n.position.y() << ' ' << n.position.z() << '\n';
  for (std::size_t i = 0; i < network.edges().size(); ++i) {
    const auto& e = network.edges()[i];
    const auto& r = network.segments()[i].radius;
    out << "edge " << e.id << ' ' << network.nodes()[e.node_a].id << ' ' << network.nodes()[e.node_b].id << ' '
        << r(0.0) << ' ' << r(1.0);
    for (const auto& [k, v] : e.parameters) out << ' ' << k << '=' << v;
    out << '\n';
  }
  return out.str();
}

void write_network(const std::string& path, const NetworkGeometry& network) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write network file '" + path + "'");
  out << format_network(network);
}

}  // namespace tubenet
