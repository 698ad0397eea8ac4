#pragma once

#include <map>
#include <set>
#include <vector>

#include "telegraphnet/errors.hpp"

namespace tgn {

/// An edge as supplied by the user. Orientation (tail/head) is advisory:
/// build_network re-derives it so that the initial node is the one nearer
/// the root.
struct EdgeDescriptor {
  int id = 0;
  int tail = 0;
  int head = 0;
  double length = 0.0;
};

/// An oriented edge of the built tree. init_vertex is the endpoint nearer
/// the root, term_vertex the farther one; x_init + length == x_term.
struct Edge {
  int id = 0;
  int init_vertex = 0;
  int term_vertex = 0;
  double length = 0.0;
  double x_init = 0.0;
  double x_term = 0.0;
};

enum class VertexKind { Boundary, Interior };

/// The tree-shaped network: oriented edges, vertex coordinates (distance
/// from the root along the unique path), incidence index sets and the
/// boundary/interior vertex partition. Immutable after build_network.
struct NetworkTopology {
  int edge_count = 0;
  int root = 0;
  std::vector<Edge> edges;  // sorted by id
  std::map<int, double> coordinates;
  std::map<int, std::set<int>> starting_edges;  // vertex -> edges whose initial node it is
  std::map<int, std::set<int>> ending_edges;    // vertex -> edges whose terminal node it is
  std::set<int> boundary_vertices;  // degree 1
  std::set<int> interior_vertices;  // degree > 1

  const Edge& edge(int id) const;
  int edge_index(int id) const;  // position in edges[]
  bool has_vertex(int k) const { return coordinates.count(k) != 0; }
  int degree(int k) const;

  const std::set<int>& starting(int k) const;
  const std::set<int>& ending(int k) const;

  /// Edge ids observed at the boundary: the terminal edge of every
  /// boundary vertex except the root.
  std::vector<int> observed_leaf_edges() const;

  /// Largest vertex coordinate (length of the longest root-to-leaf path).
  double depth() const;
};

NetworkTopology build_network(const std::vector<EdgeDescriptor>& edges, int root);

struct VertexClass {
  VertexKind kind;
  std::set<int> starting;  // S_{I,k}
  std::set<int> ending;    // S_{T,k}
};

VertexClass classify_vertex(const NetworkTopology& topology, int k);

/// Asserts every structural condition build_network guarantees; throws
/// StructuralError naming the first violated one. Used by tests and by
/// network-file loading.
void validate_topology(const NetworkTopology& topology);

}  // namespace tgn
