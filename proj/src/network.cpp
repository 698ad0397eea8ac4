#include "telegraphnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace tgn {

namespace {

[[noreturn]] void structural(const std::string& what) { throw StructuralError(what); }

}  // namespace

const Edge& NetworkTopology::edge(int id) const {
  return edges[static_cast<std::size_t>(edge_index(id))];
}

int NetworkTopology::edge_index(int id) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), id,
                             [](const Edge& e, int v) { return e.id < v; });
  if (it == edges.end() || it->id != id) {
    throw StructuralError("unknown edge id " + std::to_string(id));
  }
  return static_cast<int>(it - edges.begin());
}

int NetworkTopology::degree(int k) const {
  return static_cast<int>(starting(k).size() + ending(k).size());
}

const std::set<int>& NetworkTopology::starting(int k) const {
  static const std::set<int> empty;
  auto it = starting_edges.find(k);
  return it == starting_edges.end() ? empty : it->second;
}

const std::set<int>& NetworkTopology::ending(int k) const {
  static const std::set<int> empty;
  auto it = ending_edges.find(k);
  return it == ending_edges.end() ? empty : it->second;
}

std::vector<int> NetworkTopology::observed_leaf_edges() const {
  std::vector<int> out;
  for (int k : boundary_vertices) {
    if (k == root) continue;
    for (int j : ending(k)) out.push_back(j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double NetworkTopology::depth() const {
  double d = 0.0;
  for (const auto& [k, x] : coordinates) d = std::max(d, x);
  return d;
}

NetworkTopology build_network(const std::vector<EdgeDescriptor>& descriptors, int root) {
  if (descriptors.empty()) structural("edge list is empty");

  std::set<int> vertex_ids;
  std::set<int> edge_ids;
  for (const auto& d : descriptors) {
    if (d.tail == d.head) {
      structural("edge " + std::to_string(d.id) + " is a self-loop");
    }
    if (!(d.length > 0.0)) {
      structural("edge " + std::to_string(d.id) + " has non-positive length");
    }
    if (!edge_ids.insert(d.id).second) {
      structural("duplicate edge id " + std::to_string(d.id));
    }
    vertex_ids.insert(d.tail);
    vertex_ids.insert(d.head);
  }

  const int n_edges = static_cast<int>(descriptors.size());
  if (static_cast<int>(vertex_ids.size()) != n_edges + 1) {
    std::ostringstream msg;
    msg << "vertex count " << vertex_ids.size() << " != edge count + 1 = " << n_edges + 1
        << (static_cast<int>(vertex_ids.size()) < n_edges + 1 ? " (cycle detected)"
                                                              : " (disconnected)");
    structural(msg.str());
  }
  if (!vertex_ids.count(root)) structural("root vertex not present in edge list");

  // Adjacency by vertex.
  std::map<int, std::vector<const EdgeDescriptor*>> adj;
  for (const auto& d : descriptors) {
    adj[d.tail].push_back(&d);
    adj[d.head].push_back(&d);
  }
  if (adj[root].size() != 1) {
    structural("root vertex must have incidence degree 1, got " +
               std::to_string(adj[root].size()));
  }

  // BFS from the root: assigns coordinates and orients edges outward.
  NetworkTopology topo;
  topo.edge_count = n_edges;
  topo.root = root;
  topo.coordinates[root] = 0.0;

  std::map<int, Edge> built;  // by edge id
  std::deque<int> queue{root};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    const double xv = topo.coordinates.at(v);
    for (const EdgeDescriptor* d : adj[v]) {
      if (built.count(d->id)) continue;
      const int other = (d->tail == v) ? d->head : d->tail;
      if (topo.coordinates.count(other)) {
        structural("cycle detected through edge " + std::to_string(d->id));
      }
      Edge e;
      e.id = d->id;
      e.init_vertex = v;
      e.term_vertex = other;
      e.length = d->length;
      e.x_init = xv;
      e.x_term = xv + d->length;
      built[e.id] = e;
      topo.coordinates[other] = e.x_term;
      queue.push_back(other);
    }
  }
  if (static_cast<int>(built.size()) != n_edges) {
    structural("graph is disconnected: " + std::to_string(n_edges - built.size()) +
               " edge(s) unreachable from the root");
  }

  for (auto& [id, e] : built) {
    topo.edges.push_back(e);
    topo.starting_edges[e.init_vertex].insert(id);
    topo.ending_edges[e.term_vertex].insert(id);
  }
  for (int k : vertex_ids) {
    if (topo.degree(k) == 1) {
      topo.boundary_vertices.insert(k);
    } else {
      topo.interior_vertices.insert(k);
    }
  }

  validate_topology(topo);
  return topo;
}

VertexClass classify_vertex(const NetworkTopology& topology, int k) {
  if (!topology.has_vertex(k)) {
    throw StructuralError("unknown vertex id " + std::to_string(k));
  }
  VertexClass c;
  c.kind = topology.boundary_vertices.count(k) ? VertexKind::Boundary : VertexKind::Interior;
  c.starting = topology.starting(k);
  c.ending = topology.ending(k);
  return c;
}

void validate_topology(const NetworkTopology& topo) {
  if (!topo.ending(topo.root).empty()) {
    structural("condition violated: S_T at the root must be empty (no edge ends with the root)");
  }
  for (int k : topo.boundary_vertices) {
    if (k != topo.root && !topo.starting(k).empty()) {
      structural("condition violated: S_I must be empty at non-root boundary vertex " +
                 std::to_string(k));
    }
  }
  for (const auto& [k, x] : topo.coordinates) {
    if (k == topo.root) continue;
    if (topo.ending(k).size() != 1) {
      structural("condition violated: every non-root vertex must terminate exactly one edge; "
                 "vertex " + std::to_string(k) + " terminates " +
                 std::to_string(topo.ending(k).size()));
    }
  }
  for (int k : topo.interior_vertices) {
    if (topo.starting(k).empty()) {
      structural("condition violated: interior vertex " + std::to_string(k) +
                 " starts no edge");
    }
  }
  for (const Edge& e : topo.edges) {
    if (!(e.x_init < e.x_term)) {
      structural("edge " + std::to_string(e.id) + " has non-increasing coordinates");
    }
    const double gap = std::abs(e.x_init + e.length - e.x_term);
    if (gap > 1e-12 * std::max(1.0, e.x_term)) {
      structural("edge " + std::to_string(e.id) + " coordinates inconsistent with its length");
    }
  }
}

}  // namespace tgn
