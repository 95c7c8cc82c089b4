#ifndef MINE_GRAPH_H_
#define MINE_GRAPH_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mine {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using Label = std::uint32_t;

// Undirected edge. Endpoints are stored with a < b.
struct Edge {
  VertexId a = 0;
  VertexId b = 0;
  Label label = 0;

  bool operator==(const Edge&) const = default;
};

struct Neighbor {
  VertexId vertex = 0;
  EdgeId edge = 0;

  bool operator==(const Neighbor&) const = default;
};

class GraphLoadError : public std::runtime_error {
 public:
  GraphLoadError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Immutable labeled undirected graph with contiguous vertex and edge ids.
// Safe to share between threads once constructed.
class InputGraph {
 public:
  InputGraph() = default;

  // Builds a graph from per-vertex labels and an edge list; edge i gets id i.
  // Throws std::invalid_argument on self-loops, duplicate edges or endpoints
  // out of range.
  static InputGraph FromEdges(std::vector<Label> vertex_labels,
                              std::vector<Edge> edges);

  std::size_t num_vertices() const { return vertex_labels_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  Label vertex_label(VertexId v) const { return vertex_labels_[v]; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }

  // Ascending by neighbor id.
  std::span<const Neighbor> neighbors(VertexId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  bool are_adjacent(VertexId u, VertexId v) const {
    return edge_between(u, v).has_value();
  }
  std::optional<EdgeId> edge_between(VertexId u, VertexId v) const;

  // True when the two edges share at least one endpoint.
  bool edges_touch(EdgeId x, EdgeId y) const {
    const Edge& a = edges_[x];
    const Edge& b = edges_[y];
    return a.a == b.a || a.a == b.b || a.b == b.a || a.b == b.b;
  }

 private:
  std::vector<Label> vertex_labels_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
};

// Text format, one vertex per line:
//   <vertex-id> <vertex-label> [<neighbor-id>[:<edge-label>] ...]
// Vertex ids ascend from 0 without gaps. An undirected edge may be listed on
// one or both endpoint lines (labels must agree). Edge ids are assigned in
// order of first appearance. Lines starting with '#' are comments.
InputGraph parse_graph(std::istream& in);
InputGraph load_graph(const std::string& path);

// Writes g in the text format. Each edge goes on its lower endpoint's line,
// so re-parsing preserves edge ids only when edges are sorted by (a, b).
std::string format_graph(const InputGraph& g);

// Optional label names: one "<name> <label>" pair per line, '#' comments.
// Names and labels are both unique.
struct LabelDictionary {
  std::map<std::string, Label> labels;
  std::map<Label, std::string> names;
};

LabelDictionary parse_label_dictionary(std::istream& in);
LabelDictionary load_label_dictionary(const std::string& path);

}  // namespace mine

#endif  // MINE_GRAPH_H_
