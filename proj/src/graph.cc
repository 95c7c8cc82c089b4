#include "mine/graph.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace mine {

GraphLoadError::GraphLoadError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

InputGraph InputGraph::FromEdges(std::vector<Label> vertex_labels,
                                 std::vector<Edge> edges) {
  InputGraph g;
  const std::size_t n = vertex_labels.size();
  g.vertex_labels_ = std::move(vertex_labels);
  g.edges_ = std::move(edges);

  std::vector<std::size_t> degree(n, 0);
  for (Edge& e : g.edges_) {
    if (e.a >= n || e.b >= n) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (e.a == e.b) throw std::invalid_argument("self-loop");
    if (e.a > e.b) std::swap(e.a, e.b);
    ++degree[e.a];
    ++degree[e.b];
  }

  g.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (EdgeId id = 0; id < g.edges_.size(); ++id) {
    const Edge& e = g.edges_[id];
    g.adjacency_[fill[e.a]++] = {e.b, id};
    g.adjacency_[fill[e.b]++] = {e.a, id};
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    std::sort(first, last, [](const Neighbor& x, const Neighbor& y) {
      return x.vertex < y.vertex;
    });
    if (std::adjacent_find(first, last, [](const Neighbor& x, const Neighbor& y) {
          return x.vertex == y.vertex;
        }) != last) {
      throw std::invalid_argument("duplicate edge at vertex " + std::to_string(v));
    }
  }
  return g;
}

std::optional<EdgeId> InputGraph::edge_between(VertexId u, VertexId v) const {
  if (u == v) return std::nullopt;
  // Search the shorter list.
  if (degree(u) > degree(v)) std::swap(u, v);
  auto list = neighbors(u);
  auto it = std::lower_bound(list.begin(), list.end(), v,
                             [](const Neighbor& n, VertexId x) { return n.vertex < x; });
  if (it == list.end() || it->vertex != v) return std::nullopt;
  return it->edge;
}

namespace {

std::uint64_t ParseNumber(std::string_view token, std::size_t line,
                          const char* what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() ||
      value > UINT32_MAX) {
    throw GraphLoadError(line, std::string("malformed ") + what + " '" +
                                   std::string(token) + "'");
  }
  return value;
}

struct PendingEdge {
  EdgeId id;
  Label label;
  bool listed_on_low = false;
  bool listed_on_high = false;
};

struct Reference {
  VertexId from;
  VertexId to;
  std::size_t line;
};

}  // namespace

InputGraph parse_graph(std::istream& in) {
  std::vector<Label> labels;
  std::vector<Edge> edges;
  std::map<std::pair<VertexId, VertexId>, PendingEdge> seen;
  std::vector<Reference> references;

  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    std::istringstream tokens(text);
    std::string token;
    if (!(tokens >> token) || token[0] == '#') continue;

    const auto id = static_cast<VertexId>(ParseNumber(token, line_no, "vertex id"));
    if (id != labels.size()) {
      throw GraphLoadError(line_no, "non-contiguous vertex id " + token +
                                        ", expected " + std::to_string(labels.size()));
    }
    if (!(tokens >> token)) throw GraphLoadError(line_no, "missing vertex label");
    labels.push_back(static_cast<Label>(ParseNumber(token, line_no, "vertex label")));

    while (tokens >> token) {
      std::string_view view = token;
      Label edge_label = 0;
      if (auto colon = view.find(':'); colon != std::string_view::npos) {
        edge_label = static_cast<Label>(
            ParseNumber(view.substr(colon + 1), line_no, "edge label"));
        view = view.substr(0, colon);
      }
      const auto other = static_cast<VertexId>(ParseNumber(view, line_no, "neighbor id"));
      if (other == id) throw GraphLoadError(line_no, "self-loop on vertex " + token);

      const auto key = std::minmax(id, other);
      const bool on_low = id == key.first;
      auto [it, inserted] = seen.try_emplace(
          {key.first, key.second},
          PendingEdge{static_cast<EdgeId>(edges.size()), edge_label});
      PendingEdge& pending = it->second;
      if (inserted) {
        edges.push_back({key.first, key.second, edge_label});
        references.push_back({id, other, line_no});
      } else if (pending.label != edge_label) {
        throw GraphLoadError(line_no, "edge label mismatch for edge (" +
                                          std::to_string(key.first) + "," +
                                          std::to_string(key.second) + ")");
      }
      bool& listed = on_low ? pending.listed_on_low : pending.listed_on_high;
      if (listed) {
        throw GraphLoadError(line_no, "duplicate edge (" + std::to_string(key.first) +
                                          "," + std::to_string(key.second) + ")");
      }
      listed = true;
    }
  }

  for (const Reference& ref : references) {
    if (ref.to >= labels.size()) {
      throw GraphLoadError(ref.line, "dangling neighbor reference " +
                                         std::to_string(ref.to));
    }
  }
  return InputGraph::FromEdges(std::move(labels), std::move(edges));
}

InputGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphLoadError(0, "cannot open " + path);
  return parse_graph(in);
}

LabelDictionary parse_label_dictionary(std::istream& in) {
  LabelDictionary dict;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    std::istringstream tokens(text);
    std::string name, number, extra;
    if (!(tokens >> name) || name[0] == '#') continue;
    if (!(tokens >> number)) throw GraphLoadError(line_no, "missing label for " + name);
    if (tokens >> extra) throw GraphLoadError(line_no, "unexpected token " + extra);
    const auto label = static_cast<Label>(ParseNumber(number, line_no, "label"));
    if (!dict.labels.emplace(name, label).second) {
      throw GraphLoadError(line_no, "duplicate name " + name);
    }
    if (!dict.names.emplace(label, name).second) {
      throw GraphLoadError(line_no, "duplicate label " + number);
    }
  }
  return dict;
}

LabelDictionary load_label_dictionary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphLoadError(0, "cannot open " + path);
  return parse_label_dictionary(in);
}

std::string format_graph(const InputGraph& g) {
  std::ostringstream out;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    out << v << ' ' << g.vertex_label(v);
    for (const Neighbor& n : g.neighbors(v)) {
      if (n.vertex < v) continue;
      out << ' ' << n.vertex;
      if (Label l = g.edge(n.edge).label; l != 0) out << ':' << l;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace mine
