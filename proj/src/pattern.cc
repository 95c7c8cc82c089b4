#include "mine/pattern.h"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace mine {

Pattern::Pattern(std::vector<Label> labels, std::vector<PatternEdge> edges,
                 PatternKind kind)
    : labels_(std::move(labels)), edges_(std::move(edges)), kind_(kind) {
  const std::size_t k = labels_.size();
  if (k > 255) throw std::invalid_argument("pattern exceeds 255 slots");
  matrix_.assign(k * k, -1);
  for (PatternEdge& e : edges_) {
    if (e.a == e.b) throw std::invalid_argument("pattern self-loop");
    if (e.a >= k || e.b >= k) throw std::invalid_argument("pattern slot out of range");
    if (e.a > e.b) std::swap(e.a, e.b);
    if (matrix_[e.a * k + e.b] >= 0) throw std::invalid_argument("duplicate pattern edge");
    matrix_[e.a * k + e.b] = matrix_[e.b * k + e.a] = e.label;
  }
  std::sort(edges_.begin(), edges_.end());
}

std::size_t Pattern::degree(Slot s) const {
  std::size_t d = 0;
  for (std::size_t t = 0; t < size(); ++t) d += matrix_[s * size() + t] >= 0;
  return d;
}

bool Pattern::connected() const {
  if (labels_.empty()) return false;
  std::vector<bool> seen(size(), false);
  std::vector<Slot> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Slot s = stack.back();
    stack.pop_back();
    for (std::size_t t = 0; t < size(); ++t) {
      if (!seen[t] && has_edge(s, static_cast<Slot>(t))) {
        seen[t] = true;
        ++reached;
        stack.push_back(static_cast<Slot>(t));
      }
    }
  }
  return reached == size();
}

namespace {

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

std::string Pattern::key() const {
  std::string out;
  out.reserve(1 + 4 * labels_.size() + 2 + 6 * edges_.size());
  out.push_back(static_cast<char>(labels_.size()));
  for (Label l : labels_) PutU32(out, l);
  out.push_back(static_cast<char>(edges_.size() & 0xff));
  out.push_back(static_cast<char>((edges_.size() >> 8) & 0xff));
  for (const PatternEdge& e : edges_) {
    out.push_back(static_cast<char>(e.a));
    out.push_back(static_cast<char>(e.b));
    PutU32(out, e.label);
  }
  return out;
}

std::string Pattern::to_string() const {
  std::string out = "k=" + std::to_string(size()) + "; labels=";
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(labels_[i]);
  }
  out += "; edges=";
  for (const PatternEdge& e : edges_) {
    out += '(' + std::to_string(e.a) + ',' + std::to_string(e.b) + ',' +
           std::to_string(e.label) + ')';
  }
  return out;
}

Pattern quick_pattern(const InputGraph& g, const Embedding& e, bool use_labels) {
  std::vector<Label> labels;
  std::vector<PatternEdge> edges;
  if (e.mode() == ExplorationMode::kVertexInduced) {
    labels.reserve(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      labels.push_back(use_labels ? g.vertex_label(e[i]) : 0);
      for (std::size_t j = 0; j < i; ++j) {
        if (auto id = g.edge_between(e[j], e[i])) {
          edges.push_back({static_cast<Slot>(j), static_cast<Slot>(i),
                           use_labels ? g.edge(*id).label : 0});
        }
      }
    }
  } else {
    std::vector<VertexId> vertices;
    auto slot_of = [&](VertexId v) {
      auto it = std::find(vertices.begin(), vertices.end(), v);
      if (it != vertices.end()) return static_cast<Slot>(it - vertices.begin());
      vertices.push_back(v);
      labels.push_back(use_labels ? g.vertex_label(v) : 0);
      return static_cast<Slot>(vertices.size() - 1);
    };
    for (EdgeId id : e.words()) {
      const Edge& edge = g.edge(id);
      Slot a = slot_of(edge.a);
      Slot b = slot_of(edge.b);
      edges.push_back({a, b, use_labels ? edge.label : 0});
    }
  }
  return Pattern(std::move(labels), std::move(edges), PatternKind::kQuick);
}

Pattern relabel(const Pattern& p, const SlotMapping& mapping, PatternKind kind) {
  std::vector<Label> labels(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) labels[mapping.to_canonical[i]] = p.labels()[i];
  std::vector<PatternEdge> edges;
  edges.reserve(p.num_edges());
  for (const PatternEdge& e : p.edges()) {
    edges.push_back({mapping.to_canonical[e.a], mapping.to_canonical[e.b], e.label});
  }
  return Pattern(std::move(labels), std::move(edges), kind);
}

namespace {

// Iterated colour refinement. Colours are ranks of sorted signatures, so they
// depend only on the isomorphism class of each vertex's neighbourhood.
std::vector<std::uint32_t> RefineColors(const Pattern& p) {
  const std::size_t k = p.size();
  using Signature = std::vector<std::uint64_t>;
  std::vector<Signature> signatures(k);
  for (std::size_t v = 0; v < k; ++v) {
    signatures[v] = {p.labels()[v], p.degree(static_cast<Slot>(v))};
  }

  std::vector<std::uint32_t> colors(k);
  std::size_t num_colors = 0;
  while (true) {
    std::vector<Signature> distinct = signatures;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (std::size_t v = 0; v < k; ++v) {
      colors[v] = static_cast<std::uint32_t>(
          std::lower_bound(distinct.begin(), distinct.end(), signatures[v]) -
          distinct.begin());
    }
    if (distinct.size() == num_colors) break;
    num_colors = distinct.size();

    for (std::size_t v = 0; v < k; ++v) {
      Signature next{colors[v]};
      std::vector<std::uint64_t> around;
      for (std::size_t u = 0; u < k; ++u) {
        if (std::int64_t code = p.edge_code(static_cast<Slot>(v), static_cast<Slot>(u));
            code >= 0) {
          around.push_back((static_cast<std::uint64_t>(code) << 32) | colors[u]);
        }
      }
      std::sort(around.begin(), around.end());
      next.insert(next.end(), around.begin(), around.end());
      signatures[v] = std::move(next);
    }
  }
  return colors;
}

// x and y are interchangeable when swapping them is an automorphism that
// fixes every other slot.
bool AreTwins(const Pattern& p, Slot x, Slot y) {
  if (p.labels()[x] != p.labels()[y]) return false;
  for (std::size_t z = 0; z < p.size(); ++z) {
    if (z == x || z == y) continue;
    if (p.edge_code(x, static_cast<Slot>(z)) != p.edge_code(y, static_cast<Slot>(z))) {
      return false;
    }
  }
  return true;
}

class Canonizer {
 public:
  explicit Canonizer(const Pattern& p) : p_(p), k_(p.size()) {
    colors_ = RefineColors(p);
    slot_color_ = colors_;
    std::sort(slot_color_.begin(), slot_color_.end());
    twins_.assign(k_ * k_, false);
    for (std::size_t x = 0; x < k_; ++x) {
      for (std::size_t y = x + 1; y < k_; ++y) {
        twins_[x * k_ + y] = twins_[y * k_ + x] =
            AreTwins(p, static_cast<Slot>(x), static_cast<Slot>(y));
      }
    }
    code_.resize(k_ * (k_ - 1) / 2);
    used_.assign(k_, false);
    order_.resize(k_);
  }

  std::vector<Slot> Run() {
    Search(0);
    return best_order_;
  }

 private:
  // Entries of column t of the upper-triangular adjacency code start at
  // t*(t-1)/2 and cover slots 0..t-1.
  void Search(std::size_t t) {
    if (t == k_) {
      if (!has_best_ || code_ < best_code_) {
        best_code_ = code_;
        best_order_ = order_;
        has_best_ = true;
      }
      return;
    }
    const std::size_t base = t * (t - 1) / 2;
    std::vector<Slot> tried;
    for (std::size_t v = 0; v < k_; ++v) {
      if (used_[v] || colors_[v] != slot_color_[t]) continue;
      const Slot vs = static_cast<Slot>(v);
      if (std::any_of(tried.begin(), tried.end(),
                      [&](Slot x) { return twins_[x * k_ + v]; })) {
        continue;
      }
      tried.push_back(vs);

      for (std::size_t s = 0; s < t; ++s) code_[base + s] = p_.edge_code(order_[s], vs);
      // The best code can change inside a sibling subtree, so compare the
      // whole filled prefix each time.
      if (has_best_ &&
          std::lexicographical_compare(best_code_.begin(), best_code_.begin() + base + t,
                                       code_.begin(), code_.begin() + base + t)) {
        continue;
      }

      used_[v] = true;
      order_[t] = vs;
      Search(t + 1);
      used_[v] = false;
    }
  }

  const Pattern& p_;
  std::size_t k_;
  std::vector<std::uint32_t> colors_;
  std::vector<std::uint32_t> slot_color_;
  std::vector<bool> twins_;
  std::vector<std::int64_t> code_;
  std::vector<std::int64_t> best_code_;
  std::vector<bool> used_;
  std::vector<Slot> order_;
  std::vector<Slot> best_order_;
  bool has_best_ = false;
};

}  // namespace

CanonicalPattern canonical_pattern(const Pattern& p, std::size_t max_size) {
  if (p.size() > max_size) {
    throw PatternTooLargeError("pattern with " + std::to_string(p.size()) +
                               " slots exceeds the limit of " +
                               std::to_string(max_size));
  }
  if (p.size() == 0) return {Pattern({}, {}, PatternKind::kCanonical), {}};

  std::vector<Slot> order = Canonizer(p).Run();
  SlotMapping mapping;
  mapping.to_canonical.resize(p.size());
  for (std::size_t t = 0; t < order.size(); ++t) {
    mapping.to_canonical[order[t]] = static_cast<Slot>(t);
  }
  return {relabel(p, mapping, PatternKind::kCanonical), std::move(mapping)};
}

namespace {

// Calls visit(map) for each isomorphism p1 -> p2; stops when visit returns false.
void EnumerateIsomorphisms(const Pattern& p1, const Pattern& p2,
                           const std::function<bool(const std::vector<Slot>&)>& visit) {
  const std::size_t k = p1.size();
  if (k != p2.size() || p1.num_edges() != p2.num_edges()) return;
  std::vector<Slot> map(k);
  std::vector<bool> taken(k, false);
  bool stop = false;
  std::function<void(std::size_t)> extend = [&](std::size_t i) {
    if (stop) return;
    if (i == k) {
      stop = !visit(map);
      return;
    }
    for (std::size_t c = 0; c < k && !stop; ++c) {
      if (taken[c] || p1.labels()[i] != p2.labels()[c]) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        ok = p1.edge_code(static_cast<Slot>(i), static_cast<Slot>(j)) ==
             p2.edge_code(static_cast<Slot>(c), map[j]);
      }
      if (!ok) continue;
      taken[c] = true;
      map[i] = static_cast<Slot>(c);
      extend(i + 1);
      taken[c] = false;
    }
  };
  extend(0);
}

}  // namespace

bool patterns_isomorphic(const Pattern& p1, const Pattern& p2) {
  bool found = false;
  EnumerateIsomorphisms(p1, p2, [&](const std::vector<Slot>&) {
    found = true;
    return false;
  });
  return found;
}

std::vector<std::vector<Slot>> isomorphisms(const Pattern& p1, const Pattern& p2) {
  std::vector<std::vector<Slot>> out;
  EnumerateIsomorphisms(p1, p2, [&](const std::vector<Slot>& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

std::vector<std::vector<Slot>> automorphisms(const Pattern& p) {
  return isomorphisms(p, p);
}

}  // namespace mine
