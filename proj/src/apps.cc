#include "mine/apps.h"

#include <algorithm>

namespace mine {

bool is_clique(const InputGraph& g, const Embedding& e) {
  if (e.size() < 2) return true;
  const VertexId last = e.back();
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    if (!g.are_adjacent(e[i], last)) return false;
  }
  return true;
}

Domain embedding_domain(const InputGraph& g, const Embedding& e,
                        const std::vector<std::vector<Slot>>& automorphisms) {
  const std::vector<VertexId> vertices = embedding_vertices(g, e);
  Domain d(vertices.size());
  auto add = [&](std::size_t slot, VertexId v) { d.slots[slot].push_back(v); };
  if (automorphisms.empty()) {
    for (std::size_t i = 0; i < vertices.size(); ++i) add(i, vertices[i]);
  }
  for (const auto& sigma : automorphisms) {
    for (std::size_t i = 0; i < vertices.size(); ++i) add(sigma[i], vertices[i]);
  }
  for (auto& slot : d.slots) {
    std::sort(slot.begin(), slot.end());
    slot.erase(std::unique(slot.begin(), slot.end()), slot.end());
  }
  return d;
}

Application fsm_app(std::size_t support_threshold, std::optional<std::size_t> max_size,
                    ExplorationMode mode) {
  Application app;
  app.name = "fsm";
  app.mode = mode;
  app.filter = [](Context&, const Embedding&) { return true; };
  app.process = [](Context& ctx, const Embedding& e) {
    const Pattern& p = ctx.pattern(e);
    Domain d = embedding_domain(ctx.graph(), e, ctx.automorphisms(p));
    ctx.map(p, d);
    ctx.map_output(p, std::move(d));
  };
  app.aggregation_filter = [support_threshold](Context& ctx, const Embedding& e) {
    const AggregateValue* value = ctx.read_aggregate(ctx.pattern(e));
    return value != nullptr && support(std::get<Domain>(*value)) >= support_threshold;
  };
  app.aggregation_process = [](Context& ctx, const Embedding& e) { ctx.output(e); };
  if (max_size) {
    const std::size_t cap = *max_size;
    app.termination_filter = [cap](Context&, const Embedding& e) { return e.size() < cap; };
  }
  app.reduce = union_domains;
  app.reduce_output = union_domains;
  app.format_output = [support_threshold](const AggregationKey& key,
                                          const AggregateValue& value)
      -> std::optional<std::string> {
    const std::size_t s = support(std::get<Domain>(value));
    if (s < support_threshold) return std::nullopt;
    return render_key(key) + "\t" + std::to_string(s);
  };
  return app;
}

Application motifs_app(std::size_t max_size, bool labeled, ExplorationMode mode) {
  Application app;
  app.name = "motifs";
  app.mode = mode;
  app.pattern_labels = labeled;
  app.filter = [max_size](Context& ctx, const Embedding& e) {
    return num_vertices(ctx.graph(), e) <= max_size;
  };
  app.process = [](Context& ctx, const Embedding& e) {
    ctx.map_output(ctx.pattern(e), std::int64_t{1});
  };
  if (mode == ExplorationMode::kVertexInduced) {
    app.termination_filter = [max_size](Context&, const Embedding& e) {
      return e.size() < max_size;
    };
  }
  app.reduce_output = sum_values;
  return app;
}

Application cliques_app(std::size_t max_size) {
  Application app;
  app.name = "cliques";
  app.mode = ExplorationMode::kVertexInduced;
  app.filter = [](Context& ctx, const Embedding& e) { return is_clique(ctx.graph(), e); };
  app.process = [](Context& ctx, const Embedding& e) { ctx.output(e); };
  app.termination_filter = [max_size](Context&, const Embedding& e) {
    return e.size() < max_size;
  };
  return app;
}

}  // namespace mine
