#include "relhyp/graphs.hpp"

#include <algorithm>
#include <deque>

namespace relhyp {

std::string serialize_vertex(const GroupSpec& spec, const Vertex& v) {
  if (is_group_vertex(v)) return serialize(spec, group_of(v));
  const auto& c = cone_of(v);
  return serialize(spec, c.key) + "~" + spec.factor(c.factor).id;
}

std::string serialize_edge_label(const GroupSpec& spec, const EdgeLabel& l) {
  if (const auto* letter = std::get_if<Letter>(&l)) return serialize_letter(spec, *letter);
  if (const auto* up = std::get_if<ConeUp>(&l)) return "~" + spec.factor(up->factor).id;
  return "~" + spec.factor(std::get<ConeDown>(l).factor).id;
}

GraphOracle::GraphOracle(const GroupSpec& spec, EqualityContext& ctx, OracleConfig cfg)
    : spec_(&spec), ctx_(&ctx), cfg_(cfg) {
  for (int32_t f = 0; f < spec.factor_count(); ++f) factors_.push_back(f);
}

void GraphOracle::set_system(std::vector<std::pair<Letter, NormalForm>> system) {
  system_ = std::move(system);
}

void GraphOracle::set_factors(std::vector<int32_t> factors) { factors_ = std::move(factors); }

VertexKey GraphOracle::key(const Vertex& v) const {
  VertexKey k;
  if (is_group_vertex(v)) {
    k.id = ctx_->id_of(group_of(v));
  } else {
    const auto& c = cone_of(v);
    k.cone_factor = c.factor;
    k.id = ctx_->coset_id(c.factor, c.key);
  }
  return k;
}

Vertex GraphOracle::target_of(const Vertex& from, const EdgeLabel& label) const {
  if (const auto* letter = std::get_if<Letter>(&label)) {
    return nf_multiply(*spec_, group_of(from), nf_of_letter(*spec_, *letter));
  }
  if (const auto* up = std::get_if<ConeUp>(&label)) {
    return ConeRef{up->factor, ctx_->coset_key(up->factor, group_of(from))};
  }
  throw Error(ErrorKind::DanglingConeEdge, "a cone-down edge needs an explicit target");
}

EdgeStep GraphOracle::reverse(const EdgeStep& e) const {
  EdgeStep r;
  r.from = e.to;
  r.to = e.from;
  if (const auto* letter = std::get_if<Letter>(&e.label)) {
    r.label = invert_letter(*spec_, *letter);
  } else if (const auto* up = std::get_if<ConeUp>(&e.label)) {
    r.label = ConeDown{up->factor};
  } else {
    r.label = ConeUp{std::get<ConeDown>(e.label).factor};
  }
  return r;
}

void GraphOracle::push_sorted(std::vector<EdgeStep>& out) const {
  std::sort(out.begin(), out.end(), [this](const EdgeStep& a, const EdgeStep& b) {
    std::string la = serialize_edge_label(*spec_, a.label);
    std::string lb = serialize_edge_label(*spec_, b.label);
    if (la != lb) return la < lb;
    return serialize_vertex(*spec_, a.to) < serialize_vertex(*spec_, b.to);
  });
}

std::vector<EdgeStep> GraphOracle::neighbors(const Vertex& v) const {
  std::vector<EdgeStep> out;
  if (!is_group_vertex(v)) {
    if (cfg_.kind != GraphKind::Coned)
      throw Error(ErrorKind::ConeVertexInPlainGraph,
                  "cone vertices exist only in the coned-off graph");
    const auto& c = cone_of(v);
    const auto& fac = spec_->factor(c.factor);
    if (fac.kind == FactorKind::FiniteTable) {
      for (int e = 0; e < fac.order(); ++e) {
        HLetter h;
        h.factor = c.factor;
        h.elem = e;
        Vertex member = e == 0 ? Vertex{c.key}
                               : Vertex{nf_multiply(*spec_, c.key, nf_of_letter(*spec_, Letter{h}))};
        out.push_back(EdgeStep{v, ConeDown{c.factor}, std::move(member)});
      }
    } else {
      if (cfg_.trunc_m <= 0)
        throw Error(ErrorKind::ExplorationBudgetExceeded,
                    "infinite coset needs a positive truncation budget");
      for (BigInt k = -cfg_.trunc_m; k <= cfg_.trunc_m; ++k) {
        HLetter h;
        h.factor = c.factor;
        h.exp = k;
        Vertex member = k == 0 ? Vertex{c.key}
                               : Vertex{nf_multiply(*spec_, c.key, nf_of_letter(*spec_, Letter{h}))};
        out.push_back(EdgeStep{v, ConeDown{c.factor}, std::move(member)});
      }
    }
    push_sorted(out);
    return out;
  }

  const NormalForm& g = group_of(v);
  if (system_) {
    for (const auto& [letter, value] : *system_)
      out.push_back(EdgeStep{v, letter, nf_multiply(*spec_, g, value)});
  } else {
    for (int32_t i = 1; i <= spec_->generator_count(); ++i) {
      out.push_back(EdgeStep{v, Letter{XLetter{i}},
                             nf_multiply(*spec_, g, nf_of_letter(*spec_, Letter{XLetter{i}}))});
      const auto& gen = spec_->generators[static_cast<std::size_t>(i) - 1];
      if (gen.name != gen.inverse)
        out.push_back(EdgeStep{v, Letter{XLetter{-i}},
                               nf_multiply(*spec_, g, nf_of_letter(*spec_, Letter{XLetter{-i}}))});
    }
  }
  if (cfg_.kind == GraphKind::Relative) {
    for (int32_t f : factors_) {
      const auto& fac = spec_->factor(f);
      if (fac.kind == FactorKind::FiniteTable) {
        for (int e = 1; e < fac.order(); ++e) {
          HLetter h;
          h.factor = f;
          h.elem = e;
          out.push_back(
              EdgeStep{v, Letter{h}, nf_multiply(*spec_, g, nf_of_letter(*spec_, Letter{h}))});
        }
      } else {
        for (BigInt k = -cfg_.trunc_m; k <= cfg_.trunc_m; ++k) {
          if (k == 0) continue;
          HLetter h;
          h.factor = f;
          h.exp = k;
          out.push_back(
              EdgeStep{v, Letter{h}, nf_multiply(*spec_, g, nf_of_letter(*spec_, Letter{h}))});
        }
      }
    }
  } else if (cfg_.kind == GraphKind::Coned) {
    for (int32_t f : factors_)
      out.push_back(EdgeStep{v, ConeUp{f}, ConeRef{f, ctx_->coset_key(f, g)}});
  }
  push_sorted(out);
  return out;
}

Ball ball(const GraphOracle& o, const Vertex& center, std::size_t radius) {
  Ball b;
  b.center = center;
  b.radius = radius;
  b.vertices.push_back(center);
  b.dist.push_back(0);
  b.parent.push_back(-1);
  b.parent_edge.push_back(std::nullopt);
  b.index.emplace(o.key(center), 0);
  std::size_t head = 0;
  while (head < b.vertices.size()) {
    std::size_t cur = head++;
    if (b.dist[cur] == radius) continue;
    for (const auto& e : o.neighbors(b.vertices[cur])) {
      VertexKey k = o.key(e.to);
      if (b.index.contains(k)) continue;
      if (b.vertices.size() >= o.config().max_vertices)
        throw Error(ErrorKind::BudgetExceeded, "ball exceeds the vertex budget");
      b.index.emplace(k, b.vertices.size());
      b.vertices.push_back(e.to);
      b.dist.push_back(b.dist[cur] + 1);
      b.parent.push_back(static_cast<int64_t>(cur));
      b.parent_edge.push_back(e.label);
    }
  }
  return b;
}

std::string dump_ball(const GroupSpec& spec, const Ball& b) {
  std::string out;
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    out += serialize_vertex(spec, b.vertices[i]);
    out += '\t';
    out += std::to_string(b.dist[i]);
    out += '\t';
    out += b.parent_edge[i] ? serialize_edge_label(spec, *b.parent_edge[i]) : "-";
    out += '\n';
  }
  return out;
}

std::optional<std::size_t> distance(const GraphOracle& o, const Vertex& u, const Vertex& v,
                                    std::size_t cap) {
  VertexKey target = o.key(v);
  if (o.key(u) == target) return 0;
  std::unordered_map<VertexKey, std::size_t, VertexKeyHash> seen;
  std::deque<std::pair<Vertex, std::size_t>> queue;
  seen.emplace(o.key(u), 0);
  queue.emplace_back(u, 0);
  while (!queue.empty()) {
    auto [cur, d] = queue.front();
    queue.pop_front();
    if (d == cap) continue;
    for (const auto& e : o.neighbors(cur)) {
      VertexKey k = o.key(e.to);
      if (k == target) return d + 1;
      if (seen.contains(k)) continue;
      if (seen.size() >= o.config().max_vertices)
        throw Error(ErrorKind::BudgetExceeded, "distance search exceeds the vertex budget");
      seen.emplace(k, d + 1);
      queue.emplace_back(e.to, d + 1);
    }
  }
  return std::nullopt;
}

GeodesicResult geodesics(const GraphOracle& o, const Vertex& u, const Vertex& v, std::size_t cap,
                         std::size_t max_count) {
  auto d = distance(o, u, v, cap);
  if (!d) throw Error(ErrorKind::NotWithinCap, "endpoints are farther apart than the cap");
  GeodesicResult res;
  if (*d == 0) {
    res.paths.push_back(Path{u, {}});
    return res;
  }
  // distances to v for pruning
  Ball back = ball(o, v, *d);
  VertexKey target = o.key(v);
  Path cur{u, {}};
  std::function<bool(const Vertex&, std::size_t)> dfs = [&](const Vertex& at,
                                                            std::size_t done) -> bool {
    if (done == *d) {
      if (o.key(at) == target) {
        if (res.paths.size() == max_count) {
          res.truncated = true;
          return false;
        }
        res.paths.push_back(cur);
      }
      return true;
    }
    for (const auto& e : o.neighbors(at)) {
      auto dv = back.distance_of(o.key(e.to));
      if (!dv || *dv != *d - done - 1) continue;
      cur.steps.push_back(e);
      bool go = dfs(e.to, done + 1);
      cur.steps.pop_back();
      if (!go) return false;
    }
    return true;
  };
  dfs(u, 0);
  return res;
}

}  // namespace relhyp
