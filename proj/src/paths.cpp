#include "relhyp/paths.hpp"

#include <algorithm>
#include <set>

namespace relhyp {

bool ComponentDecomposition::isolated(std::size_t i) const {
  for (const auto& [a, b] : connected_pairs)
    if (a == i || b == i) return false;
  return true;
}

bool ComponentDecomposition::locally_minimal() const {
  for (const auto& c : components)
    if (c.len != 1) return false;
  return true;
}

bool ComponentDecomposition::backtracking_free() const {
  for (std::size_t i = 0; i < components.size(); ++i)
    if (!isolated(i)) return false;
  return true;
}

bool PenetrationRecord::locally_minimal() const {
  for (const auto& p : penetrations)
    if (p.len != 2) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Construction

Path make_path(const GraphOracle& o, const Vertex& origin, const std::vector<EdgeLabel>& labels) {
  Path p{origin, {}};
  Vertex cur = origin;
  for (const auto& l : labels) {
    Vertex next = o.target_of(cur, l);
    p.steps.push_back(EdgeStep{cur, l, next});
    cur = next;
  }
  return p;
}

Path path_of_word(const GraphOracle& o, const Vertex& origin, const Word& w) {
  std::vector<EdgeLabel> labels;
  for (const auto& l : w.letters) labels.push_back(EdgeLabel{l});
  return make_path(o, origin, labels);
}

Path parse_path(const GraphOracle& o, const Vertex& origin, const std::string& literal) {
  const GroupSpec& spec = o.spec();
  Path p{origin, {}};
  Vertex cur = origin;
  if (literal.empty() || literal == "1") return p;
  std::string tok;
  std::vector<std::string> toks;
  for (char c : literal) {
    if (c == '.') {
      toks.push_back(tok);
      tok.clear();
    } else {
      tok += c;
    }
  }
  toks.push_back(tok);
  for (const auto& t : toks) {
    if (t.empty() || t == "1") continue;
    if (t[0] == '~') {
      auto colon = t.find(':');
      std::string fid = colon == std::string::npos ? t.substr(1) : t.substr(1, colon - 1);
      int32_t f = spec.factor_index(fid);
      if (f < 0) throw Error(ErrorKind::ParseError, "unknown factor in '" + t + "'");
      if (!is_group_vertex(cur))
        throw Error(ErrorKind::ParseError, "cone-biedge must start at a group vertex");
      NormalForm g = group_of(cur);
      ConeRef cone{f, o.ctx().coset_key(f, g)};
      p.steps.push_back(EdgeStep{cur, ConeUp{f}, cone});
      if (colon == std::string::npos) {
        cur = cone;
        continue;
      }
      std::string elem = t.substr(colon + 1);
      NormalForm target = g;
      if (elem != "0" && elem != "1") {
        Word w = parse_word(spec, fid + ":" + elem);
        target = nf_multiply(spec, g, evaluate(spec, w));
      }
      p.steps.push_back(EdgeStep{Vertex{cone}, ConeDown{f}, Vertex{target}});
      cur = target;
      continue;
    }
    Word w = parse_word(spec, t);
    for (const auto& l : w.letters) {
      Vertex next = o.target_of(cur, EdgeLabel{l});
      p.steps.push_back(EdgeStep{cur, EdgeLabel{l}, next});
      cur = next;
    }
  }
  return p;
}

std::string path_literal(const GraphOracle& o, const Path& p) {
  const GroupSpec& spec = o.spec();
  std::string out;
  auto emit = [&out](const std::string& seg) {
    if (!out.empty()) out += '.';
    out += seg;
  };
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& e = p.steps[i];
    if (const auto* letter = std::get_if<Letter>(&e.label)) {
      emit(serialize_letter(spec, *letter));
      continue;
    }
    if (std::holds_alternative<ConeDown>(e.label)) continue;  // folded into the biedge
    int32_t f = std::get<ConeUp>(e.label).factor;
    if (i + 1 < p.steps.size() && std::holds_alternative<ConeDown>(p.steps[i + 1].label)) {
      const NormalForm& g = group_of(e.from);
      const NormalForm& h = group_of(p.steps[i + 1].to);
      NormalForm diff = nf_multiply(spec, nf_invert(spec, g), h);
      std::optional<HLetter> w;
      Tri t = o.ctx().in_factor(f, diff, &w);
      std::string elem = "?";
      if (t == Tri::Yes) {
        if (!w)
          elem = "0";
        else if (spec.factor(f).kind == FactorKind::FiniteTable)
          elem = spec.factor(f).element_names[static_cast<std::size_t>(w->elem)];
        else
          elem = w->exp.str();
      }
      emit("~" + spec.factor(f).id + ":" + elem);
    } else {
      emit("~" + spec.factor(f).id);
    }
  }
  if (out.empty()) return "1";
  return out;
}

Path inverse_path(const GraphOracle& o, const Path& p) {
  Path out{p.target(), {}};
  for (auto it = p.steps.rbegin(); it != p.steps.rend(); ++it) out.steps.push_back(o.reverse(*it));
  return out;
}

bool edges_inverse(const GraphOracle& o, const EdgeStep& a, const EdgeStep& b) {
  EdgeStep r = o.reverse(b);
  if (!(o.key(a.from) == o.key(r.from)) || !(o.key(a.to) == o.key(r.to))) return false;
  if (const auto* la = std::get_if<Letter>(&a.label)) {
    const auto* lb = std::get_if<Letter>(&r.label);
    return lb && *la == *lb;
  }
  if (const auto* ua = std::get_if<ConeUp>(&a.label)) {
    const auto* ub = std::get_if<ConeUp>(&r.label);
    return ub && ua->factor == ub->factor;
  }
  const auto* da = std::get_if<ConeDown>(&a.label);
  const auto* db = std::get_if<ConeDown>(&r.label);
  return da && db && da->factor == db->factor;
}

Vertex path_vertex(const Path& p, std::size_t position) {
  if (position == 0) return p.source();
  return p.steps[position - 1].to;
}

// ---------------------------------------------------------------------------
// Components

namespace {

std::optional<int32_t> h_factor_of(const EdgeStep& e) {
  if (const auto* letter = std::get_if<Letter>(&e.label))
    if (const auto* h = std::get_if<HLetter>(letter)) return h->factor;
  return std::nullopt;
}

}  // namespace

ComponentDecomposition decompose(const GraphOracle& o, const Path& p,
                                 std::optional<bool> cyclic_opt) {
  const std::size_t l = p.length();
  ComponentDecomposition d;
  for (const auto& e : p.steps)
    if (!std::holds_alternative<Letter>(e.label))
      throw Error(ErrorKind::ParseError, "decompose expects a relative-graph path");
  bool cyclic = cyclic_opt.value_or(l > 0 && o.key(p.source()) == o.key(p.target()));
  d.cyclic = cyclic;

  // Maximal runs of same-factor H edges.
  std::vector<HComponent> runs;
  std::size_t i = 0;
  while (i < l) {
    auto f = h_factor_of(p.steps[i]);
    if (!f) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < l && h_factor_of(p.steps[j]) == f) ++j;
    HComponent c;
    c.factor = *f;
    c.start = i;
    c.len = j - i;
    runs.push_back(c);
    i = j;
  }
  // Cyclic convention: a run touching the end joins a same-factor run at the
  // start (subpaths of cyclic shifts count as subpaths).
  if (cyclic && runs.size() >= 2) {
    auto& first = runs.front();
    auto& last = runs.back();
    if (first.start == 0 && last.start + last.len == l && first.factor == last.factor) {
      last.len += first.len;
      last.wrapped = true;
      runs.erase(runs.begin());
    }
  }
  for (auto& c : runs) {
    c.from = group_of(path_vertex(p, c.start));
    std::size_t endpos = c.wrapped ? (c.start + c.len) - l : c.start + c.len;
    c.to = group_of(path_vertex(p, endpos));
    c.coset = o.ctx().coset_id(c.factor, c.from);
    d.components.push_back(std::move(c));
  }

  // Phase positions: ends of components and of X-edges.
  std::set<std::size_t> phase;
  for (std::size_t e = 0; e < l; ++e) {
    if (!h_factor_of(p.steps[e])) {
      phase.insert(e);
      phase.insert(e + 1);
    }
  }
  for (const auto& c : d.components) {
    phase.insert(c.start);
    phase.insert(c.wrapped ? (c.start + c.len) - l : c.start + c.len);
  }
  if (cyclic) {
    // positions 0 and l name the same vertex
    if (phase.contains(l)) phase.insert(0);
    if (phase.contains(0)) phase.insert(l);
  }
  d.phase_positions.assign(phase.begin(), phase.end());
  std::set<std::string> seen;
  for (std::size_t pos : d.phase_positions) {
    VertexKey k = o.key(path_vertex(p, pos));
    std::string keystr = std::to_string(k.cone_factor) + "#" + std::to_string(k.id);
    if (seen.insert(keystr).second) d.phase_vertices.push_back(k);
  }

  for (std::size_t a = 0; a < d.components.size(); ++a)
    for (std::size_t b = a + 1; b < d.components.size(); ++b)
      if (d.components[a].factor == d.components[b].factor &&
          d.components[a].coset == d.components[b].coset)
        d.connected_pairs.emplace_back(a, b);
  return d;
}

std::vector<std::pair<std::size_t, std::size_t>> connected_across(
    const GraphOracle& o, const ComponentDecomposition& dp, const ComponentDecomposition& dq) {
  (void)o;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < dp.components.size(); ++a)
    for (std::size_t b = 0; b < dq.components.size(); ++b)
      if (dp.components[a].factor == dq.components[b].factor &&
          dp.components[a].coset == dq.components[b].coset)
        out.emplace_back(a, b);
  return out;
}

// ---------------------------------------------------------------------------
// Penetrations

PenetrationRecord penetrations(const GraphOracle& o, const Path& q,
                               std::optional<bool> cyclic_opt) {
  const std::size_t l = q.length();
  PenetrationRecord rec;
  // Validate the biedge/X-edge shape and collect per-edge cone annotations.
  struct Visit {
    std::size_t start;  // edge index of the cone-up
    int32_t factor;
    VertexKey key;
    NormalForm key_nf;
  };
  std::size_t i = 0;
  std::vector<std::pair<std::size_t, Visit>> biedges;
  while (i < l) {
    const auto& e = q.steps[i];
    if (std::holds_alternative<Letter>(e.label)) {
      const auto* letter = std::get_if<Letter>(&e.label);
      if (!std::holds_alternative<XLetter>(*letter))
        throw Error(ErrorKind::ParseError,
                    "penetrations expects a coned path of cone-biedges and X-edges");
      ++i;
      continue;
    }
    if (!std::holds_alternative<ConeUp>(e.label) || i + 1 >= l ||
        !std::holds_alternative<ConeDown>(q.steps[i + 1].label))
      throw Error(ErrorKind::DanglingConeEdge, "cone edges must pair into biedges");
    Visit v;
    v.start = i;
    v.factor = std::get<ConeUp>(e.label).factor;
    v.key = o.key(e.to);
    v.key_nf = cone_of(e.to).key;
    biedges.emplace_back(i, v);
    i += 2;
  }
  bool cyclic = cyclic_opt.value_or(l > 0 && o.key(q.source()) == o.key(q.target()));

  // Merge consecutive biedges at the same cone vertex.
  std::vector<Penetration> runs;
  for (std::size_t b = 0; b < biedges.size(); ++b) {
    const auto& [start, v] = biedges[b];
    if (!runs.empty()) {
      auto& last = runs.back();
      if (last.start + last.len == start && last.factor == v.factor && last.coset == v.key.id) {
        last.len += 2;
        continue;
      }
    }
    Penetration pen;
    pen.factor = v.factor;
    pen.coset = v.key.id;
    pen.coset_key = v.key_nf;
    pen.start = start;
    pen.len = 2;
    runs.push_back(std::move(pen));
  }
  if (cyclic && runs.size() >= 2) {
    auto& first = runs.front();
    auto& last = runs.back();
    if (first.start == 0 && last.start + last.len == l && first.factor == last.factor &&
        first.coset == last.coset) {
      last.len += first.len;
      last.wrapped = true;
      runs.erase(runs.begin());
    }
  }
  rec.penetrations = std::move(runs);
  for (std::size_t a = 0; a < rec.penetrations.size() && !rec.backtracking; ++a)
    for (std::size_t b = a + 1; b < rec.penetrations.size(); ++b)
      if (rec.penetrations[a].factor == rec.penetrations[b].factor &&
          rec.penetrations[a].coset == rec.penetrations[b].coset) {
        rec.backtracking = true;
        break;
      }
  return rec;
}

// ---------------------------------------------------------------------------
// Classification

PathClass classify(const GraphOracle& o, const Path& p, std::optional<bool> cyclic_opt) {
  PathClass cls;
  const std::size_t l = p.length();
  cls.is_cycle = o.key(p.source()) == o.key(p.target());
  bool cyclic = cyclic_opt.value_or(cls.is_cycle && l > 0);

  std::vector<VertexKey> keys;
  for (std::size_t pos = 0; pos <= l; ++pos) keys.push_back(o.key(path_vertex(p, pos)));
  auto distinct = [&keys](std::size_t from, std::size_t to) {
    for (std::size_t a = from; a < to; ++a)
      for (std::size_t b = a + 1; b < to; ++b)
        if (keys[a] == keys[b]) return false;
    return true;
  };
  cls.is_arc = distinct(0, l + 1);
  cls.is_circuit = cls.is_cycle && l >= 1 && distinct(0, l) &&
                   !(l >= 2 && edges_inverse(o, p.steps.front(), p.steps.back())) &&
                   !(l == 1 && edges_inverse(o, p.steps.front(), p.steps.front()));

  bool coned = false;
  for (const auto& e : p.steps)
    if (!std::holds_alternative<Letter>(e.label)) coned = true;
  if (coned || (o.config().kind == GraphKind::Coned && l > 0)) {
    PenetrationRecord rec = penetrations(o, p, cyclic);
    cls.locally_minimal = rec.locally_minimal();
    cls.backtracking_free = !rec.backtracking;
  } else {
    ComponentDecomposition d = decompose(o, p, cyclic);
    cls.locally_minimal = d.locally_minimal();
    cls.backtracking_free = d.backtracking_free();
  }
  return cls;
}

// ---------------------------------------------------------------------------
// The dictionary pi / lift

Path pi(const GraphOracle& coned, const Path& p) {
  Path out{p.source(), {}};
  for (const auto& e : p.steps) {
    const auto* letter = std::get_if<Letter>(&e.label);
    if (!letter) throw Error(ErrorKind::ParseError, "pi expects a relative-graph path");
    if (const auto* h = std::get_if<HLetter>(letter)) {
      const NormalForm& g = group_of(e.from);
      ConeRef cone{h->factor, coned.ctx().coset_key(h->factor, g)};
      out.steps.push_back(EdgeStep{e.from, ConeUp{h->factor}, cone});
      out.steps.push_back(EdgeStep{Vertex{cone}, ConeDown{h->factor}, e.to});
    } else {
      out.steps.push_back(e);
    }
  }
  return out;
}

Path lift(const GraphOracle& relative, const Path& q) {
  const GroupSpec& spec = relative.spec();
  if (!is_group_vertex(q.source()) || !is_group_vertex(q.target()))
    throw Error(ErrorKind::DanglingConeEdge, "lift expects group-vertex endpoints");
  Path out{q.source(), {}};
  std::size_t i = 0;
  const std::size_t l = q.length();
  while (i < l) {
    const auto& e = q.steps[i];
    if (const auto* letter = std::get_if<Letter>(&e.label)) {
      if (!std::holds_alternative<XLetter>(*letter))
        throw Error(ErrorKind::ParseError, "lift expects cone-biedges and X-edges");
      out.steps.push_back(e);
      ++i;
      continue;
    }
    if (std::holds_alternative<ConeDown>(e.label))
      throw Error(ErrorKind::DanglingConeEdge, "cone-down edge without a preceding cone-up");
    int32_t f = std::get<ConeUp>(e.label).factor;
    if (i + 1 >= l || !std::holds_alternative<ConeDown>(q.steps[i + 1].label))
      throw Error(ErrorKind::DanglingConeEdge, "cone-up edge without a matching cone-down");
    const NormalForm& g1 = group_of(e.from);
    const NormalForm& g2 = group_of(q.steps[i + 1].to);
    NormalForm diff = nf_multiply(spec, nf_invert(spec, g1), g2);
    std::optional<HLetter> witness;
    Tri t = relative.ctx().in_factor(f, diff, &witness);
    if (t == Tri::Unknown)
      throw Error(ErrorKind::CosetKeyUnknown, "cannot resolve a biedge label within budget");
    if (t == Tri::No)
      throw Error(ErrorKind::DanglingConeEdge, "biedge endpoints lie in different cosets");
    if (!witness)
      throw Error(ErrorKind::ZeroBiedge, "biedge between equal endpoints has no letter");
    out.steps.push_back(EdgeStep{e.from, Letter{*witness}, q.steps[i + 1].to});
    i += 2;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quasigeodesics and similarity

QuasigeodesicReport is_quasigeodesic(const GraphOracle& metric, const Path& p, double mu, double c,
                                     std::size_t cap, bool cyclic) {
  QuasigeodesicReport rep;
  const std::size_t l = p.length();
  bool unknown = false;
  auto check = [&](std::size_t i, std::size_t j, const Vertex& a, const Vertex& b,
                   std::size_t len) -> bool {
    auto d = distance(metric, a, b, cap);
    if (!d) {
      unknown = true;
      return true;
    }
    if (static_cast<double>(len) > mu * static_cast<double>(*d) + c) {
      rep.verdict = Tri::No;
      rep.witness = {i, j};
      return false;
    }
    return true;
  };
  for (std::size_t i = 0; i <= l; ++i)
    for (std::size_t j = i + 1; j <= l; ++j)
      if (!check(i, j, path_vertex(p, i), path_vertex(p, j), j - i)) return rep;
  if (cyclic) {
    for (std::size_t i = 1; i <= l; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        std::size_t len = (l - i) + j;
        if (len == 0 || len >= l) continue;
        if (!check(i, j, path_vertex(p, i), path_vertex(p, j), len)) return rep;
      }
  }
  rep.verdict = unknown ? Tri::Unknown : Tri::Yes;
  return rep;
}

bool k_similar(const GraphOracle& metric, const Path& p, const Path& q, std::size_t k,
               std::size_t cap) {
  auto d1 = distance(metric, p.source(), q.source(), cap);
  auto d2 = distance(metric, p.target(), q.target(), cap);
  if (!d1 || !d2)
    throw Error(ErrorKind::NotWithinCap, "endpoint distance exceeds the cap");
  return *d1 <= k && *d2 <= k;
}

}  // namespace relhyp
