#include "relhyp/relator_search.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <unordered_map>

namespace relhyp {

namespace {

struct Splice {
  NormalForm prefix;
  NormalForm suffix;
};

// All splits of a normal form into prefix * suffix.  Splits run between
// letters, inside finite-factor syllables (h = h' * h''), and inside Z
// syllables with the partial exponent bounded by the syllable exponent plus
// the largest exponent seen in a relator.
std::vector<Splice> splits(const GroupSpec& spec, const NormalForm& u, const BigInt& zslack) {
  std::vector<Splice> out;
  std::vector<Syllable> prefix;
  auto snapshot = [&](std::vector<Syllable> suffix_extra, std::size_t from) {
    Splice s;
    s.prefix.syllables = prefix;
    for (auto& sy : suffix_extra) s.suffix.syllables.push_back(std::move(sy));
    for (std::size_t i = from; i < u.syllables.size(); ++i)
      s.suffix.syllables.push_back(u.syllables[i]);
    out.push_back(std::move(s));
  };
  snapshot({}, 0);
  for (std::size_t i = 0; i < u.syllables.size(); ++i) {
    const auto& sy = u.syllables[i];
    if (const auto* f = std::get_if<FreeSyllable>(&sy)) {
      for (std::size_t k = 1; k < f->letters.size(); ++k) {
        FreeSyllable head, tail;
        head.letters.assign(f->letters.begin(), f->letters.begin() + static_cast<long>(k));
        tail.letters.assign(f->letters.begin() + static_cast<long>(k), f->letters.end());
        prefix.push_back(Syllable{head});
        snapshot({Syllable{tail}}, i + 1);
        prefix.pop_back();
      }
    } else {
      const auto& fs = std::get<FactorSyllable>(sy);
      const auto& fac = spec.factor(fs.factor);
      if (fac.kind == FactorKind::FiniteTable) {
        for (int h = 1; h < fac.order(); ++h) {
          if (h == fs.elem) continue;
          int rest = fac.mul(fac.inv(h), fs.elem);
          FactorSyllable head{fs.factor, h, 0};
          FactorSyllable tail{fs.factor, rest, 0};
          prefix.push_back(Syllable{head});
          snapshot({Syllable{tail}}, i + 1);
          prefix.pop_back();
        }
      } else {
        BigInt lo = fs.exp < 0 ? fs.exp - zslack : BigInt(0) - zslack;
        BigInt hi = fs.exp > 0 ? fs.exp + zslack : zslack;
        for (BigInt e = lo; e <= hi; ++e) {
          if (e == 0 || e == fs.exp) continue;
          FactorSyllable head{fs.factor, 0, e};
          FactorSyllable tail{fs.factor, 0, fs.exp - e};
          prefix.push_back(Syllable{head});
          snapshot({Syllable{tail}}, i + 1);
          prefix.pop_back();
        }
      }
    }
    prefix.push_back(sy);
    snapshot({}, i + 1);
  }
  return out;
}

struct SearchTables {
  std::vector<NormalForm> relator_forms;
  std::size_t max_relator_length = 0;
  BigInt zslack = 0;
};

SearchTables build_tables(const GroupSpec& spec) {
  SearchTables t;
  for (const auto& r : spec.relators) {
    NormalForm nf = evaluate(spec, r);
    t.max_relator_length = std::max(t.max_relator_length, nf.rel_length());
    for (const auto& sy : nf.syllables)
      if (const auto* fs = std::get_if<FactorSyllable>(&sy))
        if (fs->exp != 0) t.zslack = std::max(t.zslack, big_abs(fs->exp));
    t.relator_forms.push_back(std::move(nf));
  }
  return t;
}

struct ParentInfo {
  NormalForm parent;
  std::size_t relator = 0;
  NormalForm suffix;
  std::size_t depth = 0;
};

TrivialityCertificate reconstruct(
    const GroupSpec& spec, const NormalForm& w,
    const std::unordered_map<NormalForm, ParentInfo, NormalFormHash>& parents) {
  // Moves applied U -> U * (v^-1 R v); undoing them from the identity back to
  // W yields W = prod_(last..first) v^-1 R^-1 v.
  TrivialityCertificate cert;
  NormalForm cur = nf_identity();
  while (!(cur == w)) {
    const auto& info = parents.at(cur);
    TrivialityCertificate::Step step;
    step.conjugator = info.suffix;
    step.relator = invert_word(spec, spec.relators[info.relator]);
    cert.steps.push_back(std::move(step));
    cur = info.parent;
  }
  return cert;
}

}  // namespace

AreaOutcome exact_area(const GroupSpec& spec, const NormalForm& w, std::size_t area_cap,
                       std::size_t node_budget) {
  AreaOutcome out;
  if (w.is_identity()) {
    out.status = AreaOutcome::Status::Found;
    out.area = 0;
    return out;
  }
  if (spec.is_free_product() || spec.relators.empty()) {
    out.status = AreaOutcome::Status::NotTrivial;
    return out;
  }
  if (!spec.ab_lattice_member(spec.abelianize(w))) {
    out.status = AreaOutcome::Status::NotTrivial;
    return out;
  }
  SearchTables tables = build_tables(spec);
  std::size_t length_bound = w.rel_length() + area_cap * tables.max_relator_length;

  std::unordered_map<NormalForm, ParentInfo, NormalFormHash> parents;
  std::vector<NormalForm> frontier{w};
  parents.emplace(w, ParentInfo{});
  out.states_explored = 1;

  for (std::size_t depth = 1; depth <= area_cap; ++depth) {
    // Expand shortest states first so an identity hit at this level is found
    // before the level is fully generated.
    std::sort(frontier.begin(), frontier.end(), [](const NormalForm& a, const NormalForm& b) {
      return a.rel_length() < b.rel_length();
    });
    std::vector<NormalForm> next;
    for (const auto& state : frontier) {
      auto cuts = splits(spec, state, tables.zslack);
      for (std::size_t ri = 0; ri < tables.relator_forms.size(); ++ri) {
        for (const auto& cut : cuts) {
          NormalForm cand = nf_multiply(
              spec, nf_multiply(spec, cut.prefix, tables.relator_forms[ri]), cut.suffix);
          if (cand.rel_length() > length_bound) continue;
          if (parents.contains(cand)) continue;
          ParentInfo info;
          info.parent = state;
          info.relator = ri;
          info.suffix = cut.suffix;
          info.depth = depth;
          parents.emplace(cand, std::move(info));
          ++out.states_explored;
          if (cand.is_identity()) {
            out.status = AreaOutcome::Status::Found;
            out.area = depth;
            out.certificate = reconstruct(spec, w, parents);
            return out;
          }
          next.push_back(std::move(cand));
          if (out.states_explored > node_budget)
            throw Error(ErrorKind::BudgetExceeded, "area search exceeded its node budget");
        }
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  out.status = AreaOutcome::Status::CapExceeded;
  return out;
}

std::optional<TrivialityCertificate> best_first_trivialize(const GroupSpec& spec,
                                                           const NormalForm& w,
                                                           const EqualBudget& budget) {
  if (w.is_identity()) return TrivialityCertificate{};
  if (spec.is_free_product() || spec.relators.empty()) return std::nullopt;
  if (!spec.ab_lattice_member(spec.abelianize(w))) return std::nullopt;
  SearchTables tables = build_tables(spec);

  struct QueueEntry {
    std::size_t length;
    std::size_t tick;
    NormalForm state;
    bool operator>(const QueueEntry& o) const {
      if (length != o.length) return length > o.length;
      return tick > o.tick;
    }
  };
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue;
  std::unordered_map<NormalForm, ParentInfo, NormalFormHash> parents;
  std::size_t tick = 0;
  queue.push({w.rel_length(), tick++, w});
  parents.emplace(w, ParentInfo{});
  std::size_t explored = 1;

  while (!queue.empty()) {
    QueueEntry top = queue.top();
    queue.pop();
    const ParentInfo& top_info = parents.at(top.state);
    if (top_info.depth >= budget.max_area) continue;
    auto cuts = splits(spec, top.state, tables.zslack);
    for (std::size_t ri = 0; ri < tables.relator_forms.size(); ++ri) {
      for (const auto& cut : cuts) {
        NormalForm cand =
            nf_multiply(spec, nf_multiply(spec, cut.prefix, tables.relator_forms[ri]), cut.suffix);
        if (parents.contains(cand)) continue;
        ParentInfo info;
        info.parent = top.state;
        info.relator = ri;
        info.suffix = cut.suffix;
        info.depth = top_info.depth + 1;
        parents.emplace(cand, std::move(info));
        if (cand.is_identity()) return reconstruct(spec, w, parents);
        if (++explored > budget.node_budget) return std::nullopt;
        queue.push({cand.rel_length(), tick++, cand});
      }
    }
  }
  return std::nullopt;
}

std::optional<TrivialityCertificate> find_triviality_certificate(const GroupSpec& spec,
                                                                 const NormalForm& w,
                                                                 const EqualBudget& budget) {
  return best_first_trivialize(spec, w, budget);
}

}  // namespace relhyp
