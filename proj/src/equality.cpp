#include "relhyp/equality.hpp"

#include <algorithm>

namespace relhyp {

EqualityContext::EqualityContext(const GroupSpec& spec, EqualBudget budget)
    : spec_(spec), budget_(budget) {
  cosets_.resize(static_cast<std::size_t>(spec.factor_count()));
}

std::string EqualityContext::ab_key(const NormalForm& g) const {
  std::string key;
  for (const auto& c : spec_.abelianize(g)) {
    key += c.str();
    key += ',';
  }
  return key;
}

ElemId EqualityContext::id_of(const NormalForm& g) {
  if (spec_.is_free_product()) {
    auto it = exact_ids_.find(g);
    if (it != exact_ids_.end()) return it->second;
    ElemId id = static_cast<ElemId>(reps_.size());
    reps_.push_back(g);
    exact_ids_.emplace(g, id);
    return id;
  }
  if (auto it = resolved_.find(g); it != resolved_.end()) return it->second;
  auto& bucket = ab_buckets_[ab_key(g)];
  for (ElemId cand : bucket) {
    EqualResult r = relhyp::equal(spec_, g, reps_[static_cast<std::size_t>(cand)], budget_);
    if (r.verdict == Tri::Yes) {
      resolved_.emplace(g, cand);
      return cand;
    }
    if (r.verdict == Tri::Unknown)
      throw Error(ErrorKind::CosetKeyUnknown,
                  "equality beyond budget: '" + serialize(spec_, g) + "' vs '" +
                      serialize(spec_, reps_[static_cast<std::size_t>(cand)]) + "'");
  }
  ElemId id = static_cast<ElemId>(reps_.size());
  reps_.push_back(g);
  bucket.push_back(id);
  resolved_.emplace(g, id);
  return id;
}

Tri EqualityContext::equal(const NormalForm& a, const NormalForm& b) {
  if (spec_.is_free_product()) return a == b ? Tri::Yes : Tri::No;
  return relhyp::equal(spec_, a, b, budget_).verdict;
}

Tri EqualityContext::in_factor(int32_t factor, const NormalForm& g,
                               std::optional<HLetter>* witness) {
  const auto& fac = spec_.factor(factor);
  if (g.is_identity()) {
    if (witness) *witness = std::nullopt;
    return Tri::Yes;
  }
  if (spec_.is_free_product()) {
    if (g.syllables.size() != 1) return Tri::No;
    const auto* fs = std::get_if<FactorSyllable>(&g.syllables[0]);
    if (!fs || fs->factor != factor) return Tri::No;
    if (witness) {
      HLetter h;
      h.factor = factor;
      h.elem = fs->elem;
      h.exp = fs->exp;
      *witness = h;
    }
    return Tri::Yes;
  }
  if (fac.kind == FactorKind::FiniteTable) {
    for (int e = 1; e < fac.order(); ++e) {
      HLetter h;
      h.factor = factor;
      h.elem = e;
      NormalForm henf = nf_of_letter(spec_, Letter{h});
      Tri t = equal(g, henf);
      if (t == Tri::Yes) {
        if (witness) *witness = h;
        return Tri::Yes;
      }
      if (t == Tri::Unknown) return Tri::Unknown;
    }
    return Tri::No;
  }
  // Z factor: solve k * [u] = [v] in Z^r / L exactly, where u is the image of
  // the factor generator and L the relator lattice.  Solutions form a coset
  // of the annihilator of [u]; each candidate still needs a certificate.
  HLetter unit;
  unit.factor = factor;
  unit.exp = 1;
  std::vector<BigInt> u = spec_.abelianize(nf_of_letter(spec_, Letter{unit}));
  std::vector<BigInt> v = spec_.abelianize(g);
  std::size_t rank = u.size();

  std::vector<std::vector<BigInt>> rows;
  for (const auto& row : spec_.ab_lattice) {
    auto r = row;
    r.push_back(0);
    rows.push_back(std::move(r));
  }
  {
    auto r = u;
    r.push_back(1);
    rows.push_back(std::move(r));
  }
  auto echelon = detail::integer_echelon(std::move(rows), rank);
  std::vector<BigInt> w = v;
  w.push_back(0);
  if (!detail::echelon_reduce(echelon, w, rank)) return Tri::No;  // v not in L + Zu
  BigInt k0 = -w[rank];

  // Order of [u] in the quotient, scanned over a small window (0 = infinite
  // as far as the window can tell).
  BigInt order = 0;
  for (int d = 1; d <= 64; ++d) {
    std::vector<BigInt> du(rank);
    for (std::size_t i = 0; i < rank; ++i) du[i] = BigInt(d) * u[i];
    if (spec_.ab_lattice_member(du)) {
      order = d;
      break;
    }
  }
  std::vector<BigInt> candidates{k0};
  if (order != 0)
    for (int j = 1; j <= 4; ++j) {
      candidates.push_back(k0 + j * order);
      candidates.push_back(k0 - j * order);
    }
  bool unresolved = false;
  for (const BigInt& k : candidates) {
    if (k == 0) {
      // candidate exponent 0: g would have to be the identity of G
      Tri t = equal(g, nf_identity());
      if (t == Tri::Yes) {
        if (witness) *witness = std::nullopt;
        return Tri::Yes;
      }
      if (t == Tri::Unknown) unresolved = true;
      continue;
    }
    HLetter h;
    h.factor = factor;
    h.exp = k;
    Tri t = equal(g, nf_of_letter(spec_, Letter{h}));
    if (t == Tri::Yes) {
      if (witness) *witness = h;
      return Tri::Yes;
    }
    if (t == Tri::Unknown) unresolved = true;
  }
  (void)unresolved;
  return Tri::Unknown;
}

NormalForm EqualityContext::coset_key(int32_t factor, const NormalForm& g) {
  if (spec_.is_free_product()) {
    // Strip a trailing syllable lying in the factor.
    if (!g.syllables.empty()) {
      if (const auto* fs = std::get_if<FactorSyllable>(&g.syllables.back());
          fs && fs->factor == factor) {
        NormalForm key = g;
        key.syllables.pop_back();
        return key;
      }
    }
    return g;
  }
  auto& reg = cosets_[static_cast<std::size_t>(factor)];
  if (auto it = reg.by_key.find(g); it != reg.by_key.end())
    return reg.reps[static_cast<std::size_t>(it->second)];
  NormalForm ginv = nf_invert(spec_, g);
  for (std::size_t i = 0; i < reg.reps.size(); ++i) {
    Tri t = in_factor(factor, nf_multiply(spec_, ginv, reg.reps[i]));
    if (t == Tri::Yes) {
      reg.by_key.emplace(g, static_cast<CosetId>(i));
      return reg.reps[i];
    }
    if (t == Tri::Unknown)
      throw Error(ErrorKind::CosetKeyUnknown,
                  "coset of '" + serialize(spec_, g) + "' in factor " + spec_.factor(factor).id +
                      " is unresolved within budget");
  }
  CosetId id = static_cast<CosetId>(reg.reps.size());
  reg.reps.push_back(g);
  reg.by_key.emplace(g, id);
  return g;
}

CosetId EqualityContext::coset_id(int32_t factor, const NormalForm& g) {
  NormalForm key = coset_key(factor, g);
  auto& reg = cosets_[static_cast<std::size_t>(factor)];
  if (spec_.is_free_product()) {
    if (auto it = reg.by_key.find(key); it != reg.by_key.end()) return it->second;
    CosetId id = static_cast<CosetId>(reg.reps.size());
    reg.reps.push_back(key);
    reg.by_key.emplace(key, id);
    return id;
  }
  return reg.by_key.at(g);
}

const NormalForm& EqualityContext::coset_rep(int32_t factor, CosetId id) const {
  return cosets_[static_cast<std::size_t>(factor)].reps[static_cast<std::size_t>(id)];
}

}  // namespace relhyp
