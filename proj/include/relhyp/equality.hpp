#ifndef RELHYP_EQUALITY_HPP
#define RELHYP_EQUALITY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "relhyp/algebra.hpp"

namespace relhyp {

using ElemId = int64_t;
using CosetId = int64_t;

// Canonicalization of group elements and peripheral cosets.
//
// FreeProduct backend: normal forms are canonical, so ids are a hash-cons and
// coset keys are computed syntactically (strip a trailing syllable of the
// factor).  Presented backend: ids name equality classes discovered so far;
// two forms merge only on a verified triviality certificate, and distinct
// abelianization images separate classes.  Classes that the budget cannot
// resolve raise CosetKeyUnknown.
class EqualityContext {
 public:
  explicit EqualityContext(const GroupSpec& spec, EqualBudget budget = {});

  const GroupSpec& spec() const { return spec_; }

  ElemId id_of(const NormalForm& g);
  const NormalForm& rep_of(ElemId id) const { return reps_[static_cast<std::size_t>(id)]; }

  Tri equal(const NormalForm& a, const NormalForm& b);

  // Left-coset key of gH: a canonical normal form r with rH = gH.
  NormalForm coset_key(int32_t factor, const NormalForm& g);
  CosetId coset_id(int32_t factor, const NormalForm& g);
  const NormalForm& coset_rep(int32_t factor, CosetId id) const;

  // Decide g in H (as a subgroup of G via its letters); returns the witness
  // letter exponent/element when yes.
  Tri in_factor(int32_t factor, const NormalForm& g, std::optional<HLetter>* witness = nullptr);

 private:
  const GroupSpec& spec_;
  EqualBudget budget_;

  // element registry
  std::unordered_map<NormalForm, ElemId, NormalFormHash> exact_ids_;
  std::vector<NormalForm> reps_;
  std::map<std::string, std::vector<ElemId>> ab_buckets_;  // Presented
  std::unordered_map<NormalForm, ElemId, NormalFormHash> resolved_;

  // coset registries, one per factor
  struct CosetRegistry {
    std::unordered_map<NormalForm, CosetId, NormalFormHash> by_key;
    std::vector<NormalForm> reps;
  };
  std::vector<CosetRegistry> cosets_;

  std::string ab_key(const NormalForm& g) const;
};

}  // namespace relhyp

#endif
