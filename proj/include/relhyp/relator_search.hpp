#ifndef RELHYP_RELATOR_SEARCH_HPP
#define RELHYP_RELATOR_SEARCH_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "relhyp/algebra.hpp"

namespace relhyp {

// Search over the coset W * <<R>> in F.  One move splices a relator into the
// current form at some split position and renormalizes; a state reaches the
// identity in k moves iff area(W) <= k.

struct AreaOutcome {
  enum class Status { Found, CapExceeded, NotTrivial };
  Status status = Status::CapExceeded;
  std::size_t area = 0;
  TrivialityCertificate certificate;
  std::size_t states_explored = 0;
};

// Exact breadth-first area search (level = number of relator applications).
// States are normal forms with rel_length bounded by |W| + cap * max|R|;
// every splice changes the length by at most max|R|, so the bound keeps the
// search complete up to the cap.
AreaOutcome exact_area(const GroupSpec& spec, const NormalForm& w, std::size_t area_cap,
                       std::size_t node_budget = 4000000);

// Best-first search for any certificate (not necessarily minimal); used by
// the tri-valued equality test.
std::optional<TrivialityCertificate> best_first_trivialize(const GroupSpec& spec,
                                                           const NormalForm& w,
                                                           const EqualBudget& budget);

}  // namespace relhyp

#endif
