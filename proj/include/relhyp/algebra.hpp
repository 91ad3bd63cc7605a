#ifndef RELHYP_ALGEBRA_HPP
#define RELHYP_ALGEBRA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "relhyp/bigint.hpp"

namespace relhyp {

enum class ErrorKind {
  InvalidTable,
  NonSymmetricSystem,
  TrivialFactor,
  RelatorsNotClosed,
  BackendMismatch,
  ConeVertexInPlainGraph,
  ExplorationBudgetExceeded,
  BudgetExceeded,
  NotWithinCap,
  CosetKeyUnknown,
  DanglingConeEdge,
  ZeroBiedge,
  SameCoset,
  YNotReduced,
  GeodesicEnumerationTruncated,
  EnumerationTruncated,
  ReplacementNotFound,
  AreaCapExceeded,
  NotTrivialWithinBudget,
  GenerationFailure,
  ParseError,
};

struct Error : std::runtime_error {
  ErrorKind kind;
  Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

const char* error_kind_name(ErrorKind k);

enum class Tri { Yes, No, Unknown };

enum class Backend { FreeProduct, Presented };

// ---------------------------------------------------------------------------
// Generating system and peripheral factors

// A symmetric generator pair.  `name` labels the positive letter, `inverse`
// the inverse letter; name == inverse declares an involution.
struct GeneratorSymbol {
  std::string name;
  std::string inverse;
};

enum class FactorKind { FiniteTable, InfiniteCyclic };

// A peripheral factor.  Finite factors carry a full multiplication table with
// element 0 the identity; infinite cyclic factors are parametrized by an
// exponent.  In the Presented backend each factor needs an embedding into the
// group: a word per element (finite) or a word for the positive generator (Z).
struct PeripheralFactor {
  std::string id;
  FactorKind kind = FactorKind::FiniteTable;
  // FiniteTable data
  std::vector<std::string> element_names;       // [0] = identity
  std::vector<std::vector<int>> table;          // table[i][j] = i*j
  std::vector<int> inverse;                     // inverse[i]
  // Presented-backend embeddings (words over X letters), optional otherwise
  std::vector<std::vector<int32_t>> embeddings; // finite: per element; Z: [0] = generator

  int order() const { return static_cast<int>(element_names.size()); }
  int mul(int i, int j) const { return table[i][j]; }
  int inv(int i) const { return inverse[i]; }
};

// ---------------------------------------------------------------------------
// Letters and words over X ⊔ H

// X letter: signed 1-based symbol index (+i positive, -i inverse).
struct XLetter {
  int32_t sym;
  bool operator==(const XLetter&) const = default;
};

// H letter: a non-identity element of one factor.  For finite factors `elem`
// is the table index; for Z factors `exp` is the nonzero exponent.
struct HLetter {
  int32_t factor;
  int32_t elem = 0;
  BigInt exp = 0;
  bool operator==(const HLetter&) const = default;
};

using Letter = std::variant<XLetter, HLetter>;

bool letter_equal(const Letter& a, const Letter& b);

struct Word {
  std::vector<Letter> letters;
  std::size_t length() const { return letters.size(); }
};

// ---------------------------------------------------------------------------
// Normal forms in F = F(free X symbols) * (*_H H)

// A syllable is either a reduced segment of free letters or a single
// non-identity factor element.
struct FreeSyllable {
  std::vector<int32_t> letters;  // signed free-symbol indices, freely reduced
  bool operator==(const FreeSyllable&) const = default;
};

struct FactorSyllable {
  int32_t factor;
  int32_t elem = 0;   // finite factors
  BigInt exp = 0;     // Z factors
  bool operator==(const FactorSyllable&) const = default;
};

using Syllable = std::variant<FreeSyllable, FactorSyllable>;

struct NormalForm {
  std::vector<Syllable> syllables;

  bool is_identity() const { return syllables.empty(); }
  // Length in the relative metric: one per free letter, one per factor syllable.
  std::size_t rel_length() const;
  std::size_t syllable_count() const { return syllables.size(); }
  bool operator==(const NormalForm&) const = default;
};

struct NormalFormHash {
  std::size_t operator()(const NormalForm& nf) const;
};

// ---------------------------------------------------------------------------
// Group specification

struct GroupSpec {
  Backend backend = Backend::FreeProduct;
  std::vector<GeneratorSymbol> generators;       // symmetric pairs
  std::vector<PeripheralFactor> factors;
  // FreeProduct: value of each X symbol; free basis symbols have no value.
  std::vector<std::optional<NormalForm>> values;
  std::vector<Word> relators;                    // closed under inversion + cyclic shifts
  std::vector<HLetter> omega;                    // H letters occurring in relators
  bool relators_autoclosed = false;
  bool embedding_relators_added = false;

  int free_symbol_count = 0;                     // Presented: all; FreeProduct: those without values
  std::vector<int32_t> free_index;               // symbol -> 1-based free index or 0

  // Abelianization data (Presented): letters map into Z^rank, relator images
  // span a lattice given in Hermite normal form.
  int ab_rank = 0;
  std::vector<std::vector<BigInt>> ab_lattice;   // HNF rows

  bool is_free_product() const { return backend == Backend::FreeProduct; }
  const PeripheralFactor& factor(int32_t i) const { return factors[static_cast<std::size_t>(i)]; }
  int factor_count() const { return static_cast<int>(factors.size()); }
  int generator_count() const { return static_cast<int>(generators.size()); }

  int32_t factor_index(const std::string& id) const;
  int32_t symbol_index(const std::string& name) const;  // +i / -i by name match, 0 if none
  int32_t finite_element(int32_t factor, const std::string& name) const;

  NormalForm symbol_value(int32_t signed_sym) const;  // value of X letter as element of F
  std::vector<BigInt> abelianize(const NormalForm& nf) const;
  bool ab_lattice_member(const std::vector<BigInt>& v) const;
};

// ---------------------------------------------------------------------------
// Core operations

// Normal-form arithmetic (exact in F for both backends).
NormalForm nf_identity();
NormalForm nf_of_letter(const GroupSpec& spec, const Letter& l);
NormalForm nf_multiply(const GroupSpec& spec, const NormalForm& a, const NormalForm& b);
NormalForm nf_invert(const GroupSpec& spec, const NormalForm& a);
NormalForm nf_power(const GroupSpec& spec, const NormalForm& a, const BigInt& k);

// reduce: Word -> NormalForm.  FreeProduct backend only (the canonical form
// represents the image under the free-product evaluation).
NormalForm reduce(const GroupSpec& spec, const Word& w);

// evaluate: Word -> element of F (either backend); homomorphic.
NormalForm evaluate(const GroupSpec& spec, const Word& w);

Word invert_word(const GroupSpec& spec, const Word& w);
Letter invert_letter(const GroupSpec& spec, const Letter& l);

// Canonical serialization (`seg.seg...`, identity = "1").
std::string serialize(const GroupSpec& spec, const NormalForm& nf);
std::string serialize_letter(const GroupSpec& spec, const Letter& l);
std::string serialize_word(const GroupSpec& spec, const Word& w);

// Total order used whenever a deterministic representative is needed:
// by serialized length first, then lexicographically.
bool canonical_less(const GroupSpec& spec, const NormalForm& a, const NormalForm& b);

// Parse a dot-joined word literal (`a.b.b2`, `x.T`, `A:3`).
Word parse_word(const GroupSpec& spec, const std::string& text);

// Validate a raw JSON spec (see README for the schema).
GroupSpec validate_spec(const std::string& json_text);
GroupSpec load_spec_file(const std::string& path);

// Certificate for a Presented-backend equality: W =_F prod f_i^-1 R_i f_i.
struct TrivialityCertificate {
  struct Step {
    NormalForm conjugator;
    Word relator;
  };
  std::vector<Step> steps;
  std::size_t area() const { return steps.size(); }
};

// Verify a certificate against w by direct evaluation in F.
bool certificate_valid(const GroupSpec& spec, const NormalForm& w,
                       const TrivialityCertificate& cert);

struct EqualBudget {
  std::size_t max_area = 64;         // certificate length cap
  std::size_t node_budget = 300000;  // search-state cap
};

struct EqualResult {
  Tri verdict = Tri::Unknown;
  std::optional<TrivialityCertificate> certificate;
};

// Tri-valued equality.  FreeProduct never returns Unknown.  Presented: Yes
// needs a certificate found within budget, No needs a separating
// abelianization image, otherwise Unknown.
EqualResult equal(const GroupSpec& spec, const NormalForm& a, const NormalForm& b,
                  const EqualBudget& budget = {});

// Best-first certificate search for w =_G 1 (Presented backend).
std::optional<TrivialityCertificate> find_triviality_certificate(
    const GroupSpec& spec, const NormalForm& w, const EqualBudget& budget);

namespace detail {

// Integer row echelon; pivots are sought in the first `pivot_cols` columns,
// row operations run across the whole row (extra columns ride along).
std::vector<std::vector<BigInt>> integer_echelon(std::vector<std::vector<BigInt>> rows,
                                                 std::size_t pivot_cols);

// Reduce v by echelon rows on the pivot range; true iff the pivot-range
// coordinates vanish afterwards (v is then overwritten with the remainder).
bool echelon_reduce(const std::vector<std::vector<BigInt>>& echelon, std::vector<BigInt>& v,
                    std::size_t pivot_cols);

}  // namespace detail

}  // namespace relhyp

#endif
