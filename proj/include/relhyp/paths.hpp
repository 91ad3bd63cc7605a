#ifndef RELHYP_PATHS_HPP
#define RELHYP_PATHS_HPP

#include <optional>
#include <utility>

#include "relhyp/graphs.hpp"

namespace relhyp {

// H-component of a relative path: a maximal subpath labeled by letters of one
// factor.  For cycles the component may wrap around the base point.
struct HComponent {
  int32_t factor = 0;
  std::size_t start = 0;  // first edge index
  std::size_t len = 0;
  bool wrapped = false;
  NormalForm from;  // q-
  NormalForm to;    // q+
  CosetId coset = 0;
};

struct ComponentDecomposition {
  std::vector<HComponent> components;
  std::vector<std::size_t> phase_positions;        // vertex positions along the path
  std::vector<VertexKey> phase_vertices;           // the set of phase vertices
  std::vector<std::pair<std::size_t, std::size_t>> connected_pairs;
  bool cyclic = false;

  bool isolated(std::size_t i) const;
  bool locally_minimal() const;
  bool backtracking_free() const;
};

struct PathClass {
  bool is_cycle = false;
  bool is_arc = false;
  bool is_circuit = false;
  bool locally_minimal = false;
  bool backtracking_free = false;
};

// Penetration structure of a coned path of cone-biedges and X-edges.
struct Penetration {
  int32_t factor = 0;
  NormalForm coset_key;
  CosetId coset = 0;
  std::size_t start = 0;  // first edge index of the penetrating subpath
  std::size_t len = 0;    // edge count (even: cone-biedges)
  bool wrapped = false;
};

struct PenetrationRecord {
  std::vector<Penetration> penetrations;
  bool backtracking = false;  // some coset penetrated twice or more
  bool locally_minimal() const;
};

// Construction and validation.
Path make_path(const GraphOracle& o, const Vertex& origin, const std::vector<EdgeLabel>& labels);
Path path_of_word(const GraphOracle& o, const Vertex& origin, const Word& w);
Path parse_path(const GraphOracle& o, const Vertex& origin, const std::string& literal);
std::string path_literal(const GraphOracle& o, const Path& p);
Path inverse_path(const GraphOracle& o, const Path& p);
bool edges_inverse(const GraphOracle& o, const EdgeStep& a, const EdgeStep& b);
Vertex path_vertex(const Path& p, std::size_t position);

// The path calculus over the relative graph.
ComponentDecomposition decompose(const GraphOracle& o, const Path& p,
                                 std::optional<bool> cyclic = std::nullopt);
PathClass classify(const GraphOracle& o, const Path& p, std::optional<bool> cyclic = std::nullopt);

// pi: relative path -> coned path (H-edges become cone-biedges).
Path pi(const GraphOracle& coned, const Path& p);
// lift: coned path of biedges and X-edges -> the unique relative preimage.
Path lift(const GraphOracle& relative, const Path& q);

PenetrationRecord penetrations(const GraphOracle& o, const Path& q,
                               std::optional<bool> cyclic = std::nullopt);

// Connectivity of H-components across two paths (the coset condition).
std::vector<std::pair<std::size_t, std::size_t>> connected_across(
    const GraphOracle& o, const ComponentDecomposition& dp, const ComponentDecomposition& dq);

struct QuasigeodesicReport {
  Tri verdict = Tri::Unknown;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // offending subpath [i, j)
};

QuasigeodesicReport is_quasigeodesic(const GraphOracle& metric, const Path& p, double mu, double c,
                                     std::size_t cap, bool cyclic = false);

bool k_similar(const GraphOracle& metric, const Path& p, const Path& q, std::size_t k,
               std::size_t cap);

}  // namespace relhyp

#endif
