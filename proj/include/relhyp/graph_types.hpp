#ifndef RELHYP_GRAPH_TYPES_HPP
#define RELHYP_GRAPH_TYPES_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "relhyp/algebra.hpp"

namespace relhyp {

// Cone vertex v(gH), named by the factor and a canonical coset key.
struct ConeRef {
  int32_t factor;
  NormalForm key;
  bool operator==(const ConeRef&) const = default;
};

using Vertex = std::variant<NormalForm, ConeRef>;

inline bool is_group_vertex(const Vertex& v) { return std::holds_alternative<NormalForm>(v); }
inline const NormalForm& group_of(const Vertex& v) { return std::get<NormalForm>(v); }
inline const ConeRef& cone_of(const Vertex& v) { return std::get<ConeRef>(v); }

struct ConeUp {
  int32_t factor;
  bool operator==(const ConeUp&) const = default;
};
struct ConeDown {
  int32_t factor;
  bool operator==(const ConeDown&) const = default;
};

using EdgeLabel = std::variant<Letter, ConeUp, ConeDown>;

struct EdgeStep {
  Vertex from;
  EdgeLabel label;
  Vertex to;
  bool operator==(const EdgeStep&) const = default;
};

// A path is a matched sequence of edges; `origin` carries the base point of
// the empty path.
struct Path {
  Vertex origin;
  std::vector<EdgeStep> steps;

  std::size_t length() const { return steps.size(); }
  const Vertex& source() const { return steps.empty() ? origin : steps.front().from; }
  const Vertex& target() const { return steps.empty() ? origin : steps.back().to; }
};

// Identity key for visited sets: group vertices by element class, cone
// vertices by (factor, coset class).
struct VertexKey {
  int32_t cone_factor = -1;  // -1 for group vertices
  int64_t id = 0;
  bool operator==(const VertexKey&) const = default;
};

struct VertexKeyHash {
  std::size_t operator()(const VertexKey& k) const {
    return std::hash<int64_t>()(k.id * 4 + k.cone_factor + 2);
  }
};

std::string serialize_vertex(const GroupSpec& spec, const Vertex& v);
std::string serialize_edge_label(const GroupSpec& spec, const EdgeLabel& l);

}  // namespace relhyp

#endif
