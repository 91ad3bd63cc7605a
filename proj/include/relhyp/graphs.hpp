#ifndef RELHYP_GRAPHS_HPP
#define RELHYP_GRAPHS_HPP

#include <functional>
#include <optional>
#include <unordered_map>

#include "relhyp/equality.hpp"
#include "relhyp/graph_types.hpp"

namespace relhyp {

enum class GraphKind { Plain, Relative, Coned };

struct OracleConfig {
  GraphKind kind = GraphKind::Relative;
  // Z-factor letters are emitted as single edges only up to this exponent.
  BigInt trunc_m = 3;
  std::size_t max_vertices = 2000000;
};

// Lazy adjacency oracle for Γ(G,X), Γ̄(G,H,X) and Γ̂(G,H,X).  Oracles may
// also carry a custom generating system (a list of labeled group elements)
// in place of the spec's X; this serves d_Y metrics and induced subgraphs.
class GraphOracle {
 public:
  GraphOracle(const GroupSpec& spec, EqualityContext& ctx, OracleConfig cfg);

  const GroupSpec& spec() const { return *spec_; }
  EqualityContext& ctx() const { return *ctx_; }
  const OracleConfig& config() const { return cfg_; }

  // Replace the X system by explicit generators (labels must be distinct).
  void set_system(std::vector<std::pair<Letter, NormalForm>> system);
  // Restrict factor letters / cones to a subset of the factors.
  void set_factors(std::vector<int32_t> factors);

  std::vector<EdgeStep> neighbors(const Vertex& v) const;
  VertexKey key(const Vertex& v) const;
  Vertex target_of(const Vertex& from, const EdgeLabel& label) const;
  EdgeStep reverse(const EdgeStep& e) const;

 private:
  const GroupSpec* spec_;
  EqualityContext* ctx_;
  OracleConfig cfg_;
  std::optional<std::vector<std::pair<Letter, NormalForm>>> system_;
  std::vector<int32_t> factors_;

  void push_sorted(std::vector<EdgeStep>& out) const;
};

struct Ball {
  Vertex center;
  std::size_t radius = 0;
  std::vector<Vertex> vertices;  // BFS discovery order
  std::vector<std::size_t> dist;
  std::vector<int64_t> parent;                      // index into vertices; -1 at the center
  std::vector<std::optional<EdgeLabel>> parent_edge;
  std::unordered_map<VertexKey, std::size_t, VertexKeyHash> index;

  bool contains(const VertexKey& k) const { return index.contains(k); }
  std::optional<std::size_t> distance_of(const VertexKey& k) const {
    auto it = index.find(k);
    if (it == index.end()) return std::nullopt;
    return dist[it->second];
  }
};

Ball ball(const GraphOracle& o, const Vertex& center, std::size_t radius);
std::string dump_ball(const GroupSpec& spec, const Ball& b);

// Exact BFS distance if <= cap, nullopt otherwise (the NotWithinCap value).
std::optional<std::size_t> distance(const GraphOracle& o, const Vertex& u, const Vertex& v,
                                    std::size_t cap);

struct GeodesicResult {
  std::vector<Path> paths;  // lexicographic by serialized edge labels
  bool truncated = false;
};

// All geodesics between u and v, deterministic order, up to max_count.
GeodesicResult geodesics(const GraphOracle& o, const Vertex& u, const Vertex& v, std::size_t cap,
                         std::size_t max_count);

}  // namespace relhyp

#endif
