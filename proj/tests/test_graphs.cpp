#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "relhyp/graphs.hpp"

using namespace relhyp;

namespace {

Vertex one() { return Vertex{nf_identity()}; }

Vertex elem(const GroupSpec& spec, const std::string& lit) {
  return Vertex{evaluate(spec, parse_word(spec, lit))};
}

}  // namespace

TEST_CASE("relative neighbors of 1 in Z/2 * Z/3") {
  GroupSpec spec = oracles::load("z2z3.json");
  EqualityContext ctx(spec);
  GraphOracle rel(spec, ctx, {GraphKind::Relative, 3});
  auto ns = rel.neighbors(one());
  REQUIRE(ns.size() == 3);
  std::vector<std::string> got;
  for (const auto& e : ns) got.push_back(serialize_vertex(spec, e.to));
  CHECK(got == std::vector<std::string>{"A:a", "B:b", "B:b2"});
}

TEST_CASE("coned neighbors of 1 are the two cone vertices") {
  GroupSpec spec = oracles::load("z2z3.json");
  EqualityContext ctx(spec);
  GraphOracle coned(spec, ctx, {GraphKind::Coned, 3});
  auto ns = coned.neighbors(one());
  REQUIRE(ns.size() == 2);
  CHECK(serialize_vertex(spec, ns[0].to) == "1~A");
  CHECK(serialize_vertex(spec, ns[1].to) == "1~B");
}

TEST_CASE("truncated Z-factor neighbors") {
  GroupSpec spec = oracles::load("fa_rel_a.json");
  EqualityContext ctx(spec);
  GraphOracle rel(spec, ctx, {GraphKind::Relative, 2});
  auto ns = rel.neighbors(one());
  std::vector<std::string> got;
  for (const auto& e : ns) got.push_back(serialize_vertex(spec, e.to));
  std::sort(got.begin(), got.end());
  std::vector<std::string> want{"A:-1", "A:-2", "A:1", "A:2", "b", "B"};
  std::sort(want.begin(), want.end());
  CHECK(got == want);
  // degree formula: |X letters| + 2M per Z factor
  CHECK(ns.size() == 2 + 2 * 2);
}

TEST_CASE("plain graph rejects cone vertices") {
  GroupSpec spec = oracles::load("z2z3.json");
  EqualityContext ctx(spec);
  GraphOracle plain(spec, ctx, {GraphKind::Plain, 3});
  GraphOracle coned(spec, ctx, {GraphKind::Coned, 3});
  Vertex cone = coned.neighbors(one())[0].to;
  CHECK_THROWS_AS(plain.neighbors(cone), Error);
}

TEST_CASE("distances in the relative and coned graphs") {
  GroupSpec spec = oracles::load("z2z3.json");
  EqualityContext ctx(spec);
  GraphOracle rel(spec, ctx, {GraphKind::Relative, 3});
  GraphOracle coned(spec, ctx, {GraphKind::Coned, 3});
  Vertex abab = elem(spec, "a.b.a.b");
  CHECK(distance(rel, one(), abab, 10) == 4);
  CHECK(distance(coned, one(), abab, 10) == 8);
  CHECK(distance(rel, one(), one(), 0) == 0);
  CHECK(distance(rel, one(), abab, 3) == std::nullopt);
}

TEST_CASE("geodesic enumeration") {
  GroupSpec z2z3 = oracles::load("z2z3.json");
  EqualityContext ctx(z2z3);
  GraphOracle rel(z2z3, ctx, {GraphKind::Relative, 3});
  auto unique_geo = geodesics(rel, one(), elem(z2z3, "a.b.a.b"), 8, 100);
  CHECK(unique_geo.paths.size() == 1);
  CHECK(!unique_geo.truncated);
  CHECK(unique_geo.paths[0].length() == 4);

  // taxicab square in plain Z^2
  GroupSpec z2 = oracles::load("z2_plain.json");
  EqualityContext ctx2(z2);
  GraphOracle plain(z2, ctx2, {GraphKind::Plain, 3});
  auto two = geodesics(plain, one(), elem(z2, "x.t"), 4, 100);
  CHECK(two.paths.size() == 2);
  // deterministic lexicographic order: t.x before x.t
  CHECK(serialize_edge_label(z2, two.paths[0].steps[0].label) == "t");
  CHECK(serialize_edge_label(z2, two.paths[1].steps[0].label) == "x");

  auto self = geodesics(plain, one(), one(), 2, 10);
  CHECK(self.paths.size() == 1);
  CHECK(self.paths[0].length() == 0);
}

TEST_CASE("balls: size, dump format, interior closure") {
  GroupSpec spec = oracles::load("z2z3.json");
  EqualityContext ctx(spec);
  GraphOracle rel(spec, ctx, {GraphKind::Relative, 3});
  Ball b0 = ball(rel, one(), 0);
  CHECK(b0.vertices.size() == 1);
  Ball b2 = ball(rel, one(), 2);
  CHECK(b2.vertices.size() == 8);  // spheres 1, 3, 4
  Ball b3 = ball(rel, one(), 3);
  CHECK(b3.vertices.size() == 14);
  std::string dump = dump_ball(spec, b2);
  CHECK(dump.substr(0, 6) == "1\t0\t-\n");
  CHECK(dump.find("A:a\t1\tA:a") != std::string::npos);

  // ball invariant: all neighbors of interior vertices are present
  for (std::size_t i = 0; i < b3.vertices.size(); ++i) {
    if (b3.dist[i] >= 3) continue;
    for (const auto& e : rel.neighbors(b3.vertices[i])) CHECK(b3.contains(rel.key(e.to)));
  }
}

TEST_CASE("increasing the truncation M never increases distances") {
  GroupSpec spec = oracles::load("fa_rel_a.json");
  EqualityContext ctx(spec);
  GraphOracle rel2(spec, ctx, {GraphKind::Relative, 2});
  GraphOracle rel4(spec, ctx, {GraphKind::Relative, 4});
  Ball b = ball(rel2, one(), 3);
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    auto d = distance(rel4, one(), b.vertices[i], 3);
    REQUIRE(d.has_value());
    CHECK(*d <= b.dist[i]);
  }
}

TEST_CASE("metric properties on sampled pairs and triples") {
  GroupSpec spec = oracles::load("z2z3.json");
  EqualityContext ctx(spec);
  GraphOracle rel(spec, ctx, {GraphKind::Relative, 3});
  Ball b = ball(rel, one(), 3);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, b.vertices.size() - 1);
  for (int trial = 0; trial < 25; ++trial) {
    Vertex u = b.vertices[pick(rng)], v = b.vertices[pick(rng)], w = b.vertices[pick(rng)];
    auto duv = distance(rel, u, v, 12), dvu = distance(rel, v, u, 12);
    auto dvw = distance(rel, v, w, 12), duw = distance(rel, u, w, 12);
    REQUIRE(duv.has_value());
    CHECK(*duv == *dvu);
    CHECK(*duw <= *duv + *dvw);
  }
}

TEST_CASE("the (2,0) dictionary bounds hold on radius-5 balls") {
  for (const char* name : {"z2z3.json", "fa_rel_a.json"}) {
    GroupSpec spec = oracles::load(name);
    EqualityContext ctx(spec);
    // enumerate the ball at M = 2, then measure both metrics at the escalated
    // truncation M = 10 >= the largest exponent reachable in that ball
    GraphOracle rel(spec, ctx, {GraphKind::Relative, 2});
    GraphOracle rel_esc(spec, ctx, {GraphKind::Relative, 10});
    GraphOracle coned(spec, ctx, {GraphKind::Coned, 10});
    Ball b = ball(rel, one(), 5);
    Ball rel_ball = ball(rel_esc, one(), 5);
    Ball coned_ball = ball(coned, one(), 10);
    for (std::size_t i = 0; i < b.vertices.size(); ++i) {
      auto dhat = coned_ball.distance_of(coned.key(b.vertices[i]));
      auto drel = rel_ball.distance_of(rel_esc.key(b.vertices[i]));
      REQUIRE(dhat.has_value());
      REQUIRE(drel.has_value());
      CHECK(2 * (*dhat) >= *drel);
      CHECK(*dhat <= 2 * (*drel));
    }
  }
}

TEST_CASE("coned inclusion into an enlarged system is an affine quasi-isometry") {
  GroupSpec small = oracles::load("z2z3.json");
  GroupSpec big = oracles::load("z2z3_xab.json");
  EqualityContext ctx_small(small);
  EqualityContext ctx_big(big);
  GraphOracle coned_small(small, ctx_small, {GraphKind::Coned, 3});
  GraphOracle coned_big(big, ctx_big, {GraphKind::Coned, 3});
  // a = max over the added generators of d-hat in the small graph
  Vertex ab_small = elem(small, "a.b");
  auto a_bound = distance(coned_small, one(), ab_small, 10);
  REQUIRE(a_bound.has_value());
  CHECK(*a_bound == 4);
  Ball b = ball(coned_small, one(), 6);
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    if (!is_group_vertex(b.vertices[i])) continue;
    Vertex v_big = Vertex{group_of(b.vertices[i])};
    auto d_big = distance(coned_big, one(), v_big, 12);
    REQUIRE(d_big.has_value());
    CHECK(*d_big <= b.dist[i]);               // more edges never lengthen
    CHECK(b.dist[i] <= *a_bound * (*d_big));  // affine comparison bound
  }
}

TEST_CASE("presented backend: Z^2 rel <x> oracles") {
  GroupSpec z2 = oracles::load("z2_rel_x.json");
  EqualityContext ctx(z2);
  GraphOracle rel(z2, ctx, {GraphKind::Relative, 2});
  auto ns = rel.neighbors(one());
  // x, X, t, T and P:±1, P:±2
  CHECK(ns.size() == 8);
  Ball b = ball(rel, one(), 2);
  // registry-based identity: x.t and t.x collapse to one vertex
  auto k1 = rel.key(elem(z2, "x.t"));
  auto k2 = rel.key(elem(z2, "t.x"));
  CHECK(k1 == k2);
  CHECK(b.contains(k1));

  GraphOracle coned(z2, ctx, {GraphKind::Coned, 2});
  auto cn = coned.neighbors(one());
  REQUIRE(cn.size() == 5);  // 4 X-edges + 1 cone edge
  // the cone over <x> has coset members x^k, |k| <= 2, including 1
  Vertex cone = cn.back().to;
  CHECK(!is_group_vertex(cone));
  auto members = coned.neighbors(cone);
  CHECK(members.size() == 5);
  // t<x> and <x> are different cones
  auto kc1 = coned.key(cone);
  ConeRef c2{0, ctx.coset_key(0, evaluate(z2, parse_word(z2, "t")))};
  auto kc2 = coned.key(Vertex{c2});
  CHECK(!(kc1 == kc2));
  // x<x> equals <x>
  ConeRef c3{0, ctx.coset_key(0, evaluate(z2, parse_word(z2, "x")))};
  CHECK(coned.key(Vertex{c3}) == kc1);
}
