#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "relhyp/paths.hpp"

using namespace relhyp;

namespace {

struct Fixture {
  GroupSpec spec;
  EqualityContext ctx;
  GraphOracle rel;
  GraphOracle coned;
  explicit Fixture(const std::string& name, BigInt m = 3)
      : spec(oracles::load(name)),
        ctx(spec),
        rel(spec, ctx, {GraphKind::Relative, m}),
        coned(spec, ctx, {GraphKind::Coned, m}) {}
  Path path(const std::string& lit) { return parse_path(rel, Vertex{nf_identity()}, lit); }
  Path coned_path(const std::string& lit) { return parse_path(coned, Vertex{nf_identity()}, lit); }
};

}  // namespace

TEST_CASE("decompose: alternating factors give singleton isolated components") {
  Fixture f("z2z3.json");
  auto d = decompose(f.rel, f.path("a.b.a"));
  REQUIRE(d.components.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(d.components[i].len == 1);
    CHECK(d.isolated(i));
  }
  CHECK(d.phase_vertices.size() == 4);
  CHECK(d.locally_minimal());
  CHECK(d.backtracking_free());
}

TEST_CASE("decompose: a run of B-edges is one component") {
  Fixture f("z2z3.json");
  auto d = decompose(f.rel, f.path("b.b"));
  REQUIRE(d.components.size() == 1);
  CHECK(d.components[0].len == 2);
  CHECK(!d.locally_minimal());
}

TEST_CASE("decompose: cycle a.b.b2.a with equal component endpoints") {
  Fixture f("z2z3.json");
  Path p = f.path("a.b.b2.a");
  CHECK(f.rel.key(p.target()) == f.rel.key(p.source()));
  auto d = decompose(f.rel, p);
  // the B-run is a single component from a to a; the two A-edges merge
  // around the base point under the cyclic convention
  REQUIRE(d.components.size() == 2);
  bool found_b = false;
  for (const auto& c : d.components) {
    if (f.spec.factor(c.factor).id == "B") {
      found_b = true;
      CHECK(c.len == 2);
      CHECK(serialize(f.spec, c.from) == "A:a");
      CHECK(serialize(f.spec, c.to) == "A:a");
    } else {
      CHECK(c.wrapped);
    }
  }
  CHECK(found_b);
}

TEST_CASE("classify examples") {
  Fixture f("z2z3.json");
  auto abab = classify(f.rel, f.path("a.b.a.b"));
  CHECK(abab.is_arc);
  CHECK(abab.locally_minimal);
  CHECK(abab.backtracking_free);
  CHECK(!abab.is_cycle);

  // (ab)^3 is nontrivial, so not a cycle
  auto sixth = classify(f.rel, f.path("a.b.a.b.a.b"));
  CHECK(!sixth.is_cycle);
  CHECK(sixth.is_arc);

  // b.b2 is a cycle but e2 = e1^-1 blocks the circuit
  Path bb2 = f.path("b.b2");
  auto cls = classify(f.rel, bb2);
  CHECK(cls.is_cycle);
  CHECK(!cls.is_circuit);
  CHECK(edges_inverse(f.rel, bb2.steps[0], bb2.steps[1]));

  // a length-3 witness circuit in the X = {ab} system
  Fixture g("z2z3_xab.json");
  auto circ = classify(g.rel, parse_path(g.rel, Vertex{nf_identity()}, "c.b2.a"));
  CHECK(circ.is_cycle);
  CHECK(circ.is_circuit);
}

TEST_CASE("pi: lengths and cone structure") {
  Fixture f("z2z3.json");
  Path one_edge = f.path("a");
  Path image = pi(f.coned, one_edge);
  REQUIRE(image.length() == 2);
  CHECK(serialize_vertex(f.spec, image.steps[0].to) == "1~A");
  CHECK(serialize_vertex(f.spec, image.steps[1].to) == "A:a");

  Path aba = pi(f.coned, f.path("a.b.a"));
  CHECK(aba.length() == 6);
  // cones visited: A, aB, abA
  CHECK(serialize_vertex(f.spec, aba.steps[0].to) == "1~A");
  CHECK(serialize_vertex(f.spec, aba.steps[2].to) == "A:a~B");
  CHECK(serialize_vertex(f.spec, aba.steps[4].to) == "A:a.B:b~A");

  // X-only paths are unchanged
  Fixture z("z2_rel_x.json");
  Path xt = parse_path(z.coned, Vertex{nf_identity()}, "x.t");
  CHECK(pi(z.coned, xt).steps == xt.steps);

  // l(pi(p)) = #X-edges + 2 #H-edges
  Path mixed = parse_path(z.rel, Vertex{nf_identity()}, "x.P:2.t.P:-1");
  CHECK(pi(z.coned, mixed).length() == 2 + 2 * 2);
}

TEST_CASE("lift: inverse of pi, biedge extraction, error cases") {
  Fixture f("z2z3.json");
  Path p = f.path("a.b.b2.a");
  Path hat = pi(f.coned, p);
  Path back = lift(f.rel, hat);
  CHECK(back.steps == p.steps);

  Path biedge = f.coned_path("~A:a");
  Path lifted = lift(f.rel, biedge);
  REQUIRE(lifted.length() == 1);
  CHECK(serialize_edge_label(f.spec, lifted.steps[0].label) == "A:a");

  // zero biedge: both cone edges return to the same vertex
  Path zero = f.coned_path("~A:0");
  try {
    lift(f.rel, zero);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::ZeroBiedge);
  }
  // dangling cone edge
  Path dangling = f.coned_path("~A");
  CHECK_THROWS_AS(lift(f.rel, dangling), Error);
}

TEST_CASE("pi and lift are mutually inverse on sampled short paths") {
  Fixture f("z2z3.json");
  std::mt19937_64 rng(11);
  Ball b = ball(f.rel, Vertex{nf_identity()}, 3);
  std::uniform_int_distribution<std::size_t> pick(0, b.vertices.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    Vertex origin = b.vertices[pick(rng)];
    Path p{origin, {}};
    Vertex cur = origin;
    std::uniform_int_distribution<int> len(0, 5);
    int l = len(rng);
    for (int i = 0; i < l; ++i) {
      auto ns = f.rel.neighbors(cur);
      std::uniform_int_distribution<std::size_t> e(0, ns.size() - 1);
      p.steps.push_back(ns[e(rng)]);
      cur = p.steps.back().to;
    }
    Path hat = pi(f.coned, p);
    CHECK(lift(f.rel, hat).steps == p.steps);
  }
}

TEST_CASE("penetrations: once-per-coset paths and a backtracking witness") {
  Fixture f("z2z3.json");
  auto rec = penetrations(f.coned, pi(f.coned, f.path("a.b.a")));
  REQUIRE(rec.penetrations.size() == 3);
  CHECK(!rec.backtracking);
  CHECK(rec.locally_minimal());

  // X-only path: empty record
  Fixture z("z2_rel_x.json");
  auto empty = penetrations(z.coned, parse_path(z.coned, Vertex{nf_identity()}, "x.t"));
  CHECK(empty.penetrations.empty());
  CHECK(!empty.backtracking);

  // x.t.x.t^-1.x revisits the coset <x> after leaving it
  Path w = parse_path(z.rel, Vertex{nf_identity()}, "P:1.t.P:1.T.P:1");
  auto back = penetrations(z.coned, pi(z.coned, w));
  REQUIRE(back.penetrations.size() == 3);
  CHECK(back.backtracking);
  CHECK(back.penetrations[0].coset == back.penetrations[2].coset);
  CHECK(back.penetrations[0].coset != back.penetrations[1].coset);
}

TEST_CASE("quasigeodesic checks") {
  Fixture f("z2z3.json");
  // geodesics are (1,0)-quasigeodesics
  auto geos = geodesics(f.rel, Vertex{nf_identity()},
                        Vertex{evaluate(f.spec, parse_word(f.spec, "a.b.a"))}, 6, 10);
  REQUIRE(!geos.paths.empty());
  auto rep = is_quasigeodesic(f.rel, geos.paths[0], 1.0, 0.0, 10);
  CHECK(rep.verdict == Tri::Yes);

  // the b.b2 loop fails (1,0) with the whole path as witness
  auto loop = is_quasigeodesic(f.rel, f.path("b.b2"), 1.0, 0.0, 10);
  CHECK(loop.verdict == Tri::No);
  REQUIRE(loop.witness.has_value());
  CHECK(*loop.witness == std::pair<std::size_t, std::size_t>{0, 2});

  auto arc = is_quasigeodesic(f.rel, f.path("a.b.a.b"), 1.0, 0.0, 10);
  CHECK(arc.verdict == Tri::Yes);
}

TEST_CASE("k-similarity") {
  Fixture z("z2_rel_x.json");
  EqualityContext ctx(z.spec);
  GraphOracle plain(z.spec, ctx, {GraphKind::Plain, 3});
  Path p = parse_path(z.rel, Vertex{nf_identity()}, "P:2.t");
  Path q = parse_path(z.rel, Vertex{nf_identity()}, "t.P:2");
  CHECK(k_similar(plain, p, p, 0, 5));
  CHECK(k_similar(plain, p, q, 0, 8));  // same endpoints in G
  Path shifted = parse_path(z.rel, Vertex{evaluate(z.spec, parse_word(z.spec, "x"))}, "t.P:2");
  CHECK(k_similar(plain, p, shifted, 1, 8));

  // plain graph over an empty X system: distinct elements are disconnected
  Fixture f("z2z3.json");
  EqualityContext ctx2(f.spec);
  GraphOracle nox(f.spec, ctx2, {GraphKind::Plain, 3});
  Path pa = f.path("a");
  try {
    k_similar(nox, pa, f.path("b"), 10, 10);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::NotWithinCap);
  }
}

TEST_CASE("dictionary (iii): exhaustive equivalences on short paths") {
  // smaller-scale version of the acceptance criterion: length <= 3 paths
  // from radius-2 ball vertices in both instances
  for (const char* name : {"z2z3.json", "z2_rel_x.json"}) {
    Fixture f(name, 2);
    Ball b = ball(f.rel, Vertex{nf_identity()}, 2);
    for (std::size_t vi = 0; vi < b.vertices.size(); ++vi) {
      std::vector<Path> stack{Path{b.vertices[vi], {}}};
      while (!stack.empty()) {
        Path p = std::move(stack.back());
        stack.pop_back();
        if (p.length() > 0) {
          Path hat = pi(f.coned, p);
          CHECK(lift(f.rel, hat).steps == p.steps);
          auto dp = decompose(f.rel, p);
          auto pens = penetrations(f.coned, hat);
          // (a) components <-> penetrating subpaths, coset by coset
          REQUIRE(dp.components.size() == pens.penetrations.size());
          for (std::size_t i = 0; i < dp.components.size(); ++i) {
            CHECK(dp.components[i].factor == pens.penetrations[i].factor);
            CHECK(dp.components[i].coset == pens.penetrations[i].coset);
            CHECK(2 * dp.components[i].len == pens.penetrations[i].len);
          }
          // (b) local minimality, (c) backtracking
          CHECK(dp.locally_minimal() == pens.locally_minimal());
          CHECK(dp.backtracking_free() == !pens.backtracking);
          // (d) locally minimal circuit without backtracking <-> circuit
          auto cp = classify(f.rel, p);
          auto chat = classify(f.coned, hat);
          CHECK((cp.is_circuit && cp.locally_minimal && cp.backtracking_free) ==
                chat.is_circuit);
          CHECK((cp.is_arc && cp.locally_minimal && cp.backtracking_free) == chat.is_arc);
        }
        if (p.length() == 3) continue;
        for (const auto& e : f.rel.neighbors(p.length() ? p.target() : p.origin)) {
          Path q = p;
          q.steps.push_back(e);
          stack.push_back(std::move(q));
        }
      }
    }
  }
}

TEST_CASE("path literals round-trip") {
  Fixture f("z2z3.json");
  Path p = f.path("a.b.a");
  CHECK(path_literal(f.rel, p) == "A:a.B:b.A:a");
  Path hat = pi(f.coned, p);
  std::string lit = path_literal(f.coned, hat);
  CHECK(lit == "~A:a.~B:b.~A:a");
  Path reparsed = parse_path(f.coned, Vertex{nf_identity()}, lit);
  CHECK(reparsed.steps == hat.steps);
}
