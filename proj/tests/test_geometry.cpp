// test_geometry.cpp — charts, base change, reduced structure, R1,
// p-th-root closure, inseparability degree.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "insep/geometry.hpp"

using namespace insep;

namespace {

SchemeDesc hypersurface(uint32_t p, std::vector<std::string> params,
                        std::vector<int> levels,
                        std::vector<std::string> vars,
                        const std::string& eqn) {
  TowerField K{p, std::move(params), std::move(levels)};
  SchemeDesc X;
  X.ring = make_ring(K, {{"x", std::move(vars)}});
  X.gens = {mp_parse(X.ring, eqn)};
  X.complete_intersection = true;
  validate_scheme(X);
  return X;
}

}  // namespace

TEST_CASE("charts dehomogenise and homogenisation inverts") {
  SchemeDesc X = hypersurface(2, {"s", "t"}, {0, 0}, {"x", "y", "z"},
                              "s*x^4 + t^2*y^4 + z^4");
  auto choices = all_chart_choices(X);
  CHECK(choices.size() == 3);
  Chart ch = make_chart(X, {2});  // z != 0
  CHECK(ch.label == "(z!=0)");
  REQUIRE(ch.ideal.gens.size() == 1);
  MultiPoly back = mp_homogenize(ch.ideal.gens[0], X, ch.chosen);
  CHECK(mp_equal(back, X.gens[0]));
  CHECK(ch.ring->nvars() == 2);
}

TEST_CASE("base change transports generators and clears certificates") {
  SchemeDesc X = hypersurface(2, {"s", "t"}, {0, 0}, {"x", "y", "z"},
                              "s*x^4 + t^2*y^4 + z^4");
  X.reduced_certified = true;
  BaseChangeSpec bc{{0, 0}, {1, 1}};
  CHECK(bc.degree_log() == 2);
  SchemeDesc Z = base_change(X, bc);
  CHECK(Z.ring->field.levels == std::vector<int>{1, 1});
  CHECK(!Z.reduced_certified);
  CHECK(mp_equal(Z.gens[0], mp_parse(Z.ring, "s*x^4 + t^2*y^4 + z^4")));
  CHECK_THROWS_AS(base_change(X, BaseChangeSpec{{0, 0}, {2, 0}}),
                  std::invalid_argument);
}

TEST_CASE("squarefree part strips repeated and p-power factors") {
  TowerField K{3, {"s"}, {0}};
  auto r = make_ring(K, {{"A", {"x", "y", "z"}, false}});
  MultiPoly a = mp_parse(r, "x + y");
  MultiPoly b = mp_parse(r, "x + z");
  MultiPoly f = mp_mul(mp_mul(a, a), b);
  CHECK(mp_proportional(mp_squarefree_part(f), mp_mul(a, b)));
  // pure cube: all derivatives vanish, root recursion kicks in
  MultiPoly c3 = mp_pow(a, 3);
  CHECK(mp_proportional(mp_squarefree_part(c3), a));
  // p-power times squarefree cofactor
  MultiPoly mix = mp_mul(mp_pow(a, 3), b);
  CHECK(mp_proportional(mp_squarefree_part(mix), mp_mul(a, b)));
  CHECK(mp_proportional(mp_squarefree_part(b), b));
}

TEST_CASE("reduce_structure extracts coefficient roots after base change") {
  SchemeDesc X = hypersurface(2, {"s", "t"}, {0, 0}, {"x", "y", "z"},
                              "s*x^4 + t^2*y^4 + z^4");
  SchemeDesc XL = base_change(X, BaseChangeSpec{{0, 0}, {1, 1}});
  ReduceResult rr = reduce_structure(XL);
  CHECK(rr.changed);
  CHECK(rr.certified);
  CHECK(rr.root_drops == std::vector<int>{1});
  REQUIRE(rr.scheme.gens.size() == 1);
  MultiPoly expect =
      mp_parse(rr.scheme.ring, "s^(1/2)*x^2 + t*y^2 + z^2");
  CHECK(mp_proportional(rr.scheme.gens[0], expect));
  CHECK(rr.scheme.reduced_certified);
  CHECK(rr.scheme.complete_intersection);
  // idempotence
  ReduceResult rr2 = reduce_structure(rr.scheme);
  CHECK(!rr2.changed);
}

TEST_CASE("frobenius witnesses find combination p-th powers") {
  TowerField K{2, {}, {}};
  auto r = make_ring(K, {{"P", {"x", "y"}}});
  // (x^2 + y^2) = (x + y)^2 in char 2
  IdealHandle I = make_ideal(r, {mp_parse(r, "x^2 + y^2")});
  auto wit = frobenius_radical_witnesses(I, 2);
  REQUIRE(!wit.empty());
  bool found = false;
  for (const auto& h : wit)
    if (mp_proportional(h, mp_parse(r, "x + y"))) found = true;
  CHECK(found);
  // a radical monomial ideal yields none
  IdealHandle J = make_ideal(r, {mp_parse(r, "x*y")});
  CHECK(frobenius_radical_witnesses(J, 3).empty());
}

TEST_CASE("diagonal hypersurface family: reduction, R1, closure") {
  // coefficients s0, s1 and the constant 1; base change raises both
  for (uint32_t p : {2u, 3u}) {
    for (int m : {1, 2}) {
      int q = 1;
      for (int i = 0; i < m; ++i) q *= static_cast<int>(p);
      std::string eqn = "s0*x0^" + std::to_string(q) + " + s1*x1^" +
                        std::to_string(q) + " + x2^" + std::to_string(q);
      SchemeDesc X = hypersurface(p, {"s0", "s1"}, {0, 0}, {"x0", "x1", "x2"},
                                  eqn);
      SchemeDesc XL = base_change(X, BaseChangeSpec{{0, 0}, {1, 1}});
      ReduceResult rr = reduce_structure(XL);
      CHECK(rr.changed);
      CHECK(rr.root_drops == std::vector<int>{1});
      CHECK(rr.scheme.gens[0].total_degree() == q / static_cast<int>(p));
      R1Result r1 = r1_test(rr.scheme);
      CHECK(r1.certified);
      CHECK(r1.primes.empty());
      ClosureResult cl = pth_root_closure(rr.scheme);
      CHECK(cl.status == "certified-normal");
      CHECK(!cl.field_extended);
      CHECK(mp_equal(cl.scheme.gens[0], rr.scheme.gens[0]));
      // [K(Y):K(X)] = p: two raised symbols, conormal rank one
      CHECK(degree_insep_log(cl.scheme, X) == 1);
      CHECK(h0_is_base_field(X));
      // K_X multidegree
      CHECK(canonical_class(X) == std::vector<int>{q - 3});
      CHECK(canonical_class(cl.scheme) ==
            std::vector<int>{q / static_cast<int>(p) - 3});
    }
  }
}

TEST_CASE("two-equation product example: candidate prime and field closure") {
  // X in P^2 x P^2 over F_2(r,s,t): s x^2 + t y^2 + z^2, r u^2 + s v^2 + w^2;
  // base change raises s and t only
  TowerField K{2, {"r", "s", "t"}, {0, 0, 0}};
  SchemeDesc X;
  X.ring = make_ring(K, {{"x", {"x", "y", "z"}}, {"u", {"u", "v", "w"}}});
  X.gens = {mp_parse(X.ring, "s*x^2 + t*y^2 + z^2"),
            mp_parse(X.ring, "r*u^2 + s*v^2 + w^2")};
  X.complete_intersection = true;
  validate_scheme(X);

  SchemeDesc XL = base_change(X, BaseChangeSpec{{0, 0, 0}, {0, 1, 1}});
  ReduceResult rr = reduce_structure(XL);
  CHECK(rr.changed);
  CHECK(rr.root_drops == std::vector<int>{1, 0});
  CHECK(rr.certified);
  MultiPoly g1 = mp_parse(rr.scheme.ring, "s^(1/2)*x + t^(1/2)*y + z");
  CHECK(mp_proportional(rr.scheme.gens[0], g1));

  R1Result r1 = r1_test(rr.scheme);
  CHECK(r1.certified);
  REQUIRE(r1.primes.size() == 1);
  // the candidate cuts the divisor (u = 0): on Z, r*u^2 = s*v^2 + w^2, so
  // the normal form may present it as s^(1/2)*v + w; the class is (0,1)
  auto pd = proj_multidegree(r1.primes[0]);
  REQUIRE(pd.has_value());
  CHECK(*pd == std::vector<int>{0, 1});

  ClosureResult cl = pth_root_closure(rr.scheme);
  CHECK(cl.field_extended);
  CHECK(cl.scheme.ring->field.levels == std::vector<int>{1, 1, 1});
  CHECK(cl.status == "certified-normal");
  REQUIRE(cl.scheme.gens.size() == 2);
  MultiPoly y2 = mp_parse(cl.scheme.ring,
                          "r^(1/2)*u + s^(1/2)*v + w");
  CHECK(mp_proportional(cl.scheme.gens[1], y2));
  // three raised symbols, conormal rank two
  CHECK(degree_insep_log(cl.scheme, X) == 1);
}

TEST_CASE("r1_test reports singular primes of a genuinely singular surface") {
  // cone z^2 = x*y in char 3 stays singular at the vertex only
  // (codimension two), so no divisorial candidate appears
  TowerField K{3, {}, {}};
  SchemeDesc X;
  X.ring = make_ring(K, {{"P", {"x", "y", "z", "w"}}});
  X.gens = {mp_parse(X.ring, "x*y - z^2")};
  X.complete_intersection = true;
  R1Result r1 = r1_test(X);
  CHECK(r1.certified);
  CHECK(r1.primes.empty());
}

TEST_CASE("closure is idempotent on its output") {
  TowerField K{2, {"r", "s", "t"}, {0, 0, 0}};
  SchemeDesc X;
  X.ring = make_ring(K, {{"x", {"x", "y", "z"}}, {"u", {"u", "v", "w"}}});
  X.gens = {mp_parse(X.ring, "s*x^2 + t*y^2 + z^2"),
            mp_parse(X.ring, "r*u^2 + s*v^2 + w^2")};
  X.complete_intersection = true;
  SchemeDesc XL = base_change(X, BaseChangeSpec{{0, 0, 0}, {0, 1, 1}});
  ClosureResult cl = pth_root_closure(reduce_structure(XL).scheme);
  ClosureResult cl2 = pth_root_closure(cl.scheme);
  CHECK(cl2.status == "certified-normal");
  CHECK(!cl2.field_extended);
  CHECK(cl2.scheme.gens.size() == cl.scheme.gens.size());
}
