// test_symbolic.cpp — multivariate polynomials, term orders, parsing.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "insep/poly.hpp"

using namespace insep;

namespace {

RingPtr p2_ring() {
  TowerField K{2, {"s", "t"}, {0, 0}};
  return make_ring(K, {{"P", {"x", "y", "z"}}});
}

MultiPoly random_poly(std::mt19937& rng, const RingPtr& r, int max_terms) {
  MultiPoly q = mp_zero(r);
  uint32_t p = r->field.p;
  int terms = 1 + static_cast<int>(rng() % max_terms);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> e(r->nvars());
    for (int& x : e) x = static_cast<int>(rng() % 3);
    uint32_t c = 1 + rng() % (p - 1);
    TowerElement coef = te_const(p, r->field.levels, c);
    if (rng() % 2) coef = te_mul(coef, te_symbol(p, r->field.levels, rng() % 2));
    q = mp_add(q, mp_monomial(r, e, coef));
  }
  return q;
}

}  // namespace

TEST_CASE("parsing round trips through arithmetic") {
  auto r = p2_ring();
  MultiPoly f = mp_parse(r, "s*x^4 + t^2*y^4 + z^4");
  CHECK(f.t.size() == 3);
  auto md = f.multidegree();
  REQUIRE(md.has_value());
  CHECK(*md == std::vector<int>{4});

  MultiPoly g = mp_parse(r, "x*y + y*z");
  MultiPoly h = mp_parse(r, "x + z");
  CHECK(mp_equal(g, mp_mul(mp_var(r, 1), h)));

  // char 2: minus equals plus
  CHECK(mp_equal(mp_parse(r, "x - y"), mp_parse(r, "x + y")));
  CHECK_THROWS_AS(mp_parse(r, "x + w"), std::runtime_error);
  CHECK_THROWS_AS(mp_parse(r, "x +"), std::runtime_error);
}

TEST_CASE("fractional exponents denote tower symbols") {
  TowerField K{2, {"s", "t"}, {1, 0}};
  auto r = make_ring(K, {{"P", {"x", "y"}}});
  MultiPoly f = mp_parse(r, "s^(1/2)*x + t*y");
  auto it = f.t.find({1, 0});
  REQUIRE(it != f.t.end());
  CHECK(te_equal(it->second, te_symbol(2, {1, 0}, 0)));
  // s itself is the square of the symbol
  MultiPoly g = mp_parse(r, "s*x");
  auto jt = g.t.find({1, 0});
  REQUIRE(jt != g.t.end());
  CHECK(te_equal(jt->second, te_pow(te_symbol(2, {1, 0}, 0), 2)));
  CHECK_THROWS_AS(mp_parse(r, "t^(1/2)*x"), std::runtime_error);
  CHECK_THROWS_AS(mp_parse(r, "s^(1/3)*x"), std::runtime_error);
}

TEST_CASE("block orders compare degree in the leading block first") {
  TowerField K{3, {"s"}, {0}};
  auto r = make_ring(K, {{"A", {"x", "y"}}, {"B", {"u", "v"}}});
  TermOrder std_ord = TermOrder::standard(*r);
  TermOrder elim_b = TermOrder::eliminating(*r, {1});
  // x^2 vs u^3: standard order ranks by block A first
  std::vector<int> e1{2, 0, 0, 0}, e2{0, 0, 3, 0};
  CHECK(std_ord.less(*r, e2, e1));
  CHECK(elim_b.less(*r, e1, e2));
  // grevlex inside a block: x*y^2 < x^2*y
  std::vector<int> a{1, 2, 0, 0}, b{2, 1, 0, 0};
  CHECK(std_ord.less(*r, a, b));
}

TEST_CASE("derivatives: ambient and symbol directions") {
  TowerField K{3, {"s"}, {1}};
  auto r = make_ring(K, {{"P", {"x", "y"}}});
  MultiPoly f = mp_parse(r, "s*x^3 + s^(1/3)*x*y + y^3");
  // d/dx kills x^3 (char 3) and keeps the middle term
  MultiPoly fx = mp_derivative(f, 0);
  CHECK(mp_equal(fx, mp_parse(r, "s^(1/3)*y")));
  // d/du with u = s^(1/3): s = u^3 has zero derivative
  MultiPoly fu = mp_symbol_derivative(f, 0);
  CHECK(mp_equal(fu, mp_parse(r, "x*y")));
}

TEST_CASE("pth root within levels") {
  TowerField K{2, {"s", "t"}, {1, 1}};
  auto r = make_ring(K, {{"P", {"x", "y"}}});
  MultiPoly f = mp_parse(r, "s*x^2 + t*y^2");
  auto root = mp_pth_root_within(f, {1, 1});
  REQUIRE(root.has_value());
  CHECK(mp_equal(*root, mp_parse(r, "s^(1/2)*x + t^(1/2)*y")));
  // no root for an odd exponent
  CHECK_FALSE(mp_pth_root_within(mp_parse(r, "s*x"), {1, 1}).has_value());
  // coefficient root requires the level room
  TowerField K0{2, {"s", "t"}, {0, 0}};
  auto r0 = make_ring(K0, {{"P", {"x", "y"}}});
  CHECK_FALSE(mp_pth_root_within(mp_parse(r0, "s*x^2"), {0, 0}).has_value());
}

TEST_CASE("gcd and exact division on random products") {
  std::mt19937 rng(20250823);
  TowerField K{3, {"s", "t"}, {0, 0}};
  auto r = make_ring(K, {{"P", {"x", "y", "z"}}});
  for (int iter = 0; iter < 15; ++iter) {
    MultiPoly a = random_poly(rng, r, 3);
    MultiPoly b = random_poly(rng, r, 3);
    MultiPoly c = random_poly(rng, r, 2);
    if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
    MultiPoly ac = mp_mul(a, c);
    MultiPoly bc = mp_mul(b, c);
    MultiPoly g = mp_gcd(ac, bc);
    // the common factor divides the gcd, and the gcd divides both
    CHECK_NOTHROW(mp_div_exact(g, mp_gcd(g, c)));
    CHECK(mp_equal(mp_mul(mp_div_exact(ac, g), g), ac));
    CHECK(mp_equal(mp_mul(mp_div_exact(bc, g), g), bc));
    CHECK(mp_equal(mp_div_exact(g, mp_gcd(g, c)), mp_div_exact(g, mp_gcd(c, g))));
    // gcd(c*a, c*b) is divisible by c up to the gcd of a and b
    MultiPoly q = mp_gcd(g, c);
    CHECK(mp_equal(q, mp_gcd(c, g)));
  }
}

TEST_CASE("gcd spot checks") {
  TowerField K{5, {"s"}, {0}};
  auto r = make_ring(K, {{"P", {"x", "y"}}});
  MultiPoly f = mp_parse(r, "(x + y)*(x + 2*y)");
  MultiPoly g = mp_parse(r, "(x + y)*x");
  CHECK(mp_equal(mp_gcd(f, g), mp_parse(r, "x + y")));
  CHECK(mp_equal(mp_gcd(f, mp_parse(r, "x + 3*y")), mp_one(r)));
  // coefficient-level common factors are units and do not survive
  MultiPoly h = mp_parse(r, "s*x + s*y");
  CHECK(mp_equal(mp_gcd(h, mp_parse(r, "s*x")), mp_one(r)));
  CHECK(mp_equal(mp_gcd(h, mp_parse(r, "s*x + s*y")), mp_parse(r, "x + y")));
}

TEST_CASE("transport and substitution between rings") {
  TowerField K{2, {"s"}, {0}};
  auto r = make_ring(K, {{"P", {"x", "y"}}});
  // transport to a ring with an extra variable and a raised field
  TowerField K1{2, {"s"}, {1}};
  auto r1 = make_ring(K1, {{"P", {"x", "y"}}, {"W", {"w"}}});
  MultiPoly f = mp_parse(r, "s*x + y");
  MultiPoly g = mp_transport(f, r1);
  CHECK(mp_equal(g, mp_parse(r1, "s*x + y")));
  // substitute the parameter s -> a/b in a two-parameter field
  TowerField K2{2, {"a", "b"}, {0, 0}};
  auto r2 = make_ring(K2, {{"P", {"x", "y"}}});
  TowerElement img = te_div(te_symbol(2, {0, 0}, 0), te_symbol(2, {0, 0}, 1));
  MultiPoly h = mp_substitute_params(f, r2, {img});
  CHECK(mp_equal(mp_scale(h, te_symbol(2, {0, 0}, 1)),
                 mp_parse(r2, "a*x + b*y")));
}

TEST_CASE("set_var_one passes to a chart") {
  TowerField K{2, {"s"}, {0}};
  auto r = make_ring(K, {{"P", {"x", "y", "z"}}});
  auto chart = make_ring(K, {{"P", {"x", "y"}}});
  MultiPoly f = mp_parse(r, "s*x^2 + y*z + z^2");
  MultiPoly g = mp_set_var_one(f, 2, chart);
  CHECK(mp_equal(g, mp_parse(chart, "s*x^2 + y + 1")));
}

TEST_CASE("proportionality over the coefficient field") {
  TowerField K{3, {"s"}, {0}};
  auto r = make_ring(K, {{"P", {"x", "y"}}});
  MultiPoly f = mp_parse(r, "x + s*y");
  MultiPoly g = mp_scale(f, te_mul(te_symbol(3, {0}, 0), te_const(3, {0}, 2)));
  CHECK(mp_proportional(f, g));
  CHECK_FALSE(mp_proportional(f, mp_parse(r, "x + y")));
  CHECK_FALSE(mp_proportional(f, mp_parse(r, "x")));
}

// ===== Groebner engine ==================================================
#include "insep/groebner.hpp"

namespace {

// singleton blocks make the standard block order a lexicographic order
RingPtr lex_ring(uint32_t p, const std::vector<std::string>& vars) {
  TowerField K{p, {}, {}};
  std::vector<Block> blocks;
  for (const auto& v : vars) blocks.push_back({"B_" + v, {v}, false});
  return make_ring(K, blocks);
}

}  // namespace

TEST_CASE("lex basis of (x^2 - y, x*y - 1) over F_5") {
  auto r = lex_ring(5, {"x", "y"});
  IdealHandle I = make_ideal(
      r, {mp_parse(r, "x^2 - y"), mp_parse(r, "x*y - 1")});
  const GBasis& b = I.gb();
  REQUIRE(b.polys.size() == 2);
  // ascending leading terms: y^3 - 1, then x - y^2
  CHECK(mp_equal(b.polys[0], mp_parse(r, "y^3 - 1")));
  CHECK(mp_equal(b.polys[1], mp_parse(r, "x - y^2")));
}

TEST_CASE("normal form is idempotent and detects membership") {
  std::mt19937 rng(424242);
  TowerField K{3, {"s"}, {0}};
  auto r = make_ring(K, {{"P", {"x", "y", "z"}}});
  IdealHandle I = make_ideal(
      r, {mp_parse(r, "x^2 + s*y*z"), mp_parse(r, "y^2 + z^2"),
          mp_parse(r, "x*z + 2*y^2")});
  const GBasis& b = I.gb();
  for (int iter = 0; iter < 10; ++iter) {
    MultiPoly f = random_poly(rng, r, 4);
    MultiPoly nf = normal_form(f, b.polys, b.ord);
    CHECK(mp_equal(normal_form(nf, b.polys, b.ord), nf));
    // f - nf lies in the ideal; adding a generator multiple keeps the nf
    CHECK(ideal_member(mp_sub(f, nf), I));
    MultiPoly g = mp_add(f, mp_mul(random_poly(rng, r, 2), I.gens[0]));
    CHECK(mp_equal(normal_form(g, b.polys, b.ord), nf));
  }
}

TEST_CASE("lift tracking certifies basis membership") {
  TowerField K{2, {"s"}, {1}};
  auto r = make_ring(K, {{"P", {"x", "y", "z"}}});
  std::vector<MultiPoly> gens{mp_parse(r, "s^(1/2)*x^2 + y*z"),
                              mp_parse(r, "x*y + z^2"),
                              mp_parse(r, "y^3 + x*z^2")};
  GBasis b = buchberger(gens, TermOrder::standard(*r), true);
  REQUIRE(b.has_lifts);
  REQUIRE(b.lifts.size() == b.polys.size());
  for (size_t i = 0; i < b.polys.size(); ++i) {
    MultiPoly acc = mp_zero(r);
    for (size_t j = 0; j < gens.size(); ++j)
      acc = mp_add(acc, mp_mul(b.lifts[i][j], gens[j]));
    CHECK(mp_equal(acc, b.polys[i]));
  }
}

TEST_CASE("elimination recovers the implicit curve equation") {
  // x = u^2, y = u^3 implicitizes to y^2 - x^3
  TowerField K{5, {}, {}};
  auto r = make_ring(K, {{"U", {"u"}, false}, {"P", {"x", "y"}}});
  IdealHandle I =
      make_ideal(r, {mp_parse(r, "u^2 - x"), mp_parse(r, "u^3 - y")});
  auto elim = eliminate(I, {0});
  REQUIRE(elim.size() == 1);
  MultiPoly expect = mp_parse(r, "y^2 - x^3");
  CHECK(mp_proportional(elim[0], expect));
}

TEST_CASE("saturation removes a component supported on a divisor") {
  TowerField K{3, {}, {}};
  auto r = make_ring(K, {{"P", {"x", "y", "z"}}});
  IdealHandle I = make_ideal(r, {mp_parse(r, "x*z"), mp_parse(r, "y*z")});
  IdealHandle S = saturate(I, mp_parse(r, "z"));
  CHECK(ideal_member(mp_parse(r, "x"), S));
  CHECK(ideal_member(mp_parse(r, "y"), S));
  CHECK_FALSE(ideal_member(mp_parse(r, "z"), S));
  // saturation is idempotent
  IdealHandle S2 = saturate(S, mp_parse(r, "z"));
  for (const auto& g : S2.gens) CHECK(ideal_member(g, S));
  for (const auto& g : S.gens) CHECK(ideal_member(g, S2));
}

TEST_CASE("ideal quotient and intersection") {
  TowerField K{2, {}, {}};
  auto r = make_ring(K, {{"P", {"x", "y"}}});
  IdealHandle I = make_ideal(r, {mp_parse(r, "x^2"), mp_parse(r, "x*y")});
  IdealHandle Q = ideal_quotient(I, mp_parse(r, "x"));
  CHECK(ideal_member(mp_parse(r, "x"), Q));
  CHECK(ideal_member(mp_parse(r, "y"), Q));
  CHECK_FALSE(ideal_member(mp_one(r), Q));

  IdealHandle A = make_ideal(r, {mp_parse(r, "x")});
  IdealHandle B = make_ideal(r, {mp_parse(r, "y")});
  IdealHandle C = ideal_intersect(A, B);
  CHECK(ideal_member(mp_parse(r, "x*y"), C));
  CHECK_FALSE(ideal_member(mp_parse(r, "x"), C));
  CHECK_FALSE(ideal_member(mp_parse(r, "y"), C));
}

TEST_CASE("dimension from leading terms") {
  TowerField K{3, {"s"}, {0}};
  auto r = make_ring(K, {{"P", {"x", "y", "z"}}});
  CHECK(ideal_dimension(make_ideal(r, {})) == 3);
  CHECK(ideal_dimension(make_ideal(r, {mp_parse(r, "x")})) == 2);
  CHECK(ideal_dimension(make_ideal(
            r, {mp_parse(r, "x^2 + y^2"), mp_parse(r, "y*z")})) == 1);
  CHECK(ideal_dimension(make_ideal(r, {mp_one(r)})) == -1);
  // a projective plane curve has cone dimension 2
  CHECK(ideal_dimension(make_ideal(
            r, {mp_parse(r, "s*x^3 + y^3 + z^3")})) == 2);
}
