// test_tower.cpp — unit tests for prime field and tower field arithmetic.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "insep/tower.hpp"

using namespace insep;

namespace {

// deterministic random element with small support
TowerElement random_element(std::mt19937& rng, uint32_t p,
                            const std::vector<int>& levels) {
  int m = static_cast<int>(levels.size());
  auto rnd_poly = [&](bool nonzero) {
    PPoly q = pp_zero(p, m);
    int terms = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < terms; ++t) {
      std::vector<int> e(m);
      for (int i = 0; i < m; ++i) e[i] = static_cast<int>(rng() % 3);
      q = pp_add(q, pp_monomial(p, m, e, 1 + rng() % (p - 1)));
    }
    if (nonzero && q.is_zero()) q = pp_const(p, m, 1);
    return q;
  };
  return te_make(p, levels, rnd_poly(false), rnd_poly(true));
}

}  // namespace

TEST_CASE("prime field basics") {
  CHECK(fp_inv(3, 7) == 5);
  CHECK(fp_mul(fp_inv(4, 13), 4, 13) == 1);
  CHECK(is_prime_u32(2));
  CHECK(is_prime_u32(5));
  CHECK_FALSE(is_prime_u32(9));
  CHECK_FALSE(is_prime_u32(1));
}

TEST_CASE("ppoly gcd and exact division") {
  uint32_t p = 5;
  int m = 2;
  PPoly s = pp_monomial(p, m, {1, 0}, 1);
  PPoly t = pp_monomial(p, m, {0, 1}, 1);
  PPoly a = pp_mul(pp_add(s, t), pp_add(s, pp_scale(t, 2)));
  PPoly b = pp_mul(pp_add(s, t), s);
  PPoly g = pp_gcd(a, b);
  CHECK(pp_equal(g, pp_monic(pp_add(s, t))));
  CHECK(pp_equal(pp_mul(pp_div_exact(a, g), g), a));

  // gcd of coprime polynomials is 1
  PPoly one = pp_const(p, m, 1);
  CHECK(pp_equal(pp_gcd(s, t), one));
  CHECK(pp_equal(pp_gcd(pp_add(s, t), pp_add(s, pp_scale(t, 3))), one));
}

TEST_CASE("pth root of a monomial raises levels minimally") {
  // p=3: s*t^2 -> s^{1/3} t^{2/3} at levels (1,1)
  uint32_t p = 3;
  std::vector<int> lv{0, 0};
  TowerElement a = te_mul(te_symbol(p, lv, 0),
                          te_pow(te_symbol(p, lv, 1), 2));
  TowerElement r = te_pth_root(a);
  CHECK(r.levels == std::vector<int>{1, 1});
  CHECK(te_equal(te_pow(r, 3), te_embed(a, r.levels)));
}

TEST_CASE("pth root is the identity on F_p constants") {
  uint32_t p = 3;
  std::vector<int> lv{0, 0};
  TowerElement two = te_const(p, lv, 2);
  TowerElement r = te_pth_root(two);
  CHECK(r.levels == lv);
  CHECK(te_equal(r, two));
}

TEST_CASE("pth root is additive in characteristic p") {
  // p=2: s + t -> s^{1/2} + t^{1/2}
  uint32_t p = 2;
  std::vector<int> lv{0, 0};
  TowerElement a = te_add(te_symbol(p, lv, 0), te_symbol(p, lv, 1));
  TowerElement r = te_pth_root(a);
  CHECK(r.levels == std::vector<int>{1, 1});
  TowerElement expect =
      te_add(te_symbol(p, {1, 1}, 0), te_symbol(p, {1, 1}, 1));
  CHECK(te_equal(r, expect));
}

TEST_CASE("pth root round trip on random elements") {
  std::mt19937 rng(20240817);
  for (uint32_t p : {2u, 3u, 5u}) {
    for (int iter = 0; iter < 25; ++iter) {
      TowerElement a = random_element(rng, p, {0, 1});
      TowerElement r = te_pth_root(a);
      CHECK(te_equal(te_pow(r, p), a));
      // root of a^p recovers a
      TowerElement b = te_pth_root(te_pow(a, p));
      CHECK(te_equal(b, a));
    }
  }
}

TEST_CASE("pth_root_within respects the level bound") {
  uint32_t p = 2;
  std::vector<int> lv{0, 0};
  TowerElement s = te_symbol(p, lv, 0);
  CHECK_FALSE(te_pth_root_within(s, {0, 0}).has_value());
  auto r = te_pth_root_within(s, {1, 0});
  REQUIRE(r.has_value());
  CHECK(te_equal(te_pow(*r, 2), te_embed(s, r->levels)));
  // s^2 has a root at level 0 already
  auto r2 = te_pth_root_within(te_pow(s, 2), {0, 0});
  REQUIRE(r2.has_value());
  CHECK(te_equal(*r2, s));
}

TEST_CASE("derivations satisfy the Leibniz rule") {
  std::mt19937 rng(7);
  for (uint32_t p : {2u, 3u}) {
    std::vector<int> lv{1, 1};
    for (int iter = 0; iter < 20; ++iter) {
      TowerElement a = random_element(rng, p, lv);
      TowerElement b = random_element(rng, p, lv);
      for (int i = 0; i < 2; ++i) {
        TowerElement dab = te_derivative(te_mul(a, b), i);
        TowerElement rhs = te_add(te_mul(a, te_derivative(b, i)),
                                  te_mul(b, te_derivative(a, i)));
        CHECK(te_equal(dab, rhs));
      }
    }
  }
}

TEST_CASE("expand_over_base reassembles the element") {
  std::mt19937 rng(99);
  uint32_t p = 2;
  std::vector<int> top{1, 1}, base{0, 0};
  for (int iter = 0; iter < 15; ++iter) {
    TowerElement a = random_element(rng, p, top);
    auto exp = te_expand_over_base(a, base);
    TowerElement back = te_zero(p, top);
    for (const auto& [res, coeff] : exp) {
      TowerElement mono =
          te_make(p, top, pp_monomial(p, 2, res, 1), pp_const(p, 2, 1));
      back = te_add(back, te_mul(te_embed(coeff, top), mono));
    }
    CHECK(te_equal(back, a));
    for (const auto& [res, coeff] : exp)
      for (size_t i = 0; i < res.size(); ++i) CHECK(res[i] < static_cast<int>(p));
  }
}

TEST_CASE("constants subfield with no derivations is everything") {
  TowerField L{2, {"s", "t"}, {1, 1}};
  auto res = constants_subfield(L, {0, 0}, {});
  CHECK(res.log_degree == 0);
  CHECK(res.is_subtower);
  CHECK(res.subtower_levels == std::vector<int>{1, 1});
  CHECK(res.generators.size() == 4);
}

TEST_CASE("constants subfield of all derivations is the base") {
  TowerField L{2, {"s", "t"}, {1, 1}};
  std::vector<int> base{0, 0};
  FieldDerivation ds{base,
                     {te_const(2, L.levels, 1), te_zero(2, L.levels)}};
  FieldDerivation dt{base,
                     {te_zero(2, L.levels), te_const(2, L.levels, 1)}};
  auto res = constants_subfield(L, base, {ds, dt});
  CHECK(res.log_degree == 2);
  CHECK(res.is_subtower);
  CHECK(res.subtower_levels == std::vector<int>{0, 0});
  REQUIRE(res.generators.size() == 1);
  CHECK(res.generators[0].is_one());
}

TEST_CASE("constants subfield: kernel of d/dt^{1/2} is K(s^{1/2})") {
  // the 4x4 kernel computation over the basis {1, s^{1/2}, t^{1/2},
  // (st)^{1/2}}: the constants of d/dt^{1/2} are spanned by {1, s^{1/2}}
  TowerField L{2, {"s", "t"}, {1, 1}};
  std::vector<int> base{0, 0};
  FieldDerivation dt{base,
                     {te_zero(2, L.levels), te_const(2, L.levels, 1)}};
  auto res = constants_subfield(L, base, {dt});
  CHECK(res.log_degree == 1);
  CHECK(res.is_subtower);
  CHECK(res.subtower_levels == std::vector<int>{1, 0});
  REQUIRE(res.generators.size() == 2);
  // echelonised smallest degree first: 1, then s^{1/2}
  CHECK(res.generators[0].is_one());
  CHECK(te_equal(res.generators[1], te_symbol(2, {1, 0}, 0)));
}

TEST_CASE("constants subfield rejects derivations not killing the base") {
  TowerField L{2, {"s", "t"}, {1, 0}};
  std::vector<int> base{0, 0};
  FieldDerivation bad{base,
                      {te_zero(2, L.levels), te_const(2, L.levels, 1)}};
  CHECK_THROWS_AS(constants_subfield(L, base, {bad}), std::domain_error);
}

TEST_CASE("constants subfield degree identity on a twisted derivation") {
  // D = d/ds^{1/2} + d/dt^{1/2} has rank 1; its constants have degree p
  // over K and are spanned by {1, s^{1/2} + t^{1/2}} (not a sub-tower).
  TowerField L{2, {"s", "t"}, {1, 1}};
  std::vector<int> base{0, 0};
  FieldDerivation D{base,
                    {te_const(2, L.levels, 1), te_const(2, L.levels, 1)}};
  auto res = constants_subfield(L, base, {D});
  CHECK(res.log_degree == 1);
  CHECK(res.generators.size() == 2);
  CHECK_FALSE(res.is_subtower);
  // every generator is killed by D
  for (const auto& g : res.generators) CHECK(D.apply(g).is_zero());
}

TEST_CASE("element canonical form: monic denominator, reduced fraction") {
  uint32_t p = 5;
  std::vector<int> lv{0, 0};
  TowerElement s = te_symbol(p, lv, 0);
  TowerElement t = te_symbol(p, lv, 1);
  // (2 s^2 + 2 s t) / (2 s) reduces to s + t ... divided by 1
  TowerElement a = te_make(
      p, lv, pp_add(pp_scale(pp_mul(s.num, s.num), 2), pp_scale(pp_mul(s.num, t.num), 2)),
      pp_scale(s.num, 2));
  CHECK(te_equal(a, te_add(s, t)));
  CHECK(a.den.is_constant());
  // equality across levels
  CHECK(te_equal(te_embed(a, {1, 1}), te_add(te_embed(s, {1, 1}), te_embed(t, {1, 1}))));
}
