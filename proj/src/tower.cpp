// tower.cpp — parameter tower field arithmetic.

#include "insep/tower.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace insep {

// =====================================================================
// grevlex order on exponent vectors
// =====================================================================
bool grevlex_less(const std::vector<int>& a, const std::vector<int>& b) {
  int da = 0, db = 0;
  for (int x : a) da += x;
  for (int x : b) db += x;
  if (da != db) return da < db;
  // tie: the last nonzero entry of a-b negative <=> a larger
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) {
    int d = a[i] - b[i];
    if (d != 0) return d > 0;  // a has larger last entry => a smaller
  }
  return false;
}

// =====================================================================
// PPoly basics
// =====================================================================
bool PPoly::is_constant() const {
  if (t.empty()) return true;
  if (t.size() > 1) return false;
  for (int x : t.begin()->first)
    if (x != 0) return false;
  return true;
}

int PPoly::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : t) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

int PPoly::degree_in(int i) const {
  int d = 0;
  for (const auto& [e, c] : t) d = std::max(d, e[i]);
  return d;
}

PPoly pp_zero(uint32_t p, int nsym) {
  PPoly r;
  r.p = p;
  r.nsym = nsym;
  return r;
}

PPoly pp_const(uint32_t p, int nsym, uint32_t c) {
  PPoly r = pp_zero(p, nsym);
  c %= p;
  if (c) r.t[std::vector<int>(nsym, 0)] = c;
  return r;
}

PPoly pp_monomial(uint32_t p, int nsym, const std::vector<int>& e, uint32_t c) {
  PPoly r = pp_zero(p, nsym);
  c %= p;
  if (c) r.t[e] = c;
  return r;
}

PPoly pp_add(const PPoly& a, const PPoly& b) {
  assert(a.p == b.p && a.nsym == b.nsym);
  PPoly r = a;
  for (const auto& [e, c] : b.t) {
    auto it = r.t.find(e);
    if (it == r.t.end()) {
      r.t[e] = c;
    } else {
      uint32_t s = fp_add(it->second, c, a.p);
      if (s)
        it->second = s;
      else
        r.t.erase(it);
    }
  }
  return r;
}

PPoly pp_neg(const PPoly& a) {
  PPoly r = a;
  for (auto& [e, c] : r.t) c = fp_neg(c, a.p);
  return r;
}

PPoly pp_sub(const PPoly& a, const PPoly& b) { return pp_add(a, pp_neg(b)); }

PPoly pp_scale(const PPoly& a, uint32_t c) {
  c %= a.p;
  PPoly r = pp_zero(a.p, a.nsym);
  if (c == 0) return r;
  for (const auto& [e, k] : a.t) r.t[e] = fp_mul(k, c, a.p);
  return r;
}

PPoly pp_mul(const PPoly& a, const PPoly& b) {
  assert(a.p == b.p && a.nsym == b.nsym);
  PPoly r = pp_zero(a.p, a.nsym);
  for (const auto& [ea, ca] : a.t)
    for (const auto& [eb, cb] : b.t) {
      std::vector<int> e(a.nsym);
      for (int i = 0; i < a.nsym; ++i) e[i] = ea[i] + eb[i];
      uint32_t c = fp_mul(ca, cb, a.p);
      auto it = r.t.find(e);
      if (it == r.t.end()) {
        if (c) r.t[e] = c;
      } else {
        uint32_t s = fp_add(it->second, c, a.p);
        if (s)
          it->second = s;
        else
          r.t.erase(it);
      }
    }
  return r;
}

PPoly pp_pow(const PPoly& a, uint64_t e) {
  PPoly r = pp_const(a.p, a.nsym, 1);
  PPoly base = a;
  while (e) {
    if (e & 1) r = pp_mul(r, base);
    base = pp_mul(base, base);
    e >>= 1;
  }
  return r;
}

bool pp_equal(const PPoly& a, const PPoly& b) { return a.t == b.t; }

std::pair<std::vector<int>, uint32_t> pp_lead(const PPoly& a) {
  assert(!a.is_zero());
  auto best = a.t.begin();
  for (auto it = std::next(a.t.begin()); it != a.t.end(); ++it)
    if (grevlex_less(best->first, it->first)) best = it;
  return {best->first, best->second};
}

PPoly pp_monic(const PPoly& a) {
  if (a.is_zero()) return a;
  auto [e, c] = pp_lead(a);
  return pp_scale(a, fp_inv(c, a.p));
}

PPoly pp_div_exact(const PPoly& a, const PPoly& b) {
  if (b.is_zero()) throw std::logic_error("pp_div_exact: division by zero");
  PPoly rem = a;
  PPoly q = pp_zero(a.p, a.nsym);
  auto [eb, cb] = pp_lead(b);
  uint32_t cbinv = fp_inv(cb, a.p);
  while (!rem.is_zero()) {
    auto [er, cr] = pp_lead(rem);
    std::vector<int> e(a.nsym);
    for (int i = 0; i < a.nsym; ++i) {
      e[i] = er[i] - eb[i];
      if (e[i] < 0) throw std::logic_error("pp_div_exact: not divisible");
    }
    uint32_t c = fp_mul(cr, cbinv, a.p);
    PPoly m = pp_monomial(a.p, a.nsym, e, c);
    q = pp_add(q, m);
    rem = pp_sub(rem, pp_mul(m, b));
  }
  return q;
}

// ---- recursive multivariate gcd -------------------------------------

// coefficients of a viewed as univariate in symbol v
static std::vector<PPoly> pp_coeffs_in(const PPoly& a, int v) {
  int d = a.degree_in(v);
  std::vector<PPoly> cs(d + 1, pp_zero(a.p, a.nsym));
  for (const auto& [e, c] : a.t) {
    std::vector<int> e2 = e;
    int k = e2[v];
    e2[v] = 0;
    cs[k] = pp_add(cs[k], pp_monomial(a.p, a.nsym, e2, c));
  }
  return cs;
}

static PPoly pp_from_coeffs(const std::vector<PPoly>& cs, int v, uint32_t p,
                            int nsym) {
  PPoly r = pp_zero(p, nsym);
  for (size_t k = 0; k < cs.size(); ++k) {
    if (cs[k].is_zero()) continue;
    std::vector<int> e(nsym, 0);
    e[v] = static_cast<int>(k);
    r = pp_add(r, pp_mul(cs[k], pp_monomial(p, nsym, e, 1)));
  }
  return r;
}

static PPoly pp_content_in(const PPoly& a, int v) {
  auto cs = pp_coeffs_in(a, v);
  PPoly g = pp_zero(a.p, a.nsym);
  for (const auto& c : cs) g = pp_gcd(g, c);
  return g;
}

// pseudo-remainder of a by b with respect to symbol v
static PPoly pp_prem(const PPoly& a, const PPoly& b, int v) {
  int db = b.degree_in(v);
  auto bc = pp_coeffs_in(b, v);
  const PPoly& lb = bc[db];
  PPoly r = a;
  while (!r.is_zero() && r.degree_in(v) >= db) {
    int dr = r.degree_in(v);
    auto rc = pp_coeffs_in(r, v);
    const PPoly& lr = rc[dr];
    std::vector<int> shift(a.nsym, 0);
    shift[v] = dr - db;
    // r := lb * r - lr * x_v^{dr-db} * b
    r = pp_sub(pp_mul(lb, r),
               pp_mul(pp_mul(lr, pp_monomial(a.p, a.nsym, shift, 1)), b));
  }
  return r;
}

// ---- coprimality certificate over GF(p^m) ---------------------------
//
// The primitive PRS can blow up badly on coprime dense inputs, which are
// the common case (squarefree tests, content of minors).  Before running
// it we try to certify gcd(a, b) = 1: for each symbol v shared by a and
// b, evaluate the remaining symbols at points of GF(p^m) where neither
// leading coefficient (in v) vanishes; if the univariate images are
// coprime, the gcd has degree 0 in v.  When every shared symbol is
// certified the gcd is a constant.

namespace {

// GF(p^m) elements as coefficient vectors modulo a fixed irreducible
struct GFCtx {
  uint32_t p;
  int m;
  std::vector<uint32_t> mod;  // monic irreducible, degree m (coeffs 0..m)
};

using GFElem = std::vector<uint32_t>;  // size m, little-endian

GFElem gf_zero(const GFCtx& F) { return GFElem(F.m, 0); }

bool gf_is_zero(const GFElem& a) {
  for (uint32_t c : a)
    if (c) return false;
  return true;
}

GFElem gf_add(const GFCtx& F, const GFElem& a, const GFElem& b) {
  GFElem r(F.m);
  for (int i = 0; i < F.m; ++i) r[i] = fp_add(a[i], b[i], F.p);
  return r;
}

GFElem gf_mul(const GFCtx& F, const GFElem& a, const GFElem& b) {
  std::vector<uint32_t> prod(2 * F.m - 1, 0);
  for (int i = 0; i < F.m; ++i) {
    if (!a[i]) continue;
    for (int j = 0; j < F.m; ++j)
      prod[i + j] = fp_add(prod[i + j], fp_mul(a[i], b[j], F.p), F.p);
  }
  for (int d = 2 * F.m - 2; d >= F.m; --d) {
    uint32_t c = prod[d];
    if (!c) continue;
    prod[d] = 0;
    for (int i = 0; i < F.m; ++i)
      prod[d - F.m + i] =
          fp_sub(prod[d - F.m + i], fp_mul(c, F.mod[i], F.p), F.p);
  }
  return GFElem(prod.begin(), prod.begin() + F.m);
}

GFElem gf_scale(const GFCtx& F, const GFElem& a, uint32_t c) {
  GFElem r(F.m);
  for (int i = 0; i < F.m; ++i) r[i] = fp_mul(a[i], c, F.p);
  return r;
}

GFElem gf_pow(const GFCtx& F, GFElem a, uint64_t e) {
  GFElem r = gf_zero(F);
  r[0] = 1;
  while (e) {
    if (e & 1) r = gf_mul(F, r, a);
    a = gf_mul(F, a, a);
    e >>= 1;
  }
  return r;
}

GFElem gf_inv(const GFCtx& F, const GFElem& a) {
  // a^(q-2) with q = p^m
  uint64_t q = 1;
  for (int i = 0; i < F.m; ++i) q *= F.p;
  return gf_pow(F, a, q - 2);
}

// deterministic irreducible of degree m over F_p by trial division
std::vector<uint32_t> find_irreducible(uint32_t p, int m) {
  std::vector<uint32_t> f(m + 1, 0);
  f[m] = 1;
  auto divides = [&](const std::vector<uint32_t>& g) {
    // remainder of f by monic g
    std::vector<uint32_t> r(f);
    int dg = static_cast<int>(g.size()) - 1;
    for (int d = m; d >= dg; --d) {
      uint32_t c = r[d];
      if (!c) continue;
      for (int i = 0; i <= dg; ++i)
        r[d - dg + i] = fp_sub(r[d - dg + i], fp_mul(c, g[i], p), p);
    }
    for (int d = 0; d < dg; ++d)
      if (r[d]) return false;
    return true;
  };
  for (uint64_t code = 0;; ++code) {
    uint64_t c = code;
    for (int i = 0; i < m; ++i) {
      f[i] = static_cast<uint32_t>(c % p);
      c /= p;
    }
    if (f[0] == 0) continue;  // divisible by x
    bool irred = true;
    // enumerate monic divisors of degree 1..m/2
    for (int dg = 1; irred && 2 * dg <= m; ++dg) {
      std::vector<uint32_t> g(dg + 1, 0);
      g[dg] = 1;
      uint64_t total = 1;
      for (int i = 0; i < dg; ++i) total *= p;
      for (uint64_t gc = 0; gc < total && irred; ++gc) {
        uint64_t t = gc;
        for (int i = 0; i < dg; ++i) {
          g[i] = static_cast<uint32_t>(t % p);
          t /= p;
        }
        if (divides(g)) irred = false;
      }
    }
    if (irred) return f;
  }
}

const GFCtx& gf_context(uint32_t p) {
  static std::map<uint32_t, GFCtx> cache;
  auto it = cache.find(p);
  if (it == cache.end()) {
    GFCtx F{p, 8, find_irreducible(p, 8)};
    it = cache.emplace(p, std::move(F)).first;
  }
  return it->second;
}

// deterministic point sequence avoiding the prime subfield
GFElem gf_point(const GFCtx& F, uint64_t& state) {
  GFElem e(F.m);
  bool nonzero = false;
  do {
    for (int i = 0; i < F.m; ++i) {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      e[i] = static_cast<uint32_t>((state >> 33) % F.p);
      if (i > 0 && e[i]) nonzero = true;
    }
  } while (!nonzero);
  return e;
}

// univariate image of a in symbol v at the given points; empty on failure
std::vector<GFElem> gf_image(const GFCtx& F, const PPoly& a, int v,
                             const std::vector<std::vector<GFElem>>& powers) {
  std::vector<GFElem> img(a.degree_in(v) + 1, gf_zero(F));
  for (const auto& [e, c] : a.t) {
    GFElem term = gf_zero(F);
    term[0] = c;
    for (int i = 0; i < a.nsym; ++i) {
      if (i == v || e[i] == 0) continue;
      term = gf_mul(F, term, powers[i][e[i]]);
    }
    img[e[v]] = gf_add(F, img[e[v]], term);
  }
  return img;
}

int gf_univ_gcd_degree(const GFCtx& F, std::vector<GFElem> A,
                       std::vector<GFElem> B) {
  auto trim = [&](std::vector<GFElem>& f) {
    while (!f.empty() && gf_is_zero(f.back())) f.pop_back();
  };
  trim(A);
  trim(B);
  while (!B.empty()) {
    // A mod B
    GFElem ilb = gf_inv(F, B.back());
    while (A.size() >= B.size()) {
      GFElem c = gf_mul(F, A.back(), ilb);
      size_t off = A.size() - B.size();
      for (size_t i = 0; i < B.size(); ++i) {
        GFElem t = gf_mul(F, c, B[i]);
        for (int k = 0; k < F.m; ++k)
          A[off + i][k] = fp_sub(A[off + i][k], t[k], F.p);
      }
      trim(A);
      if (A.empty()) break;
    }
    std::swap(A, B);
    trim(B);
  }
  return static_cast<int>(A.size()) - 1;
}

bool pp_coprime_certified(const PPoly& a, const PPoly& b) {
  const GFCtx& F = gf_context(a.p);
  int maxdeg = 0;
  for (int i = 0; i < a.nsym; ++i)
    maxdeg = std::max({maxdeg, a.degree_in(i), b.degree_in(i)});
  uint64_t state = 0x9e3779b97f4a7c15ull;
  for (int v = 0; v < a.nsym; ++v) {
    if (!a.uses(v) || !b.uses(v)) continue;  // gcd cannot use v
    bool certified = false;
    for (int attempt = 0; attempt < 4 && !certified; ++attempt) {
      std::vector<std::vector<GFElem>> powers(a.nsym);
      for (int i = 0; i < a.nsym; ++i) {
        if (i == v) continue;
        GFElem pt = gf_point(F, state);
        powers[i].resize(maxdeg + 1, gf_zero(F));
        powers[i][0] = gf_zero(F);
        powers[i][0][0] = 1;
        for (int d = 1; d <= maxdeg; ++d)
          powers[i][d] = gf_mul(F, powers[i][d - 1], pt);
      }
      std::vector<GFElem> ia = gf_image(F, a, v, powers);
      std::vector<GFElem> ib = gf_image(F, b, v, powers);
      // leading coefficients must survive the evaluation
      if (gf_is_zero(ia.back()) || gf_is_zero(ib.back())) continue;
      if (gf_univ_gcd_degree(F, ia, ib) == 0) certified = true;
    }
    if (!certified) return false;
  }
  return true;
}

// ===== dense modular gcd over GF(p^8) ===================================
//
// Subresultant remainder sequences blow up on non-coprime inputs in many
// symbols, so the general path computes a candidate gcd by evaluation and
// interpolation over GF(p^8) (a gcd is stable under field extension) and
// certifies the result afterwards: exact divisibility into both inputs
// plus certified coprimality of the cofactors prove maximality.  Any
// failure falls back to the remainder sequence.

using UPoly = std::vector<GFElem>;  // univariate over GF(p^8)

void uv_trim(UPoly& f) {
  while (!f.empty() && gf_is_zero(f.back())) f.pop_back();
}

UPoly uv_gcd(const GFCtx& F, UPoly A, UPoly B) {
  uv_trim(A);
  uv_trim(B);
  while (!B.empty()) {
    GFElem ilb = gf_inv(F, B.back());
    while (A.size() >= B.size()) {
      GFElem c = gf_mul(F, A.back(), ilb);
      size_t off = A.size() - B.size();
      for (size_t i = 0; i < B.size(); ++i) {
        GFElem t = gf_mul(F, c, B[i]);
        for (int k = 0; k < F.m; ++k)
          A[off + i][k] = fp_sub(A[off + i][k], t[k], F.p);
      }
      uv_trim(A);
      if (A.empty()) break;
    }
    std::swap(A, B);
    uv_trim(B);
  }
  if (!A.empty()) {
    GFElem il = gf_inv(F, A.back());
    for (auto& c : A) c = gf_mul(F, c, il);
  }
  return A;
}

GFElem uv_eval(const GFCtx& F, const UPoly& f, const GFElem& x) {
  GFElem r = gf_zero(F);
  for (size_t i = f.size(); i-- > 0;) {
    r = gf_mul(F, r, x);
    r = gf_add(F, r, f[i]);
  }
  return r;
}

// multivariate polynomial over GF(p^8): exponent vector -> nonzero coeff
using GFPoly = std::map<std::vector<int>, GFElem>;

void gfp_add_term(GFPoly& r, const std::vector<int>& e, const GFElem& c,
                  const GFCtx& F) {
  if (gf_is_zero(c)) return;
  auto it = r.find(e);
  if (it == r.end()) {
    r.emplace(e, c);
  } else {
    it->second = gf_add(F, it->second, c);
    if (gf_is_zero(it->second)) r.erase(it);
  }
}

GFPoly gfp_from_pp(const GFCtx& F, const PPoly& a) {
  GFPoly r;
  for (const auto& [e, c] : a.t) {
    GFElem v = gf_zero(F);
    v[0] = c;
    r.emplace(e, std::move(v));
  }
  return r;
}

int gfp_degree_in(const GFPoly& a, int v) {
  int d = 0;
  for (const auto& [e, c] : a) d = std::max(d, e[v]);
  return d;
}

bool gfp_uses(const GFPoly& a, int v) { return gfp_degree_in(a, v) > 0; }

bool gfp_is_constant(const GFPoly& a) {
  if (a.empty()) return true;
  if (a.size() > 1) return false;
  for (int x : a.begin()->first)
    if (x) return false;
  return true;
}

GFPoly gfp_scale(const GFCtx& F, const GFPoly& a, const GFElem& c) {
  GFPoly r;
  if (gf_is_zero(c)) return r;
  for (const auto& [e, x] : a) r.emplace(e, gf_mul(F, x, c));
  return r;
}

// grevlex-leading exponent vector
std::vector<int> gfp_lead_exp(const GFPoly& a) {
  auto it = a.begin();
  std::vector<int> best = it->first;
  for (++it; it != a.end(); ++it)
    if (grevlex_less(best, it->first)) best = it->first;
  return best;
}

// scalar-monic normalisation with respect to the grevlex order
GFPoly gfp_monic(const GFCtx& F, const GFPoly& a) {
  if (a.empty()) return a;
  return gfp_scale(F, a, gf_inv(F, a.at(gfp_lead_exp(a))));
}

// substitute symbol v by the point x
GFPoly gfp_eval_var(const GFCtx& F, const GFPoly& a, int v, const GFElem& x) {
  int d = gfp_degree_in(a, v);
  std::vector<GFElem> pw(d + 1, gf_zero(F));
  pw[0][0] = 1;
  for (int i = 1; i <= d; ++i) pw[i] = gf_mul(F, pw[i - 1], x);
  GFPoly r;
  for (const auto& [e, c] : a) {
    std::vector<int> e2 = e;
    e2[v] = 0;
    gfp_add_term(r, e2, gf_mul(F, c, pw[e[v]]), F);
  }
  return r;
}

// coefficient of the grevlex-leading v-free monomial, as a univariate
// polynomial in v; behaves multiplicatively, so it divides the matching
// coefficient of any multiple
UPoly gfp_lambda(const GFCtx& F, const GFPoly& a, int v) {
  std::vector<int> best;
  bool have = false;
  for (const auto& [e, c] : a) {
    std::vector<int> o = e;
    o[v] = 0;
    if (!have || grevlex_less(best, o)) {
      best = o;
      have = true;
    }
  }
  UPoly lc;
  for (const auto& [e, c] : a) {
    std::vector<int> o = e;
    int dv = e[v];
    o[v] = 0;
    if (o == best) {
      if (static_cast<int>(lc.size()) <= dv) lc.resize(dv + 1, gf_zero(F));
      lc[dv] = c;
    }
  }
  return lc;
}

// single-divisor division; empty optional when the division is not exact
std::optional<GFPoly> gfp_try_div(const GFCtx& F, const GFPoly& a,
                                  const GFPoly& b) {
  if (b.empty()) return std::nullopt;
  GFPoly q;
  GFPoly r = a;
  std::vector<int> eb = gfp_lead_exp(b);
  GFElem icb = gf_inv(F, b.at(eb));
  while (!r.empty()) {
    std::vector<int> er = gfp_lead_exp(r);
    std::vector<int> e(er.size());
    for (size_t i = 0; i < e.size(); ++i) {
      e[i] = er[i] - eb[i];
      if (e[i] < 0) return std::nullopt;
    }
    GFElem c = gf_mul(F, r.at(er), icb);
    gfp_add_term(q, e, c, F);
    for (const auto& [be, bc] : b) {
      std::vector<int> te(e.size());
      for (size_t i = 0; i < e.size(); ++i) te[i] = e[i] + be[i];
      GFElem sub = gf_mul(F, c, bc);
      for (int k = 0; k < F.m; ++k) sub[k] = fp_sub(0, sub[k], F.p);
      gfp_add_term(r, te, sub, F);
    }
  }
  return q;
}

GFPoly gfp_gcd(const GFCtx& F, const GFPoly& A, const GFPoly& B,
               uint64_t& state, int depth);

// content of a with respect to the v-coefficient decomposition: the gcd
// of the coefficient polynomials (in the other symbols)
GFPoly gfp_content_in(const GFCtx& F, const GFPoly& a, int v,
                      uint64_t& state, int depth) {
  std::map<int, GFPoly> groups;
  for (const auto& [e, c] : a) {
    std::vector<int> o = e;
    o[v] = 0;
    groups[e[v]].emplace(std::move(o), c);
  }
  GFPoly g;
  for (auto& [dv, part] : groups) {
    g = g.empty() ? gfp_monic(F, part) : gfp_gcd(F, g, part, state, depth + 1);
    if (gfp_is_constant(g)) break;
  }
  return g;
}

GFPoly gfp_one(const GFCtx& F, int nsym) {
  GFPoly r;
  GFElem one = gf_zero(F);
  one[0] = 1;
  r.emplace(std::vector<int>(nsym, 0), std::move(one));
  return r;
}

GFPoly gfp_gcd(const GFCtx& F, const GFPoly& A, const GFPoly& B,
               uint64_t& state, int depth) {
  if (depth > 24) throw std::runtime_error("modular gcd: recursion depth");
  if (A.empty()) return gfp_monic(F, B);
  if (B.empty()) return gfp_monic(F, A);
  int nsym = static_cast<int>(A.begin()->first.size());
  if (gfp_is_constant(A) || gfp_is_constant(B)) return gfp_one(F, nsym);
  // main symbol: highest used by either side
  int v = -1;
  for (int i = nsym - 1; i >= 0; --i)
    if (gfp_uses(A, i) || gfp_uses(B, i)) {
      v = i;
      break;
    }
  if (v < 0) return gfp_one(F, nsym);
  if (!gfp_uses(A, v))
    return gfp_gcd(F, A, gfp_content_in(F, B, v, state, depth), state,
                   depth + 1);
  if (!gfp_uses(B, v))
    return gfp_gcd(F, gfp_content_in(F, A, v, state, depth), B, state,
                   depth + 1);
  // split off the v-contents (Gauss)
  GFPoly ca = gfp_content_in(F, A, v, state, depth);
  GFPoly cb = gfp_content_in(F, B, v, state, depth);
  auto pa = gfp_try_div(F, A, ca);
  auto pb = gfp_try_div(F, B, cb);
  if (!pa || !pb) throw std::runtime_error("modular gcd: content division");
  GFPoly cg = gfp_gcd(F, ca, cb, state, depth + 1);
  // interpolation symbol: next highest used by either primitive part
  int y = -1;
  for (int i = nsym - 1; i >= 0; --i)
    if (i != v && (gfp_uses(*pa, i) || gfp_uses(*pb, i))) {
      y = i;
      break;
    }
  GFPoly prim;
  if (y < 0) {
    // both primitive parts univariate in v
    UPoly ua(gfp_degree_in(*pa, v) + 1, gf_zero(F));
    UPoly ub(gfp_degree_in(*pb, v) + 1, gf_zero(F));
    for (const auto& [e, c] : *pa) ua[e[v]] = c;
    for (const auto& [e, c] : *pb) ub[e[v]] = c;
    UPoly ug = uv_gcd(F, ua, ub);
    for (size_t i = 0; i < ug.size(); ++i) {
      if (gf_is_zero(ug[i])) continue;
      std::vector<int> e(nsym, 0);
      e[v] = static_cast<int>(i);
      prim.emplace(std::move(e), ug[i]);
    }
  } else {
    UPoly la = gfp_lambda(F, *pa, y);
    UPoly lb = gfp_lambda(F, *pb, y);
    UPoly gamma = uv_gcd(F, la, lb);
    int bound = static_cast<int>(gamma.size()) - 1 +
                std::min(gfp_degree_in(*pa, y), gfp_degree_in(*pb, y));
    std::vector<GFElem> pts;
    std::vector<GFPoly> vals;
    std::vector<int> mlead;
    bool have_lead = false;
    int misses = 0;
    while (static_cast<int>(pts.size()) < bound + 1) {
      if (++misses > 8 * (bound + 2))
        throw std::runtime_error("modular gcd: not enough sample points");
      GFElem alpha = gf_point(F, state);
      bool dup = false;
      for (const auto& q : pts) dup = dup || q == alpha;
      if (dup) continue;
      if (gf_is_zero(uv_eval(F, la, alpha)) ||
          gf_is_zero(uv_eval(F, lb, alpha)))
        continue;
      GFPoly ga = gfp_eval_var(F, *pa, y, alpha);
      GFPoly gb = gfp_eval_var(F, *pb, y, alpha);
      GFPoly gi = gfp_gcd(F, ga, gb, state, depth + 1);
      if (gi.empty()) continue;
      std::vector<int> le = gfp_lead_exp(gi);
      if (!have_lead || grevlex_less(le, mlead)) {
        // strictly smaller image gcd: every previous point was unlucky
        pts.clear();
        vals.clear();
        mlead = le;
        have_lead = true;
      } else if (grevlex_less(mlead, le)) {
        continue;  // unlucky point
      }
      pts.push_back(alpha);
      vals.push_back(gfp_scale(F, gi, uv_eval(F, gamma, alpha)));
    }
    // Newton interpolation in y
    std::vector<GFPoly> coef;  // divided-difference coefficients
    for (size_t i = 0; i < pts.size(); ++i) {
      // evaluate the current Newton form at pts[i]
      GFPoly acc;
      GFElem fac = gf_zero(F);
      fac[0] = 1;
      for (size_t j = 0; j < coef.size(); ++j) {
        for (const auto& [e, c] : coef[j])
          gfp_add_term(acc, e, gf_mul(F, c, fac), F);
        GFElem diff = pts[i];
        for (int k = 0; k < F.m; ++k)
          diff[k] = fp_sub(diff[k], pts[j][k], F.p);
        fac = gf_mul(F, fac, diff);
      }
      // next coefficient: (value - acc) / prod_{j<i}(pts[i]-pts[j])
      GFPoly d = vals[i];
      for (const auto& [e, c] : acc) {
        GFElem nc = c;
        for (int k = 0; k < F.m; ++k) nc[k] = fp_sub(0, nc[k], F.p);
        gfp_add_term(d, e, nc, F);
      }
      coef.push_back(gfp_scale(F, d, gf_inv(F, fac)));
    }
    // expand the Newton form into powers of y
    GFPoly H;
    for (size_t i = coef.size(); i-- > 0;) {
      // H = H * (y - pts[i]) + coef[i]
      GFPoly nh;
      for (const auto& [e, c] : H) {
        std::vector<int> e2 = e;
        e2[y] += 1;
        gfp_add_term(nh, e2, c, F);
        GFElem nc = gf_mul(F, c, pts[i]);
        for (int k = 0; k < F.m; ++k) nc[k] = fp_sub(0, nc[k], F.p);
        gfp_add_term(nh, e, nc, F);
      }
      for (const auto& [e, c] : coef[i]) gfp_add_term(nh, e, c, F);
      H = std::move(nh);
    }
    if (H.empty()) throw std::runtime_error("modular gcd: empty interpolant");
    // strip the univariate-in-y content introduced by the gamma scaling
    std::map<std::vector<int>, UPoly> groups;
    for (const auto& [e, c] : H) {
      std::vector<int> o = e;
      int dy = e[y];
      o[y] = 0;
      UPoly& g = groups[o];
      if (static_cast<int>(g.size()) <= dy) g.resize(dy + 1, gf_zero(F));
      g[dy] = c;
    }
    UPoly cont;
    for (auto& [o, g] : groups) {
      cont = cont.empty() ? g : uv_gcd(F, cont, g);
      uv_trim(cont);
      if (cont.size() == 1) break;
    }
    GFPoly contp;
    for (size_t i = 0; i < cont.size(); ++i) {
      if (gf_is_zero(cont[i])) continue;
      std::vector<int> e(nsym, 0);
      e[y] = static_cast<int>(i);
      contp.emplace(std::move(e), cont[i]);
    }
    auto pr = gfp_try_div(F, H, contp);
    if (!pr) throw std::runtime_error("modular gcd: content strip");
    prim = std::move(*pr);
  }
  GFPoly out;
  for (const auto& [e1, c1] : cg)
    for (const auto& [e2, c2] : prim) {
      std::vector<int> e(nsym);
      for (int i = 0; i < nsym; ++i) e[i] = e1[i] + e2[i];
      gfp_add_term(out, e, gf_mul(F, c1, c2), F);
    }
  return gfp_monic(F, out);
}

// single-divisor division; empty optional when the division is not exact
std::optional<PPoly> pp_try_div(const PPoly& a, const PPoly& b) {
  PPoly q = pp_zero(a.p, a.nsym);
  PPoly r = a;
  auto [eb, cb] = pp_lead(b);
  uint32_t icb = fp_inv(cb, a.p);
  while (!r.is_zero()) {
    auto [er, cr] = pp_lead(r);
    std::vector<int> e(er.size());
    for (size_t i = 0; i < e.size(); ++i) {
      e[i] = er[i] - eb[i];
      if (e[i] < 0) return std::nullopt;
    }
    PPoly t = pp_monomial(a.p, a.nsym, e, fp_mul(cr, icb, a.p));
    q = pp_add(q, t);
    r = pp_sub(r, pp_mul(t, b));
  }
  return q;
}

std::optional<PPoly> pp_gcd_modular(const PPoly& a, const PPoly& b) {
  const GFCtx& F = gf_context(a.p);
  uint64_t state = 0x243f6a8885a308d3ull;
  try {
    GFPoly G = gfp_gcd(F, gfp_from_pp(F, a), gfp_from_pp(F, b), state, 0);
    // the true monic gcd has prime-subfield coefficients
    PPoly g = pp_zero(a.p, a.nsym);
    for (const auto& [e, c] : G) {
      for (int i = 1; i < F.m; ++i)
        if (c[i]) return std::nullopt;
      if (c[0]) g.t[e] = c[0];
    }
    if (g.is_zero()) return std::nullopt;
    g = pp_monic(g);
    auto qa = pp_try_div(a, g);
    if (!qa) return std::nullopt;
    auto qb = pp_try_div(b, g);
    if (!qb) return std::nullopt;
    if (g.is_constant()) return g;
    // maximality: a common divisor with certified-coprime cofactors is
    // the gcd
    if (!pp_coprime_certified(*qa, *qb)) return std::nullopt;
    return g;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

PPoly pp_gcd(const PPoly& a, const PPoly& b) {
  if (a.is_zero()) return pp_monic(b);
  if (b.is_zero()) return pp_monic(a);
  if (a.is_constant() || b.is_constant())
    return pp_const(a.p, a.nsym, 1);
  if (pp_coprime_certified(a, b)) return pp_const(a.p, a.nsym, 1);
  if (auto g = pp_gcd_modular(a, b)) return *g;
  // main variable: highest-index symbol used by either
  int v = -1;
  for (int i = a.nsym - 1; i >= 0; --i)
    if (a.uses(i) || b.uses(i)) {
      v = i;
      break;
    }
  assert(v >= 0);
  if (!a.uses(v)) {
    // gcd(a, b) divides a, which is free of v: reduce to contents
    return pp_gcd(a, pp_content_in(b, v));
  }
  if (!b.uses(v)) return pp_gcd(pp_content_in(a, v), b);
  PPoly ca = pp_content_in(a, v);
  PPoly cb = pp_content_in(b, v);
  PPoly A = pp_div_exact(a, ca);
  PPoly B = pp_div_exact(b, cb);
  PPoly cg = pp_gcd(ca, cb);
  if (A.degree_in(v) < B.degree_in(v)) std::swap(A, B);
  while (!B.is_zero()) {
    PPoly R = pp_prem(A, B, v);
    A = B;
    if (R.is_zero()) {
      B = R;
    } else {
      B = pp_div_exact(R, pp_content_in(R, v));
    }
  }
  if (A.degree_in(v) == 0) return pp_monic(cg);
  A = pp_div_exact(A, pp_content_in(A, v));
  return pp_monic(pp_mul(cg, A));
}

PPoly pp_derivative(const PPoly& a, int i) {
  PPoly r = pp_zero(a.p, a.nsym);
  for (const auto& [e, c] : a.t) {
    uint32_t k = static_cast<uint32_t>(e[i] % static_cast<int>(a.p));
    if (k == 0) continue;
    std::vector<int> e2 = e;
    e2[i] -= 1;
    r = pp_add(r, pp_monomial(a.p, a.nsym, e2, fp_mul(c, k, a.p)));
  }
  return r;
}

std::optional<PPoly> pp_pth_root(const PPoly& a) {
  PPoly r = pp_zero(a.p, a.nsym);
  for (const auto& [e, c] : a.t) {
    std::vector<int> e2 = e;
    for (int& x : e2) {
      if (x % static_cast<int>(a.p) != 0) return std::nullopt;
      x /= static_cast<int>(a.p);
    }
    r.t[e2] = c;  // c^(1/p) = c in F_p
  }
  return r;
}

std::string pp_to_string(const PPoly& a, const std::vector<std::string>& names) {
  if (a.is_zero()) return "0";
  // print grevlex-descending for readability
  std::vector<std::pair<std::vector<int>, uint32_t>> ts(a.t.begin(), a.t.end());
  std::sort(ts.begin(), ts.end(), [](const auto& x, const auto& y) {
    return grevlex_less(y.first, x.first);
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : ts) {
    if (!first) os << " + ";
    first = false;
    bool any = false;
    std::ostringstream mono;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (any) mono << "*";
      any = true;
      mono << names[i];
      if (e[i] != 1) mono << "^" << e[i];
    }
    if (!any) {
      os << c;
    } else {
      if (c != 1) os << c << "*";
      os << mono.str();
    }
  }
  return os.str();
}

// =====================================================================
// TowerField / TowerElement
// =====================================================================
std::string TowerField::symbol_name(int i) const {
  if (levels[i] == 0) return params[i];
  int64_t q = 1;
  for (int k = 0; k < levels[i]; ++k) q *= p;
  return params[i] + "^(1/" + std::to_string(q) + ")";
}

bool TowerElement::is_one() const {
  return num.t.size() == 1 && num.is_constant() &&
         num.t.begin()->second == 1 && den.is_constant() &&
         !den.is_zero() && den.t.begin()->second == 1;
}

static TowerElement te_reduce(TowerElement a) {
  if (a.num.is_zero()) {
    a.den = pp_const(a.p, a.num.nsym, 1);
    return a;
  }
  PPoly g = pp_gcd(a.num, a.den);
  if (!g.is_constant()) {
    a.num = pp_div_exact(a.num, g);
    a.den = pp_div_exact(a.den, g);
  }
  // monic denominator
  auto [e, c] = pp_lead(a.den);
  if (c != 1) {
    uint32_t ci = fp_inv(c, a.p);
    a.num = pp_scale(a.num, ci);
    a.den = pp_scale(a.den, ci);
  }
  return a;
}

TowerElement te_zero(uint32_t p, const std::vector<int>& levels) {
  TowerElement r;
  r.p = p;
  r.levels = levels;
  int m = static_cast<int>(levels.size());
  r.num = pp_zero(p, m);
  r.den = pp_const(p, m, 1);
  return r;
}

TowerElement te_const(uint32_t p, const std::vector<int>& levels, uint32_t c) {
  TowerElement r = te_zero(p, levels);
  r.num = pp_const(p, static_cast<int>(levels.size()), c);
  return r;
}

TowerElement te_symbol(uint32_t p, const std::vector<int>& levels, int i) {
  TowerElement r = te_zero(p, levels);
  std::vector<int> e(levels.size(), 0);
  e[i] = 1;
  r.num = pp_monomial(p, static_cast<int>(levels.size()), e, 1);
  return r;
}

TowerElement te_param(uint32_t p, const std::vector<int>& levels, int i) {
  TowerElement r = te_zero(p, levels);
  std::vector<int> e(levels.size(), 0);
  int64_t q = 1;
  for (int k = 0; k < levels[i]; ++k) q *= p;
  e[i] = static_cast<int>(q);
  r.num = pp_monomial(p, static_cast<int>(levels.size()), e, 1);
  return r;
}

TowerElement te_make(uint32_t p, const std::vector<int>& levels,
                     const PPoly& num, const PPoly& den) {
  if (den.is_zero()) throw std::domain_error("te_make: zero denominator");
  TowerElement r;
  r.p = p;
  r.levels = levels;
  r.num = num;
  r.den = den;
  return te_reduce(r);
}

TowerElement te_embed(const TowerElement& a, const std::vector<int>& levels) {
  assert(levels.size() == a.levels.size());
  bool same = true;
  for (size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < a.levels[i])
      throw std::logic_error("te_embed: target level below element level");
    if (levels[i] != a.levels[i]) same = false;
  }
  if (same) return a;
  std::vector<int64_t> scale(levels.size(), 1);
  for (size_t i = 0; i < levels.size(); ++i)
    for (int k = a.levels[i]; k < levels[i]; ++k) scale[i] *= a.p;
  auto remap = [&](const PPoly& q) {
    PPoly r = pp_zero(a.p, q.nsym);
    for (const auto& [e, c] : q.t) {
      std::vector<int> e2(e.size());
      for (size_t i = 0; i < e.size(); ++i)
        e2[i] = static_cast<int>(e[i] * scale[i]);
      r.t[e2] = c;
    }
    return r;
  };
  TowerElement r;
  r.p = a.p;
  r.levels = levels;
  r.num = remap(a.num);
  r.den = remap(a.den);
  return r;
}

static std::vector<int> level_join(const std::vector<int>& a,
                                   const std::vector<int>& b) {
  std::vector<int> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

TowerElement te_add(const TowerElement& a, const TowerElement& b) {
  assert(a.p == b.p && a.levels.size() == b.levels.size());
  auto lv = level_join(a.levels, b.levels);
  TowerElement x = te_embed(a, lv), y = te_embed(b, lv);
  TowerElement r;
  r.p = a.p;
  r.levels = lv;
  r.num = pp_add(pp_mul(x.num, y.den), pp_mul(y.num, x.den));
  r.den = pp_mul(x.den, y.den);
  return te_reduce(r);
}

TowerElement te_neg(const TowerElement& a) {
  TowerElement r = a;
  r.num = pp_neg(r.num);
  return r;
}

TowerElement te_sub(const TowerElement& a, const TowerElement& b) {
  return te_add(a, te_neg(b));
}

TowerElement te_mul(const TowerElement& a, const TowerElement& b) {
  assert(a.p == b.p && a.levels.size() == b.levels.size());
  auto lv = level_join(a.levels, b.levels);
  TowerElement x = te_embed(a, lv), y = te_embed(b, lv);
  TowerElement r;
  r.p = a.p;
  r.levels = lv;
  r.num = pp_mul(x.num, y.num);
  r.den = pp_mul(x.den, y.den);
  return te_reduce(r);
}

TowerElement te_inv(const TowerElement& a) {
  if (a.is_zero()) throw std::domain_error("te_inv: division by zero");
  TowerElement r;
  r.p = a.p;
  r.levels = a.levels;
  r.num = a.den;
  r.den = a.num;
  return te_reduce(r);
}

TowerElement te_div(const TowerElement& a, const TowerElement& b) {
  return te_mul(a, te_inv(b));
}

TowerElement te_pow(const TowerElement& a, uint64_t e) {
  TowerElement r = te_const(a.p, a.levels, 1);
  TowerElement base = a;
  while (e) {
    if (e & 1) r = te_mul(r, base);
    base = te_mul(base, base);
    e >>= 1;
  }
  return r;
}

bool te_equal(const TowerElement& a, const TowerElement& b) {
  if (a.p != b.p || a.levels.size() != b.levels.size()) return false;
  auto lv = level_join(a.levels, b.levels);
  TowerElement x = te_embed(a, lv), y = te_embed(b, lv);
  return pp_equal(x.num, y.num) && pp_equal(x.den, y.den);
}

TowerElement te_normalize_levels(const TowerElement& a) {
  TowerElement r = a;
  int p = static_cast<int>(a.p);
  for (size_t i = 0; i < r.levels.size(); ++i) {
    while (r.levels[i] > 0) {
      bool ok = true;
      for (const auto& [e, c] : r.num.t)
        if (e[i] % p != 0) { ok = false; break; }
      if (ok)
        for (const auto& [e, c] : r.den.t)
          if (e[i] % p != 0) { ok = false; break; }
      if (!ok) break;
      auto shrink = [&](PPoly& q) {
        PPoly s = pp_zero(q.p, q.nsym);
        for (const auto& [e, c] : q.t) {
          std::vector<int> e2 = e;
          e2[i] /= p;
          s.t[e2] = c;
        }
        q = s;
      };
      shrink(r.num);
      shrink(r.den);
      r.levels[i] -= 1;
    }
  }
  return r;
}

TowerElement te_pth_root(const TowerElement& a) {
  // At one level up every exponent vector denotes the p-th root of the
  // same monomial, and F_p coefficients are Frobenius-fixed, so the data
  // is unchanged; then shrink to minimal levels.
  TowerElement r = a;
  for (int& l : r.levels) l += 1;
  return te_normalize_levels(r);
}

std::optional<TowerElement> te_pth_root_within(
    const TowerElement& a, const std::vector<int>& levels) {
  TowerElement r = te_pth_root(a);
  for (size_t i = 0; i < levels.size(); ++i)
    if (r.levels[i] > levels[i]) return std::nullopt;
  return r;
}

TowerElement te_derivative(const TowerElement& a, int i) {
  TowerElement r;
  r.p = a.p;
  r.levels = a.levels;
  r.num = pp_sub(pp_mul(pp_derivative(a.num, i), a.den),
                 pp_mul(a.num, pp_derivative(a.den, i)));
  r.den = pp_mul(a.den, a.den);
  return te_reduce(r);
}

std::string te_to_string(const TowerElement& a, const TowerField& F) {
  TowerField top = F;
  top.levels = a.levels;
  std::vector<std::string> names;
  for (int i = 0; i < top.nparams(); ++i) names.push_back(top.symbol_name(i));
  std::string n = pp_to_string(a.num, names);
  if (a.den.is_constant()) return n;
  return "(" + n + ")/(" + pp_to_string(a.den, names) + ")";
}

std::map<std::vector<int>, TowerElement> te_expand_over_base(
    const TowerElement& a, const std::vector<int>& base_levels) {
  size_t m = a.levels.size();
  std::vector<int64_t> P(m, 1);
  int64_t E = 1;
  for (size_t i = 0; i < m; ++i) {
    int d = a.levels[i] - base_levels[i];
    if (d < 0) throw std::logic_error("te_expand_over_base: levels below base");
    for (int k = 0; k < d; ++k) P[i] *= a.p;
    E = std::max(E, P[i]);
  }
  // a = num * den^{E-1} / den^{E}; den^{E} has all exponents divisible by
  // each P_i, hence lies in the base field.
  PPoly top = pp_mul(a.num, pp_pow(a.den, static_cast<uint64_t>(E - 1)));
  PPoly bot = pp_pow(a.den, static_cast<uint64_t>(E));
  PPoly bot_base = pp_zero(a.p, static_cast<int>(m));
  for (const auto& [e, c] : bot.t) {
    std::vector<int> e2(m);
    for (size_t i = 0; i < m; ++i) {
      assert(e[i] % P[i] == 0);
      e2[i] = static_cast<int>(e[i] / P[i]);
    }
    bot_base.t[e2] = c;
  }
  std::map<std::vector<int>, TowerElement> out;
  for (const auto& [e, c] : top.t) {
    std::vector<int> res(m), quo(m);
    for (size_t i = 0; i < m; ++i) {
      res[i] = static_cast<int>(e[i] % P[i]);
      quo[i] = static_cast<int>(e[i] / P[i]);
    }
    TowerElement coeff = te_make(a.p, base_levels,
                                 pp_monomial(a.p, static_cast<int>(m), quo, c),
                                 bot_base);
    auto it = out.find(res);
    if (it == out.end())
      out.emplace(res, coeff);
    else
      it->second = te_add(it->second, coeff);
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

// =====================================================================
// FieldDerivation / constants subfield
// =====================================================================
TowerElement FieldDerivation::apply(const TowerElement& a) const {
  assert(!coeffs.empty());
  TowerElement acc = te_zero(a.p, a.levels);
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    auto lv = level_join(a.levels, coeffs[i].levels);
    TowerElement x = te_embed(a, lv);
    acc = te_add(acc, te_mul(coeffs[i], te_derivative(x, static_cast<int>(i))));
  }
  return acc;
}

// Gaussian kernel of a matrix over a tower field.  Rows are equations,
// columns are unknowns.  Returns an echelonised basis of the kernel
// (pivots chosen left to right so that output generators are supported on
// the smallest-index coordinates first).
static std::vector<std::vector<TowerElement>> te_kernel(
    std::vector<std::vector<TowerElement>> M, uint32_t p,
    const std::vector<int>& levels, size_t ncols) {
  size_t nrows = M.size();
  std::vector<int> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < ncols && r < nrows; ++c) {
    size_t pr = r;
    while (pr < nrows && M[pr][c].is_zero()) ++pr;
    if (pr == nrows) continue;
    std::swap(M[r], M[pr]);
    TowerElement inv = te_inv(M[r][c]);
    for (size_t j = c; j < ncols; ++j) M[r][j] = te_mul(M[r][j], inv);
    for (size_t i = 0; i < nrows; ++i) {
      if (i == r || M[i][c].is_zero()) continue;
      TowerElement f = M[i][c];
      for (size_t j = c; j < ncols; ++j)
        M[i][j] = te_sub(M[i][j], te_mul(f, M[r][j]));
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  std::vector<bool> is_pivot(ncols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<TowerElement>> basis;
  for (size_t c = 0; c < ncols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<TowerElement> v(ncols, te_zero(p, levels));
    v[c] = te_const(p, levels, 1);
    for (size_t i = 0; i < pivot_col.size(); ++i)
      v[pivot_col[i]] = te_neg(M[i][c]);
    basis.push_back(std::move(v));
  }
  return basis;
}

static int te_rank(std::vector<std::vector<TowerElement>> M, size_t ncols) {
  size_t nrows = M.size();
  size_t r = 0;
  for (size_t c = 0; c < ncols && r < nrows; ++c) {
    size_t pr = r;
    while (pr < nrows && M[pr][c].is_zero()) ++pr;
    if (pr == nrows) continue;
    std::swap(M[r], M[pr]);
    TowerElement inv = te_inv(M[r][c]);
    for (size_t j = c; j < ncols; ++j) M[r][j] = te_mul(M[r][j], inv);
    for (size_t i = r + 1; i < nrows; ++i) {
      if (M[i][c].is_zero()) continue;
      TowerElement f = M[i][c];
      for (size_t j = c; j < ncols; ++j)
        M[i][j] = te_sub(M[i][j], te_mul(f, M[r][j]));
    }
    ++r;
  }
  return static_cast<int>(r);
}

std::vector<std::vector<TowerElement>> te_matrix_kernel(
    const std::vector<std::vector<TowerElement>>& M, uint32_t p,
    const std::vector<int>& levels, size_t ncols) {
  return te_kernel(M, p, levels, ncols);
}

int te_matrix_rank(const std::vector<std::vector<TowerElement>>& M,
                   size_t ncols) {
  return te_rank(M, ncols);
}

ConstantsResult constants_subfield(const TowerField& L,
                                   const std::vector<int>& base_levels,
                                   const std::vector<FieldDerivation>& ders) {
  uint32_t p = L.p;
  size_t m = L.params.size();
  std::vector<int> raised;
  for (size_t i = 0; i < m; ++i) {
    int d = L.levels[i] - base_levels[i];
    if (d < 0 || d > 1)
      throw std::domain_error(
          "constants_subfield: extension must be height one over the base");
    if (d == 1) raised.push_back(static_cast<int>(i));
  }
  // validate that every derivation kills the base: only raised directions
  // may carry nonzero coefficients
  for (const auto& D : ders) {
    if (D.coeffs.size() != m)
      throw std::domain_error("constants_subfield: derivation arity mismatch");
    for (size_t i = 0; i < m; ++i)
      if (!D.coeffs[i].is_zero() && L.levels[i] == base_levels[i])
        throw std::domain_error(
            "constants_subfield: derivation does not kill the base field");
  }
  // monomial basis of L over the base: u^c with 0 <= c_i < p on raised
  // symbols, enumerated by total degree then lexicographically
  std::vector<std::vector<int>> basis;
  size_t nb = 1;
  for (size_t k = 0; k < raised.size(); ++k) nb *= p;
  for (size_t idx = 0; idx < nb; ++idx) {
    std::vector<int> c(m, 0);
    size_t v = idx;
    for (int ri : raised) {
      c[ri] = static_cast<int>(v % p);
      v /= p;
    }
    basis.push_back(c);
  }
  std::sort(basis.begin(), basis.end(), [](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (int x : a) da += x;
    for (int x : b) db += x;
    if (da != db) return da < db;
    return a < b;
  });
  auto basis_index = [&](const std::vector<int>& c) -> int {
    auto it = std::find(basis.begin(), basis.end(), c);
    return it == basis.end() ? -1 : static_cast<int>(it - basis.begin());
  };

  // rows: one per (derivation, output basis slot); columns: basis monomials
  std::vector<std::vector<TowerElement>> M;
  for (const auto& D : ders) {
    std::vector<std::vector<TowerElement>> cols(
        basis.size(),
        std::vector<TowerElement>(basis.size(), te_zero(p, base_levels)));
    for (size_t bc = 0; bc < basis.size(); ++bc) {
      // D(u^c) = sum_i a_i c_i u^{c - e_i}
      TowerElement val = te_zero(p, L.levels);
      for (size_t i = 0; i < m; ++i) {
        int ci = basis[bc][i];
        if (ci == 0 || D.coeffs[i].is_zero()) continue;
        std::vector<int> e2 = basis[bc];
        e2[i] -= 1;
        TowerElement mono = te_make(
            p, L.levels, pp_monomial(p, static_cast<int>(m), e2, 1),
            pp_const(p, static_cast<int>(m), 1));
        TowerElement term =
            te_mul(te_mul(te_embed(D.coeffs[i], level_join(D.coeffs[i].levels,
                                                           L.levels)),
                          te_const(p, L.levels, static_cast<uint32_t>(ci % p))),
                   te_embed(mono, L.levels));
        val = te_add(val, term);
      }
      if (val.is_zero()) continue;
      auto exp = te_expand_over_base(te_embed(val, L.levels), base_levels);
      for (const auto& [res, coeff] : exp) {
        int bi = basis_index(res);
        if (bi < 0) throw std::logic_error("constants_subfield: basis overflow");
        cols[bi][bc] = coeff;
      }
    }
    for (auto& row : cols) M.push_back(std::move(row));
  }

  ConstantsResult out;
  auto kern = te_kernel(std::move(M), p, base_levels, basis.size());

  // derivation span rank over L determines [L : L']
  std::vector<std::vector<TowerElement>> span;
  for (const auto& D : ders) {
    std::vector<TowerElement> row;
    for (int ri : raised) row.push_back(te_embed(
        D.coeffs[ri], level_join(D.coeffs[ri].levels, L.levels)));
    span.push_back(std::move(row));
  }
  out.log_degree = raised.empty() || span.empty()
                       ? 0
                       : te_rank(std::move(span), raised.size());

  // build generators and test for sub-tower shape
  std::vector<std::vector<int>> monos;
  bool all_monomial = true;
  for (const auto& v : kern) {
    TowerElement g = te_zero(p, L.levels);
    int support = 0;
    std::vector<int> the_mono;
    for (size_t c = 0; c < basis.size(); ++c) {
      if (v[c].is_zero()) continue;
      ++support;
      the_mono = basis[c];
      TowerElement mono = te_make(
          p, L.levels, pp_monomial(p, static_cast<int>(m), basis[c], 1),
          pp_const(p, static_cast<int>(m), 1));
      g = te_add(g, te_mul(te_embed(v[c], level_join(v[c].levels, L.levels)),
                           mono));
    }
    if (support != 1) all_monomial = false;
    if (support == 1) monos.push_back(the_mono);
    out.generators.push_back(te_normalize_levels(g));
  }
  if (all_monomial) {
    std::vector<int> sub(m, 0);
    for (const auto& c : monos)
      for (size_t i = 0; i < m; ++i)
        if (c[i] > 0) sub[i] = 1;
    size_t expect = 1;
    for (size_t i = 0; i < m; ++i)
      if (sub[i]) expect *= p;
    if (monos.size() == expect) {
      out.is_subtower = true;
      out.subtower_levels = base_levels;
      for (size_t i = 0; i < m; ++i)
        if (sub[i]) out.subtower_levels[i] = base_levels[i] + 1;
    }
  }
  // consistency: kernel dimension * p^rank = p^{#raised}
  {
    size_t expect = 1;
    for (int k = 0; k < out.log_degree; ++k) expect *= p;
    if (out.generators.size() * expect != nb)
      throw std::logic_error("constants_subfield: degree bookkeeping mismatch");
  }
  return out;
}

}  // namespace insep
