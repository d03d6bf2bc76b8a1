// poly.cpp — multivariate polynomial arithmetic over tower fields.
#include "insep/poly.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace insep {

// ===== ring construction ==============================================

int Ring::var_index(const std::string& name) const {
  for (int i = 0; i < nvars(); ++i)
    if (vars[i] == name) return i;
  return -1;
}

RingPtr make_ring(const TowerField& field, const std::vector<Block>& blocks) {
  auto r = std::make_shared<Ring>();
  r->field = field;
  r->blocks = blocks;
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
    for (const auto& v : blocks[b].vars) {
      if (r->var_index(v) >= 0)
        throw std::invalid_argument("make_ring: duplicate variable " + v);
      for (const auto& q : field.params)
        if (q == v)
          throw std::invalid_argument("make_ring: variable shadows parameter " + v);
      r->vars.push_back(v);
      r->block_of.push_back(b);
    }
  }
  return r;
}

RingPtr ring_with_levels(const RingPtr& r, const std::vector<int>& levels) {
  if (levels == r->field.levels) return r;
  auto s = std::make_shared<Ring>(*r);
  s->field.levels = levels;
  return s;
}

// ===== basic structure =================================================

bool MultiPoly::is_constant() const {
  if (t.empty()) return true;
  if (t.size() != 1) return false;
  const auto& e = t.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
}

int MultiPoly::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : t) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

int MultiPoly::degree_in(int var) const {
  int d = 0;
  for (const auto& [e, c] : t) d = std::max(d, e[var]);
  return d;
}

std::vector<int> MultiPoly::block_degrees(const std::vector<int>& e) const {
  std::vector<int> d(ring->nblocks(), 0);
  for (int i = 0; i < ring->nvars(); ++i) d[ring->block_of[i]] += e[i];
  return d;
}

std::optional<std::vector<int>> MultiPoly::multidegree() const {
  if (t.empty()) return std::nullopt;
  auto d0 = block_degrees(t.begin()->first);
  for (const auto& [e, c] : t)
    if (block_degrees(e) != d0) return std::nullopt;
  return d0;
}

// ===== construction and arithmetic =====================================

static void mp_insert(MultiPoly& r, const std::vector<int>& e,
                      const TowerElement& c) {
  if (c.is_zero()) return;
  auto it = r.t.find(e);
  if (it == r.t.end()) {
    r.t.emplace(e, c);
  } else {
    TowerElement s = te_add(it->second, c);
    if (s.is_zero())
      r.t.erase(it);
    else
      it->second = std::move(s);
  }
}

MultiPoly mp_zero(const RingPtr& r) {
  MultiPoly q;
  q.ring = r;
  return q;
}

MultiPoly mp_const(const RingPtr& r, const TowerElement& c) {
  MultiPoly q = mp_zero(r);
  mp_insert(q, std::vector<int>(r->nvars(), 0), c);
  return q;
}

MultiPoly mp_one(const RingPtr& r) {
  return mp_const(r, te_const(r->field.p, r->field.levels, 1));
}

MultiPoly mp_var(const RingPtr& r, int var) {
  std::vector<int> e(r->nvars(), 0);
  e[var] = 1;
  return mp_monomial(r, e, te_const(r->field.p, r->field.levels, 1));
}

MultiPoly mp_monomial(const RingPtr& r, const std::vector<int>& e,
                      const TowerElement& c) {
  assert(static_cast<int>(e.size()) == r->nvars());
  MultiPoly q = mp_zero(r);
  mp_insert(q, e, c);
  return q;
}

MultiPoly mp_add(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly r = a;
  for (const auto& [e, c] : b.t) mp_insert(r, e, c);
  return r;
}

MultiPoly mp_neg(const MultiPoly& a) {
  MultiPoly r = a;
  for (auto& [e, c] : r.t) c = te_neg(c);
  return r;
}

MultiPoly mp_sub(const MultiPoly& a, const MultiPoly& b) {
  return mp_add(a, mp_neg(b));
}

MultiPoly mp_mul_monomial(const MultiPoly& a, const std::vector<int>& e,
                          const TowerElement& c) {
  MultiPoly r = mp_zero(a.ring);
  if (c.is_zero()) return r;
  for (const auto& [ea, ca] : a.t) {
    std::vector<int> es(ea);
    for (size_t i = 0; i < es.size(); ++i) es[i] += e[i];
    mp_insert(r, es, te_mul(ca, c));
  }
  return r;
}

MultiPoly mp_mul(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly r = mp_zero(a.ring);
  for (const auto& [eb, cb] : b.t) {
    MultiPoly part = mp_mul_monomial(a, eb, cb);
    r = mp_add(r, part);
  }
  return r;
}

MultiPoly mp_scale(const MultiPoly& a, const TowerElement& c) {
  MultiPoly r = mp_zero(a.ring);
  for (const auto& [e, ca] : a.t) mp_insert(r, e, te_mul(ca, c));
  return r;
}

MultiPoly mp_pow(const MultiPoly& a, uint64_t e) {
  MultiPoly r = mp_one(a.ring);
  MultiPoly base = a;
  while (e) {
    if (e & 1) r = mp_mul(r, base);
    base = mp_mul(base, base);
    e >>= 1;
  }
  return r;
}

bool mp_equal(const MultiPoly& a, const MultiPoly& b) {
  return mp_sub(a, b).is_zero();
}

bool mp_proportional(const MultiPoly& a, const MultiPoly& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  if (a.t.size() != b.t.size()) return false;
  auto ia = a.t.begin(), ib = b.t.begin();
  TowerElement ratio = te_div(ia->second, ib->second);
  for (; ia != a.t.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    if (!te_equal(ia->second, te_mul(ratio, ib->second))) return false;
  }
  return true;
}

// ===== derivatives ======================================================

MultiPoly mp_derivative(const MultiPoly& a, int var) {
  uint32_t p = a.ring->field.p;
  MultiPoly r = mp_zero(a.ring);
  for (const auto& [e, c] : a.t) {
    uint32_t k = static_cast<uint32_t>(e[var] % static_cast<int>(p));
    if (e[var] == 0 || k == 0) continue;
    std::vector<int> e2(e);
    e2[var] -= 1;
    mp_insert(r, e2, te_mul(c, te_const(p, c.levels, k)));
  }
  return r;
}

MultiPoly mp_symbol_derivative(const MultiPoly& a, int sym) {
  MultiPoly r = mp_zero(a.ring);
  const auto& lv = a.ring->field.levels;
  for (const auto& [e, c] : a.t)
    mp_insert(r, e, te_derivative(te_embed(c, lv), sym));
  return r;
}

// ===== ring-changing maps ==============================================

MultiPoly mp_set_var_one(const MultiPoly& a, int var, const RingPtr& target) {
  const Ring& src = *a.ring;
  std::vector<int> slot(src.nvars(), -1);
  for (int i = 0; i < src.nvars(); ++i) {
    if (i == var) continue;
    slot[i] = target->var_index(src.vars[i]);
    if (slot[i] < 0)
      throw std::invalid_argument("mp_set_var_one: target ring misses " +
                                  src.vars[i]);
  }
  MultiPoly r = mp_zero(target);
  for (const auto& [e, c] : a.t) {
    std::vector<int> e2(target->nvars(), 0);
    for (int i = 0; i < src.nvars(); ++i)
      if (i != var) e2[slot[i]] = e[i];
    mp_insert(r, e2, c);
  }
  return r;
}

MultiPoly mp_transport(const MultiPoly& a, const RingPtr& target) {
  const Ring& src = *a.ring;
  if (src.field.p != target->field.p || src.field.params != target->field.params)
    throw std::invalid_argument("mp_transport: incompatible coefficient fields");
  std::vector<int> slot(src.nvars(), -1);
  for (int i = 0; i < src.nvars(); ++i)
    slot[i] = target->var_index(src.vars[i]);
  MultiPoly r = mp_zero(target);
  for (const auto& [e, c] : a.t) {
    std::vector<int> e2(target->nvars(), 0);
    for (int i = 0; i < src.nvars(); ++i) {
      if (e[i] == 0) continue;
      if (slot[i] < 0)
        throw std::invalid_argument("mp_transport: target ring misses " +
                                    src.vars[i]);
      e2[slot[i]] = e[i];
    }
    TowerElement cc = te_normalize_levels(c);
    for (size_t k = 0; k < cc.levels.size(); ++k)
      if (cc.levels[k] > target->field.levels[k])
        throw std::invalid_argument(
            "mp_transport: coefficient outside the target field");
    mp_insert(r, e2, te_embed(cc, target->field.levels));
  }
  return r;
}

// evaluate a PPoly (over params at level zero) at the given images
static TowerElement eval_ppoly(const PPoly& q, uint32_t p,
                               const RingPtr& target,
                               const std::vector<TowerElement>& images) {
  TowerElement acc = te_zero(p, target->field.levels);
  for (const auto& [e, c] : q.t) {
    TowerElement term = te_const(p, target->field.levels, c);
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0)
        term = te_mul(term, te_pow(images[i], static_cast<uint64_t>(e[i])));
    acc = te_add(acc, term);
  }
  return acc;
}

MultiPoly mp_substitute_params(const MultiPoly& a, const RingPtr& target,
                               const std::vector<TowerElement>& images) {
  uint32_t p = a.ring->field.p;
  if (p != target->field.p)
    throw std::invalid_argument("mp_substitute_params: characteristic mismatch");
  if (images.size() != a.ring->field.params.size())
    throw std::invalid_argument("mp_substitute_params: wrong image count");
  std::vector<int> slot(a.ring->nvars());
  for (int i = 0; i < a.ring->nvars(); ++i) {
    slot[i] = target->var_index(a.ring->vars[i]);
    if (slot[i] < 0)
      throw std::invalid_argument("mp_substitute_params: target ring misses " +
                                  a.ring->vars[i]);
  }
  MultiPoly r = mp_zero(target);
  for (const auto& [e, c] : a.t) {
    TowerElement cc = te_normalize_levels(c);
    for (int lv : cc.levels)
      if (lv != 0)
        throw std::invalid_argument(
            "mp_substitute_params: coefficient not over the base field");
    TowerElement val = te_div(eval_ppoly(cc.num, p, target, images),
                              eval_ppoly(cc.den, p, target, images));
    std::vector<int> e2(target->nvars(), 0);
    for (int i = 0; i < a.ring->nvars(); ++i) e2[slot[i]] = e[i];
    mp_insert(r, e2, val);
  }
  return r;
}

// ===== p-th roots =======================================================

std::optional<MultiPoly> mp_pth_root_within(const MultiPoly& a,
                                            const std::vector<int>& levels) {
  uint32_t p = a.ring->field.p;
  RingPtr out_ring = ring_with_levels(a.ring, levels);
  MultiPoly r = mp_zero(out_ring);
  for (const auto& [e, c] : a.t) {
    std::vector<int> e2(e);
    for (int& x : e2) {
      if (x % static_cast<int>(p) != 0) return std::nullopt;
      x /= static_cast<int>(p);
    }
    auto root = te_pth_root_within(c, levels);
    if (!root) return std::nullopt;
    mp_insert(r, e2, *root);
  }
  return r;
}

// ===== gcd and exact division ==========================================

// coefficients of a viewed as a polynomial in variable v
static std::map<int, MultiPoly> coeffs_in(const MultiPoly& a, int v) {
  std::map<int, MultiPoly> out;
  for (const auto& [e, c] : a.t) {
    std::vector<int> e2(e);
    int d = e2[v];
    e2[v] = 0;
    auto it = out.find(d);
    if (it == out.end()) it = out.emplace(d, mp_zero(a.ring)).first;
    mp_insert(it->second, e2, c);
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

static MultiPoly from_coeffs(const RingPtr& r, int v,
                             const std::map<int, MultiPoly>& cs) {
  MultiPoly out = mp_zero(r);
  for (const auto& [d, q] : cs) {
    std::vector<int> shift(r->nvars(), 0);
    shift[v] = d;
    out = mp_add(out, mp_mul_monomial(q, shift,
                                      te_const(r->field.p, r->field.levels, 1)));
  }
  return out;
}

static int main_var(const MultiPoly& a, const MultiPoly& b) {
  for (int v = a.ring->nvars() - 1; v >= 0; --v)
    if (a.uses(v) || b.uses(v)) return v;
  return -1;
}

// divide by the standard-order leading coefficient
static MultiPoly mp_monic_std(const MultiPoly& a) {
  if (a.is_zero()) return a;
  TermOrder ord = TermOrder::standard(*a.ring);
  auto [e, c] = mp_lead(a, ord);
  return mp_scale(a, te_inv(c));
}

static MultiPoly mp_content_in(const MultiPoly& a, int v) {
  auto cs = coeffs_in(a, v);
  MultiPoly g = mp_zero(a.ring);
  for (const auto& [d, q] : cs) g = mp_gcd(g, q);
  return g;
}

// pseudo-remainder of a by b in variable v (lc(b)^k * a mod b)
static MultiPoly mp_prem(const MultiPoly& a, const MultiPoly& b, int v) {
  auto cb = coeffs_in(b, v);
  int db = cb.rbegin()->first;
  const MultiPoly& lb = cb.rbegin()->second;
  MultiPoly r = a;
  while (true) {
    auto cr = coeffs_in(r, v);
    if (cr.empty()) return r;
    int dr = cr.rbegin()->first;
    if (dr < db) return r;
    const MultiPoly lr = cr.rbegin()->second;
    // r <- lb*r - lr*v^{dr-db}*b
    std::vector<int> shift(a.ring->nvars(), 0);
    shift[v] = dr - db;
    MultiPoly sub = mp_mul_monomial(
        mp_mul(lr, b), shift, te_const(a.ring->field.p, a.ring->field.levels, 1));
    r = mp_sub(mp_mul(lb, r), sub);
  }
}

// clear denominators and flatten into F_p[symbols, vars]: coefficient
// arithmetic in the prime field is far cheaper than reduced-fraction
// tower arithmetic during the PRS
static PPoly mp_flatten(const MultiPoly& a) {
  uint32_t p = a.ring->field.p;
  int nsym = a.ring->field.nparams();
  int nvars = a.ring->nvars();
  PPoly lcm = pp_const(p, nsym, 1);
  for (const auto& [e, c] : a.t)
    lcm = pp_div_exact(pp_mul(lcm, c.den), pp_gcd(lcm, c.den));
  PPoly out = pp_zero(p, nsym + nvars);
  for (const auto& [e, c] : a.t) {
    PPoly num = pp_mul(c.num, pp_div_exact(lcm, c.den));
    for (const auto& [pe, pc] : num.t) {
      std::vector<int> ee(pe);
      ee.insert(ee.end(), e.begin(), e.end());
      out = pp_add(out, pp_monomial(p, nsym + nvars, ee, pc));
    }
  }
  return out;
}

static MultiPoly mp_unflatten(const PPoly& f, const RingPtr& ring) {
  int nsym = ring->field.nparams();
  int nvars = ring->nvars();
  MultiPoly out = mp_zero(ring);
  std::map<std::vector<int>, PPoly> groups;
  for (const auto& [e, c] : f.t) {
    std::vector<int> se(e.begin(), e.begin() + nsym);
    std::vector<int> ve(e.begin() + nsym, e.end());
    auto it = groups.find(ve);
    if (it == groups.end())
      it = groups.emplace(ve, pp_zero(f.p, nsym)).first;
    it->second = pp_add(it->second, pp_monomial(f.p, nsym, se, c));
  }
  for (const auto& [ve, num] : groups)
    out = mp_add(out, mp_monomial(ring, ve,
                                  te_make(f.p, ring->field.levels, num,
                                          pp_const(f.p, nsym, 1))));
  return out;
}

MultiPoly mp_gcd(const MultiPoly& a, const MultiPoly& b) {
  if (a.is_zero()) return b.is_zero() ? b : mp_monic_std(b);
  if (b.is_zero()) return mp_monic_std(a);
  if (a.is_constant() || b.is_constant()) return mp_one(a.ring);
  {
    PPoly g = pp_gcd(mp_flatten(a), mp_flatten(b));
    // primitive part with respect to the ambient variables: symbol-only
    // content is a unit of the coefficient field
    int nsym = a.ring->field.nparams();
    PPoly content = pp_zero(g.p, nsym);
    std::map<std::vector<int>, PPoly> groups;
    for (const auto& [e, c] : g.t) {
      std::vector<int> se(e.begin(), e.begin() + nsym);
      std::vector<int> ve(e.begin() + nsym, e.end());
      auto it = groups.find(ve);
      if (it == groups.end())
        it = groups.emplace(ve, pp_zero(g.p, nsym)).first;
      it->second = pp_add(it->second, pp_monomial(g.p, nsym, se, c));
    }
    for (const auto& [ve, q] : groups)
      content = content.is_zero() ? pp_monic(q) : pp_gcd(content, q);
    PPoly prim = pp_zero(g.p, g.nsym);
    for (const auto& [ve, q] : groups) {
      PPoly red = pp_div_exact(q, content);
      for (const auto& [se, c] : red.t) {
        std::vector<int> ee(se);
        ee.insert(ee.end(), ve.begin(), ve.end());
        prim = pp_add(prim, pp_monomial(g.p, g.nsym, ee, c));
      }
    }
    return mp_monic_std(mp_unflatten(prim, a.ring));
  }
}

MultiPoly mp_div_exact(const MultiPoly& a, const MultiPoly& b) {
  if (b.is_zero()) throw std::logic_error("mp_div_exact: division by zero");
  TermOrder ord = TermOrder::standard(*a.ring);
  MultiPoly r = a;
  MultiPoly q = mp_zero(a.ring);
  auto [eb, cb] = mp_lead(b, ord);
  while (!r.is_zero()) {
    auto [er, cr] = mp_lead(r, ord);
    std::vector<int> e2(er);
    for (size_t i = 0; i < e2.size(); ++i) {
      e2[i] -= eb[i];
      if (e2[i] < 0) throw std::logic_error("mp_div_exact: not divisible");
    }
    TowerElement c2 = te_div(cr, cb);
    q = mp_add(q, mp_monomial(a.ring, e2, c2));
    r = mp_sub(r, mp_mul_monomial(b, e2, c2));
  }
  return q;
}

// ===== printing =========================================================

static std::string coeff_string(const TowerElement& c, const TowerField& F) {
  std::string s = te_to_string(c, F);
  bool needs_parens = !c.den.is_constant() || c.num.t.size() > 1;
  return needs_parens && s.front() != '(' ? "(" + s + ")" : s;
}

std::string mp_to_string(const MultiPoly& a) {
  if (a.is_zero()) return "0";
  TermOrder ord = TermOrder::standard(*a.ring);
  std::vector<const std::pair<const std::vector<int>, TowerElement>*> terms;
  for (const auto& kv : a.t) terms.push_back(&kv);
  std::sort(terms.begin(), terms.end(), [&](auto* x, auto* y) {
    return ord.less(*a.ring, y->first, x->first);
  });
  std::ostringstream os;
  bool first = true;
  for (auto* kv : terms) {
    const auto& [e, c] = *kv;
    if (!first) os << " + ";
    first = false;
    std::vector<std::string> factors;
    bool all_zero = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
    if (!c.is_one() || all_zero)
      factors.push_back(coeff_string(c, a.ring->field));
    for (int i = 0; i < a.ring->nvars(); ++i) {
      if (e[i] == 0) continue;
      factors.push_back(e[i] == 1 ? a.ring->vars[i]
                                  : a.ring->vars[i] + "^" +
                                        std::to_string(e[i]));
    }
    for (size_t i = 0; i < factors.size(); ++i) {
      if (i) os << "*";
      os << factors[i];
    }
  }
  return os.str();
}

// ===== parsing ==========================================================

namespace {

struct Parser {
  const RingPtr& ring;
  const std::string& text;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("parse error at position " + std::to_string(pos) +
                             ": " + msg);
  }
  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::optional<uint64_t> number() {
    skip();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      return std::nullopt;
    uint64_t v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      v = v * 10 + static_cast<uint64_t>(text[pos++] - '0');
    return v;
  }
  std::optional<std::string> ident() {
    skip();
    if (pos >= text.size()) return std::nullopt;
    char c = text[pos];
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_')
      return std::nullopt;
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }

  // exponent after '^': integer, or (a/q) with q a power of p
  std::pair<uint64_t, uint64_t> exponent() {
    if (eat('(')) {
      auto a = number();
      if (!a) fail("expected numerator in exponent");
      if (!eat('/')) fail("expected '/' in fractional exponent");
      auto q = number();
      if (!q) fail("expected denominator in exponent");
      if (!eat(')')) fail("expected ')' after exponent");
      return {*a, *q};
    }
    auto n = number();
    if (!n) fail("expected exponent");
    return {*n, 1};
  }

  MultiPoly symbol_power(int param, uint64_t a, uint64_t q) {
    uint32_t p = ring->field.p;
    int level = 0;
    uint64_t r = q;
    while (r > 1) {
      if (r % p != 0) fail("exponent denominator is not a power of " +
                           std::to_string(p));
      r /= p;
      ++level;
    }
    if (level > ring->field.levels[param])
      fail("symbol " + ring->field.params[param] +
           " exceeds the field level");
    // the symbol at the ring's levels has exponent p^{ring_level - level}
    uint64_t scale = 1;
    for (int k = level; k < ring->field.levels[param]; ++k) scale *= p;
    TowerElement s = te_pow(te_symbol(p, ring->field.levels, param), a * scale);
    return mp_const(ring, s);
  }

  MultiPoly primary() {
    skip();
    if (eat('(')) {
      MultiPoly e = expr();
      if (!eat(')')) fail("expected ')'");
      if (eat('^')) {
        auto [a, q] = exponent();
        if (q != 1) fail("fractional exponent on a compound expression");
        return mp_pow(e, a);
      }
      return e;
    }
    if (auto n = number()) {
      uint32_t c = static_cast<uint32_t>(*n % ring->field.p);
      return mp_const(ring, te_const(ring->field.p, ring->field.levels, c));
    }
    auto id = ident();
    if (!id) fail("expected a factor");
    int var = ring->var_index(*id);
    int param = -1;
    if (var < 0) {
      for (int i = 0; i < static_cast<int>(ring->field.params.size()); ++i)
        if (ring->field.params[i] == *id) param = i;
      if (param < 0) fail("unknown identifier '" + *id + "'");
    }
    uint64_t a = 1, q = 1;
    if (eat('^')) std::tie(a, q) = exponent();
    if (var >= 0) {
      if (q != 1) fail("fractional exponent on an ambient variable");
      return mp_pow(mp_var(ring, var), a);
    }
    return symbol_power(param, a, q);
  }

  MultiPoly term() {
    MultiPoly r = primary();
    while (true) {
      skip();
      if (eat('*')) {
        r = mp_mul(r, primary());
        continue;
      }
      // implicit multiplication before an identifier or '('
      if (pos < text.size() &&
          (std::isalpha(static_cast<unsigned char>(text[pos])) ||
           text[pos] == '_' || text[pos] == '(')) {
        r = mp_mul(r, primary());
        continue;
      }
      return r;
    }
  }

  MultiPoly expr() {
    skip();
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    MultiPoly r = term();
    if (neg) r = mp_neg(r);
    while (true) {
      skip();
      if (eat('+')) {
        r = mp_add(r, term());
      } else if (eat('-')) {
        r = mp_sub(r, term());
      } else {
        return r;
      }
    }
  }
};

}  // namespace

MultiPoly mp_parse(const RingPtr& r, const std::string& text) {
  Parser ps{r, text};
  MultiPoly out = ps.expr();
  ps.skip();
  if (ps.pos != text.size()) ps.fail("trailing input");
  return out;
}

// ===== term orders ======================================================

TermOrder TermOrder::standard(const Ring& r) {
  TermOrder o;
  for (int b = 0; b < r.nblocks(); ++b) o.block_seq.push_back(b);
  return o;
}

TermOrder TermOrder::eliminating(const Ring& r, const std::vector<int>& blocks) {
  TermOrder o;
  o.block_seq = blocks;
  for (int b = 0; b < r.nblocks(); ++b)
    if (std::find(blocks.begin(), blocks.end(), b) == blocks.end())
      o.block_seq.push_back(b);
  return o;
}

bool TermOrder::less(const Ring& r, const std::vector<int>& a,
                     const std::vector<int>& b) const {
  for (int blk : block_seq) {
    int da = 0, db = 0;
    for (int i = 0; i < r.nvars(); ++i) {
      if (r.block_of[i] != blk) continue;
      da += a[i];
      db += b[i];
    }
    if (da != db) return da < db;
    // grevlex tiebreak within the block: the last differing variable
    // decides; smaller exponent there means larger monomial
    for (int i = r.nvars() - 1; i >= 0; --i) {
      if (r.block_of[i] != blk) continue;
      if (a[i] != b[i]) return a[i] > b[i];
    }
  }
  return false;
}

std::string TermOrder::key() const {
  std::string s;
  for (int b : block_seq) s += std::to_string(b) + ",";
  return s;
}

std::pair<std::vector<int>, TowerElement> mp_lead(const MultiPoly& a,
                                                  const TermOrder& ord) {
  if (a.is_zero()) throw std::logic_error("mp_lead: zero polynomial");
  auto best = a.t.begin();
  for (auto it = std::next(a.t.begin()); it != a.t.end(); ++it)
    if (ord.less(*a.ring, best->first, it->first)) best = it;
  return {best->first, best->second};
}

MultiPoly mp_monic(const MultiPoly& a, const TermOrder& ord) {
  if (a.is_zero()) return a;
  auto [e, c] = mp_lead(a, ord);
  return mp_scale(a, te_inv(c));
}

}  // namespace insep
