// modulealg.cpp — module Groebner bases, kernels, minors, valuations.
#include "insep/modulealg.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace insep {

// ===== vector arithmetic ================================================

bool VecPoly::is_zero() const {
  return std::all_of(c.begin(), c.end(),
                     [](const MultiPoly& f) { return f.is_zero(); });
}

VecPoly vp_zero(const RingPtr& r, int ncomp) {
  VecPoly v;
  v.ring = r;
  v.c.assign(static_cast<size_t>(ncomp), mp_zero(r));
  return v;
}

VecPoly vp_unit(const RingPtr& r, int ncomp, int comp) {
  VecPoly v = vp_zero(r, ncomp);
  v.c[comp] = mp_one(r);
  return v;
}

VecPoly vp_add(const VecPoly& a, const VecPoly& b) {
  VecPoly r = a;
  for (int i = 0; i < r.ncomp(); ++i) r.c[i] = mp_add(r.c[i], b.c[i]);
  return r;
}

VecPoly vp_neg(const VecPoly& a) {
  VecPoly r = a;
  for (auto& f : r.c) f = mp_neg(f);
  return r;
}

VecPoly vp_sub(const VecPoly& a, const VecPoly& b) {
  return vp_add(a, vp_neg(b));
}

VecPoly vp_mul_poly(const VecPoly& a, const MultiPoly& f) {
  VecPoly r = a;
  for (auto& g : r.c) g = mp_mul(g, f);
  return r;
}

bool vp_equal(const VecPoly& a, const VecPoly& b) {
  return vp_sub(a, b).is_zero();
}

ModLead vp_lead(const VecPoly& a, const TermOrder& ord) {
  for (int i = 0; i < a.ncomp(); ++i) {
    if (a.c[i].is_zero()) continue;
    auto [e, c] = mp_lead(a.c[i], ord);
    return {i, e, c};
  }
  throw std::logic_error("vp_lead: zero vector");
}

// ===== module division and Buchberger ===================================

namespace {

bool exp_divides(const std::vector<int>& a, const std::vector<int>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

std::vector<int> exp_sub(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

std::vector<int> exp_lcm(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] = std::max(r[i], b[i]);
  return r;
}

}  // namespace

VecPoly vp_normal_form(const VecPoly& a, const std::vector<VecPoly>& basis,
                       const TermOrder& ord) {
  if (basis.empty()) return a;
  const Ring& R = *a.ring;
  std::vector<ModLead> leads;
  leads.reserve(basis.size());
  for (const auto& b : basis) leads.push_back(vp_lead(b, ord));
  VecPoly work = a;
  VecPoly rem = vp_zero(a.ring, a.ncomp());
  while (!work.is_zero()) {
    ModLead l = vp_lead(work, ord);
    bool reduced = false;
    for (size_t i = 0; i < basis.size(); ++i) {
      if (leads[i].comp != l.comp || !exp_divides(leads[i].e, l.e)) continue;
      std::vector<int> q = exp_sub(l.e, leads[i].e);
      TowerElement cq = te_div(l.coeff, leads[i].coeff);
      work = vp_sub(work,
                    vp_mul_poly(basis[i], mp_monomial(a.ring, q, cq)));
      reduced = true;
      break;
    }
    if (!reduced) {
      MultiPoly mono = mp_monomial(a.ring, l.e, l.coeff);
      rem.c[l.comp] = mp_add(rem.c[l.comp], mono);
      work.c[l.comp] = mp_sub(work.c[l.comp], mono);
    }
  }
  (void)R;
  return rem;
}

std::vector<VecPoly> module_buchberger(const std::vector<VecPoly>& gens,
                                       const TermOrder& ord) {
  std::vector<VecPoly> basis;
  RingPtr ring;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    ring = g.ring;
    ModLead l = vp_lead(g, ord);
    basis.push_back(vp_mul_poly(g, mp_const(g.ring, te_inv(l.coeff))));
  }
  if (basis.empty()) return basis;

  struct Pair {
    size_t i, j;
    int comp;
    std::vector<int> lcm;
  };
  std::vector<Pair> queue;
  auto push_pairs = [&](size_t k) {
    ModLead lk = vp_lead(basis[k], ord);
    for (size_t i = 0; i < k; ++i) {
      ModLead li = vp_lead(basis[i], ord);
      if (li.comp != lk.comp) continue;
      queue.push_back({i, k, lk.comp, exp_lcm(li.e, lk.e)});
    }
  };
  for (size_t k = 0; k < basis.size(); ++k) push_pairs(k);

  auto exp_total = [](const std::vector<int>& e) {
    int s = 0;
    for (int x : e) s += x;
    return s;
  };
  while (!queue.empty()) {
    size_t best = 0;
    for (size_t q = 1; q < queue.size(); ++q)
      if (exp_total(queue[q].lcm) < exp_total(queue[best].lcm)) best = q;
    Pair pr = queue[best];
    queue.erase(queue.begin() + static_cast<long>(best));

    ModLead li = vp_lead(basis[pr.i], ord);
    ModLead lj = vp_lead(basis[pr.j], ord);
    VecPoly s = vp_sub(
        vp_mul_poly(basis[pr.i],
                    mp_monomial(ring, exp_sub(pr.lcm, li.e), te_inv(li.coeff))),
        vp_mul_poly(basis[pr.j],
                    mp_monomial(ring, exp_sub(pr.lcm, lj.e),
                                te_inv(lj.coeff))));
    if (s.is_zero()) continue;
    VecPoly nf = vp_normal_form(s, basis, ord);
    if (nf.is_zero()) continue;
    ModLead ln = vp_lead(nf, ord);
    basis.push_back(vp_mul_poly(nf, mp_const(ring, te_inv(ln.coeff))));
    push_pairs(basis.size() - 1);
  }

  // prune redundant leading terms, then tail-reduce
  std::vector<VecPoly> pruned;
  for (size_t i = 0; i < basis.size(); ++i) {
    ModLead li = vp_lead(basis[i], ord);
    bool redundant = false;
    for (size_t j = 0; j < basis.size() && !redundant; ++j) {
      if (i == j) continue;
      ModLead lj = vp_lead(basis[j], ord);
      if (lj.comp == li.comp && exp_divides(lj.e, li.e) &&
          (lj.e != li.e || j < i))
        redundant = true;
    }
    if (!redundant) pruned.push_back(basis[i]);
  }
  for (size_t i = 0; i < pruned.size(); ++i) {
    std::vector<VecPoly> others;
    for (size_t j = 0; j < pruned.size(); ++j)
      if (j != i) others.push_back(pruned[j]);
    if (!others.empty()) pruned[i] = vp_normal_form(pruned[i], others, ord);
  }
  pruned.erase(std::remove_if(pruned.begin(), pruned.end(),
                              [](const VecPoly& v) { return v.is_zero(); }),
               pruned.end());
  return pruned;
}

bool module_member(const VecPoly& a, const std::vector<VecPoly>& gens,
                   const std::vector<MultiPoly>& ideal) {
  if (a.is_zero()) return true;
  TermOrder ord = TermOrder::standard(*a.ring);
  std::vector<VecPoly> all = gens;
  for (const auto& g : ideal)
    for (int l = 0; l < a.ncomp(); ++l) {
      VecPoly v = vp_zero(a.ring, a.ncomp());
      v.c[l] = g;
      all.push_back(std::move(v));
    }
  auto basis = module_buchberger(all, ord);
  return vp_normal_form(a, basis, ord).is_zero();
}

// ===== kernels ==========================================================

std::vector<VecPoly> module_kernel(
    const std::vector<std::vector<MultiPoly>>& rows,
    const std::vector<MultiPoly>& ideal) {
  if (rows.empty()) throw std::invalid_argument("module_kernel: empty matrix");
  int q = static_cast<int>(rows.size());
  int n = static_cast<int>(rows[0].size());
  RingPtr ring = rows[0][0].ring;
  TermOrder ord = TermOrder::standard(*ring);

  // stacked vectors: target block (q comps, significant) + label block (n)
  std::vector<VecPoly> gens;
  for (int j = 0; j < n; ++j) {
    VecPoly v = vp_zero(ring, q + n);
    for (int i = 0; i < q; ++i) v.c[i] = rows[i][j];
    v.c[q + j] = mp_one(ring);
    gens.push_back(std::move(v));
  }
  for (const auto& g : ideal)
    for (int l = 0; l < q; ++l) {
      VecPoly v = vp_zero(ring, q + n);
      v.c[l] = g;
      gens.push_back(std::move(v));
    }
  auto basis = module_buchberger(gens, ord);
  std::vector<VecPoly> kernel;
  for (const auto& b : basis) {
    bool head_zero = true;
    for (int i = 0; i < q && head_zero; ++i)
      if (!b.c[i].is_zero()) head_zero = false;
    if (!head_zero) continue;
    VecPoly v = vp_zero(ring, n);
    for (int j = 0; j < n; ++j) v.c[j] = b.c[q + j];
    if (!v.is_zero()) kernel.push_back(std::move(v));
  }
  return kernel;
}

std::vector<VecPoly> dual_module(const PresentedModule& M) {
  if (M.relations.empty()) {
    std::vector<VecPoly> out;
    for (int i = 0; i < M.ngens; ++i)
      out.push_back(vp_unit(M.ring, M.ngens, i));
    return out;
  }
  std::vector<std::vector<MultiPoly>> rows;
  for (const auto& r : M.relations) rows.push_back(r.c);
  return module_kernel(rows, M.ideal);
}

// ===== colon and saturation =============================================

std::vector<VecPoly> module_colon(const std::vector<VecPoly>& N,
                                  const MultiPoly& f,
                                  const std::vector<MultiPoly>& ideal) {
  if (N.empty()) throw std::invalid_argument("module_colon: empty module");
  RingPtr ring = f.ring;
  int n = N[0].ncomp();
  int k = static_cast<int>(N.size());
  // kernel of (v, a) -> f v - sum a_j N_j in O^n
  std::vector<std::vector<MultiPoly>> rows(
      static_cast<size_t>(n), std::vector<MultiPoly>());
  for (int i = 0; i < n; ++i) {
    rows[i].assign(static_cast<size_t>(n + k), mp_zero(ring));
    rows[i][i] = f;
    for (int j = 0; j < k; ++j) rows[i][n + j] = mp_neg(N[j].c[i]);
  }
  auto ker = module_kernel(rows, ideal);
  std::vector<VecPoly> out = N;  // N itself is always contained
  for (const auto& v : ker) {
    VecPoly w = vp_zero(ring, n);
    for (int i = 0; i < n; ++i) w.c[i] = v.c[i];
    if (!w.is_zero()) out.push_back(std::move(w));
  }
  return out;
}

std::vector<VecPoly> saturation_in(const std::vector<VecPoly>& N,
                                   const MultiPoly& f,
                                   const std::vector<MultiPoly>& ideal) {
  std::vector<VecPoly> cur = N;
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<VecPoly> next = module_colon(cur, f, ideal);
    bool contained = true;
    for (const auto& v : next)
      if (!module_member(v, cur, ideal)) {
        contained = false;
        break;
      }
    if (contained) return cur;
    cur = std::move(next);
  }
  throw std::logic_error("saturation_in: did not stabilise");
}

// ===== minors ===========================================================

namespace {

MultiPoly det_recursive(const std::vector<std::vector<const MultiPoly*>>& m) {
  size_t n = m.size();
  if (n == 1) return *m[0][0];
  MultiPoly acc = mp_zero(m[0][0]->ring);
  for (size_t j = 0; j < n; ++j) {
    if (m[0][j]->is_zero()) continue;
    std::vector<std::vector<const MultiPoly*>> sub;
    for (size_t i = 1; i < n; ++i) {
      std::vector<const MultiPoly*> row;
      for (size_t jj = 0; jj < n; ++jj)
        if (jj != j) row.push_back(m[i][jj]);
      sub.push_back(std::move(row));
    }
    MultiPoly term = mp_mul(*m[0][j], det_recursive(sub));
    acc = (j % 2 == 0) ? mp_add(acc, term) : mp_sub(acc, term);
  }
  return acc;
}

void subsets(int n, int r, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == r) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i <= n - (r - static_cast<int>(cur.size())); ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace

std::vector<MultiPoly> minor_list(const std::vector<VecPoly>& cols, int r,
                                  const std::vector<MultiPoly>& ideal) {
  if (cols.empty() || r <= 0) return {};
  RingPtr ring = cols[0].ring;
  int d = cols[0].ncomp();
  int k = static_cast<int>(cols.size());
  if (r > d || r > k) return {};
  IdealHandle I = make_ideal(ring, ideal);
  const GBasis* gb = ideal.empty() ? nullptr : &I.gb();
  std::vector<std::vector<int>> rsets, csets;
  subsets(d, r, rsets);
  subsets(k, r, csets);
  std::vector<MultiPoly> out;
  for (const auto& rs : rsets)
    for (const auto& cs : csets) {
      std::vector<std::vector<const MultiPoly*>> m;
      for (int i : rs) {
        std::vector<const MultiPoly*> row;
        for (int j : cs) row.push_back(&cols[static_cast<size_t>(j)].c[i]);
        m.push_back(std::move(row));
      }
      MultiPoly det = det_recursive(m);
      if (gb) det = normal_form(det, gb->polys, gb->ord);
      if (!det.is_zero()) out.push_back(std::move(det));
    }
  return out;
}

MinorSections top_minor_sections(const std::vector<VecPoly>& cols, int r,
                                 const std::vector<MultiPoly>& ideal) {
  MinorSections out;
  auto minors = minor_list(cols, r, ideal);
  if (minors.empty()) {
    out.content = cols.empty() ? MultiPoly{} : mp_zero(cols[0].ring);
    return out;
  }
  RingPtr ring = minors[0].ring;
  MultiPoly content = mp_zero(ring);
  for (const auto& m : minors) content = mp_gcd(content, m);
  out.content = content;
  TermOrder ord = TermOrder::standard(*ring);
  for (const auto& m : minors) {
    MultiPoly prim = mp_monic(mp_div_exact(m, content), ord);
    bool dup = false;
    for (const auto& s : out.sections)
      if (mp_equal(s, prim)) {
        dup = true;
        break;
      }
    if (!dup) out.sections.push_back(std::move(prim));
  }
  std::sort(out.sections.begin(), out.sections.end(),
            [](const MultiPoly& a, const MultiPoly& b) {
              return mp_to_string(a) < mp_to_string(b);
            });
  return out;
}

// ===== valuations =======================================================

int valuation_at_prime(const MultiPoly& h, const MultiPoly& pi,
                       const IdealHandle& I, int max_iter) {
  const GBasis* gbI = I.gens.empty() ? nullptr : &I.gb();
  TermOrder ord = TermOrder::standard(*h.ring);
  auto reduce = [&](const MultiPoly& f) {
    return gbI ? normal_form(f, gbI->polys, gbI->ord) : f;
  };
  MultiPoly cur = reduce(h);
  if (cur.is_zero()) return max_iter;

  // lift-tracked basis of I + (pi): membership certificates give the
  // cofactor of pi, i.e. the next element of the valuation chain
  std::vector<MultiPoly> gens = I.gens;
  size_t pi_index = gens.size();
  gens.push_back(pi);
  GBasis b = buchberger(gens, ord, true);

  int val = 0;
  while (val < max_iter) {
    DivisionResult dv = mp_divide(cur, b.polys, b.ord);
    if (!dv.remainder.is_zero()) return val;
    MultiPoly next = mp_zero(h.ring);
    for (size_t k = 0; k < b.polys.size(); ++k) {
      if (dv.quotients[k].is_zero()) continue;
      next = mp_add(next, mp_mul(dv.quotients[k], b.lifts[k][pi_index]));
    }
    cur = reduce(next);
    if (cur.is_zero()) return max_iter;
    ++val;
  }
  return max_iter;
}

int length_at_prime(const std::vector<VecPoly>& N,
                    const std::vector<VecPoly>& Nprime, int r,
                    const MultiPoly& pi, const IdealHandle& I) {
  auto min_val = [&](const std::vector<VecPoly>& cols) {
    auto minors = minor_list(cols, r, I.gens);
    int best = 64;
    for (const auto& m : minors)
      best = std::min(best, valuation_at_prime(m, pi, I));
    return best;
  };
  int vn = min_val(N);
  int vp = min_val(Nprime);
  if (vn < vp)
    throw std::logic_error("length_at_prime: modules not nested");
  return vn - vp;
}

}  // namespace insep
