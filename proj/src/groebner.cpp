// groebner.cpp — Buchberger engine and ideal operations.
#include "insep/groebner.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace insep {

namespace {

bool divides(const std::vector<int>& a, const std::vector<int>& b) {
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

int exp_total(const std::vector<int>& a) {
  int s = 0;
  for (int x : a) s += x;
  return s;
}

}  // namespace

// ===== division =========================================================

DivisionResult mp_divide(const MultiPoly& f,
                         const std::vector<MultiPoly>& divisors,
                         const TermOrder& ord) {
  const Ring& R = *f.ring;
  DivisionResult out;
  out.remainder = mp_zero(f.ring);
  out.quotients.assign(divisors.size(), mp_zero(f.ring));
  std::vector<std::pair<std::vector<int>, TowerElement>> leads;
  leads.reserve(divisors.size());
  for (const auto& d : divisors) {
    if (d.is_zero()) throw std::logic_error("mp_divide: zero divisor");
    leads.push_back(mp_lead(d, ord));
  }
  MultiPoly work = f;
  while (!work.is_zero()) {
    auto [e, c] = mp_lead(work, ord);
    bool reduced = false;
    for (size_t i = 0; i < divisors.size(); ++i) {
      if (!divides(leads[i].first, e)) continue;
      std::vector<int> q = exp_sub(e, leads[i].first);
      TowerElement cq = te_div(c, leads[i].second);
      out.quotients[i] = mp_add(out.quotients[i], mp_monomial(f.ring, q, cq));
      work = mp_sub(work, mp_mul_monomial(divisors[i], q, cq));
      reduced = true;
      break;
    }
    if (!reduced) {
      out.remainder = mp_add(out.remainder, mp_monomial(f.ring, e, c));
      work = mp_sub(work, mp_monomial(f.ring, e, c));
    }
  }
  (void)R;
  return out;
}

MultiPoly normal_form(const MultiPoly& f, const std::vector<MultiPoly>& basis,
                      const TermOrder& ord) {
  if (basis.empty()) return f;
  return mp_divide(f, basis, ord).remainder;
}

// ===== Buchberger =======================================================

GBasis buchberger(const std::vector<MultiPoly>& gens, const TermOrder& ord,
                  bool track_lifts) {
  GBasis out;
  out.ord = ord;
  out.has_lifts = track_lifts;
  if (gens.empty()) return out;
  const RingPtr ring = gens[0].ring;
  const size_t ngens = gens.size();

  std::vector<MultiPoly> basis;
  std::vector<std::vector<MultiPoly>> reps;  // basis[i] in terms of gens
  auto unit_rep = [&](size_t j) {
    std::vector<MultiPoly> r(ngens, mp_zero(ring));
    r[j] = mp_one(ring);
    return r;
  };
  auto add_element = [&](MultiPoly f, std::vector<MultiPoly> rep) {
    auto [e, c] = mp_lead(f, ord);
    TowerElement inv = te_inv(c);
    basis.push_back(mp_scale(f, inv));
    if (track_lifts)
      for (auto& r : rep) r = mp_scale(r, inv);
    reps.push_back(std::move(rep));
  };

  for (size_t j = 0; j < ngens; ++j) {
    if (gens[j].is_zero()) continue;
    add_element(gens[j], track_lifts ? unit_rep(j) : std::vector<MultiPoly>{});
  }

  struct Pair {
    size_t i, j;
    std::vector<int> lcm;
  };
  std::vector<Pair> queue;
  auto push_pairs = [&](size_t k) {
    for (size_t i = 0; i < k; ++i) {
      auto li = mp_lead(basis[i], ord).first;
      auto lk = mp_lead(basis[k], ord).first;
      std::vector<int> l = exp_lcm(li, lk);
      // coprime criterion: disjoint leading terms reduce to zero
      if (exp_total(l) == exp_total(li) + exp_total(lk)) continue;
      queue.push_back({i, k, std::move(l)});
    }
  };
  for (size_t k = 0; k < basis.size(); ++k) push_pairs(k);

  while (!queue.empty()) {
    // select the pair with the smallest lcm (degree first)
    size_t best = 0;
    for (size_t q = 1; q < queue.size(); ++q) {
      if (exp_total(queue[q].lcm) < exp_total(queue[best].lcm) ||
          (exp_total(queue[q].lcm) == exp_total(queue[best].lcm) &&
           ord.less(*ring, queue[q].lcm, queue[best].lcm)))
        best = q;
    }
    Pair pr = queue[best];
    queue.erase(queue.begin() + static_cast<long>(best));

    auto [ei, ci] = mp_lead(basis[pr.i], ord);
    auto [ej, cj] = mp_lead(basis[pr.j], ord);
    MultiPoly s =
        mp_sub(mp_mul_monomial(basis[pr.i], exp_sub(pr.lcm, ei), te_inv(ci)),
               mp_mul_monomial(basis[pr.j], exp_sub(pr.lcm, ej), te_inv(cj)));
    if (s.is_zero()) continue;
    DivisionResult dv = mp_divide(s, basis, ord);
    if (dv.remainder.is_zero()) continue;
    std::vector<MultiPoly> rep;
    if (track_lifts) {
      rep.assign(ngens, mp_zero(ring));
      auto accumulate = [&](size_t b, const MultiPoly& factor) {
        for (size_t g = 0; g < ngens; ++g)
          rep[g] = mp_add(rep[g], mp_mul(factor, reps[b][g]));
      };
      accumulate(pr.i, mp_monomial(ring, exp_sub(pr.lcm, ei), te_inv(ci)));
      accumulate(pr.j, mp_neg(mp_monomial(ring, exp_sub(pr.lcm, ej),
                                          te_inv(cj))));
      for (size_t b = 0; b < basis.size(); ++b)
        if (!dv.quotients[b].is_zero()) accumulate(b, mp_neg(dv.quotients[b]));
    }
    add_element(std::move(dv.remainder), std::move(rep));
    push_pairs(basis.size() - 1);
  }

  // auto-reduce: drop elements with redundant leads, then fully reduce tails
  std::vector<bool> keep(basis.size(), true);
  for (size_t i = 0; i < basis.size(); ++i) {
    auto li = mp_lead(basis[i], ord).first;
    for (size_t j = 0; j < basis.size(); ++j) {
      if (i == j || !keep[j]) continue;
      auto lj = mp_lead(basis[j], ord).first;
      if (divides(lj, li) && (lj != li || j < i)) {
        keep[i] = false;
        break;
      }
    }
  }
  std::vector<MultiPoly> pruned;
  std::vector<std::vector<MultiPoly>> pruned_reps;
  for (size_t i = 0; i < basis.size(); ++i) {
    if (!keep[i]) continue;
    pruned.push_back(basis[i]);
    pruned_reps.push_back(reps[i]);
  }
  for (size_t i = 0; i < pruned.size(); ++i) {
    std::vector<MultiPoly> others;
    std::vector<size_t> which;
    for (size_t j = 0; j < pruned.size(); ++j) {
      if (j == i) continue;
      others.push_back(pruned[j]);
      which.push_back(j);
    }
    if (others.empty()) continue;
    DivisionResult dv = mp_divide(pruned[i], others, ord);
    if (track_lifts) {
      for (size_t k = 0; k < which.size(); ++k) {
        if (dv.quotients[k].is_zero()) continue;
        for (size_t g = 0; g < ngens; ++g)
          pruned_reps[i][g] =
              mp_sub(pruned_reps[i][g],
                     mp_mul(dv.quotients[k], pruned_reps[which[k]][g]));
      }
    }
    pruned[i] = std::move(dv.remainder);
  }

  // deterministic order: sort by leading term ascending
  std::vector<size_t> idx(pruned.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    return ord.less(*ring, mp_lead(pruned[a], ord).first,
                    mp_lead(pruned[b], ord).first);
  });
  for (size_t i : idx) {
    out.polys.push_back(std::move(pruned[i]));
    if (track_lifts) out.lifts.push_back(std::move(pruned_reps[i]));
  }
  return out;
}

// ===== ideals ===========================================================

IdealHandle make_ideal(const RingPtr& r, std::vector<MultiPoly> gens) {
  IdealHandle I;
  I.ring = r;
  for (auto& g : gens)
    if (!g.is_zero()) I.gens.push_back(std::move(g));
  return I;
}

const GBasis& IdealHandle::gb(const TermOrder& ord) const {
  auto it = cache_.find(ord.key());
  if (it != cache_.end()) return it->second;
  GBasis b = buchberger(gens, ord);
  return cache_.emplace(ord.key(), std::move(b)).first->second;
}

const GBasis& IdealHandle::gb() const {
  return gb(TermOrder::standard(*ring));
}

bool ideal_member(const MultiPoly& f, const IdealHandle& I) {
  if (f.is_zero()) return true;
  if (I.gens.empty()) return false;
  const GBasis& b = I.gb();
  return normal_form(f, b.polys, b.ord).is_zero();
}

bool ideal_is_trivial(const IdealHandle& I) {
  return ideal_member(mp_one(I.ring), I);
}

bool ideal_is_zero(const IdealHandle& I) { return I.gens.empty(); }

std::vector<MultiPoly> eliminate(const IdealHandle& I,
                                 const std::vector<int>& blocks) {
  TermOrder ord = TermOrder::eliminating(*I.ring, blocks);
  const GBasis& b = I.gb(ord);
  std::vector<MultiPoly> out;
  for (const auto& g : b.polys) {
    bool clean = true;
    for (int i = 0; i < I.ring->nvars() && clean; ++i)
      if (std::find(blocks.begin(), blocks.end(), I.ring->block_of[i]) !=
              blocks.end() &&
          g.uses(i))
        clean = false;
    if (clean) out.push_back(g);
  }
  return out;
}

namespace {

// a copy of the ring with one auxiliary affine variable appended
RingPtr ring_with_aux(const RingPtr& r, const std::string& name) {
  std::vector<Block> blocks = r->blocks;
  blocks.push_back({"_aux_" + name, {name}, false});
  return make_ring(r->field, blocks);
}

}  // namespace

IdealHandle saturate(const IdealHandle& I, const MultiPoly& f) {
  if (f.is_zero()) throw std::domain_error("saturate: zero element");
  if (f.is_constant()) return I;
  RingPtr ext = ring_with_aux(I.ring, "_w");
  int aux_block = ext->nblocks() - 1;
  int w = ext->var_index("_w");
  std::vector<MultiPoly> gens;
  for (const auto& g : I.gens) gens.push_back(mp_transport(g, ext));
  gens.push_back(mp_sub(mp_one(ext),
                        mp_mul(mp_var(ext, w), mp_transport(f, ext))));
  IdealHandle J = make_ideal(ext, std::move(gens));
  std::vector<MultiPoly> elim = eliminate(J, {aux_block});
  std::vector<MultiPoly> back;
  for (const auto& g : elim) back.push_back(mp_transport(g, I.ring));
  return make_ideal(I.ring, std::move(back));
}

IdealHandle ideal_intersect(const IdealHandle& I, const IdealHandle& J) {
  RingPtr ext = ring_with_aux(I.ring, "_w");
  int aux_block = ext->nblocks() - 1;
  int w = ext->var_index("_w");
  MultiPoly wv = mp_var(ext, w);
  MultiPoly one_minus_w = mp_sub(mp_one(ext), wv);
  std::vector<MultiPoly> gens;
  for (const auto& g : I.gens) gens.push_back(mp_mul(wv, mp_transport(g, ext)));
  for (const auto& g : J.gens)
    gens.push_back(mp_mul(one_minus_w, mp_transport(g, ext)));
  IdealHandle T = make_ideal(ext, std::move(gens));
  std::vector<MultiPoly> elim = eliminate(T, {aux_block});
  std::vector<MultiPoly> back;
  for (const auto& g : elim) back.push_back(mp_transport(g, I.ring));
  return make_ideal(I.ring, std::move(back));
}

IdealHandle ideal_quotient(const IdealHandle& I, const MultiPoly& f) {
  if (f.is_zero()) throw std::domain_error("ideal_quotient: zero element");
  IdealHandle prin = make_ideal(I.ring, {f});
  IdealHandle cap = ideal_intersect(I, prin);
  std::vector<MultiPoly> gens;
  for (const auto& g : cap.gens) gens.push_back(mp_div_exact(g, f));
  return make_ideal(I.ring, std::move(gens));
}

IdealHandle ideal_quotient(const IdealHandle& I,
                           const std::vector<MultiPoly>& J) {
  if (J.empty()) throw std::domain_error("ideal_quotient: empty ideal");
  IdealHandle acc = ideal_quotient(I, J[0]);
  for (size_t k = 1; k < J.size(); ++k)
    acc = ideal_intersect(acc, ideal_quotient(I, J[k]));
  return acc;
}

int ideal_dimension(const IdealHandle& I) {
  int n = I.ring->nvars();
  if (I.gens.empty()) return n;
  const GBasis& b = I.gb();
  std::vector<std::vector<int>> leads;
  for (const auto& g : b.polys) leads.push_back(mp_lead(g, b.ord).first);
  for (const auto& l : leads)
    if (exp_total(l) == 0) return -1;  // unit ideal
  if (n > 24) throw std::logic_error("ideal_dimension: too many variables");
  // the dimension is the size of the largest variable subset S such that
  // no leading monomial is supported inside S
  int best = 0;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    int size = __builtin_popcount(mask);
    if (size <= best) continue;
    bool ok = true;
    for (const auto& l : leads) {
      bool inside = true;
      for (int i = 0; i < n && inside; ++i)
        if (l[i] > 0 && !(mask & (1u << i))) inside = false;
      if (inside) {
        ok = false;
        break;
      }
    }
    if (ok) best = size;
  }
  return best;
}

}  // namespace insep
