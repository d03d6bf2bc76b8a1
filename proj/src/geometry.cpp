// geometry.cpp — schemes, charts, reduced structure, R1, closure.
#include "insep/geometry.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "insep/modulealg.hpp"

namespace insep {

// ===== validation =======================================================

// multidegree over the projective blocks only (affine adjunction blocks
// carry no homogeneity requirement); nullopt when inhomogeneous
std::optional<std::vector<int>> proj_multidegree(const MultiPoly& f) {
  const Ring& R = *f.ring;
  std::optional<std::vector<int>> out;
  for (const auto& [e, c] : f.t) {
    std::vector<int> d = f.block_degrees(e);
    for (int b = 0; b < R.nblocks(); ++b)
      if (!R.blocks[b].projective) d[b] = 0;
    if (!out)
      out = d;
    else if (*out != d)
      return std::nullopt;
  }
  if (!out) out = std::vector<int>(R.nblocks(), 0);
  return out;
}

void validate_scheme(const SchemeDesc& X) {
  for (const auto& g : X.gens) {
    if (g.ring != X.ring)
      throw std::invalid_argument("validate_scheme: generator ring mismatch");
    if (!proj_multidegree(g))
      throw std::invalid_argument(
          "validate_scheme: generator not homogeneous per block: " +
          mp_to_string(g));
  }
}

int BaseChangeSpec::degree_log() const {
  int d = 0;
  for (size_t i = 0; i < source_levels.size(); ++i)
    d += target_levels[i] - source_levels[i];
  return d;
}

void BaseChangeSpec::validate() const {
  if (source_levels.size() != target_levels.size())
    throw std::invalid_argument("base change: level vector size mismatch");
  for (size_t i = 0; i < source_levels.size(); ++i) {
    int d = target_levels[i] - source_levels[i];
    if (d < 0 || d > 1)
      throw std::invalid_argument(
          "base change: not height one (each level raised by at most 1)");
  }
}

// ===== charts ===========================================================

std::vector<std::vector<int>> all_chart_choices(const SchemeDesc& X) {
  std::vector<std::vector<int>> out{{}};
  for (const auto& b : X.ring->blocks) {
    std::vector<std::vector<int>> next;
    if (!b.projective) {
      for (auto& c : out) {
        auto d = c;
        d.push_back(-1);
        next.push_back(std::move(d));
      }
    } else {
      for (int v = 0; v < static_cast<int>(b.vars.size()); ++v)
        for (const auto& c : out) {
          auto d = c;
          d.push_back(v);
          next.push_back(std::move(d));
        }
    }
    out = std::move(next);
  }
  return out;
}

MultiPoly mp_dehomogenize(const MultiPoly& f, const RingPtr& chart_ring) {
  const Ring& R = *f.ring;
  MultiPoly out = mp_zero(chart_ring);
  for (const auto& [e, c] : f.t) {
    std::vector<int> e2(chart_ring->nvars(), 0);
    for (int i = 0; i < R.nvars(); ++i) {
      if (e[i] == 0) continue;
      int j = chart_ring->var_index(R.vars[i]);
      if (j < 0) continue;  // chosen variable, set to 1
      e2[j] = e[i];
    }
    auto it = out.t.find(e2);
    if (it == out.t.end())
      out.t.emplace(e2, te_embed(c, chart_ring->field.levels));
    else {
      TowerElement s = te_add(it->second, c);
      if (s.is_zero())
        out.t.erase(it);
      else
        it->second = std::move(s);
    }
  }
  return out;
}

Chart make_chart(const SchemeDesc& X, const std::vector<int>& chosen) {
  const Ring& R = *X.ring;
  if (chosen.size() != static_cast<size_t>(R.nblocks()))
    throw std::invalid_argument("make_chart: one choice per block expected");
  // chart ring: same blocks minus the chosen variables, all affine now
  std::vector<Block> blocks;
  std::vector<int> global_chosen(R.nblocks(), -1);
  std::string label;
  for (int b = 0; b < R.nblocks(); ++b) {
    Block nb{R.blocks[b].name, {}, false};
    for (int v = 0; v < static_cast<int>(R.blocks[b].vars.size()); ++v) {
      if (R.blocks[b].projective && v == chosen[b]) {
        label += "(" + R.blocks[b].vars[v] + "!=0)";
        global_chosen[b] = R.var_index(R.blocks[b].vars[v]);
        continue;
      }
      nb.vars.push_back(R.blocks[b].vars[v]);
    }
    blocks.push_back(std::move(nb));
  }
  RingPtr cring = make_ring(R.field, blocks);

  std::vector<MultiPoly> cgens;
  for (const auto& g : X.gens) {
    MultiPoly h = mp_dehomogenize(g, cring);
    if (!h.is_zero()) cgens.push_back(std::move(h));
  }
  IdealHandle I = make_ideal(cring, std::move(cgens));
  for (const auto& m : X.chart_saturators) {
    MultiPoly mh = mp_dehomogenize(m, cring);
    if (!mh.is_zero() && !mh.is_constant()) I = saturate(I, mh);
  }
  Chart ch;
  ch.ring = cring;
  ch.ideal = std::move(I);
  ch.chosen = global_chosen;
  ch.label = label;
  return ch;
}

MultiPoly mp_homogenize(const MultiPoly& f, const SchemeDesc& X,
                        const std::vector<int>& chosen) {
  const Ring& R = *X.ring;
  const Ring& C = *f.ring;
  // per-block maximal degrees
  std::vector<int> maxdeg(R.nblocks(), 0);
  auto chart_block_degs = [&](const std::vector<int>& e) {
    std::vector<int> d(R.nblocks(), 0);
    for (int i = 0; i < C.nvars(); ++i) {
      if (e[i] == 0) continue;
      int gi = R.var_index(C.vars[i]);
      if (gi < 0)
        throw std::invalid_argument("mp_homogenize: unknown chart variable " +
                                    C.vars[i]);
      d[R.block_of[gi]] += e[i];
    }
    return d;
  };
  for (const auto& [e, c] : f.t) {
    auto d = chart_block_degs(e);
    for (int b = 0; b < R.nblocks(); ++b) maxdeg[b] = std::max(maxdeg[b], d[b]);
  }
  MultiPoly out = mp_zero(X.ring);
  for (const auto& [e, c] : f.t) {
    std::vector<int> e2(R.nvars(), 0);
    for (int i = 0; i < C.nvars(); ++i)
      if (e[i] > 0) e2[R.var_index(C.vars[i])] = e[i];
    auto d = chart_block_degs(e);
    for (int b = 0; b < R.nblocks(); ++b) {
      if (maxdeg[b] == d[b] || !R.blocks[b].projective) continue;
      if (chosen[b] < 0)
        throw std::invalid_argument(
            "mp_homogenize: no chosen variable for an inhomogeneous block");
      e2[chosen[b]] += maxdeg[b] - d[b];
    }
    out = mp_add(out, mp_monomial(X.ring, e2, c));
  }
  return out;
}

// ===== base change ======================================================

SchemeDesc base_change(const SchemeDesc& X, const BaseChangeSpec& bc) {
  bc.validate();
  if (bc.source_levels != X.ring->field.levels)
    throw std::invalid_argument("base_change: X not over the source field");
  SchemeDesc Z = X;
  Z.ring = ring_with_levels(X.ring, bc.target_levels);
  Z.gens.clear();
  for (const auto& g : X.gens) Z.gens.push_back(mp_transport(g, Z.ring));
  Z.chart_saturators.clear();
  for (const auto& m : X.chart_saturators)
    Z.chart_saturators.push_back(mp_transport(m, Z.ring));
  Z.reduced_certified = false;
  Z.r1_certified = false;
  Z.normal_certified = false;
  return Z;
}

// ===== squarefree parts =================================================

namespace {

// all nonzero derivatives of f: ambient variables and tower symbols
std::vector<MultiPoly> all_derivatives(const MultiPoly& f) {
  std::vector<MultiPoly> out;
  for (int v = 0; v < f.ring->nvars(); ++v) {
    MultiPoly d = mp_derivative(f, v);
    if (!d.is_zero()) out.push_back(std::move(d));
  }
  for (int s = 0; s < f.ring->field.nparams(); ++s) {
    MultiPoly d = mp_symbol_derivative(f, s);
    if (!d.is_zero()) out.push_back(std::move(d));
  }
  return out;
}

MultiPoly mp_monic_std(const MultiPoly& f) {
  return mp_monic(f, TermOrder::standard(*f.ring));
}

}  // namespace

MultiPoly mp_squarefree_part(const MultiPoly& f0) {
  if (f0.is_zero() || f0.is_constant()) return f0;
  MultiPoly f = mp_monic_std(f0);
  auto derivs = all_derivatives(f);
  if (derivs.empty()) {
    // all derivatives vanish: f is a p-th power within its own field
    auto root = mp_pth_root_within(f, f.ring->field.levels);
    if (!root)
      throw std::logic_error(
          "mp_squarefree_part: derivative-free polynomial without a root");
    return mp_squarefree_part(mp_transport(*root, f.ring));
  }
  MultiPoly g = f;
  for (const auto& d : derivs) g = mp_gcd(g, d);
  if (g.is_constant()) return f;
  // s1 = product of prime factors with multiplicity not divisible by p
  MultiPoly s1 = mp_monic_std(mp_div_exact(f, g));
  // strip the s1 factors from g; the rest is the p-th-power part
  MultiPoly f2 = g;
  while (true) {
    MultiPoly h = mp_gcd(f2, s1);
    if (h.is_constant()) break;
    f2 = mp_div_exact(f2, h);
  }
  if (f2.is_constant()) return s1;
  auto root = mp_pth_root_within(f2, f.ring->field.levels);
  if (!root)
    throw std::logic_error("mp_squarefree_part: p-power part without a root");
  MultiPoly rad2 = mp_squarefree_part(mp_transport(*root, f.ring));
  return mp_monic_std(mp_mul(s1, rad2));
}

// ===== Frobenius-kernel radical sweep ===================================

namespace {

void enumerate_exponents(int nvars, int bound, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == nvars) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= bound; ++e) {
    cur.push_back(e);
    enumerate_exponents(nvars, bound - e, cur, out);
    cur.pop_back();
  }
}

// write b in L as sum over residue monomials with p-th-power coefficients
// and return the p-th roots of those coefficients, keyed by residue
std::map<std::vector<int>, TowerElement> expand_with_roots(
    const TowerElement& b, const std::vector<int>& levels) {
  TowerElement rho = te_pth_root(te_embed(b, levels));
  std::vector<int> up(levels);
  for (int& x : up) ++x;
  auto exp = te_expand_over_base(te_embed(rho, up), levels);
  return exp;  // b = sum_res exp[res]^p * u^res at the original levels
}

}  // namespace

std::vector<MultiPoly> frobenius_radical_witnesses(const IdealHandle& I,
                                                   int bound) {
  std::vector<MultiPoly> witnesses;
  if (I.gens.empty()) return witnesses;
  const RingPtr& ring = I.ring;
  uint32_t p = ring->field.p;
  const std::vector<int>& levels = ring->field.levels;
  const GBasis& gb = I.gb();

  std::vector<std::vector<int>> exps;
  std::vector<int> cur;
  enumerate_exponents(ring->nvars(), bound, cur, exps);
  // group candidate monomials by block-degree vector (homogeneity classes)
  std::map<std::vector<int>, std::vector<std::vector<int>>> groups;
  MultiPoly probe = mp_zero(ring);
  for (const auto& e : exps) {
    int tot = 0;
    for (int x : e) tot += x;
    if (tot == 0 || tot > bound) continue;
    groups[probe.block_degrees(e)].push_back(e);
  }

  for (const auto& [delta, monos] : groups) {
    // normal forms of the p-th powers of the candidate monomials
    std::vector<MultiPoly> nfs;
    bool any_reduced = false;
    for (const auto& e : monos) {
      std::vector<int> pe(e);
      for (int& x : pe) x *= static_cast<int>(p);
      MultiPoly mono =
          mp_monomial(ring, pe, te_const(p, levels, 1));
      MultiPoly nf = normal_form(mono, gb.polys, gb.ord);
      if (!mp_equal(nf, mono)) any_reduced = true;
      nfs.push_back(std::move(nf));
    }
    if (!any_reduced) continue;  // monomial p-th powers stay independent

    // linear system over L for the root coefficients: the condition
    // sum_a c_a^p NF_a = 0 splits per ambient monomial and per residue
    // monomial of L over its subfield of p-th powers
    std::map<std::pair<std::vector<int>, std::vector<int>>, size_t> row_of;
    std::vector<std::vector<TowerElement>> M;
    auto row = [&](const std::vector<int>& beta,
                   const std::vector<int>& res) -> std::vector<TowerElement>& {
      auto key = std::make_pair(beta, res);
      auto it = row_of.find(key);
      if (it == row_of.end()) {
        it = row_of.emplace(key, M.size()).first;
        M.emplace_back(monos.size(), te_zero(p, levels));
      }
      return M[it->second];
    };
    for (size_t a = 0; a < monos.size(); ++a) {
      for (const auto& [beta, b] : nfs[a].t) {
        auto exp = expand_with_roots(b, levels);
        for (const auto& [res, coeff] : exp)
          row(beta, res)[a] = te_add(row(beta, res)[a], coeff);
      }
    }
    auto kernel = te_matrix_kernel(M, p, levels, monos.size());
    for (const auto& v : kernel) {
      MultiPoly h = mp_zero(ring);
      for (size_t a = 0; a < monos.size(); ++a)
        if (!v[a].is_zero())
          h = mp_add(h, mp_monomial(ring, monos[a], v[a]));
      if (h.is_zero()) continue;
      MultiPoly nf = normal_form(h, gb.polys, gb.ord);
      if (!nf.is_zero()) witnesses.push_back(mp_monic_std(h));
    }
  }
  return witnesses;
}

// ===== reduced structure ================================================

ReduceResult reduce_structure(const SchemeDesc& XL, int degree_bound) {
  validate_scheme(XL);
  const std::vector<int>& levels = XL.ring->field.levels;
  ReduceResult out;
  out.scheme = XL;
  out.root_drops.assign(XL.gens.size(), 0);

  int maxdeg = 1;
  for (const auto& g : XL.gens) maxdeg = std::max(maxdeg, g.total_degree());
  int sweep_bound = degree_bound > 0 ? degree_bound : maxdeg;
  out.sweep_degree_bound = sweep_bound;

  std::vector<MultiPoly> gens;
  for (size_t j = 0; j < XL.gens.size(); ++j) {
    MultiPoly f = XL.gens[j];
    while (true) {
      auto root = mp_pth_root_within(f, levels);
      if (!root) break;
      f = mp_transport(*root, XL.ring);
      ++out.root_drops[j];
      out.changed = true;
    }
    MultiPoly sq = mp_squarefree_part(f);
    if (!mp_equal(sq, mp_monic_std(f))) out.changed = true;
    gens.push_back(std::move(sq));
  }

  // a principal ideal in a polynomial ring (a UFD) has radical generated
  // by the squarefree part: no combination sweep is needed
  bool certified = true;
  for (int iter = 0; gens.size() > 1; ++iter) {
    if (iter >= 6) {
      certified = false;
      out.scheme.notes.push_back(
          "reduce_structure: combination sweep did not stabilise");
      break;
    }
    IdealHandle I = make_ideal(XL.ring, gens);
    auto wit = frobenius_radical_witnesses(I, sweep_bound);
    if (wit.empty()) break;
    for (auto& h : wit) gens.push_back(std::move(h));
    out.changed = true;
  }

  bool ci_preserved = gens.size() == XL.gens.size();
  out.scheme.gens = std::move(gens);
  out.certified = certified;
  out.scheme.reduced_certified = certified;
  out.scheme.complete_intersection = XL.complete_intersection && ci_preserved;
  return out;
}

// ===== inseparability degree ===========================================

int degree_insep_log(const SchemeDesc& Y, const SchemeDesc& X) {
  const std::vector<int>& ly = Y.ring->field.levels;
  const std::vector<int>& lx = X.ring->field.levels;
  std::vector<int> raised;
  for (size_t i = 0; i < ly.size(); ++i) {
    int d = ly[i] - lx[i];
    if (d < 0 || d > 1)
      throw std::invalid_argument(
          "degree_insep: fields not one tower step apart");
    if (d == 1) raised.push_back(static_cast<int>(i));
  }
  if (raised.empty()) return 0;
  int d = static_cast<int>(raised.size());

  int best_rank = 0;
  for (const auto& choice : all_chart_choices(Y)) {
    Chart ch = make_chart(Y, choice);
    if (ideal_is_trivial(ch.ideal)) continue;
    // conormal matrix: rows = generators, columns = raised symbols
    std::vector<VecPoly> cols;
    std::vector<MultiPoly> cgens = ch.ideal.gens;
    int q = static_cast<int>(cgens.size());
    if (q == 0) continue;  // nothing raises rank here
    for (int i : raised) {
      VecPoly col = vp_zero(ch.ring, q);
      for (int j = 0; j < q; ++j)
        col.c[j] = mp_symbol_derivative(cgens[j], i);
      cols.push_back(std::move(col));
    }
    int rank = 0;
    for (int r = 1; r <= std::min(d, q); ++r) {
      if (minor_list(cols, r, ch.ideal.gens).empty()) break;
      rank = r;
    }
    best_rank = std::max(best_rank, rank);
  }
  return d - best_rank;
}

// ===== R1 test ==========================================================

R1Result r1_test(const SchemeDesc& Z) {
  R1Result out;
  for (const auto& choice : all_chart_choices(Z)) {
    Chart ch = make_chart(Z, choice);
    if (ideal_is_trivial(ch.ideal)) continue;
    // the Jacobian uses the chart images of Z's own generators (the
    // complete-intersection presentation), not the saturated chart ideal
    std::vector<MultiPoly> cgens;
    for (const auto& g : Z.gens) {
      MultiPoly out_g = mp_dehomogenize(g, ch.ring);
      if (!out_g.is_zero()) cgens.push_back(std::move(out_g));
    }
    int c = static_cast<int>(cgens.size());
    if (c == 0) continue;
    // Jacobian columns: chart variables then all tower symbols
    std::vector<VecPoly> cols;
    for (int v = 0; v < ch.ring->nvars(); ++v) {
      VecPoly col = vp_zero(ch.ring, c);
      for (int j = 0; j < c; ++j) col.c[j] = mp_derivative(cgens[j], v);
      cols.push_back(std::move(col));
    }
    for (int s = 0; s < ch.ring->field.nparams(); ++s) {
      VecPoly col = vp_zero(ch.ring, c);
      for (int j = 0; j < c; ++j) col.c[j] = mp_symbol_derivative(cgens[j], s);
      cols.push_back(std::move(col));
    }
    auto minors = minor_list(cols, c, ch.ideal.gens);
    if (minors.empty()) {
      out.certified = false;
      continue;
    }
    MultiPoly g = minors[0];
    for (size_t i = 1; i < minors.size() && !g.is_constant(); ++i)
      g = mp_gcd(g, minors[i]);
    if (g.is_constant()) continue;
    g = mp_squarefree_part(g);
    // split off variable factors, then keep any residual factor whole
    std::vector<MultiPoly> cands;
    for (int v = 0; v < ch.ring->nvars(); ++v) {
      if (g.degree_in(v) == 0) continue;
      MultiPoly xv = mp_var(ch.ring, v);
      MultiPoly q = mp_gcd(g, xv);
      if (!q.is_constant()) {
        cands.push_back(xv);
        g = mp_div_exact(g, xv);
      }
    }
    if (!g.is_constant()) cands.push_back(g);
    for (const auto& cand : cands) {
      SchemeDesc tmp = Z;
      MultiPoly H = mp_homogenize(cand, tmp, ch.chosen);
      bool dup = false;
      for (const auto& e : out.primes)
        if (mp_proportional(e, H)) {
          dup = true;
          break;
        }
      if (!dup) out.primes.push_back(std::move(H));
    }
  }
  // candidates from different charts may present the same divisor by
  // different equations (normal forms rewrite across the scheme's
  // relations), and a chart gcd may be a product of divisors seen
  // individually elsewhere.  Identify supports by radical membership and
  // keep one representative per support, dropping composites.
  if (out.primes.size() > 1) {
    auto in_rad = [&](const MultiPoly& f, const MultiPoly& g) {
      // f in rad(I_Z + (g))
      std::vector<MultiPoly> gens = Z.gens;
      gens.push_back(g);
      IdealHandle J = make_ideal(Z.ring, gens);
      return ideal_is_trivial(saturate(J, f));
    };
    size_t n = out.primes.size();
    std::vector<bool> drop(n, false);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        if (i == j || drop[i] || drop[j]) continue;
        bool ij = in_rad(out.primes[i], out.primes[j]);  // V(i) >= V(j)
        bool ji = in_rad(out.primes[j], out.primes[i]);
        if (ij && ji) {
          // same support: keep the lower-degree, lexicographically first
          size_t keep = i, other = j;
          auto key = [&](size_t k) {
            return std::make_pair(out.primes[k].total_degree(),
                                  mp_to_string(out.primes[k]));
          };
          if (key(j) < key(i)) std::swap(keep, other);
          drop[other] = true;
        } else if (ij && !ji) {
          drop[i] = true;  // i is composite with j as a component
        }
      }
    std::vector<MultiPoly> kept;
    for (size_t i = 0; i < n; ++i)
      if (!drop[i]) kept.push_back(out.primes[i]);
    out.primes = std::move(kept);
  }
  std::sort(out.primes.begin(), out.primes.end(),
            [](const MultiPoly& a, const MultiPoly& b) {
              return mp_to_string(a) < mp_to_string(b);
            });
  return out;
}

// ===== p-th root closure ===============================================

namespace {

std::vector<int> levels_plus_one(const std::vector<int>& lv) {
  std::vector<int> up(lv);
  for (int& x : up) ++x;
  return up;
}

// true when the coefficient already lies in the field at `levels`
bool coeff_in_levels(const TowerElement& c, const std::vector<int>& levels) {
  TowerElement n = te_normalize_levels(c);
  for (size_t i = 0; i < n.levels.size(); ++i)
    if (n.levels[i] > levels[i]) return false;
  return true;
}

struct TargetedRoot {
  bool found = false;
  std::vector<int> new_levels;      // subtower route
  bool subtower = false;
  std::string description;
};

// a generator with p-divisible exponents whose p-th root needs exactly one
// coefficient outside L times a monomial: the root of (that coefficient)^p
// generates the field extension carrying the normalisation
TargetedRoot targeted_extraction(const SchemeDesc& Z) {
  TargetedRoot out;
  const std::vector<int>& levels = Z.ring->field.levels;
  std::vector<int> up = levels_plus_one(levels);
  for (const auto& f : Z.gens) {
    if (mp_pth_root_within(f, levels)) continue;  // handled by reduce
    auto rho_opt = mp_pth_root_within(f, up);
    if (!rho_opt) continue;  // some exponent not divisible: genuinely reduced
    const MultiPoly& rho = *rho_opt;
    // coefficients outside L must share a single L-coset: then the root
    // rho = rho_in + gamma * g_out exhibits gamma as a function on Z that
    // is integral of degree p over L
    std::vector<TowerElement> outside;
    for (const auto& [e, c] : rho.t)
      if (!coeff_in_levels(c, levels)) outside.push_back(c);
    if (outside.empty()) continue;
    bool single_coset = true;
    for (size_t i = 1; i < outside.size(); ++i)
      if (!coeff_in_levels(te_div(outside[i], outside[0]), levels)) {
        single_coset = false;
        break;
      }
    if (!single_coset) continue;
    const TowerElement& gamma = outside[0];
    TowerElement gp = te_pow(gamma, Z.ring->field.p);  // lies in L
    TowerElement delta = te_normalize_levels(te_pth_root(te_neg(gp)));
    // subtower route: adjoining delta raises exactly one tower level
    std::vector<int> joined(levels);
    int raised = 0;
    for (size_t i = 0; i < joined.size(); ++i)
      if (delta.levels[i] > joined[i]) {
        joined[i] = delta.levels[i];
        raised += delta.levels[i] - levels[i];
      }
    if (raised == 1) {
      out.found = true;
      out.subtower = true;
      out.new_levels = joined;
      out.description =
          "adjoined p-th root of " +
          te_to_string(te_neg(gp), Z.ring->field) + " (tower level raised)";
      return out;
    }
  }
  return out;
}

}  // namespace

ClosureResult pth_root_closure(const SchemeDesc& Z0, int degree_bound) {
  ClosureResult out;
  SchemeDesc Z = Z0;
  int maxdeg = 1;
  for (const auto& g : Z.gens) maxdeg = std::max(maxdeg, g.total_degree());
  int bound = degree_bound > 0 ? degree_bound : 2 * maxdeg;

  for (int iter = 0; iter < 8; ++iter) {
    R1Result r1 = r1_test(Z);
    if (r1.primes.empty() && r1.certified) {
      Z.r1_certified = true;
      Z.normal_certified = Z.complete_intersection;
      out.scheme = Z;
      out.status = Z.normal_certified ? "certified-normal" : "closure-at-bound";
      return out;
    }
    // fast path: a generator whose root lives one level up
    TargetedRoot tr = targeted_extraction(Z);
    if (tr.found && tr.subtower) {
      BaseChangeSpec ext{Z.ring->field.levels, tr.new_levels};
      SchemeDesc up = base_change(Z, ext);
      ReduceResult rr = reduce_structure(up);
      Z = rr.scheme;
      out.new_elements.push_back(tr.description);
      out.field_extended = true;
      continue;
    }
    // bounded search: eta = g / pi^k along the candidate primes
    bool adjoined = false;
    for (const auto& P : r1.primes) {
      if (adjoined) break;
      for (const auto& choice : all_chart_choices(Z)) {
        if (adjoined) break;
        Chart ch = make_chart(Z, choice);
        if (ideal_is_trivial(ch.ideal)) continue;
        // prime must be a chart variable (principal monomial denominator)
        MultiPoly pi = mp_dehomogenize(P, ch.ring);
        if (pi.is_constant() || pi.t.size() != 1) continue;
        for (int k = 1; k * pi.total_degree() <= bound && !adjoined; ++k) {
          MultiPoly pik = mp_pow(pi, static_cast<uint64_t>(k));
          MultiPoly pipk =
              mp_pow(pik, static_cast<uint64_t>(Z.ring->field.p));
          std::vector<MultiPoly> ext_gens = ch.ideal.gens;
          ext_gens.push_back(pipk);
          IdealHandle J = make_ideal(ch.ring, ext_gens);
          auto wit = frobenius_radical_witnesses(J, bound);
          for (const auto& h : wit) {
            // require eta = h/pi^k outside the chart ring image
            std::vector<MultiPoly> small = ch.ideal.gens;
            small.push_back(pik);
            IdealHandle Jk = make_ideal(ch.ring, small);
            if (ideal_member(h, Jk)) continue;
            // eta^p = t with h^p = t*pi^{pk} mod ideal
            MultiPoly hp = mp_pow(h, Z.ring->field.p);
            std::vector<MultiPoly> divs{pipk};
            const GBasis& gbI = ch.ideal.gb();
            for (const auto& g : gbI.polys) divs.push_back(g);
            DivisionResult dv = mp_divide(hp, divs, gbI.ord);
            if (!dv.remainder.is_zero()) continue;
            MultiPoly t = dv.quotients[0];
            if (t.is_constant() && !t.is_zero()) {
              TowerElement gamma = t.t.begin()->second;
              TowerElement delta =
                  te_normalize_levels(te_pth_root(gamma));
              std::vector<int> joined(Z.ring->field.levels);
              int raisedn = 0;
              for (size_t i = 0; i < joined.size(); ++i)
                if (delta.levels[i] > joined[i]) {
                  raisedn += delta.levels[i] - joined[i];
                  joined[i] = delta.levels[i];
                }
              if (raisedn == 1) {
                std::string desc = "adjoined p-th root of field constant " +
                                   te_to_string(gamma, Z.ring->field);
                BaseChangeSpec ext{Z.ring->field.levels, joined};
                SchemeDesc upz = base_change(Z, ext);
                ReduceResult rr = reduce_structure(upz);
                Z = rr.scheme;
                out.new_elements.push_back(desc);
                out.field_extended = true;
                adjoined = true;
                break;
              }
            }
            // general route: adjoin eta as a presentation variable with
            // the homogeneous relation pi^k * eta - h
            std::string name = "eta" + std::to_string(out.new_elements.size());
            std::vector<Block> blocks = Z.ring->blocks;
            bool have_adj = !blocks.empty() && blocks.back().name == "_adj";
            if (have_adj)
              blocks.back().vars.push_back(name);
            else
              blocks.push_back({"_adj", {name}, false});
            RingPtr nring = make_ring(Z.ring->field, blocks);
            SchemeDesc NZ = Z;
            NZ.ring = nring;
            NZ.gens.clear();
            for (const auto& g : Z.gens)
              NZ.gens.push_back(mp_transport(g, nring));
            NZ.chart_saturators.clear();
            for (const auto& m : Z.chart_saturators)
              NZ.chart_saturators.push_back(mp_transport(m, nring));
            std::vector<int> nchosen = ch.chosen;
            nchosen.resize(nring->nblocks(), -1);
            MultiPoly H = mp_homogenize(h, NZ, nchosen);
            MultiPoly PIk = mp_transport(mp_pow(P, static_cast<uint64_t>(k)),
                                         nring);
            // balance multidegrees so the relation is homogeneous
            auto dh = proj_multidegree(H);
            auto dp = proj_multidegree(PIk);
            if (!dh || !dp)
              throw std::logic_error("pth_root_closure: inhomogeneous data");
            MultiPoly rel = mp_sub(
                mp_mul(PIk, mp_var(nring, nring->var_index(name))), H);
            if (!proj_multidegree(rel)) {
              // pad the smaller side with powers of the chosen variables
              MultiPoly lhs =
                  mp_mul(PIk, mp_var(nring, nring->var_index(name)));
              MultiPoly rhs = H;
              for (int b = 0; b < nring->nblocks(); ++b) {
                int diff = (*dp)[b] - (*dh)[b];
                if (diff == 0 || nchosen[b] < 0) continue;
                MultiPoly pad = mp_pow(
                    mp_var(nring, nchosen[b]),
                    static_cast<uint64_t>(diff > 0 ? diff : -diff));
                if (diff > 0)
                  rhs = mp_mul(rhs, pad);
                else
                  lhs = mp_mul(lhs, pad);
              }
              rel = mp_sub(lhs, rhs);
            }
            NZ.gens.push_back(rel);
            NZ.chart_saturators.push_back(PIk);
            NZ.complete_intersection = false;
            Z = NZ;
            out.new_elements.push_back(name + " = (" + mp_to_string(h) +
                                       ") / (" + mp_to_string(pik) +
                                       ") on chart " + ch.label);
            adjoined = true;
            break;
          }
        }
      }
    }
    if (!adjoined && !tr.found) break;  // nothing more to adjoin
    if (!adjoined && tr.found && !tr.subtower) break;
  }
  R1Result r1 = r1_test(Z);
  Z.r1_certified = r1.primes.empty() && r1.certified;
  Z.normal_certified = Z.r1_certified && Z.complete_intersection;
  out.scheme = Z;
  out.status = Z.normal_certified ? "certified-normal" : "closure-at-bound";
  return out;
}

// ===== global sections and classes ======================================

bool h0_is_base_field(const SchemeDesc& X) {
  if (!X.complete_intersection) return false;
  IdealHandle I = make_ideal(X.ring, X.gens);
  int cone_dim = ideal_dimension(I);
  int nproj = 0;
  for (const auto& b : X.ring->blocks)
    if (b.projective) ++nproj;
  return cone_dim - nproj >= 1;
}

std::vector<int> canonical_class(const SchemeDesc& X) {
  int nb = X.ring->nblocks();
  std::vector<int> k(nb, 0);
  for (int b = 0; b < nb; ++b) {
    if (!X.ring->blocks[b].projective) continue;
    k[b] = -static_cast<int>(X.ring->blocks[b].vars.size());
  }
  for (const auto& g : X.gens) {
    auto d = proj_multidegree(g);
    if (!d) throw std::invalid_argument("canonical_class: inhomogeneous");
    for (int b = 0; b < nb; ++b) k[b] += (*d)[b];
  }
  for (int b = 0; b < nb; ++b)
    if (!X.ring->blocks[b].projective) k[b] = 0;
  return k;
}

}  // namespace insep
