// pipeline.cpp — conormal presentation, fixed/movable decomposition,
// essential subextension, canonical-bundle-formula check, fibration,
// tower inequality.
#include "insep/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "insep/modulealg.hpp"

namespace insep {

namespace {

// ===== small helpers ====================================================

std::vector<int> raised_indices(const std::vector<int>& from,
                                const std::vector<int>& to) {
  std::vector<int> out;
  for (size_t i = 0; i < from.size(); ++i)
    if (to[i] > from[i]) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<MultiPoly> chart_generators(const SchemeDesc& S,
                                        const RingPtr& chart_ring) {
  std::vector<MultiPoly> out;
  for (const auto& g : S.gens) {
    MultiPoly h = mp_dehomogenize(g, chart_ring);
    if (!h.is_zero()) out.push_back(std::move(h));
  }
  return out;
}

// generic rank of the matrix whose (i,j) entry is rows[i].c[j], taken
// modulo the ideal
int matrix_rank_mod(const std::vector<VecPoly>& rows, int q,
                    const std::vector<MultiPoly>& ideal,
                    const RingPtr& ring) {
  int d = static_cast<int>(rows.size());
  if (d == 0 || q == 0) return 0;
  // columns for minor_list: one VecPoly per generator j
  std::vector<VecPoly> cols;
  for (int j = 0; j < q; ++j) {
    VecPoly col = vp_zero(ring, d);
    for (int i = 0; i < d; ++i) col.c[i] = rows[i].c[j];
    cols.push_back(std::move(col));
  }
  int rank = 0;
  for (int r = 1; r <= std::min(d, q); ++r) {
    if (minor_list(cols, r, ideal).empty()) break;
    rank = r;
  }
  return rank;
}

// truncate or pad a class vector to the block count of X's ambient
std::vector<int> class_on(const SchemeDesc& X, const std::vector<int>& v) {
  std::vector<int> out(X.ring->nblocks(), 0);
  for (size_t b = 0; b < out.size() && b < v.size(); ++b) out[b] = v[b];
  return out;
}

std::vector<int> class_add(std::vector<int> a, const std::vector<int>& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) a[i] += b[i];
  return a;
}

std::vector<int> class_scale(std::vector<int> a, int c) {
  for (int& x : a) x *= c;
  return a;
}

bool class_is_zero(const std::vector<int>& a) {
  for (int x : a)
    if (x != 0) return false;
  return true;
}

// symbol-indexed rows -> generator-indexed matrix for module_kernel, whose
// kernel vectors then carry one component per symbol
std::vector<std::vector<MultiPoly>> kernel_matrix(
    const std::vector<VecPoly>& rows, int q, const RingPtr& ring) {
  std::vector<std::vector<MultiPoly>> M(
      static_cast<size_t>(q),
      std::vector<MultiPoly>(rows.size(), mp_zero(ring)));
  for (size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < q; ++j) M[j][i] = rows[i].c[j];
  return M;
}

MultiPoly nf_global(const MultiPoly& f, const IdealHandle& I) {
  const GBasis& gb = I.gb();
  return normal_form(f, gb.polys, gb.ord);
}

// reduced row echelon form of the L-span of homogeneous polynomials of a
// common multidegree, taken modulo the ideal; the result is the canonical
// basis of the linear system (deterministic, monic leading coefficients)
std::vector<MultiPoly> echelon_sections(const std::vector<MultiPoly>& secs,
                                        const IdealHandle& I) {
  if (secs.empty()) return {};
  const RingPtr& ring = I.ring;
  uint32_t p = ring->field.p;
  const std::vector<int>& levels = ring->field.levels;
  TermOrder ord = TermOrder::standard(*ring);
  // normal forms, then coefficient vectors over the union of monomials
  std::vector<MultiPoly> nfs;
  std::set<std::vector<int>> mono_set;
  for (const auto& s : secs) {
    MultiPoly nf = nf_global(s, I);
    if (nf.is_zero()) continue;
    for (const auto& [e, c] : nf.t) mono_set.insert(e);
    nfs.push_back(std::move(nf));
  }
  if (nfs.empty()) return {};
  std::vector<std::vector<int>> monos(mono_set.begin(), mono_set.end());
  std::sort(monos.begin(), monos.end(),
            [&](const std::vector<int>& a, const std::vector<int>& b) {
              return ord.less(*ring, b, a);  // descending
            });
  std::map<std::vector<int>, size_t> col_of;
  for (size_t k = 0; k < monos.size(); ++k) col_of[monos[k]] = k;
  std::vector<std::vector<TowerElement>> M;
  for (const auto& nf : nfs) {
    std::vector<TowerElement> row(monos.size(), te_zero(p, levels));
    for (const auto& [e, c] : nf.t) row[col_of[e]] = te_embed(c, levels);
    M.push_back(std::move(row));
  }
  // Gaussian elimination to reduced echelon form
  size_t rrow = 0;
  for (size_t col = 0; col < monos.size() && rrow < M.size(); ++col) {
    size_t piv = rrow;
    while (piv < M.size() && M[piv][col].is_zero()) ++piv;
    if (piv == M.size()) continue;
    std::swap(M[rrow], M[piv]);
    TowerElement inv = te_inv(M[rrow][col]);
    for (size_t k = col; k < monos.size(); ++k)
      M[rrow][k] = te_mul(M[rrow][k], inv);
    for (size_t i = 0; i < M.size(); ++i) {
      if (i == rrow || M[i][col].is_zero()) continue;
      TowerElement f = M[i][col];
      for (size_t k = col; k < monos.size(); ++k)
        M[i][k] = te_sub(M[i][k], te_mul(f, M[rrow][k]));
    }
    ++rrow;
  }
  std::vector<MultiPoly> out;
  for (size_t i = 0; i < rrow; ++i) {
    MultiPoly s = mp_zero(ring);
    for (size_t k = 0; k < monos.size(); ++k)
      if (!M[i][k].is_zero()) s = mp_add(s, mp_monomial(ring, monos[k], M[i][k]));
    if (!s.is_zero()) out.push_back(std::move(s));
  }
  return out;
}

// determinant of a square matrix of polynomials (Laplace along row 0)
MultiPoly poly_det(const std::vector<std::vector<MultiPoly>>& M,
                   const RingPtr& ring) {
  size_t n = M.size();
  if (n == 0) return mp_one(ring);
  if (n == 1) return M[0][0];
  MultiPoly acc = mp_zero(ring);
  for (size_t j = 0; j < n; ++j) {
    if (M[0][j].is_zero()) continue;
    std::vector<std::vector<MultiPoly>> sub;
    for (size_t i = 1; i < n; ++i) {
      std::vector<MultiPoly> row;
      for (size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(M[i][k]);
      sub.push_back(std::move(row));
    }
    MultiPoly term = mp_mul(M[0][j], poly_det(sub, ring));
    if (j % 2) term = mp_neg(term);
    acc = mp_add(acc, term);
  }
  return acc;
}

void subsets_of(int n, int r, std::vector<int>& cur,
                std::vector<std::vector<int>>& out, int start = 0) {
  if (static_cast<int>(cur.size()) == r) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i <= n - (r - static_cast<int>(cur.size())); ++i) {
    cur.push_back(i);
    subsets_of(n, r, cur, out, i + 1);
    cur.pop_back();
  }
}

}  // namespace

// ===== conormal presentation ===========================================

std::vector<VecPoly> conormal_rows(const SchemeDesc& S,
                                   const std::vector<int>& syms,
                                   const RingPtr& chart_ring,
                                   const std::vector<MultiPoly>& chart_gens) {
  (void)S;
  std::vector<VecPoly> rows;
  int q = static_cast<int>(chart_gens.size());
  for (int sym : syms) {
    VecPoly row = vp_zero(chart_ring, q);
    for (int j = 0; j < q; ++j)
      row.c[j] = mp_symbol_derivative(chart_gens[j], sym);
    rows.push_back(std::move(row));
  }
  return rows;
}

ConormalData omega_presentation(const SchemeDesc& Z, const SchemeDesc& X,
                                const BaseChangeSpec& bc) {
  if (!Z.reduced_certified)
    throw std::invalid_argument("omega_presentation: Z not certified reduced");
  if (!X.complete_intersection)
    throw std::invalid_argument(
        "omega_presentation: X must be a complete intersection");
  bc.validate();
  ConormalData cd;
  cd.Z = Z;
  cd.X = X;
  cd.bc = bc;
  cd.raised = raised_indices(bc.source_levels, bc.target_levels);
  cd.d = static_cast<int>(cd.raised.size());
  int best = 0;
  for (const auto& choice : all_chart_choices(Z)) {
    Chart ch = make_chart(Z, choice);
    if (ideal_is_trivial(ch.ideal)) continue;
    auto cgens = chart_generators(Z, ch.ring);
    auto rows = conormal_rows(Z, cd.raised, ch.ring, cgens);
    best = std::max(best, matrix_rank_mod(rows, static_cast<int>(cgens.size()),
                                          ch.ideal.gens, ch.ring));
  }
  cd.rank_omega = cd.d - best;
  return cd;
}

// ===== decomposition ====================================================

namespace {

// movable sections and content on a single chart of Z; sections come back
// homogenised on Z's ambient
struct ChartMovable {
  std::vector<MultiPoly> sections;  // homogeneous, not yet canonicalised
  MultiPoly content;                // chart-level gcd of the top minors
  std::vector<VecPoly> fprime;      // kernel generators (F' on this chart)
};

ChartMovable chart_movable(const ConormalData& cd, const SchemeDesc& Z,
                           const Chart& ch) {
  ChartMovable out;
  auto cgens = chart_generators(Z, ch.ring);
  auto rows = conormal_rows(Z, cd.raised, ch.ring, cgens);
  out.fprime = module_kernel(
      kernel_matrix(rows, static_cast<int>(cgens.size()), ch.ring),
      ch.ideal.gens);
  out.content = mp_one(ch.ring);
  int r = cd.rank_omega;
  if (r == 0) {
    out.sections = {mp_one(Z.ring)};
    return out;
  }
  // the sections are the Pluecker coordinates of the rank-r kernel sheaf:
  // r x r minors of a rank-realising subset of r kernel generators (the
  // full generating set carries ideal padding of unrelated degrees).
  // different subsets give the same tuple up to a rational factor; the
  // representative of minimal multidegree is the one free of common
  // divisorial components, i.e. the movable part
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  subsets_of(static_cast<int>(out.fprime.size()), r, cur, subsets);
  bool found = false;
  std::vector<int> best_target;
  for (const auto& sub : subsets) {
    std::vector<VecPoly> cols;
    for (int i = 0; i < cd.d; ++i) {
      VecPoly col = vp_zero(ch.ring, r);
      for (int k = 0; k < r; ++k) col.c[k] = out.fprime[sub[k]].c[i];
      cols.push_back(std::move(col));
    }
    if (minor_list(cols, r, ch.ideal.gens).empty()) continue;
    MinorSections ms = top_minor_sections(cols, r, ch.ideal.gens);
    std::vector<MultiPoly> secs;
    for (const auto& s : ms.sections)
      secs.push_back(mp_homogenize(s, Z, ch.chosen));
    // sections of one linear system share a multidegree: pad the lower ones
    // by powers of the chart's chosen coordinates
    std::vector<int> target(Z.ring->nblocks(), 0);
    std::vector<std::vector<int>> degs;
    for (const auto& s : secs) {
      auto md = proj_multidegree(s);
      if (!md)
        throw std::logic_error("decompose: inhomogeneous minor section");
      for (size_t b = 0; b < md->size(); ++b)
        target[b] = std::max(target[b], (*md)[b]);
      degs.push_back(*md);
    }
    for (size_t k = 0; k < secs.size(); ++k) {
      for (int b = 0; b < Z.ring->nblocks(); ++b) {
        int gap = target[b] - degs[k][b];
        if (gap <= 0) continue;
        if (ch.chosen[b] < 0)
          throw std::logic_error("decompose: cannot pad an affine block");
        secs[k] = mp_mul(secs[k], mp_pow(mp_var(Z.ring, ch.chosen[b]),
                                         static_cast<uint64_t>(gap)));
      }
    }
    auto less = [](const std::vector<int>& a, const std::vector<int>& b) {
      int ta = 0, tb = 0;
      for (int v : a) ta += v;
      for (int v : b) tb += v;
      if (ta != tb) return ta < tb;
      return a < b;
    };
    if (!found || less(target, best_target)) {
      found = true;
      best_target = target;
      out.sections = std::move(secs);
      out.content = ms.content;
    }
  }
  if (!found)
    throw std::logic_error("decompose: no rank-realising kernel subset");
  return out;
}

// the F submodule of O^d on a chart of Y: projections of derivations of
// O_Y over O_X onto the coordinates raised by the base change
std::vector<VecPoly> f_submodule(const SchemeDesc& Y, const SchemeDesc& X,
                                 const std::vector<int>& raised,
                                 const Chart& ch) {
  std::vector<int> syms_all =
      raised_indices(X.ring->field.levels, Y.ring->field.levels);
  auto cgens = chart_generators(Y, ch.ring);
  auto rows = conormal_rows(Y, syms_all, ch.ring, cgens);
  // adjoined presentation variables (affine blocks of Y's ambient)
  // contribute unknown derivation values
  std::vector<int> eta_vars;
  for (int b = 0; b < Y.ring->nblocks(); ++b)
    if (!Y.ring->blocks[b].projective)
      for (const auto& v : Y.ring->blocks[b].vars) {
        int idx = ch.ring->var_index(v);
        if (idx >= 0) eta_vars.push_back(idx);
      }
  for (int v : eta_vars) {
    VecPoly row = vp_zero(ch.ring, static_cast<int>(cgens.size()));
    for (size_t j = 0; j < cgens.size(); ++j)
      row.c[j] = mp_derivative(cgens[j], v);
    rows.push_back(std::move(row));
  }
  auto kernel = module_kernel(
      kernel_matrix(rows, static_cast<int>(cgens.size()), ch.ring),
      ch.ideal.gens);
  // positions of the bc-raised symbols inside syms_all
  std::vector<int> pos;
  for (int s : raised) {
    auto it = std::find(syms_all.begin(), syms_all.end(), s);
    if (it == syms_all.end())
      throw std::logic_error("decompose: raised symbol missing on Y");
    pos.push_back(static_cast<int>(it - syms_all.begin()));
  }
  std::vector<VecPoly> out;
  for (const auto& v : kernel) {
    VecPoly w = vp_zero(ch.ring, static_cast<int>(pos.size()));
    bool nz = false;
    for (size_t i = 0; i < pos.size(); ++i) {
      w.c[i] = v.c[pos[i]];
      if (!w.c[i].is_zero()) nz = true;
    }
    if (nz) out.push_back(std::move(w));
  }
  return out;
}

bool pluecker_check(const ConormalData& cd, const SchemeDesc& Z,
                    const Chart& ch, const std::vector<VecPoly>& fprime) {
  int d = cd.d;
  int r = cd.rank_omega;
  if (r == 0 || r == d) return true;
  const GBasis& gb = ch.ideal.gb();
  auto nf = [&](const MultiPoly& f) { return normal_form(f, gb.polys, gb.ord); };
  auto cgens = chart_generators(Z, ch.ring);
  int q = static_cast<int>(cgens.size());
  auto rows = conormal_rows(Z, cd.raised, ch.ring, cgens);
  // column subsets of size r
  std::vector<std::vector<int>> sigmas;
  std::vector<int> cur;
  subsets_of(d, r, cur, sigmas);
  // a row subset of F' generators realising the generic rank r
  std::vector<std::vector<int>> rowsets;
  cur.clear();
  subsets_of(static_cast<int>(fprime.size()), r, cur, rowsets);
  std::vector<MultiPoly> A;  // Pluecker coordinates of the sub F'
  bool found = false;
  for (const auto& rs : rowsets) {
    A.clear();
    bool nzero = false;
    for (const auto& sg : sigmas) {
      std::vector<std::vector<MultiPoly>> M;
      for (int i : rs) {
        std::vector<MultiPoly> row;
        for (int j : sg) row.push_back(fprime[i].c[j]);
        M.push_back(std::move(row));
      }
      MultiPoly det = nf(poly_det(M, ch.ring));
      if (!det.is_zero()) nzero = true;
      A.push_back(std::move(det));
    }
    if (nzero) {
      found = true;
      break;
    }
  }
  if (!found) return false;
  // a generator subset of size d-r realising rank d-r of the relation matrix
  std::vector<std::vector<int>> gensets;
  cur.clear();
  subsets_of(q, d - r, cur, gensets);
  std::vector<MultiPoly> B(sigmas.size(), mp_zero(ch.ring));
  found = false;
  for (const auto& gs : gensets) {
    bool nzero = false;
    for (size_t si = 0; si < sigmas.size(); ++si) {
      // complementary row subset
      std::vector<int> comp;
      for (int i = 0; i < d; ++i)
        if (std::find(sigmas[si].begin(), sigmas[si].end(), i) ==
            sigmas[si].end())
          comp.push_back(i);
      std::vector<std::vector<MultiPoly>> M;
      for (int i : comp) {
        std::vector<MultiPoly> row;
        for (int j : gs) row.push_back(rows[i].c[j]);
        M.push_back(std::move(row));
      }
      B[si] = nf(poly_det(M, ch.ring));
      if (!B[si].is_zero()) nzero = true;
    }
    if (nzero) {
      found = true;
      break;
    }
  }
  if (!found) return false;
  // projective equality up to per-coordinate sign
  for (size_t i = 0; i < sigmas.size(); ++i)
    for (size_t j = i + 1; j < sigmas.size(); ++j) {
      MultiPoly x = nf(mp_mul(A[i], B[j]));
      MultiPoly y = nf(mp_mul(A[j], B[i]));
      if (!mp_equal(x, y) && !mp_equal(x, mp_neg(y))) return false;
    }
  return true;
}

}  // namespace

LinearSystemData decompose(const ConormalData& cd, const SchemeDesc& Y) {
  const SchemeDesc& Z = cd.Z;
  LinearSystemData out;
  IdealHandle IZ = make_ideal(Z.ring, Z.gens);

  // ----- movable part across the charts of Z -----
  std::vector<MultiPoly> canonical;
  bool have_canonical = false;
  MultiPoly primary_content = mp_one(Z.ring);
  bool pluecker_done = false;
  for (const auto& choice : all_chart_choices(Z)) {
    Chart ch = make_chart(Z, choice);
    if (ideal_is_trivial(ch.ideal)) continue;
    ChartMovable cm = chart_movable(cd, Z, ch);
    std::vector<MultiPoly> basis = echelon_sections(cm.sections, IZ);
    if (std::getenv("INSEP_DEBUG")) {
      fprintf(stderr, "chart %s content=%s\n", ch.label.c_str(),
              mp_to_string(cm.content).c_str());
      for (const auto& s : basis)
        fprintf(stderr, "  basis: %s\n", mp_to_string(s).c_str());
    }
    if (!have_canonical) {
      canonical = basis;
      have_canonical = true;
      primary_content = mp_homogenize(cm.content, Z, ch.chosen);
      if (!pluecker_done) {
        out.pluecker_consistent = pluecker_check(cd, Z, ch, cm.fprime);
        pluecker_done = true;
      }
    } else {
      // cross-chart consistency: the canonical bases must agree
      bool same = basis.size() == canonical.size();
      for (size_t i = 0; same && i < basis.size(); ++i)
        same = mp_equal(basis[i], canonical[i]);
      if (!same)
        throw std::logic_error(
            "decompose: cross-chart inconsistency of the movable part");
    }
  }
  if (!have_canonical)
    throw std::invalid_argument("decompose: Z has no nonempty chart");
  out.movable = canonical;
  if (!canonical.empty()) {
    auto md = proj_multidegree(canonical[0]);
    if (!md) throw std::logic_error("decompose: inhomogeneous section");
    out.movable_class = class_on(cd.X, *md);
    for (const auto& s : canonical) {
      auto m2 = proj_multidegree(s);
      if (!m2 || class_on(cd.X, *m2) != out.movable_class)
        throw std::logic_error("decompose: sections of mixed multidegree");
    }
  } else {
    out.movable_class = class_on(cd.X, {});
  }
  if (!primary_content.is_constant()) {
    auto cc = proj_multidegree(primary_content);
    if (cc && !class_is_zero(class_on(cd.X, *cc))) {
      out.notes.push_back("nontrivial minor content folded into fixed class");
      out.fixed_class = class_add(class_on(cd.X, {}), class_on(cd.X, *cc));
    }
  }
  if (out.fixed_class.empty()) out.fixed_class = class_on(cd.X, {});
  out.movable_zero = class_is_zero(out.movable_class);

  // ----- fixed part at the candidate primes, measured on Y -----
  R1Result r1 = r1_test(Z);
  out.fixed_certified = Y.normal_certified && r1.certified;
  // F requires the raised symbols to sit at matching levels on Y
  for (int s : cd.raised)
    if (Y.ring->field.levels[s] != Z.ring->field.levels[s]) {
      out.fixed_certified = false;
      out.notes.push_back("fixed part uncertified: symbol level shifted on Y");
    }
  for (const auto& P : r1.primes) {
    bool measured = false;
    for (const auto& choice : all_chart_choices(Y)) {
      Chart ch = make_chart(Y, choice);
      if (ideal_is_trivial(ch.ideal)) continue;
      MultiPoly pi = mp_dehomogenize(P, ch.ring);
      if (pi.is_zero() || pi.is_constant()) continue;
      // the prime must actually meet the chart: skip when it reduces to a
      // unit (e.g. the divisor lives inside the chart's hyperplane)
      const GBasis& gb = ch.ideal.gb();
      MultiPoly nfpi = normal_form(pi, gb.polys, gb.ord);
      if (nfpi.is_constant()) continue;
      // F' pulled back: kernel of the transported Z-relations over O_Y
      auto zgens = chart_generators(Z, ch.ring);
      auto zrows = conormal_rows(Z, cd.raised, ch.ring, zgens);
      auto fprime = module_kernel(
          kernel_matrix(zrows, static_cast<int>(zgens.size()), ch.ring),
          ch.ideal.gens);
      auto f = f_submodule(Y, cd.X, cd.raised, ch);
      int mult = length_at_prime(f, fprime, cd.rank_omega, pi, ch.ideal);
      if (mult > 0) {
        auto pc = proj_multidegree(P);
        if (!pc) throw std::logic_error("decompose: inhomogeneous prime");
        out.fixed.push_back({P, mult});
        out.fixed_class =
            class_add(out.fixed_class, class_scale(class_on(cd.X, *pc), mult));
      }
      measured = true;
      break;
    }
    if (!measured) {
      out.fixed_certified = false;
      out.notes.push_back("candidate prime not measurable on any chart: " +
                          mp_to_string(P));
    }
  }
  out.total_class = class_add(out.movable_class, out.fixed_class);
  return out;
}

// ===== essential part ===================================================

namespace {

// L-constant solutions c of  sum_i c_i d(f_j)/d(u_i) in I  for all j
std::vector<std::vector<TowerElement>> constant_dual_sections(
    const SchemeDesc& Z, const std::vector<int>& raised) {
  const RingPtr& ring = Z.ring;
  uint32_t p = ring->field.p;
  const std::vector<int>& levels = ring->field.levels;
  int d = static_cast<int>(raised.size());
  if (d == 0) return {};
  IdealHandle I = make_ideal(ring, Z.gens);
  std::vector<std::vector<TowerElement>> M;
  for (const auto& g : Z.gens) {
    std::vector<MultiPoly> entries;
    std::set<std::vector<int>> monos;
    for (int s : raised) {
      MultiPoly e = nf_global(mp_symbol_derivative(g, s), I);
      for (const auto& [m, c] : e.t) monos.insert(m);
      entries.push_back(std::move(e));
    }
    for (const auto& m : monos) {
      std::vector<TowerElement> row(d, te_zero(p, levels));
      for (int i = 0; i < d; ++i) {
        auto it = entries[i].t.find(m);
        if (it != entries[i].t.end()) row[i] = te_embed(it->second, levels);
      }
      M.push_back(std::move(row));
    }
  }
  return te_matrix_kernel(M, p, levels, static_cast<size_t>(d));
}

}  // namespace

EssentialPartResult essential_part(const SchemeDesc& Z, const SchemeDesc& X,
                                   const BaseChangeSpec& bc) {
  if (!Z.reduced_certified)
    throw std::invalid_argument("essential_part: Z not certified reduced");
  bc.validate();
  EssentialPartResult out;
  std::vector<int> raised = raised_indices(bc.source_levels, bc.target_levels);
  out.foliation_basis = constant_dual_sections(Z, raised);
  int rank_g = static_cast<int>(out.foliation_basis.size());

  const TowerField& L = Z.ring->field;
  if (rank_g == 0) {
    // the whole extension is essential: L' = L
    out.degree_log = 0;
    out.subtower = true;
    out.subfield_levels = L.levels;
    out.reduced_check = Z.reduced_certified;
    out.h0_check = true;
    return out;
  }
  std::vector<FieldDerivation> ders;
  for (const auto& c : out.foliation_basis) {
    FieldDerivation D;
    D.base_levels = bc.source_levels;
    D.coeffs.assign(L.nparams(), te_zero(L.p, L.levels));
    for (size_t i = 0; i < raised.size(); ++i)
      D.coeffs[raised[i]] = te_embed(c[i], L.levels);
    ders.push_back(std::move(D));
  }
  ConstantsResult cr = constants_subfield(L, bc.source_levels, ders);
  out.degree_log = cr.log_degree;
  out.subfield_generators = cr.generators;
  if (out.degree_log != rank_g)
    out.notes.push_back("foliation rank and subfield degree disagree");
  out.subtower = cr.is_subtower;
  if (!cr.is_subtower) {
    out.notes.push_back(
        "essential subfield is not a parameter sub-tower; scheme-level "
        "verification skipped");
    return out;
  }
  out.subfield_levels = cr.subtower_levels;

  // Z' over L', then verification of the two defining properties
  BaseChangeSpec to_lp{bc.source_levels, cr.subtower_levels};
  ReduceResult zp = reduce_structure(base_change(X, to_lp));
  BaseChangeSpec lp_to_l{cr.subtower_levels, L.levels};
  ReduceResult zpl = reduce_structure(base_change(zp.scheme, lp_to_l));
  out.reduced_check = zp.certified && zpl.certified && !zpl.changed;
  std::vector<int> raised_p =
      raised_indices(bc.source_levels, cr.subtower_levels);
  auto g2 = constant_dual_sections(zp.scheme, raised_p);
  out.h0_check = g2.empty();
  return out;
}

// ===== canonical bundle formula =========================================

CbfReport verify_cbf(const LinearSystemData& decomp, const SchemeDesc& X,
                     const SchemeDesc& Y) {
  if (!X.complete_intersection || !Y.complete_intersection)
    throw std::invalid_argument(
        "verify_cbf: complete intersections required for adjunction classes");
  CbfReport rep;
  rep.class_kx = class_on(X, canonical_class(X));
  rep.class_ky = class_on(X, canonical_class(Y));
  int p = static_cast<int>(X.ring->field.p);
  rep.class_decomp = class_scale(
      class_add(decomp.fixed_class, decomp.movable_class), p - 1);
  std::vector<int> diff = rep.class_kx;
  for (size_t i = 0; i < diff.size(); ++i) diff[i] -= rep.class_ky[i];
  rep.pass = diff == rep.class_decomp;
  return rep;
}

// ===== fibration ========================================================

namespace {

// evaluate a polynomial whose variables all carry images in a new field
TowerElement eval_to_field(const MultiPoly& f, const TowerField& nf,
                           const std::vector<TowerElement>& param_images,
                           const std::vector<TowerElement>& var_images) {
  TowerElement acc = te_zero(nf.p, nf.levels);
  for (const auto& [e, c] : f.t) {
    // coefficient: a rational function of the old parameters at level 0
    TowerElement num = te_zero(nf.p, nf.levels);
    TowerElement den = te_zero(nf.p, nf.levels);
    TowerElement cc = te_normalize_levels(c);
    for (int lv : cc.levels)
      if (lv != 0)
        throw std::invalid_argument(
            "fibration: coefficients must sit at tower level zero");
    auto eval_pp = [&](const PPoly& q) {
      TowerElement s = te_zero(nf.p, nf.levels);
      for (const auto& [pe, pc] : q.t) {
        TowerElement t = te_const(nf.p, nf.levels, pc);
        for (size_t i = 0; i < pe.size(); ++i)
          if (pe[i] > 0)
            t = te_mul(t, te_pow(param_images[i],
                                 static_cast<uint64_t>(pe[i])));
        s = te_add(s, t);
      }
      return s;
    };
    num = eval_pp(cc.num);
    den = eval_pp(cc.den);
    TowerElement term = te_div(num, den);
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0)
        term = te_mul(term, te_pow(var_images[i],
                                   static_cast<uint64_t>(e[i])));
    acc = te_add(acc, term);
  }
  return acc;
}

// scale by the least common multiple of the coefficient denominators so
// every coefficient becomes polynomial in the parameters
MultiPoly clear_denominators(const MultiPoly& f) {
  if (f.is_zero()) return f;
  const TowerField& K = f.ring->field;
  PPoly lcm = pp_const(K.p, K.nparams(), 1);
  for (const auto& [e, c] : f.t) {
    PPoly g = pp_gcd(lcm, c.den);
    lcm = pp_mul(lcm, pp_div_exact(c.den, g));
  }
  TowerElement scale = te_make(K.p, K.levels, lcm, pp_const(K.p, K.nparams(), 1));
  return mp_scale(f, scale);
}

}  // namespace

FibrationReport fibration(const LinearSystemData& decomp, const SchemeDesc& X,
                          const SchemeDesc& Z) {
  FibrationReport rep;
  if (decomp.movable_zero) {
    rep.no_fibration = true;
    rep.v_status = "no fibration; base change reduced";
    return rep;
  }
  int k = static_cast<int>(decomp.movable.size());
  // graph of the section map, then eliminate the source
  std::vector<Block> blocks = Z.ring->blocks;
  std::vector<std::string> wnames;
  for (int i = 0; i < k; ++i) wnames.push_back("_w" + std::to_string(i));
  blocks.push_back({"_image", wnames, false});
  RingPtr gring = make_ring(Z.ring->field, blocks);
  std::vector<MultiPoly> ggens;
  for (const auto& g : Z.gens) ggens.push_back(mp_transport(g, gring));
  for (int i = 0; i < k; ++i)
    ggens.push_back(mp_sub(mp_var(gring, gring->var_index(wnames[i])),
                           mp_transport(decomp.movable[i], gring)));
  IdealHandle G = make_ideal(gring, ggens);
  std::vector<int> source_blocks;
  for (int b = 0; b + 1 < gring->nblocks(); ++b) source_blocks.push_back(b);
  auto im = eliminate(G, source_blocks);
  // move to the bare section-coordinate ring for dimension counting
  RingPtr wring = make_ring(Z.ring->field, {{"_image", wnames, true}});
  for (const auto& g : im) rep.image_ideal.push_back(mp_transport(g, wring));
  IdealHandle IW = make_ideal(wring, rep.image_ideal);
  rep.image_dim = (rep.image_ideal.empty() ? k : ideal_dimension(IW)) - 1;

  IdealHandle IZ = make_ideal(Z.ring, Z.gens);
  int nproj = 0;
  for (const auto& b : Z.ring->blocks)
    if (b.projective) ++nproj;
  int zdim = ideal_dimension(IZ) - nproj;
  if (rep.image_dim == zdim) {
    rep.trivial = true;
    rep.v_status = "trivial";
    return rep;
  }

  // projected-image route: sections are pure powers of the variables of a
  // single projective block, so the map factors the block projection
  int block = -1;
  bool pure = true;
  for (const auto& s : decomp.movable) {
    if (s.t.size() != 1) {
      pure = false;
      break;
    }
    const auto& e = s.t.begin()->first;
    int var = -1;
    for (int i = 0; i < Z.ring->nvars() && pure; ++i)
      if (e[i] > 0) {
        if (var >= 0) pure = false;
        var = i;
      }
    if (!pure || var < 0) {
      pure = false;
      break;
    }
    int b = Z.ring->block_of[var];
    if (block < 0) block = b;
    if (b != block || !Z.ring->blocks[b].projective) {
      pure = false;
      break;
    }
  }
  if (!pure || block < 0) {
    rep.v_status = "function-field-level";
    rep.notes.push_back(
        "sections are not coordinate powers of a single block; V reported at "
        "function-field level");
    return rep;
  }
  // V = closure of the image of X under the projection to the block
  IdealHandle IX = make_ideal(X.ring, X.gens);
  std::vector<int> drop;
  for (int b = 0; b < X.ring->nblocks(); ++b)
    if (b != block) drop.push_back(b);
  auto velim = eliminate(IX, drop);
  RingPtr vring =
      make_ring(X.ring->field, {X.ring->blocks[block]});
  for (const auto& g : velim) rep.v_gens.push_back(mp_transport(g, vring));
  rep.v_status = "projected-image";

  // ----- parametrised generic-fibre checks -----
  try {
    if (rep.v_gens.size() != 1)
      throw std::runtime_error("V is not a hypersurface in its block");
    for (int lv : X.ring->field.levels)
      if (lv != 0)
        throw std::runtime_error("fibre checks require a level-zero source");
    MultiPoly VG = clear_denominators(rep.v_gens[0]);
    const TowerField& K = X.ring->field;
    // a raised parameter appearing linearly (degree one, polynomially) in
    // the V equation
    int sigma = -1;
    MultiPoly A = mp_zero(vring);
    std::vector<int> raised_bc =
        raised_indices(X.ring->field.levels, Z.ring->field.levels);
    for (int s : raised_bc) {
      bool linear = true, appears = false;
      for (const auto& [e, c] : VG.t) {
        if (c.den.uses(s)) linear = false;
        int ds = c.num.degree_in(s);
        if (ds > 1) linear = false;
        if (ds == 1) appears = true;
      }
      if (!linear || !appears) continue;
      sigma = s;
      A = mp_symbol_derivative(VG, s);
      break;
    }
    if (sigma < 0)
      throw std::runtime_error("no raised parameter is linear in V");
    MultiPoly B = mp_sub(VG, mp_scale(A, te_param(K.p, K.levels, sigma)));
    // new field: remaining old parameters, then fresh ones per block var
    const Block& vb = X.ring->blocks[block];
    int chosen_local = static_cast<int>(vb.vars.size()) - 1;
    std::vector<std::string> nparams;
    std::vector<int> old_to_new(K.nparams(), -1);
    for (int i = 0; i < K.nparams(); ++i) {
      if (i == sigma) continue;
      old_to_new[i] = static_cast<int>(nparams.size());
      nparams.push_back(K.params[i]);
    }
    std::vector<int> var_to_new(vb.vars.size(), -1);
    for (int v = 0; v < static_cast<int>(vb.vars.size()); ++v) {
      if (v == chosen_local) continue;
      var_to_new[v] = static_cast<int>(nparams.size());
      nparams.push_back("_a_" + vb.vars[v]);
    }
    TowerField NF{K.p, nparams, std::vector<int>(nparams.size(), 0)};
    std::vector<TowerElement> pimg(K.nparams(), te_zero(NF.p, NF.levels));
    for (int i = 0; i < K.nparams(); ++i)
      if (old_to_new[i] >= 0)
        pimg[i] = te_symbol(NF.p, NF.levels, old_to_new[i]);
    std::vector<TowerElement> vimg(vring->nvars(), te_zero(NF.p, NF.levels));
    for (int v = 0; v < static_cast<int>(vb.vars.size()); ++v)
      vimg[v] = (v == chosen_local)
                    ? te_const(NF.p, NF.levels, 1)
                    : te_symbol(NF.p, NF.levels, var_to_new[v]);
    TowerElement evA = eval_to_field(A, NF, pimg, vimg);
    TowerElement evB = eval_to_field(B, NF, pimg, vimg);
    if (evA.is_zero())
      throw std::runtime_error("degenerate chart for the fibre checks");
    TowerElement image_sigma = te_neg(te_div(evB, evA));
    pimg[sigma] = image_sigma;
    // fibre scheme: the remaining blocks over the new field
    std::vector<Block> fblocks;
    for (int b = 0; b < X.ring->nblocks(); ++b)
      if (b != block) fblocks.push_back(X.ring->blocks[b]);
    RingPtr fring = make_ring(NF, fblocks);
    std::vector<MultiPoly> fgens;
    for (const auto& g : X.gens) {
      MultiPoly h = mp_zero(fring);
      for (const auto& [e, c] : g.t) {
        // evaluate the coefficient and the projected-block variables
        std::vector<int> fe(fring->nvars(), 0);
        MultiPoly cpoly = mp_const(X.ring, c);
        TowerElement scalar =
            eval_to_field(cpoly, NF, pimg,
                          std::vector<TowerElement>(
                              X.ring->nvars(), te_zero(NF.p, NF.levels)));
        for (int i = 0; i < X.ring->nvars(); ++i) {
          if (e[i] == 0) continue;
          if (X.ring->block_of[i] == block) {
            int local = -1;
            for (int v = 0; v < static_cast<int>(vb.vars.size()); ++v)
              if (vb.vars[v] == X.ring->vars[i]) local = v;
            scalar = te_mul(scalar, te_pow(vimg[local],
                                           static_cast<uint64_t>(e[i])));
          } else {
            fe[fring->var_index(X.ring->vars[i])] = e[i];
          }
        }
        if (scalar.is_zero()) continue;
        h = mp_add(h, mp_monomial(fring, fe, scalar));
      }
      if (!h.is_zero()) fgens.push_back(std::move(h));
    }
    SchemeDesc F;
    F.ring = fring;
    F.gens = fgens;
    F.complete_intersection = true;
    validate_scheme(F);
    rep.checks_run = true;
    ReduceResult r0 = reduce_structure(F);
    rep.fibre_reduced_over_v = r0.certified && !r0.changed;
    // K(W): raise the surviving raised parameters; the eliminated one
    // contributes the levels of the p-th root of its image
    std::vector<int> wl(NF.nparams(), 0);
    for (int s : raised_bc) {
      if (s == sigma) {
        TowerElement rho = te_pth_root(image_sigma);
        for (size_t i = 0; i < wl.size(); ++i)
          wl[i] = std::max(wl[i], rho.levels[i]);
      } else if (old_to_new[s] >= 0) {
        wl[old_to_new[s]] = std::max(wl[old_to_new[s]], 1);
      }
    }
    BaseChangeSpec to_w{std::vector<int>(NF.nparams(), 0), wl};
    ReduceResult rw = reduce_structure(base_change(F, to_w));
    rep.movable_over_w_zero = rw.certified && !rw.changed;
    BaseChangeSpec to_root{std::vector<int>(NF.nparams(), 0),
                           std::vector<int>(NF.nparams(), 1)};
    ReduceResult rr = reduce_structure(base_change(F, to_root));
    rep.nonreduced_over_v_root = rr.changed;
  } catch (const std::exception& ex) {
    rep.notes.push_back(std::string("fibre checks skipped: ") + ex.what());
  }
  return rep;
}

// ===== tower inequality =================================================

namespace {

// det-Q class (movable class + content class) for the base change of the
// given scheme to the target levels
std::vector<int> q_class(const SchemeDesc& S, const std::vector<int>& target,
                         const SchemeDesc& frame) {
  BaseChangeSpec bc{S.ring->field.levels, target};
  ReduceResult rr = reduce_structure(base_change(S, bc));
  ConormalData cd = omega_presentation(rr.scheme, S, bc);
  const SchemeDesc& Z = cd.Z;
  IdealHandle IZ = make_ideal(Z.ring, Z.gens);
  for (const auto& choice : all_chart_choices(Z)) {
    Chart ch = make_chart(Z, choice);
    if (ideal_is_trivial(ch.ideal)) continue;
    ChartMovable cm = chart_movable(cd, Z, ch);
    std::vector<MultiPoly> basis = echelon_sections(cm.sections, IZ);
    std::vector<int> cls(frame.ring->nblocks(), 0);
    if (!basis.empty()) {
      auto md = proj_multidegree(basis[0]);
      if (md) cls = class_add(cls, class_on(frame, *md));
    }
    if (!cm.content.is_constant()) {
      MultiPoly hc = mp_homogenize(cm.content, Z, ch.chosen);
      auto cc = proj_multidegree(hc);
      if (cc) cls = class_add(cls, class_on(frame, *cc));
    }
    return cls;
  }
  throw std::invalid_argument("tower inequality: empty scheme");
}

}  // namespace

TowerInequalityReport tower_inequality_check(const SchemeDesc& X,
                                             const BaseChangeSpec& bc_T,
                                             const BaseChangeSpec& bc_Tp) {
  bc_T.validate();
  bc_Tp.validate();
  for (size_t i = 0; i < bc_T.target_levels.size(); ++i)
    if (bc_Tp.target_levels[i] > bc_T.target_levels[i])
      throw std::invalid_argument("tower inequality: T' not inside T");
  TowerInequalityReport rep;
  rep.class_t_s = q_class(X, bc_T.target_levels, X);
  rep.class_tp_s = q_class(X, bc_Tp.target_levels, X);
  // Z' as the new source for the top step
  BaseChangeSpec to_tp{X.ring->field.levels, bc_Tp.target_levels};
  ReduceResult zp = reduce_structure(base_change(X, to_tp));
  rep.class_t_tp = q_class(zp.scheme, bc_T.target_levels, X);
  rep.difference = rep.class_t_s;
  for (size_t i = 0; i < rep.difference.size(); ++i)
    rep.difference[i] -= rep.class_t_tp[i] + rep.class_tp_s[i];
  rep.pass = true;
  for (int x : rep.difference)
    if (x < 0) rep.pass = false;
  return rep;
}

// ===== orchestration ====================================================

AnalysisResult analyze(const SchemeDesc& X, const BaseChangeSpec& bc,
                       int degree_bound) {
  validate_scheme(X);
  bc.validate();
  AnalysisResult out;
  out.X = X;
  out.bc = bc;
  out.reduction = reduce_structure(base_change(X, bc), degree_bound);
  out.closure = pth_root_closure(out.reduction.scheme, degree_bound);
  out.conormal = omega_presentation(out.reduction.scheme, X, bc);
  out.decomposition = decompose(out.conormal, out.closure.scheme);
  out.essential = essential_part(out.reduction.scheme, X, bc);
  if (out.closure.scheme.complete_intersection)
    out.cbf = verify_cbf(out.decomposition, X, out.closure.scheme);
  out.fib = fibration(out.decomposition, X, out.reduction.scheme);
  out.all_certified = out.reduction.certified &&
                      out.closure.scheme.normal_certified &&
                      out.decomposition.fixed_certified &&
                      out.decomposition.pluecker_consistent && out.cbf.pass;
  return out;
}

}  // namespace insep
