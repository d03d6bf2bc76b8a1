// tower.hpp — exact arithmetic in parameter tower fields.
//
// The base field is K = F_p(t_1, ..., t_m).  A tower field at level vector
// (e_1, ..., e_m) is K_e = F_p(t_1^{1/p^{e_1}}, ..., t_m^{1/p^{e_m}}).  We
// represent elements as reduced fractions of polynomials in the symbols
// u_i = t_i^{1/p^{e_i}} with F_p coefficients, denominator normalised monic
// under graded reverse lexicographic order.  Raising level e_i by one is a
// degree-p purely inseparable extension; the p-th root of any element
// exists one level up because Frobenius is additive in characteristic p.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "insep/fp.hpp"

namespace insep {

// ---------------------------------------------------------------------
// PPoly: a polynomial in the tower symbols with F_p coefficients.
// Exponent vectors are dense (one slot per parameter symbol); the term
// map is kept free of zero coefficients.
// ---------------------------------------------------------------------
struct PPoly {
  uint32_t p = 2;
  int nsym = 0;
  std::map<std::vector<int>, uint32_t> t;  // exponent vector -> coeff in [1,p)

  bool is_zero() const { return t.empty(); }
  bool is_constant() const;
  int total_degree() const;
  int degree_in(int i) const;
  bool uses(int i) const { return degree_in(i) > 0; }
};

// grevlex comparison on exponent vectors: higher total degree wins; on a
// tie the last nonzero entry of a-b decides (negative means a is larger).
bool grevlex_less(const std::vector<int>& a, const std::vector<int>& b);

PPoly pp_zero(uint32_t p, int nsym);
PPoly pp_const(uint32_t p, int nsym, uint32_t c);
PPoly pp_monomial(uint32_t p, int nsym, const std::vector<int>& e, uint32_t c);
PPoly pp_add(const PPoly& a, const PPoly& b);
PPoly pp_sub(const PPoly& a, const PPoly& b);
PPoly pp_neg(const PPoly& a);
PPoly pp_mul(const PPoly& a, const PPoly& b);
PPoly pp_scale(const PPoly& a, uint32_t c);
PPoly pp_pow(const PPoly& a, uint64_t e);
bool pp_equal(const PPoly& a, const PPoly& b);
// leading term under grevlex
std::pair<std::vector<int>, uint32_t> pp_lead(const PPoly& a);
// divide making the grevlex-leading coefficient 1
PPoly pp_monic(const PPoly& a);
// exact division; throws std::logic_error when the division is not exact
PPoly pp_div_exact(const PPoly& a, const PPoly& b);
// multivariate gcd via primitive PRS recursion; result is monic
PPoly pp_gcd(const PPoly& a, const PPoly& b);
// formal derivative with respect to symbol i
PPoly pp_derivative(const PPoly& a, int i);
// p-th root if every exponent is divisible by p (F_p coefficients are
// their own p-th roots); nullopt otherwise
std::optional<PPoly> pp_pth_root(const PPoly& a);
std::string pp_to_string(const PPoly& a, const std::vector<std::string>& names);

// ---------------------------------------------------------------------
// TowerField / TowerElement
// ---------------------------------------------------------------------
struct TowerField {
  uint32_t p = 2;
  std::vector<std::string> params;  // t_1, ..., t_m
  std::vector<int> levels;          // e_1, ..., e_m (non-negative)

  int nparams() const { return static_cast<int>(params.size()); }
  // display name of symbol i, e.g. "s^(1/4)" at level 2
  std::string symbol_name(int i) const;
  bool operator==(const TowerField& o) const {
    return p == o.p && params == o.params && levels == o.levels;
  }
};

struct TowerElement {
  uint32_t p = 2;
  std::vector<int> levels;  // interpretation of the symbol exponents
  PPoly num, den;           // reduced; den monic under grevlex

  bool is_zero() const { return num.is_zero(); }
  bool is_one() const;
};

TowerElement te_zero(uint32_t p, const std::vector<int>& levels);
TowerElement te_const(uint32_t p, const std::vector<int>& levels, uint32_t c);
// the element t_i^{1/p^{levels[i]}} (the i-th symbol at the given levels)
TowerElement te_symbol(uint32_t p, const std::vector<int>& levels, int i);
// the base parameter t_i itself, expressed at the given levels
TowerElement te_param(uint32_t p, const std::vector<int>& levels, int i);
TowerElement te_make(uint32_t p, const std::vector<int>& levels,
                     const PPoly& num, const PPoly& den);

TowerElement te_add(const TowerElement& a, const TowerElement& b);
TowerElement te_sub(const TowerElement& a, const TowerElement& b);
TowerElement te_neg(const TowerElement& a);
TowerElement te_mul(const TowerElement& a, const TowerElement& b);
TowerElement te_div(const TowerElement& a, const TowerElement& b);
TowerElement te_inv(const TowerElement& a);
TowerElement te_pow(const TowerElement& a, uint64_t e);
bool te_equal(const TowerElement& a, const TowerElement& b);
// rewrite a at (componentwise larger or equal) target levels
TowerElement te_embed(const TowerElement& a, const std::vector<int>& levels);
// drop unnecessary levels (all symbol exponents divisible by p)
TowerElement te_normalize_levels(const TowerElement& a);
// p-th root; always exists in the tower closure.  The result carries the
// minimal levels containing the root.
TowerElement te_pth_root(const TowerElement& a);
// p-th root constrained to stay inside the given levels; nullopt when the
// root genuinely needs a higher level.
std::optional<TowerElement> te_pth_root_within(const TowerElement& a,
                                               const std::vector<int>& levels);
// formal derivative with respect to symbol i at the element's own levels
TowerElement te_derivative(const TowerElement& a, int i);
std::string te_to_string(const TowerElement& a, const TowerField& F);

// Write a as sum over residue monomials u^c (0 <= c_i < p^{levels_i - base_i})
// with coefficients in the base-level field.  Used for linear algebra over
// the subfield of p-th powers.
std::map<std::vector<int>, TowerElement> te_expand_over_base(
    const TowerElement& a, const std::vector<int>& base_levels);

// Echelonised kernel basis of a matrix over a tower field (rows =
// equations, columns = unknowns), and its rank.  All entries must share
// the characteristic; levels are joined internally via te arithmetic.
std::vector<std::vector<TowerElement>> te_matrix_kernel(
    const std::vector<std::vector<TowerElement>>& M, uint32_t p,
    const std::vector<int>& levels, size_t ncols);
int te_matrix_rank(const std::vector<std::vector<TowerElement>>& M,
                   size_t ncols);

// ---------------------------------------------------------------------
// FieldDerivation: sum a_i d/du_i acting on a tower field relative to a
// declared base (which it must kill).
// ---------------------------------------------------------------------
struct FieldDerivation {
  std::vector<int> base_levels;       // the sub-tower the derivation kills
  std::vector<TowerElement> coeffs;   // a_i, one per symbol of the top field

  TowerElement apply(const TowerElement& a) const;
};

// The constants subfield L' = { a in L : D a = 0 for all D }.
// L is the field at `levels`, the base at `base_levels` (height one:
// levels[i] - base_levels[i] in {0,1}).  Returns the echelonised list of
// basis monomial combinations spanning L' over the base, and, when L' is a
// sub-tower (spanned by the residue monomials of a subset of the raised
// symbols), the level vector of that sub-tower.
struct ConstantsResult {
  std::vector<TowerElement> generators;  // echelon basis of L' over base
  int log_degree = 0;                    // [L : L'] = p^log_degree
  bool is_subtower = false;
  std::vector<int> subtower_levels;      // valid when is_subtower
};

ConstantsResult constants_subfield(const TowerField& L,
                                   const std::vector<int>& base_levels,
                                   const std::vector<FieldDerivation>& ders);

}  // namespace insep
