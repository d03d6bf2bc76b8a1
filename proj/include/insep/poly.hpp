// poly.hpp — multivariate polynomials over tower fields.
//
// The ambient variable universe is partitioned into named blocks (one per
// projective factor; auxiliary affine blocks appear during elimination and
// normalisation).  Terms map dense exponent vectors to TowerElement
// coefficients; no zero coefficients are stored.  Block orders compare
// grevlex within blocks, most significant block first; the elimination
// variant pushes a designated block to the front.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>
#include <map>

#include "insep/tower.hpp"

namespace insep {

struct Block {
  std::string name;
  std::vector<std::string> vars;
  bool projective = true;  // auxiliary blocks (chart/saturation vars) are not
};

struct Ring {
  TowerField field;
  std::vector<Block> blocks;
  // derived lookup tables
  std::vector<std::string> vars;
  std::vector<int> block_of;

  int nvars() const { return static_cast<int>(vars.size()); }
  int nblocks() const { return static_cast<int>(blocks.size()); }
  int var_index(const std::string& name) const;  // -1 when absent
};

using RingPtr = std::shared_ptr<const Ring>;

RingPtr make_ring(const TowerField& field, const std::vector<Block>& blocks);
// same blocks, coefficient field moved to the given levels
RingPtr ring_with_levels(const RingPtr& r, const std::vector<int>& levels);

struct MultiPoly {
  RingPtr ring;
  std::map<std::vector<int>, TowerElement> t;

  bool is_zero() const { return t.empty(); }
  bool is_constant() const;
  int total_degree() const;
  int degree_in(int var) const;
  bool uses(int var) const { return degree_in(var) > 0; }
  // degree vector per block of a single exponent vector
  std::vector<int> block_degrees(const std::vector<int>& e) const;
  // multidegree when homogeneous per block; nullopt otherwise
  std::optional<std::vector<int>> multidegree() const;
};

MultiPoly mp_zero(const RingPtr& r);
MultiPoly mp_const(const RingPtr& r, const TowerElement& c);
MultiPoly mp_one(const RingPtr& r);
MultiPoly mp_var(const RingPtr& r, int var);
MultiPoly mp_monomial(const RingPtr& r, const std::vector<int>& e,
                      const TowerElement& c);
MultiPoly mp_add(const MultiPoly& a, const MultiPoly& b);
MultiPoly mp_sub(const MultiPoly& a, const MultiPoly& b);
MultiPoly mp_neg(const MultiPoly& a);
MultiPoly mp_mul(const MultiPoly& a, const MultiPoly& b);
MultiPoly mp_scale(const MultiPoly& a, const TowerElement& c);
MultiPoly mp_mul_monomial(const MultiPoly& a, const std::vector<int>& e,
                          const TowerElement& c);
MultiPoly mp_pow(const MultiPoly& a, uint64_t e);
bool mp_equal(const MultiPoly& a, const MultiPoly& b);
// proportional over the coefficient field (a = c*b for a nonzero constant c)
bool mp_proportional(const MultiPoly& a, const MultiPoly& b);
// derivative with respect to an ambient variable
MultiPoly mp_derivative(const MultiPoly& a, int var);
// derivative of the coefficients with respect to tower symbol i
MultiPoly mp_symbol_derivative(const MultiPoly& a, int sym);
// substitute variable -> 1 (used to pass to a standard chart); the result
// lives in the new ring (same blocks minus the variable)
MultiPoly mp_set_var_one(const MultiPoly& a, int var, const RingPtr& target);
// reinterpret in a ring with a compatible variable list (by name); missing
// variables in the source get exponent zero, and the coefficient field may
// differ only by levels
MultiPoly mp_transport(const MultiPoly& a, const RingPtr& target);
// substitute every base parameter by an element of a new coefficient field
// (all source coefficients must be at level zero); ambient vars unchanged
MultiPoly mp_substitute_params(const MultiPoly& a, const RingPtr& target,
                               const std::vector<TowerElement>& images);
// p-th power test: returns g with g^p = f when all exponents are divisible
// by p and all coefficient roots exist within `levels`; nullopt otherwise
std::optional<MultiPoly> mp_pth_root_within(const MultiPoly& a,
                                            const std::vector<int>& levels);
// content-free multivariate gcd over the coefficient field; monic result
MultiPoly mp_gcd(const MultiPoly& a, const MultiPoly& b);
MultiPoly mp_div_exact(const MultiPoly& a, const MultiPoly& b);
std::string mp_to_string(const MultiPoly& a);

// parse the plain text grammar, e.g. "s*x^4 + t^2*y^4 + z^4" or
// "s^(1/2)*x^2 - 3*y*z".  Identifiers resolve to ring variables first,
// then to field parameters; "s^(1/2)" denotes a tower symbol.
MultiPoly mp_parse(const RingPtr& r, const std::string& text);

// ---------------------------------------------------------------------
// term orders
// ---------------------------------------------------------------------
struct TermOrder {
  std::vector<int> block_seq;  // most significant block first

  static TermOrder standard(const Ring& r);
  // pushes the given block in front (its variables get eliminated)
  static TermOrder eliminating(const Ring& r, const std::vector<int>& blocks);
  // true when a < b for exponent vectors in ring r
  bool less(const Ring& r, const std::vector<int>& a,
            const std::vector<int>& b) const;
  std::string key() const;  // cache key
};

// leading exponent/coefficient under ord
std::pair<std::vector<int>, TowerElement> mp_lead(const MultiPoly& a,
                                                  const TermOrder& ord);
MultiPoly mp_monic(const MultiPoly& a, const TermOrder& ord);

}  // namespace insep
