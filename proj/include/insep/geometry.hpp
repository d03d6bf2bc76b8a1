// geometry.hpp — scheme descriptors and the geometric primitives: base
// change along tower extensions, reduced structure with certificates,
// R1 testing via Jacobian minors, bounded p-th-root-closure
// normalisation, and inseparability degrees.
#pragma once

#include <string>
#include <vector>

#include "insep/groebner.hpp"

namespace insep {

// a closed subscheme of a product of projective spaces over a tower field
struct SchemeDesc {
  RingPtr ring;                  // projective blocks (+ affine adjunction block)
  std::vector<MultiPoly> gens;   // homogeneous per block
  // monomial denominators of adjoined normalisation elements; charts
  // saturate by their dehomogenisations
  std::vector<MultiPoly> chart_saturators;
  bool reduced_certified = false;
  bool r1_certified = false;
  bool normal_certified = false;
  bool complete_intersection = false;
  std::vector<std::string> notes;
};

// validity checks: homogeneity per block, common ring
void validate_scheme(const SchemeDesc& X);

// multidegree over the projective blocks (affine blocks report 0 and carry
// no homogeneity requirement); nullopt when inhomogeneous
std::optional<std::vector<int>> proj_multidegree(const MultiPoly& f);

struct BaseChangeSpec {
  std::vector<int> source_levels;
  std::vector<int> target_levels;  // each entry raised by at most one

  int degree_log() const;  // number of raised parameters
  void validate() const;
};

// ===== charts ==========================================================

struct Chart {
  RingPtr ring;              // chart coordinate ring (blocks sans chosen vars)
  IdealHandle ideal;
  std::vector<int> chosen;   // per projective block: scheme-ring var set to 1
  std::string label;         // e.g. "(z!=0)(w!=0)"
};

// chosen[b] = index inside block b's variable list (-1 for affine blocks)
Chart make_chart(const SchemeDesc& X, const std::vector<int>& chosen);
// all standard chart choices, lexicographic in block-local indices
std::vector<std::vector<int>> all_chart_choices(const SchemeDesc& X);
// chart polynomial -> homogeneous polynomial on X's ambient (per-block
// homogenisation by the chosen variables)
MultiPoly mp_homogenize(const MultiPoly& f, const SchemeDesc& X,
                        const std::vector<int>& chosen);
// name-based restriction to a chart ring: variables missing from the
// target (the chosen ones) are set to 1
MultiPoly mp_dehomogenize(const MultiPoly& f, const RingPtr& chart_ring);

// ===== operations ======================================================

// reinterpret X over the target field of bc (generators transported)
SchemeDesc base_change(const SchemeDesc& X, const BaseChangeSpec& bc);

struct ReduceResult {
  SchemeDesc scheme;       // Z
  bool changed = false;
  bool certified = false;
  int sweep_degree_bound = 0;    // bound used for the combination sweep
  std::vector<int> root_drops;   // per original generator: #roots extracted
};

// reduced structure: iterated generator p-th roots, per-generator
// squarefree parts (complete for hypersurfaces), and a degree-bounded
// Frobenius-kernel sweep for p-th powers among polynomial combinations
ReduceResult reduce_structure(const SchemeDesc& XL, int degree_bound = -1);

// squarefree part of a single polynomial over its tower field (complete:
// gcd against all ambient and tower-symbol derivatives plus p-th-root
// recursion); result is monic under the standard order
MultiPoly mp_squarefree_part(const MultiPoly& f);

// homogeneous h of degree <= bound with h^p in I but h not in I
// (Frobenius-kernel search per multidegree); empty when none exist
std::vector<MultiPoly> frobenius_radical_witnesses(const IdealHandle& I,
                                                   int bound);

// log_p of [K(Y) : K(X)] via the generic rank of the conormal
// presentation of Y over X (columns = symbols raised between the fields)
int degree_insep_log(const SchemeDesc& Y, const SchemeDesc& X);

// candidate codimension-one primes where the Jacobian criterion fails,
// as homogeneous equations; `all_principal` reports whether every
// candidate is principal (a single homogeneous equation)
struct R1Result {
  std::vector<MultiPoly> primes;  // homogeneous candidate equations
  bool certified = true;  // false when a chart was generically singular
};
R1Result r1_test(const SchemeDesc& Z);

struct ClosureResult {
  SchemeDesc scheme;  // Y
  std::vector<std::string> new_elements;  // printable descriptions
  std::string status;  // "certified-normal" or "closure-at-bound"
  bool field_extended = false;  // levels raised during closure
};

// bounded p-th-root closure: adjoins degree-zero fractions g/m whose
// p-th power already lies in the coordinate ring; a fraction whose p-th
// power is a field constant raises tower levels instead when the root
// stays inside the parameter tower
ClosureResult pth_root_closure(const SchemeDesc& Z, int degree_bound = -1);

// H0(X, O_X) = K check for positive-dimensional connected complete
// intersections in a product of projective spaces
bool h0_is_base_field(const SchemeDesc& X);

// multidegree class utilities (one entry per projective block)
std::vector<int> canonical_class(const SchemeDesc& X);  // K_X multidegree

}  // namespace insep
