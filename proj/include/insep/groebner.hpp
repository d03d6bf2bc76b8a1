// groebner.hpp — Groebner bases, elimination, saturation, quotients.
//
// Buchberger's algorithm over tower-field coefficients with the coprime
// leading-term criterion and degree-ordered pair selection; bases are
// auto-reduced and monic.  A basis can carry lift representations (each
// basis element written in the original generators); division tracks
// quotients, which together give ideal-membership certificates used for
// valuations along principal primes.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "insep/poly.hpp"

namespace insep {

struct DivisionResult {
  MultiPoly remainder;
  std::vector<MultiPoly> quotients;  // one per divisor
};

// multi-divisor division: f = sum quotients[i]*divisors[i] + remainder,
// no remainder term divisible by any leading term
DivisionResult mp_divide(const MultiPoly& f,
                         const std::vector<MultiPoly>& divisors,
                         const TermOrder& ord);
MultiPoly normal_form(const MultiPoly& f, const std::vector<MultiPoly>& basis,
                      const TermOrder& ord);

struct GBasis {
  TermOrder ord;
  std::vector<MultiPoly> polys;  // reduced, monic, sorted by leading term
  // when tracked: polys[i] = sum_j lifts[i][j] * gens[j]
  bool has_lifts = false;
  std::vector<std::vector<MultiPoly>> lifts;
};

GBasis buchberger(const std::vector<MultiPoly>& gens, const TermOrder& ord,
                  bool track_lifts = false);

struct IdealHandle {
  RingPtr ring;
  std::vector<MultiPoly> gens;

  const GBasis& gb(const TermOrder& ord) const;
  const GBasis& gb() const;  // standard order

 private:
  mutable std::map<std::string, GBasis> cache_;  // write-once per order
};

IdealHandle make_ideal(const RingPtr& r, std::vector<MultiPoly> gens);

bool ideal_member(const MultiPoly& f, const IdealHandle& I);
bool ideal_is_trivial(const IdealHandle& I);  // contains 1
bool ideal_is_zero(const IdealHandle& I);

// generators of I intersected with the subring omitting the given blocks
std::vector<MultiPoly> eliminate(const IdealHandle& I,
                                 const std::vector<int>& blocks);
// (I : f^infinity)
IdealHandle saturate(const IdealHandle& I, const MultiPoly& f);
// (I : f) for principal f, and (I : J) as the intersection over gens of J
IdealHandle ideal_quotient(const IdealHandle& I, const MultiPoly& f);
IdealHandle ideal_quotient(const IdealHandle& I,
                           const std::vector<MultiPoly>& J);
IdealHandle ideal_intersect(const IdealHandle& I, const IdealHandle& J);

// Krull dimension of R/I (affine; the cone dimension for homogeneous I).
// Returns -1 for the unit ideal.  Computed combinatorially from the
// leading-term ideal of a standard-order basis.
int ideal_dimension(const IdealHandle& I);

}  // namespace insep
