// modulealg.hpp — submodules of free modules over chart coordinate rings.
//
// Vectors carry one polynomial per component.  Module bases use a
// position-over-term order (lower component index more significant, the
// given term order inside a component), so kernels of presentation
// matrices fall out of a syzygy computation: generators are stacked with
// unit labels in trailing components, and basis elements whose leading
// block vanishes project to kernel generators.
#pragma once

#include <vector>

#include "insep/groebner.hpp"

namespace insep {

struct VecPoly {
  RingPtr ring;
  std::vector<MultiPoly> c;

  int ncomp() const { return static_cast<int>(c.size()); }
  bool is_zero() const;
};

VecPoly vp_zero(const RingPtr& r, int ncomp);
VecPoly vp_unit(const RingPtr& r, int ncomp, int comp);
VecPoly vp_add(const VecPoly& a, const VecPoly& b);
VecPoly vp_sub(const VecPoly& a, const VecPoly& b);
VecPoly vp_neg(const VecPoly& a);
VecPoly vp_mul_poly(const VecPoly& a, const MultiPoly& f);
bool vp_equal(const VecPoly& a, const VecPoly& b);

struct ModLead {
  int comp;
  std::vector<int> e;
  TowerElement coeff;
};
ModLead vp_lead(const VecPoly& a, const TermOrder& ord);

// Buchberger for submodules of R^ncomp under position-over-term order
std::vector<VecPoly> module_buchberger(const std::vector<VecPoly>& gens,
                                       const TermOrder& ord);
VecPoly vp_normal_form(const VecPoly& a, const std::vector<VecPoly>& basis,
                       const TermOrder& ord);
// membership of a in the submodule of O^n spanned by gens, O = R/I
bool module_member(const VecPoly& a, const std::vector<VecPoly>& gens,
                   const std::vector<MultiPoly>& ideal);

// kernel of the map O^ncols -> O^nrows given by the matrix rows, O = R/I;
// generators of the kernel as vectors with ncols components
std::vector<VecPoly> module_kernel(
    const std::vector<std::vector<MultiPoly>>& rows,
    const std::vector<MultiPoly>& ideal);

// a module presented by generators and relations over O = R/ideal
struct PresentedModule {
  RingPtr ring;
  std::vector<MultiPoly> ideal;
  int ngens = 0;
  std::vector<VecPoly> relations;  // each with ngens components
};

// Hom(M, O) as a submodule of O^{ngens}: vectors annihilating all relations
std::vector<VecPoly> dual_module(const PresentedModule& M);

// saturation (N : f^infinity) of the submodule N of O^n; computed by
// iterating the colon module (N : f) until it stabilises
std::vector<VecPoly> saturation_in(const std::vector<VecPoly>& N,
                                   const MultiPoly& f,
                                   const std::vector<MultiPoly>& ideal);
// the colon module (N : f) = { v : f v in N }
std::vector<VecPoly> module_colon(const std::vector<VecPoly>& N,
                                  const MultiPoly& f,
                                  const std::vector<MultiPoly>& ideal);

// all r x r minors of the matrix whose columns are the given vectors,
// reduced to normal form modulo the ideal; zero minors are dropped
std::vector<MultiPoly> minor_list(const std::vector<VecPoly>& cols, int r,
                                  const std::vector<MultiPoly>& ideal);

// content/primitive split of the minors: the content is the gcd of the
// normal-form representatives, the sections the primitive parts
struct MinorSections {
  MultiPoly content;
  std::vector<MultiPoly> sections;
};
MinorSections top_minor_sections(const std::vector<VecPoly>& cols, int r,
                                 const std::vector<MultiPoly>& ideal);

// order of vanishing of h along the principal prime (pi) on O = R/I;
// returns max_iter when h lies in every power (treated as infinity)
int valuation_at_prime(const MultiPoly& h, const MultiPoly& pi,
                       const IdealHandle& I, int max_iter = 64);

// length of (N' / N) at the principal prime (pi): the valuation of the
// r x r minor ideal of N minus that of N'
int length_at_prime(const std::vector<VecPoly>& N,
                    const std::vector<VecPoly>& Nprime, int r,
                    const MultiPoly& pi, const IdealHandle& I);

}  // namespace insep
