// pipeline.hpp — the end-to-end constructions: the conormal presentation
// of the reduced base change, the decomposition of the canonical linear
// system into fixed and movable parts, the essential subextension, the
// canonical-bundle-formula check, the induced fibration, and the tower
// inequality.
#pragma once

#include <string>
#include <vector>

#include "insep/geometry.hpp"
#include "insep/modulealg.hpp"

namespace insep {

// ===== conormal data ====================================================

struct ConormalData {
  SchemeDesc Z;                // certified reduced base change
  SchemeDesc X;                // source scheme over K
  BaseChangeSpec bc;
  std::vector<int> raised;     // parameter indices raised by bc
  int d = 0;                   // = raised.size()
  int rank_omega = 0;          // generic rank r of the relative differentials
};

// relation matrix rows (one per symbol index in `syms`, components per
// generator) of the scheme's generators restricted to the chart ring
std::vector<VecPoly> conormal_rows(const SchemeDesc& S,
                                   const std::vector<int>& syms,
                                   const RingPtr& chart_ring,
                                   const std::vector<MultiPoly>& chart_gens);

ConormalData omega_presentation(const SchemeDesc& Z, const SchemeDesc& X,
                                const BaseChangeSpec& bc);

// ===== linear system decomposition ======================================

struct FixedPartEntry {
  MultiPoly prime;    // homogeneous candidate equation
  int multiplicity;   // length of F'/F at the prime
};

struct LinearSystemData {
  std::vector<FixedPartEntry> fixed;
  std::vector<MultiPoly> movable;   // homogeneous sections, monic, sorted
  std::vector<int> movable_class;   // one entry per block of X's ambient
  std::vector<int> fixed_class;
  std::vector<int> total_class;     // movable + fixed
  bool movable_zero = false;        // class 0 (trivial system)
  bool fixed_certified = false;     // false = "uncertified" marker
  bool pluecker_consistent = false;
  std::vector<std::string> notes;
};

LinearSystemData decompose(const ConormalData& cd, const SchemeDesc& Y);

// ===== essential part ===================================================

struct EssentialPartResult {
  std::vector<std::vector<TowerElement>> foliation_basis;  // vectors in L^d
  int degree_log = 0;             // deg(T -> T') = p^degree_log
  bool subtower = false;
  std::vector<int> subfield_levels;        // L' when subtower
  std::vector<TowerElement> subfield_generators;
  bool reduced_check = false;     // Z' x L stays reduced
  bool h0_check = false;          // the analogous system over L' is zero
  std::vector<std::string> notes;
};

EssentialPartResult essential_part(const SchemeDesc& Z, const SchemeDesc& X,
                                   const BaseChangeSpec& bc);

// ===== canonical bundle formula =========================================

struct CbfReport {
  std::vector<int> class_kx;       // = class of the pullback to Y
  std::vector<int> class_ky;
  std::vector<int> class_decomp;   // (p-1) * (fixed + movable)
  bool pass = false;
};

CbfReport verify_cbf(const LinearSystemData& decomp, const SchemeDesc& X,
                     const SchemeDesc& Y);

// ===== fibration ========================================================

struct FibrationReport {
  bool trivial = false;            // image dimension = dimension of Z
  bool no_fibration = false;       // movable part zero: base change reduced
  std::vector<MultiPoly> image_ideal;  // I(W_Im) in the section coordinates
  int image_dim = -1;
  std::string v_status;  // "trivial" | "projected-image" | "function-field-level"
  std::vector<MultiPoly> v_gens;   // ideal of V over K (projected-image)
  // verification of the fibration properties on the parametrised generic
  // fibre (only attempted for projected-image V)
  bool checks_run = false;
  bool fibre_reduced_over_v = false;      // generic fibre over K(V) reduced
  bool movable_over_w_zero = false;       // stays reduced over K(W)
  bool nonreduced_over_v_root = false;    // not reduced over K(V)^{1/p}
  std::vector<std::string> notes;
};

FibrationReport fibration(const LinearSystemData& decomp, const SchemeDesc& X,
                          const SchemeDesc& Z);

// ===== tower inequality =================================================

struct TowerInequalityReport {
  std::vector<int> class_t_s;       // det-Q class for T/S
  std::vector<int> class_tp_s;      // for T'/S
  std::vector<int> class_t_tp;      // for T/T'
  std::vector<int> difference;      // T/S - T/T' - T'/S
  bool pass = false;                // difference effective
};

TowerInequalityReport tower_inequality_check(const SchemeDesc& X,
                                             const BaseChangeSpec& bc_T,
                                             const BaseChangeSpec& bc_Tp);

// ===== orchestration ====================================================

struct AnalysisResult {
  SchemeDesc X;
  BaseChangeSpec bc;
  ReduceResult reduction;
  ClosureResult closure;
  ConormalData conormal;
  LinearSystemData decomposition;
  EssentialPartResult essential;
  CbfReport cbf;
  FibrationReport fib;
  bool all_certified = false;
};

AnalysisResult analyze(const SchemeDesc& X, const BaseChangeSpec& bc,
                       int degree_bound = -1);

}  // namespace insep
