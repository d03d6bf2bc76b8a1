// property_suite.h — per-instance invariant checks over the seeded
// corpus, shared by the property test suite and the acceptance runner.
// The reporter callback receives (ok, label) for every individual check.
#pragma once

#include <functional>
#include <string>

#include "insep/input.hpp"
#include "insep/pipeline.hpp"

namespace property_suite {

using namespace insep;
using Reporter = std::function<void(bool, const std::string&)>;

// every kernel generator must pair to zero with the relation matrix mod I
inline void check_dual_pairing(const SchemeDesc& Z,
                               const std::vector<int>& raised,
                               const Reporter& report) {
  for (const auto& choice : all_chart_choices(Z)) {
    Chart ch = make_chart(Z, choice);
    if (ideal_is_trivial(ch.ideal)) continue;
    std::vector<MultiPoly> cgens;
    for (const auto& g : Z.gens) {
      MultiPoly h = mp_dehomogenize(g, ch.ring);
      if (!h.is_zero()) cgens.push_back(h);
    }
    auto rows = conormal_rows(Z, raised, ch.ring, cgens);
    std::vector<std::vector<MultiPoly>> M;  // M[i][j] = d(g_j)/d(u_i)
    for (const auto& r : rows) M.push_back(r.c);
    std::vector<std::vector<MultiPoly>> cols;
    for (size_t j = 0; j < cgens.size(); ++j) {
      std::vector<MultiPoly> col;
      for (size_t i = 0; i < raised.size(); ++i) col.push_back(M[i][j]);
      cols.push_back(std::move(col));
    }
    auto kernel = module_kernel(cols, ch.ideal.gens);
    const GBasis& gb = ch.ideal.gb();
    for (const auto& v : kernel)
      for (size_t j = 0; j < cgens.size(); ++j) {
        MultiPoly dot = mp_zero(ch.ring);
        for (size_t i = 0; i < raised.size(); ++i)
          dot = mp_add(dot, mp_mul(v.c[i], M[i][j]));
        report(normal_form(dot, gb.polys, gb.ord).is_zero(),
               "dual pairing vanishes");
      }
    return;  // the primary chart suffices per instance
  }
}

inline void check_saturation_idempotence(const SchemeDesc& Z,
                                         const Reporter& report) {
  for (const auto& choice : all_chart_choices(Z)) {
    Chart ch = make_chart(Z, choice);
    if (ideal_is_trivial(ch.ideal)) continue;
    // saturate at a generator-leading variable section
    for (int v = 0; v < ch.ring->nvars(); ++v) {
      MultiPoly f = mp_var(ch.ring, v);
      IdealHandle s1 = saturate(ch.ideal, f);
      IdealHandle s2 = saturate(s1, f);
      const GBasis& g1 = s1.gb();
      const GBasis& g2 = s2.gb();
      for (const auto& h : g2.polys)
        report(normal_form(h, g1.polys, g1.ord).is_zero(),
               "saturation idempotent (inclusion)");
      for (const auto& h : g1.polys)
        report(normal_form(h, g2.polys, g2.ord).is_zero(),
               "saturation idempotent (equality)");
      break;
    }
    return;
  }
}

inline std::vector<int> raised_of(const BaseChangeSpec& bc) {
  std::vector<int> out;
  for (size_t i = 0; i < bc.source_levels.size(); ++i)
    if (bc.target_levels[i] > bc.source_levels[i])
      out.push_back(static_cast<int>(i));
  return out;
}

inline void run_instance(const std::string& text, const Reporter& report) {
  ParsedInput in = parse_input(text);
  AnalysisResult res = analyze(in.scheme, in.bc);

  // (a) movable part zero <=> the base change was already reduced
  report(res.decomposition.movable_zero == !res.reduction.changed,
         "movable vanishes iff base change reduced");

  // (b) degree criterion: the base change loses reducedness exactly when
  // the normalisation drops inseparable degree below the tower degree
  int insep_log = degree_insep_log(res.closure.scheme, in.scheme);
  report(res.reduction.changed == (insep_log < in.bc.degree_log()),
         "inseparable-degree criterion");

  // (c) on certified instances the fixed part vanishes exactly when the
  // reduced base change is regular in codimension one
  if (res.closure.status == "certified-normal" &&
      res.decomposition.fixed_certified) {
    R1Result r1 = r1_test(res.reduction.scheme);
    if (r1.certified)
      report(res.decomposition.fixed.empty() == r1.primes.empty(),
             "fixed part vanishes iff regular in codimension one");
  }

  // (d) dual pairing and saturation idempotence on the reduced base change
  check_dual_pairing(res.reduction.scheme, raised_of(in.bc), report);
  check_saturation_idempotence(res.reduction.scheme, report);

  // (e) tower inequality on a nested pair (drop the last raised parameter)
  std::vector<int> raised = raised_of(in.bc);
  if (raised.size() >= 2) {
    BaseChangeSpec bc_tp = in.bc;
    bc_tp.target_levels[raised.back()] -= 1;
    TowerInequalityReport ti = tower_inequality_check(in.scheme, in.bc, bc_tp);
    report(ti.pass, "tower inequality effective");
  }

  // (f) canonical class identity on certified instances
  if (res.all_certified)
    report(res.cbf.pass, "canonical bundle formula (certified run)");
  if (res.reduction.certified && res.closure.scheme.normal_certified &&
      res.decomposition.fixed_certified &&
      res.closure.scheme.complete_intersection)
    report(res.cbf.pass, "canonical bundle formula (certified stages)");
}

}  // namespace property_suite
