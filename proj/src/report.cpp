// report.cpp — canonical JSON serialisation, text rendering, content hash.
#include "insep/report.hpp"

#include <sstream>

namespace insep {

namespace {

using nlohmann::json;

json jclass(const std::vector<int>& v) {
  json a = json::array();
  for (int x : v) a.push_back(x);
  return a;
}

json jstrings(const std::vector<std::string>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

json jpolys(const std::vector<MultiPoly>& v) {
  json a = json::array();
  for (const auto& f : v) a.push_back(mp_to_string(f));
  return a;
}

json input_json(const AnalysisResult& res) {
  const TowerField& K = res.X.ring->field;
  json in;
  in["p"] = K.p;
  in["params"] = jstrings(K.params);
  in["levels"] = jclass(K.levels);
  json blocks = json::array();
  for (const auto& b : res.X.ring->blocks) {
    json jb;
    jb["name"] = b.name;
    jb["variables"] = jstrings(b.vars);
    blocks.push_back(jb);
  }
  in["blocks"] = blocks;
  in["generators"] = jpolys(res.X.gens);
  in["target_levels"] = jclass(res.bc.target_levels);
  return in;
}

json reduction_json(const AnalysisResult& res) {
  json j;
  j["changed"] = res.reduction.changed;
  j["certified"] = res.reduction.certified;
  j["sweep_degree_bound"] = res.reduction.sweep_degree_bound;
  j["root_drops"] = jclass(res.reduction.root_drops);
  j["generators"] = jpolys(res.reduction.scheme.gens);
  return j;
}

json closure_json(const AnalysisResult& res) {
  json j;
  j["status"] = res.closure.status;
  j["field_extended"] = res.closure.field_extended;
  j["new_elements"] = jstrings(res.closure.new_elements);
  j["levels"] = jclass(res.closure.scheme.ring->field.levels);
  return j;
}

json decomposition_json(const AnalysisResult& res) {
  const LinearSystemData& d = res.decomposition;
  json j;
  json fixed = json::array();
  for (const auto& e : d.fixed) {
    json f;
    f["prime"] = mp_to_string(e.prime);
    f["multiplicity"] = e.multiplicity;
    fixed.push_back(f);
  }
  j["fixed"] = fixed;
  j["movable"] = jpolys(d.movable);
  j["movable_class"] = jclass(d.movable_class);
  j["fixed_class"] = jclass(d.fixed_class);
  j["total_class"] = jclass(d.total_class);
  j["movable_zero"] = d.movable_zero;
  j["fixed_certified"] = d.fixed_certified;
  j["pluecker_consistent"] = d.pluecker_consistent;
  j["notes"] = jstrings(d.notes);
  return j;
}

json essential_json(const AnalysisResult& res) {
  const EssentialPartResult& e = res.essential;
  json j;
  j["degree_log"] = e.degree_log;
  j["subtower"] = e.subtower;
  j["subfield_levels"] = jclass(e.subfield_levels);
  json gens = json::array();
  for (const auto& g : e.subfield_generators)
    gens.push_back(te_to_string(g, res.reduction.scheme.ring->field));
  j["subfield_generators"] = gens;
  j["reduced_check"] = e.reduced_check;
  j["h0_check"] = e.h0_check;
  j["notes"] = jstrings(e.notes);
  return j;
}

json cbf_json(const AnalysisResult& res) {
  json j;
  j["class_kx"] = jclass(res.cbf.class_kx);
  j["class_ky"] = jclass(res.cbf.class_ky);
  j["class_decomp"] = jclass(res.cbf.class_decomp);
  j["pass"] = res.cbf.pass;
  return j;
}

json fibration_json(const AnalysisResult& res) {
  const FibrationReport& f = res.fib;
  json j;
  j["v_status"] = f.v_status;
  j["trivial"] = f.trivial;
  j["no_fibration"] = f.no_fibration;
  j["image_dim"] = f.image_dim;
  j["v_gens"] = jpolys(f.v_gens);
  j["checks_run"] = f.checks_run;
  j["fibre_reduced_over_v"] = f.fibre_reduced_over_v;
  j["movable_over_w_zero"] = f.movable_over_w_zero;
  j["nonreduced_over_v_root"] = f.nonreduced_over_v_root;
  j["notes"] = jstrings(f.notes);
  return j;
}

bool stage_certified(const AnalysisResult& res, const std::string& stage) {
  if (stage == "reduce") return res.reduction.certified;
  if (stage == "movable")
    return res.reduction.certified && res.decomposition.pluecker_consistent;
  if (stage == "fixed") return res.decomposition.fixed_certified;
  if (stage == "essential")
    return res.essential.reduced_check && res.essential.h0_check;
  if (stage == "cbf")
    return res.cbf.pass && res.decomposition.fixed_certified;
  if (stage == "fibration") {
    if (res.fib.trivial || res.fib.no_fibration) return true;
    return res.fib.checks_run && res.fib.fibre_reduced_over_v &&
           res.fib.movable_over_w_zero && res.fib.nonreduced_over_v_root;
  }
  return res.all_certified;
}

void finalise(json& j) {
  j.erase("hash");
  j["hash"] = report_hash(j);
}

void render(const json& j, const std::string& key, int indent,
            std::ostream& o) {
  std::string pad(static_cast<size_t>(indent), ' ');
  if (j.is_object()) {
    if (!key.empty()) o << pad << key << ":\n";
    for (auto it = j.begin(); it != j.end(); ++it)
      render(it.value(), it.key(), key.empty() ? indent : indent + 2, o);
  } else {
    o << pad << key << " = " << j.dump() << "\n";
  }
}

}  // namespace

json report_json(const AnalysisResult& res) {
  json j;
  j["schema"] = 1;
  j["command"] = "analyze";
  j["input"] = input_json(res);
  j["reduction"] = reduction_json(res);
  j["closure"] = closure_json(res);
  j["conormal"] = {{"d", res.conormal.d}, {"rank_omega", res.conormal.rank_omega}};
  j["decomposition"] = decomposition_json(res);
  j["essential"] = essential_json(res);
  j["cbf"] = cbf_json(res);
  j["fibration"] = fibration_json(res);
  j["certified"] = res.all_certified;
  finalise(j);
  return j;
}

json stage_json(const AnalysisResult& res, const std::string& stage) {
  if (stage == "analyze") return report_json(res);
  json j;
  j["schema"] = 1;
  j["command"] = stage;
  j["input"] = input_json(res);
  if (stage == "reduce") {
    j["reduction"] = reduction_json(res);
  } else if (stage == "movable" || stage == "fixed") {
    j["reduction"] = reduction_json(res);
    j["closure"] = closure_json(res);
    j["decomposition"] = decomposition_json(res);
  } else if (stage == "essential") {
    j["reduction"] = reduction_json(res);
    j["essential"] = essential_json(res);
  } else if (stage == "cbf") {
    j["decomposition"] = decomposition_json(res);
    j["cbf"] = cbf_json(res);
  } else if (stage == "fibration") {
    j["decomposition"] = decomposition_json(res);
    j["fibration"] = fibration_json(res);
  } else {
    throw std::invalid_argument("unknown report stage: " + stage);
  }
  j["certified"] = stage_certified(res, stage);
  finalise(j);
  return j;
}

std::string report_text(const json& j) {
  std::ostringstream o;
  render(j, "", 0, o);
  return o.str();
}

std::string report_hash(const json& j) {
  json copy = j;
  if (copy.is_object() && copy.contains("hash")) copy.erase("hash");
  std::string s = copy.dump();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream o;
  o << std::hex;
  o.width(16);
  o.fill('0');
  o << h;
  return o.str();
}

}  // namespace insep
