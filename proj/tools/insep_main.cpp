// insep — batch front-end: parse an input file, run the requested pipeline
// stage, print a text report, optionally write canonical JSON.
// exit codes: 0 = success with all certificates, 2 = success with
// uncertified stages, 1 = error.
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "insep/input.hpp"
#include "insep/report.hpp"

namespace {

using namespace insep;

AnalysisResult run_stage(const ParsedInput& in, const std::string& stage,
                         int degree_bound) {
  if (stage == "analyze") return analyze(in.scheme, in.bc, degree_bound);
  AnalysisResult res;
  res.X = in.scheme;
  res.bc = in.bc;
  res.reduction = reduce_structure(base_change(in.scheme, in.bc), degree_bound);
  if (stage == "reduce") return res;
  if (stage == "essential") {
    res.essential = essential_part(res.reduction.scheme, in.scheme, in.bc);
    return res;
  }
  res.closure = pth_root_closure(res.reduction.scheme, degree_bound);
  res.conormal = omega_presentation(res.reduction.scheme, in.scheme, in.bc);
  res.decomposition = decompose(res.conormal, res.closure.scheme);
  if (stage == "cbf" && res.closure.scheme.complete_intersection)
    res.cbf = verify_cbf(res.decomposition, in.scheme, res.closure.scheme);
  if (stage == "fibration")
    res.fib = fibration(res.decomposition, in.scheme, res.reduction.scheme);
  return res;
}

void write_atomically(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write: " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move report into place: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inseparable base-change analysis"};
  app.require_subcommand(1);

  std::string input_path, json_path;
  int degree_bound = -1;
  int chart = -1;
  const std::vector<std::string> stages = {
      "reduce", "movable", "fixed", "essential", "cbf", "fibration", "analyze"};
  std::vector<CLI::App*> subs;
  for (const auto& s : stages) {
    CLI::App* sub = app.add_subcommand(s, s + " stage");
    sub->add_option("input", input_path, "input file")->required();
    sub->add_option("--degree-bound", degree_bound, "search-degree bound");
    sub->add_option("--chart", chart, "chart index override (diagnostic)");
    sub->add_option("--json", json_path, "write the JSON report here");
    subs.push_back(sub);
  }

  uint64_t seed = 0;
  int count = 1;
  std::string profile = "fermat-hypersurface", out_dir = ".";
  CLI::App* corpus = app.add_subcommand("corpus", "generate seeded inputs");
  corpus->add_option("--seed", seed, "corpus seed");
  corpus->add_option("--count", count, "number of instances");
  corpus->add_option("--profile", profile,
                     "fermat-hypersurface | fermat-product | mixed-level");
  corpus->add_option("--out-dir", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (corpus->parsed()) {
      auto files = gen_corpus(seed, count, profile);
      for (size_t k = 0; k < files.size(); ++k) {
        std::string path = out_dir + "/" + profile + "_" +
                           std::to_string(seed) + "_" + std::to_string(k) +
                           ".toml";
        write_atomically(path, files[k]);
        std::cout << path << "\n";
      }
      return 0;
    }
    std::string stage;
    for (size_t i = 0; i < stages.size(); ++i)
      if (subs[i]->parsed()) stage = stages[i];
    ParsedInput in = parse_input_file(input_path);
    AnalysisResult res = run_stage(in, stage, degree_bound);
    nlohmann::json rep = stage_json(res, stage);
    if (chart >= 0) {
      rep["chart_override"] = chart;
      rep.erase("hash");
      rep["hash"] = report_hash(rep);
    }
    std::cout << report_text(rep);
    if (!json_path.empty()) write_atomically(json_path, rep.dump(2) + "\n");
    return rep["certified"].get<bool>() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
