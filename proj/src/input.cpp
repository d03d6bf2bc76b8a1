// input.cpp — sectioned key/value input files, their printer, and the
// deterministic corpus generator.
#include "insep/input.hpp"

#include "insep/geometry.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace insep {

namespace {

// ===== lexical layer ====================================================

struct Value {
  enum Kind { INT, STRING, INT_LIST, STRING_LIST } kind;
  long long i = 0;
  std::string s;
  std::vector<long long> il;
  std::vector<std::string> sl;
  int line = 0;
};

using SectionMap = std::map<std::string, std::map<std::string, Value>>;

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

void skip_ws(const std::string& s, size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

Value parse_value(const std::string& s, size_t& i, int line) {
  skip_ws(s, i);
  Value v;
  v.line = line;
  if (i >= s.size())
    throw ParseError("missing value", line, static_cast<int>(i) + 1);
  if (s[i] == '"') {
    size_t end = s.find('"', i + 1);
    if (end == std::string::npos)
      throw ParseError("unterminated string", line, static_cast<int>(i) + 1);
    v.kind = Value::STRING;
    v.s = s.substr(i + 1, end - i - 1);
    i = end + 1;
    return v;
  }
  if (s[i] == '[') {
    ++i;
    bool first = true;
    bool ints = true;
    for (;;) {
      skip_ws(s, i);
      if (i >= s.size())
        throw ParseError("unterminated list", line, static_cast<int>(i) + 1);
      if (s[i] == ']') {
        ++i;
        break;
      }
      if (!first) {
        if (s[i] != ',')
          throw ParseError("expected ','", line, static_cast<int>(i) + 1);
        ++i;
        skip_ws(s, i);
        if (i < s.size() && s[i] == ']') {  // trailing comma
          ++i;
          break;
        }
      }
      Value e = parse_value(s, i, line);
      if (e.kind == Value::STRING) {
        ints = false;
        v.sl.push_back(e.s);
      } else if (e.kind == Value::INT) {
        v.il.push_back(e.i);
        v.sl.push_back(std::to_string(e.i));
      } else {
        throw ParseError("nested lists are not supported", line,
                         static_cast<int>(i) + 1);
      }
      first = false;
    }
    v.kind = ints ? Value::INT_LIST : Value::STRING_LIST;
    return v;
  }
  if (s[i] == '-' || std::isdigit(static_cast<unsigned char>(s[i]))) {
    size_t start = i;
    if (s[i] == '-') ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start + (s[start] == '-' ? 1u : 0u))
      throw ParseError("malformed number", line, static_cast<int>(start) + 1);
    v.kind = Value::INT;
    v.i = std::stoll(s.substr(start, i - start));
    return v;
  }
  throw ParseError("unexpected character '" + std::string(1, s[i]) + "'", line,
                   static_cast<int>(i) + 1);
}

SectionMap parse_sections(const std::string& text) {
  SectionMap out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    size_t i = 0;
    skip_ws(raw, i);
    if (i >= raw.size() || raw[i] == '#') continue;
    if (raw[i] == '[') {
      size_t end = raw.find(']', i);
      if (end == std::string::npos)
        throw ParseError("unterminated section header", lineno,
                         static_cast<int>(i) + 1);
      section = raw.substr(i + 1, end - i - 1);
      i = end + 1;
      skip_ws(raw, i);
      if (i < raw.size() && raw[i] != '#')
        throw ParseError("trailing characters after section header", lineno,
                         static_cast<int>(i) + 1);
      continue;
    }
    if (section.empty())
      throw ParseError("key outside of any section", lineno,
                       static_cast<int>(i) + 1);
    size_t kstart = i;
    while (i < raw.size() && ident_char(raw[i])) ++i;
    if (i == kstart)
      throw ParseError("expected a key", lineno, static_cast<int>(i) + 1);
    std::string key = raw.substr(kstart, i - kstart);
    skip_ws(raw, i);
    if (i >= raw.size() || raw[i] != '=')
      throw ParseError("expected '=' after key '" + key + "'", lineno,
                       static_cast<int>(i) + 1);
    ++i;
    Value v = parse_value(raw, i, lineno);
    skip_ws(raw, i);
    if (i < raw.size() && raw[i] != '#')
      throw ParseError("trailing characters after value", lineno,
                       static_cast<int>(i) + 1);
    if (out[section].count(key))
      throw ParseError("duplicate key '" + key + "'", lineno, 1);
    out[section][key] = std::move(v);
  }
  return out;
}

const Value& require(const SectionMap& m, const std::string& sec,
                     const std::string& key, Value::Kind kind) {
  auto si = m.find(sec);
  if (si == m.end())
    throw std::invalid_argument("missing section [" + sec + "]");
  auto ki = si->second.find(key);
  if (ki == si->second.end())
    throw std::invalid_argument("missing key '" + key + "' in [" + sec + "]");
  const Value& v = ki->second;
  bool ok = v.kind == kind ||
            (kind == Value::STRING_LIST && v.kind == Value::INT_LIST &&
             v.il.empty()) ||
            (kind == Value::INT_LIST && v.kind == Value::STRING_LIST &&
             v.sl.empty());
  if (!ok)
    throw std::invalid_argument("key '" + key + "' in [" + sec +
                                "] has the wrong type");
  return v;
}

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

ParsedInput parse_input(const std::string& text) {
  SectionMap m = parse_sections(text);

  // [field]
  long long p = require(m, "field", "p", Value::INT).i;
  if (!is_prime(p))
    throw std::invalid_argument("field characteristic p = " +
                                std::to_string(p) + " is not prime");
  auto params = require(m, "field", "params", Value::STRING_LIST).sl;
  auto levels_ll = require(m, "field", "levels", Value::INT_LIST).il;
  if (levels_ll.size() != params.size())
    throw std::invalid_argument("levels and params have different lengths");
  std::vector<int> levels;
  for (long long l : levels_ll) {
    if (l < 0) throw std::invalid_argument("negative tower level");
    levels.push_back(static_cast<int>(l));
  }
  for (size_t i = 0; i < params.size(); ++i)
    for (size_t j = i + 1; j < params.size(); ++j)
      if (params[i] == params[j])
        throw std::invalid_argument("duplicate parameter '" + params[i] + "'");
  TowerField K{static_cast<uint32_t>(p), params, levels};

  // [ambient]
  auto block_names = require(m, "ambient", "blocks", Value::STRING_LIST).sl;
  if (block_names.empty())
    throw std::invalid_argument("ambient has no blocks");
  std::vector<Block> blocks;
  for (const auto& b : block_names) {
    auto vars = require(m, "ambient", "variables." + b, Value::STRING_LIST).sl;
    if (vars.empty())
      throw std::invalid_argument("block '" + b + "' has no variables");
    blocks.push_back(Block{b, vars, true});
  }
  RingPtr ring = make_ring(K, blocks);

  // [scheme]
  auto gens = require(m, "scheme", "generators", Value::STRING_LIST).sl;
  if (gens.empty())
    throw std::invalid_argument("empty generator list");
  ParsedInput out;
  out.scheme.ring = ring;
  for (const auto& g : gens) {
    MultiPoly f = mp_parse(ring, g);
    if (f.is_zero())
      throw std::invalid_argument("zero generator '" + g + "'");
    if (!f.multidegree())
      throw std::invalid_argument("generator '" + g +
                                  "' is not homogeneous per block");
    out.scheme.gens.push_back(std::move(f));
  }
  int dim_ambient = 0;
  for (const auto& b : blocks)
    dim_ambient += static_cast<int>(b.vars.size()) - 1;
  if (static_cast<int>(gens.size()) > dim_ambient)
    throw std::invalid_argument(
        "more generators than the ambient dimension: not a positive-"
        "dimensional complete intersection");
  out.scheme.complete_intersection = true;
  validate_scheme(out.scheme);

  // [base_change]
  auto raised = require(m, "base_change", "raised", Value::STRING_LIST).sl;
  out.bc.source_levels = levels;
  out.bc.target_levels = levels;
  for (const auto& name : raised) {
    auto it = std::find(params.begin(), params.end(), name);
    if (it == params.end())
      throw std::invalid_argument("raised name '" + name +
                                  "' is not a parameter");
    out.bc.target_levels[it - params.begin()] = levels[it - params.begin()] + 1;
  }
  auto bi = m.find("base_change");
  if (bi != m.end() && bi->second.count("levels")) {
    const auto& tl = require(m, "base_change", "levels", Value::INT_LIST).il;
    if (tl.size() != params.size())
      throw std::invalid_argument("base_change levels length mismatch");
    for (size_t i = 0; i < tl.size(); ++i) {
      long long raise = tl[i] - levels[i];
      if (raise < 0)
        throw std::invalid_argument("base change lowers a tower level");
      if (raise > 1)
        throw std::invalid_argument(
            "base change raises a level by more than one (height > 1)");
      out.bc.target_levels[i] = static_cast<int>(tl[i]);
    }
  }
  out.bc.validate();
  return out;
}

ParsedInput parse_input_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_input(buf.str());
}

std::string print_input(const SchemeDesc& X, const BaseChangeSpec& bc) {
  const TowerField& K = X.ring->field;
  std::ostringstream o;
  o << "[field]\n";
  o << "p = " << K.p << "\n";
  o << "params = [";
  for (size_t i = 0; i < K.params.size(); ++i)
    o << (i ? ", " : "") << '"' << K.params[i] << '"';
  o << "]\n";
  o << "levels = [";
  for (size_t i = 0; i < K.levels.size(); ++i)
    o << (i ? ", " : "") << K.levels[i];
  o << "]\n\n";

  o << "[ambient]\n";
  o << "blocks = [";
  for (int b = 0; b < X.ring->nblocks(); ++b)
    o << (b ? ", " : "") << '"' << X.ring->blocks[b].name << '"';
  o << "]\n";
  for (const auto& b : X.ring->blocks) {
    o << "variables." << b.name << " = [";
    for (size_t i = 0; i < b.vars.size(); ++i)
      o << (i ? ", " : "") << '"' << b.vars[i] << '"';
    o << "]\n";
  }
  o << "\n[scheme]\n";
  o << "generators = [";
  for (size_t i = 0; i < X.gens.size(); ++i)
    o << (i ? ", " : "") << '"' << mp_to_string(X.gens[i]) << '"';
  o << "]\n\n";

  o << "[base_change]\n";
  o << "raised = [";
  bool first = true;
  for (size_t i = 0; i < K.params.size(); ++i)
    if (bc.target_levels[i] > bc.source_levels[i]) {
      o << (first ? "" : ", ") << '"' << K.params[i] << '"';
      first = false;
    }
  o << "]\n";
  return o.str();
}

// ===== corpus ===========================================================

namespace {

// coefficient monomials in two parameters with their (s, t) exponents
const char* kCoeffs[] = {"1", "s", "t", "s*t", "s^2*t", "s*t^2"};
const int kCoeffExp[][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2}};

// Draw one diagonal generator c_0 x_0^q + ... with at least one
// non-constant coefficient.  When p divides q, two coefficients whose
// ratio is a p-th power make the generator contain a p-th power part over
// K itself (the scheme then acquires inseparable constants or fails to be
// integrally closed), so the coefficient classes modulo p-th powers are
// required to be pairwise distinct in that case.
std::string fermat_gen(std::mt19937_64& rng, uint32_t p,
                       const std::vector<std::string>& xs, int q) {
  const int n = static_cast<int>(xs.size());
  std::vector<int> pick;
  for (int tries = 0; static_cast<int>(pick.size()) < n; ++tries) {
    int c = static_cast<int>(rng() % 6);
    if (static_cast<int>(pick.size()) + 1 == n) {
      bool nontrivial = c != 0;
      for (int j : pick) nontrivial = nontrivial || j != 0;
      if (!nontrivial) c = (rng() % 2) ? 1 : 2;
    }
    if (q % static_cast<int>(p) == 0) {
      bool clash = false;
      for (int j : pick)
        clash = clash ||
                ((kCoeffExp[c][0] - kCoeffExp[j][0]) % static_cast<int>(p) ==
                     0 &&
                 (kCoeffExp[c][1] - kCoeffExp[j][1]) % static_cast<int>(p) ==
                     0);
      if (clash) continue;
    }
    pick.push_back(c);
  }
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (!out.empty()) out += " + ";
    if (pick[i] == 0)
      out += xs[i] + "^" + std::to_string(q);
    else
      out += std::string(kCoeffs[pick[i]]) + "*" + xs[i] + "^" +
             std::to_string(q);
  }
  return out;
}

std::string emit(uint32_t p, const std::vector<std::string>& params,
                 const std::vector<std::vector<std::string>>& blocks,
                 const std::vector<std::string>& gens,
                 const std::vector<std::string>& raised) {
  std::ostringstream o;
  o << "[field]\np = " << p << "\nparams = [";
  for (size_t i = 0; i < params.size(); ++i)
    o << (i ? ", " : "") << '"' << params[i] << '"';
  o << "]\nlevels = [";
  for (size_t i = 0; i < params.size(); ++i) o << (i ? ", " : "") << 0;
  o << "]\n\n[ambient]\nblocks = [";
  for (size_t b = 0; b < blocks.size(); ++b)
    o << (b ? ", " : "") << "\"b" << b << '"';
  o << "]\n";
  for (size_t b = 0; b < blocks.size(); ++b) {
    o << "variables.b" << b << " = [";
    for (size_t i = 0; i < blocks[b].size(); ++i)
      o << (i ? ", " : "") << '"' << blocks[b][i] << '"';
    o << "]\n";
  }
  o << "\n[scheme]\ngenerators = [";
  for (size_t i = 0; i < gens.size(); ++i)
    o << (i ? ", " : "") << '"' << gens[i] << '"';
  o << "]\n\n[base_change]\nraised = [";
  for (size_t i = 0; i < raised.size(); ++i)
    o << (i ? ", " : "") << '"' << raised[i] << '"';
  o << "]\n";
  return o.str();
}

// The whole construction assumes the input scheme is normal with
// H^0(X, O_X) = K; keep only candidates whose integral closedness the
// bounded p-th-root closure can certify.
bool candidate_ok(const std::string& text) {
  try {
    ParsedInput in = parse_input(text);
    ClosureResult cl = pth_root_closure(in.scheme);
    return cl.status == "certified-normal" && cl.new_elements.empty() &&
           !cl.field_extended;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

std::vector<std::string> gen_corpus(uint64_t seed, int count,
                                    const std::string& profile) {
  if (profile != "fermat-hypersurface" && profile != "fermat-product" &&
      profile != "mixed-level")
    throw std::invalid_argument("unknown corpus profile: " + profile);
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 60 * count)
      throw std::runtime_error("corpus generation: acceptance rate too low");
    uint32_t p = (rng() % 2) ? 2u : 3u;
    int m = (p == 2 && rng() % 2) ? 2 : 1;
    int q = 1;
    for (int i = 0; i < m; ++i) q *= static_cast<int>(p);
    // an exponent coprime to p gives reduced (often smooth) instances
    if (rng() % 4 == 0) q = (p == 2) ? 3 : 2;

    std::string cand;
    if (profile == "fermat-hypersurface") {
      std::vector<std::string> xs = {"x0", "x1", "x2"};
      std::string g = fermat_gen(rng, p, xs, q);
      cand = emit(p, {"s", "t"}, {xs}, {g}, {"s", "t"});
    } else if (profile == "fermat-product") {
      // product of two diagonal hypersurfaces over three parameters; the
      // second factor leans on r so the two factors depend on different
      // parameter directions (a product of normal varieties over an
      // imperfect field stays normal only when their inseparable twists
      // are independent)
      std::vector<std::string> xs = {"x", "y", "z"};
      std::vector<std::string> us = {"u", "v", "w"};
      int q2 = static_cast<int>(p);
      std::string g1 = fermat_gen(rng, p, xs, q);
      const char* d0[] = {"r", "r*s", "r*t"};
      const char* d1[] = {"s", "t", "s*t"};
      std::string g2 = std::string(d0[rng() % 3]) + "*u^" +
                       std::to_string(q2) + " + " + d1[rng() % 3] + "*v^" +
                       std::to_string(q2) + " + w^" + std::to_string(q2);
      cand = emit(p, {"r", "s", "t"}, {xs, us}, {g1, g2}, {"s", "t"});
    } else {  // mixed-level: partial towers over three parameters
      std::vector<std::string> xs = {"x", "y", "z"};
      std::vector<std::string> us = {"u", "v", "w"};
      std::string g1 = "s*x^" + std::to_string(q) + " + t*y^" +
                       std::to_string(q) + " + z^" + std::to_string(q);
      std::string g2 = "r*u^" + std::to_string(p) + " + s*v^" +
                       std::to_string(p) + " + w^" + std::to_string(p);
      std::vector<std::string> raised;
      switch (rng() % 3) {
        case 0: raised = {"s", "t"}; break;
        case 1: raised = {"s"}; break;
        default: raised = {"r", "s", "t"}; break;
      }
      cand = emit(p, {"r", "s", "t"}, {xs, us}, {g1, g2}, raised);
    }
    if (candidate_ok(cand)) out.push_back(std::move(cand));
  }
  return out;
}

}  // namespace insep
