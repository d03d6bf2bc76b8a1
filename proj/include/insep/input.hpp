// input.hpp — parsing and printing of scheme/base-change input files and
// generation of the seeded test corpus.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "insep/geometry.hpp"

namespace insep {

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) +
                           ", column " + std::to_string(col_) + ")"),
        line(line_),
        col(col_) {}
};

struct ParsedInput {
  SchemeDesc scheme;
  BaseChangeSpec bc;
};

// parse the sectioned key/value input format:
//   [field]       p, params, levels
//   [ambient]     blocks, variables.<block>
//   [scheme]      generators
//   [base_change] raised (parameter names), optional levels (targets)
// throws ParseError for malformed text and std::invalid_argument for
// semantic validation failures (non-prime p, height > 1, inhomogeneous or
// empty generators)
ParsedInput parse_input(const std::string& text);
ParsedInput parse_input_file(const std::string& path);

// inverse of parse_input up to formatting: parse_input(print_input(d)) == d
std::string print_input(const SchemeDesc& X, const BaseChangeSpec& bc);

// deterministic seeded corpus of valid input files; profiles:
// "fermat-hypersurface", "fermat-product", "mixed-level"
std::vector<std::string> gen_corpus(uint64_t seed, int count,
                                    const std::string& profile);

}  // namespace insep
