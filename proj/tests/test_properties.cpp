// test_properties.cpp — seeded-corpus property suite: reducedness versus
// the movable part, the inseparable-degree criterion, the fixed part
// versus the R1 locus, dual-pairing soundness, saturation idempotence,
// tower-inequality effectivity, and the canonical-class identity
// (see property_suite.h for the per-instance checks).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "property_suite.h"

using namespace insep;

namespace {

int instances = 0;

void run(const std::string& text) {
  CAPTURE(text);
  property_suite::run_instance(text, [&](bool ok, const std::string& what) {
    CAPTURE(what);
    CHECK(ok);
  });
  ++instances;
}

}  // namespace

TEST_CASE("seeded corpus properties: hypersurfaces") {
  for (const auto& text : gen_corpus(101, 22, "fermat-hypersurface"))
    run(text);
}

TEST_CASE("seeded corpus properties: products") {
  for (const auto& text : gen_corpus(202, 16, "fermat-product")) run(text);
}

TEST_CASE("seeded corpus properties: mixed towers") {
  for (const auto& text : gen_corpus(303, 16, "mixed-level")) run(text);
  CHECK(instances >= 50);
}
