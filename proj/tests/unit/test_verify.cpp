#include "doctest.h"

#include "bivirus/verify.hpp"

using namespace bivirus;

TEST_CASE("property suite passes on a small budget and is deterministic") {
  VerifyOptions opts;
  opts.random_models = 3;
  opts.max_nodes = 5;
  opts.seed = 9;
  const VerifySummary a = run_property_suite(opts);
  for (const auto& p : a.properties) {
    CAPTURE(p.name);
    CAPTURE(p.counterexample);
    CHECK(p.passed);
    CHECK(p.cases > 0);
  }
  const VerifySummary b = run_property_suite(opts);
  REQUIRE(a.properties.size() == b.properties.size());
  for (std::size_t i = 0; i < a.properties.size(); ++i) CHECK(a.properties[i].cases == b.properties[i].cases);
}
