#include <stdexcept>

#include "doctest.h"
#include "prabhakar/verify.hpp"

using namespace prabhakar;

TEST_CASE("suite catalog is stable") {
  const auto suites = verify_suites();
  CHECK(suites.size() == 10);
  CHECK(suites.front() == "special");
  CHECK(suites.back() == "inverse");
}

TEST_CASE("unknown suite throws") {
  CHECK_THROWS_AS(run_verify("nonesuch", 0), std::invalid_argument);
}

TEST_CASE("fast suites pass and expose measurements") {
  for (const char* name : {"psi", "reduction"}) {
    const auto results = run_verify(name, 0);
    CHECK(!results.empty());
    for (const auto& r : results) {
      CHECK(r.pass);
      CHECK(!r.name.empty());
      CHECK(r.tolerance >= 0.0);
    }
  }
}

TEST_CASE("identical seeds give identical measurements") {
  const auto a = run_verify("reduction", 42);
  const auto b = run_verify("reduction", 42);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    CHECK(a[i].measured == b[i].measured);
  }
}
