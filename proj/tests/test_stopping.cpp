#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "superlw/stopping.hpp"

using namespace superlw;

namespace {

StoppingRule apriori(double c, double p, long cap = 100000) {
  StoppingRule r;
  r.kind = StopKind::a_priori;
  r.c = c;
  r.p = p;
  r.cap = cap;
  return r;
}

StoppingRule discrepancy(double tau, double delta) {
  StoppingRule r;
  r.kind = StopKind::discrepancy;
  r.tau = tau;
  r.delta = delta;
  return r;
}

}  // namespace

TEST_CASE("a-priori index examples") {
  CHECK(apriori_index(apriori(1.0, 0.5), 0.01) == 10);
  CHECK(apriori_index(apriori(1.0, 0.5), 1e-4) == 100);
  CHECK(apriori_index(apriori(1.0, 0.5, 50), 1e-6) == 50);
  CHECK(apriori_index(apriori(1.0, 0.5), 0.02) == 8);  // ceil(7.07)
  CHECK(apriori_index(apriori(3.0, 1.0), 0.1) == 30);
}

TEST_CASE("a-priori index rejects zero noise") {
  CHECK_THROWS_AS((void)apriori_index(apriori(1.0, 0.5), 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)apriori_index(apriori(1.0, 0.5), -1.0), std::invalid_argument);
}

TEST_CASE("a-priori index is non-increasing in delta and unbounded as delta -> 0") {
  const StoppingRule rule = apriori(1.0, 0.5, 1L << 40);
  long previous = 0;
  for (double delta = 10.0; delta > 1e-12; delta *= 0.7) {
    const long k = apriori_index(rule, delta);
    CHECK(k >= previous);
    previous = k;
  }
  CHECK(previous > 100000);
}

TEST_CASE("discrepancy examples") {
  CHECK(discrepancy_fired(discrepancy(1.5, 0.1), 0.14));
  CHECK_FALSE(discrepancy_fired(discrepancy(1.5, 0.1), 0.16));
  CHECK(discrepancy_fired(discrepancy(1.5, 0.1), 0.15));
  CHECK_THROWS_AS((void)discrepancy_fired(discrepancy(1.5, 0.0), 0.1), std::invalid_argument);
  CHECK_THROWS_AS((void)discrepancy_fired(discrepancy(1.0, 0.1), 0.1), std::invalid_argument);
}

TEST_CASE("rule validation and names") {
  StoppingRule r;
  CHECK_NOTHROW(r.validate());
  r.tau = 0.9;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r = StoppingRule{};
  r.cap = 0;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  CHECK(parse_stop_kind("a-priori") == StopKind::a_priori);
  CHECK(to_string(StopKind::discrepancy) == "discrepancy");
  CHECK_THROWS_AS(parse_stop_kind("lepskii"), std::invalid_argument);
}
