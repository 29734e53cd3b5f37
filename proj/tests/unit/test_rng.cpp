#include <vector>

#include "doctest.h"
#include "garble/rng.hpp"

using namespace garble;

TEST_CASE("rng streams are deterministic and seed-sensitive") {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_equal_c = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    all_equal = all_equal && va == b.next_u64();
    any_equal_c = any_equal_c || va == c.next_u64();
  }
  CHECK(all_equal);
  CHECK_FALSE(any_equal_c);
}

TEST_CASE("derived stream seeds differ per index") {
  const auto s0 = derive_stream_seed(7, 0);
  const auto s1 = derive_stream_seed(7, 1);
  const auto t0 = derive_stream_seed(8, 0);
  CHECK(s0 != s1);
  CHECK(s0 != t0);
  CHECK(derive_stream_seed(7, 0) == s0);
}

TEST_CASE("next_double stays in [0, 1)") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform_index covers the range") {
  Rng rng(2);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) ++seen[rng.uniform_index(7)];
  for (int count : seen) CHECK(count > 700);  // ~1000 expected per cell
}

TEST_CASE("categorical respects masses and skips zero tails") {
  Rng rng(3);
  const double probs[4] = {0.5, 0.5, 0.0, 0.0};
  std::vector<int> seen(4, 0);
  for (int i = 0; i < 4000; ++i) ++seen[rng.categorical(probs)];
  CHECK(seen[0] > 1600);
  CHECK(seen[1] > 1600);
  CHECK(seen[2] == 0);
  CHECK(seen[3] == 0);

  const double point[3] = {0.0, 1.0, 0.0};
  for (int i = 0; i < 100; ++i) CHECK(rng.categorical(point) == 1);
}
