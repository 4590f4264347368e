#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "scfsim/rng.hpp"

using namespace scfsim;

TEST_SUITE_BEGIN("rng");

// Reference outputs computed with an independent implementation of the
// mixer (Python, arbitrary-precision integers masked to 64 bits) and
// frozen here. Any change to the mixing constants or rounds breaks these.
TEST_CASE("mix64 golden vectors") {
  CHECK(mix64(0) == UINT64_C(0xe220a8397b1dcdaf));
  CHECK(mix64(1) == UINT64_C(0x910a2dec89025cc1));
  CHECK(mix64(42) == UINT64_C(0xbdd732262feb6e95));
  CHECK(mix64(UINT64_C(0xDEADBEEF)) == UINT64_C(0x4adfb90f68c9eb9b));
}

TEST_CASE("stream golden vectors") {
  Rng r0(0);
  CHECK(r0.next() == UINT64_C(0xe220a8397b1dcdaf));
  CHECK(r0.next() == UINT64_C(0x6e789e6aa1b965f4));
  CHECK(r0.next() == UINT64_C(0x06c45d188009454f));

  Rng r1(12345);
  CHECK(r1.next() == UINT64_C(0x22118258a9d111a0));
  CHECK(r1.next() == UINT64_C(0x346edce5f713f8ed));
  CHECK(r1.next() == UINT64_C(0x1e9a57bc80e6721d));
}

TEST_CASE("first output of a stream equals mix64 of its seed") {
  for (std::uint64_t s : {std::uint64_t{0}, std::uint64_t{7},
                          std::uint64_t{1} << 63, UINT64_C(0xabcdef)}) {
    Rng r(s);
    CHECK(r.next() == mix64(s));
  }
}

TEST_CASE("same seed reproduces the same sequence") {
  Rng a(987654321), b(987654321);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("u01 lies in [0,1) and u01_open in (0,1)") {
  Rng r(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.u01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng ro(4);
  for (int i = 0; i < 100000; ++i) {
    const double u = ro.u01_open();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("u01 mean and variance match uniform(0,1)") {
  Rng r(11);
  const int n = 200000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.u01();
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.03));
}

TEST_CASE("normal moments") {
  Rng r(21);
  const int n = 200000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("exponential has unit mean and is positive") {
  Rng r(22);
  const int n = 200000;
  double sum = 0;
  double mn = 1e300;
  for (int i = 0; i < n; ++i) {
    const double e = r.exponential();
    sum += e;
    mn = std::min(mn, e);
  }
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(mn > 0.0);
}

TEST_CASE("below(n) is bounded and roughly uniform") {
  Rng r(31);
  const std::uint64_t n = 7;
  std::vector<std::uint64_t> counts(n, 0);
  const int draws = 140000;
  for (int i = 0; i < draws; ++i) {
    const std::uint64_t v = r.below(n);
    REQUIRE(v < n);
    counts[v]++;
  }
  for (std::uint64_t c : counts) {
    CHECK(double(c) / draws == doctest::Approx(1.0 / double(n)).epsilon(0.05));
  }
}

TEST_CASE("substream seeds are distinct across purposes and indices") {
  std::set<std::uint64_t> seen;
  const std::uint64_t master = 1;
  for (std::uint64_t purpose :
       {stream::arrival, stream::mac, stream::channel, stream::replay,
        stream::placement, stream::detection, stream::agent, stream::run}) {
    for (std::uint64_t idx = 0; idx < 64; ++idx) {
      seen.insert(substream_seed(master, purpose, idx));
    }
  }
  CHECK(seen.size() == 8u * 64u);
}

TEST_CASE("substream seeds differ across masters") {
  CHECK(substream_seed(1, stream::arrival, 0) !=
        substream_seed(2, stream::arrival, 0));
}

TEST_SUITE_END();
