#include "scfsim/detection_table.hpp"

#include <string>

namespace scfsim {
namespace {

// kProb[n1][n2][cluster][k] = P(k of cluster's packets decoded | n1, n2).
// Indexed by concurrent transmission counts per cluster in one slot.
constexpr double kProb[4][4][2][4] = {
    // n1 = 0
    {
        {{1.000, 0.000, 0.000, 0.000}, {1.000, 0.000, 0.000, 0.000}},  // n2=0
        {{1.000, 0.000, 0.000, 0.000}, {0.567, 0.433, 0.000, 0.000}},  // n2=1
        {{1.000, 0.000, 0.000, 0.000}, {0.477, 0.490, 0.033, 0.000}},  // n2=2
        {{1.000, 0.000, 0.000, 0.000}, {0.521, 0.424, 0.055, 0.000}},  // n2=3
    },
    // n1 = 1
    {
        {{0.163, 0.837, 0.000, 0.000}, {1.000, 0.000, 0.000, 0.000}},
        {{0.401, 0.599, 0.000, 0.000}, {0.804, 0.196, 0.000, 0.000}},
        {{0.564, 0.436, 0.000, 0.000}, {0.766, 0.227, 0.007, 0.000}},
        {{0.675, 0.325, 0.000, 0.000}, {0.788, 0.200, 0.012, 0.000}},
    },
    // n1 = 2
    {
        {{0.606, 0.274, 0.120, 0.000}, {1.000, 0.000, 0.000, 0.000}},
        {{0.677, 0.249, 0.074, 0.000}, {0.941, 0.059, 0.000, 0.000}},
        {{0.734, 0.220, 0.046, 0.000}, {0.929, 0.070, 0.001, 0.000}},
        {{0.780, 0.191, 0.029, 0.000}, {0.935, 0.062, 0.003, 0.000}},
    },
    // n1 = 3
    {
        {{0.741, 0.167, 0.079, 0.013}, {1.000, 0.000, 0.000, 0.000}},
        {{0.779, 0.164, 0.049, 0.008}, {0.984, 0.016, 0.000, 0.000}},
        {{0.810, 0.155, 0.031, 0.004}, {0.980, 0.020, 0.000, 0.000}},
        {{0.836, 0.143, 0.019, 0.002}, {0.981, 0.019, 0.000, 0.000}},
    },
};

}  // namespace

void DetectionTable::check_concurrency(int n1, int n2) {
  if (n1 < 0 || n2 < 0 || n1 > kMaxConcurrency || n2 > kMaxConcurrency) {
    throw CapacityError(
        "table-mode detection supports at most " +
        std::to_string(kMaxConcurrency) +
        " concurrent transmissions per cluster per slot (got n1=" +
        std::to_string(n1) + ", n2=" + std::to_string(n2) +
        "); use physical detection mode");
  }
}

double DetectionTable::prob(int n1, int n2, int cluster, int k) {
  check_concurrency(n1, n2);
  return kProb[n1][n2][cluster][k];
}

double DetectionTable::mean(int n1, int n2, int cluster) {
  check_concurrency(n1, n2);
  const auto& row = kProb[n1][n2][cluster];
  return row[1] + 2.0 * row[2] + 3.0 * row[3];
}

int DetectionTable::sample(int n1, int n2, int cluster, Rng& rng) {
  check_concurrency(n1, n2);
  const auto& row = kProb[n1][n2][cluster];
  const double u = rng.u01();
  double acc = 0.0;
  for (int k = 0; k < 3; ++k) {
    acc += row[k];
    if (u < acc) return k;
  }
  return 3;
}

}  // namespace scfsim
