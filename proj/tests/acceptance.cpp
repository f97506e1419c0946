// Acceptance run: one line per criterion, exit status = number of failures.

#include "finsler/suite.hpp"

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

using namespace finsler;

namespace {

struct Criterion {
  int number;
  const char* suite;
  double limit_s;
};

const std::vector<Criterion> kCriteria = {
    {1, "hessian-consistency", 10},  {2, "randers-criterion", 30}, {3, "constant-wind", 60},
    {4, "lift-nullity", 30},         {5, "product-future", 60},    {6, "cauchy-horizon", 60},
    {7, "reachability", 120},        {8, "homogeneity", 10},       {9, "projective-change", 60},
    {10, "conjugate-points", 60},    {11, "separation", 120},
};

constexpr std::uint64_t kSeed = 20240601;

}  // namespace

int main() {
  int failures = 0;
  for (const auto& c : kCriteria) {
    const auto start = std::chrono::steady_clock::now();
    SuiteReport r;
    std::string why;
    try {
      r = run_suite(c.suite, kSeed);
    } catch (const std::exception& e) {
      why = e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = why.empty() && r.failures() == 0 && !r.criteria.empty() && s <= c.limit_s;
    if (why.empty()) {
      for (const auto& k : r.criteria)
        if (!k.passed) why += (why.empty() ? "" : "; ") + k.name + " " + std::to_string(k.measured) + " " + k.relation + " " + std::to_string(k.threshold);
      if (s > c.limit_s) why += (why.empty() ? "" : "; ") + std::string("over time limit");
    }
    std::printf("criterion %2d %-20s %s  %.2fs / %.0fs  %s\n", c.number, c.suite, ok ? "PASS" : "FAIL", s, c.limit_s,
                why.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }

  // 12: identical seeds give identical reports
  {
    const auto start = std::chrono::steady_clock::now();
    bool same = true;
    std::string differing;
    try {
      for (const auto& c : kCriteria) {
        const std::string a = run_suite(c.suite, kSeed).to_json().dump();
        const std::string b = run_suite(c.suite, kSeed).to_json().dump();
        if (a != b) {
          same = false;
          differing += std::string(differing.empty() ? "" : ",") + c.suite;
        }
      }
    } catch (const std::exception& e) {
      same = false;
      differing = e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion 12 %-20s %s  %.2fs  %s\n", "determinism", same ? "PASS" : "FAIL", s, differing.c_str());
    failures += same ? 0 : 1;
  }
  std::printf("%d failing criteria\n", failures);
  return failures;
}
