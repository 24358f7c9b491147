// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "slpkit/harness.hpp"
#include "slpkit/numtheory.hpp"

using namespace slpkit;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

std::string counts(const CampaignReport& r) {
  return r.config.campaign + " total " + std::to_string(r.total()) + ", pass " + std::to_string(r.pass) + ", fail " +
         std::to_string(r.fail) + ", inconclusive " + std::to_string(r.inconclusive);
}

// Zero failures, and at most 10% of instances left undecided by budgets.
bool clean(const CampaignReport& r) {
  return r.ok() && r.total() > 0 && r.inconclusive * 10 <= r.total();
}

CampaignReport run(const std::string& name, const std::function<void(CampaignConfig&)>& tweak = {}) {
  CampaignConfig c;
  c.campaign = name;
  if (tweak) tweak(c);
  return run_campaign(c);
}

Outcome campaigns(std::initializer_list<const char*> names) {
  Outcome o{true, ""};
  for (const char* n : names) {
    const CampaignReport r = run(n);
    o.ok = o.ok && clean(r);
    o.detail += (o.detail.empty() ? "" : "; ") + counts(r);
  }
  return o;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double seconds_limit;  // 0: none
    std::function<Outcome()> check;
  };

  const std::vector<Criterion> criteria = {
      {1, "characterization equivalence, 0 <= n < 2^16", 60,
       [] {
         const CampaignReport r = run("characterization", [](CampaignConfig& c) { c.limit = 1u << 16; });
         return Outcome{r.ok(), "65536 values; " + counts(r)};
       }},
      {2, "3sos(n) or 3sos(n+2) for 0 <= n <= 10^6", 10,
       [] {
         const CampaignReport r = run("nn23sos", [](CampaignConfig& c) { c.limit = 1'000'001; });
         return Outcome{r.ok(), "1000001 values; " + counts(r)};
       }},
      {3, "equality gadgets 7N^8 and 3N^4", 0, [] { return campaigns({"gadget-3sos", "gadget-2sos"}); }},
      {4, "positivity via 3SoS oracle, <= 5 calls", 0, [] { return campaigns({"pos-via-3sos"}); }},
      {5, "3SoS via Div2 and Pos oracles, <= 2s+3 Div2 calls", 0, [] { return campaigns({"3sos-via-div2"}); }},
      {6, "reversal exactness", 0, [] { return campaigns({"reversal"}); }},
      {7, "deg/ord/div2 chain", 0, [] { return campaigns({"deg-ord", "ord-div2"}); }},
      {8, "multivariate degree substitution", 0, [] { return campaigns({"mdeg"}); }},
      {9, "densities at 10^6", 120,
       [] {
         const DensityResult three = density_scan(DensityKind::ThreeSquares, 1'000'000);
         const DensityResult two = density_scan(DensityKind::TwoSquares, 1'000'000);
         const bool ok3 = std::fabs(three.ratio - 5.0 / 6.0) <= 0.002;
         const bool ok2 = two.ratio >= 0.70 && two.ratio <= 0.88;
         return Outcome{ok3 && ok2, "3sos ratio " + fixed(three.ratio, 6) + " (5/6 +- 0.002), 2sos normalized " +
                                        fixed(two.ratio, 6) + " (in [0.70, 0.88])"};
       }},
      {10, "randomized polynomial square test", 0,
       [] {
         const CampaignReport r = run("squpoly");
         const bool squares_ok = r.fail == 0;
         return Outcome{clean(r) && squares_ok, counts(r) + ", non-squares answered no: " + r.metrics.at("no_verdicts") +
                                                    "/" + r.metrics.at("non_squares")};
       }},
      {11, "two-squares positivity verifier", 0,
       [] {
         const CampaignReport r = run("pos-via-2sos");
         return Outcome{clean(r), counts(r) + ", shift instances " + r.metrics.at("shift_instances") + ", max shift " +
                                      r.metrics.at("max_shift") + ", dishonest witnesses " +
                                      r.metrics.at("dishonest_witnesses") + " on " +
                                      r.metrics.at("dishonest_instances") + " instances, violations " +
                                      r.metrics.at("soundness_violations")};
       }},
      {12, "sampled minimum of g^2+1 dominates the lower bound", 0, [] { return campaigns({"minval"}); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.seconds_limit > 0 && secs >= c.seconds_limit) {
      o.ok = false;
      o.detail += ", over the " + fixed(c.seconds_limit, 0) + " s limit";
    }
    if (!o.ok) ++failed;
    std::printf("%s [%d] %s: %s (%.2f s)\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
