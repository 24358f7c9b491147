#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slpkit/slp.hpp"

namespace slpkit {

struct OpWeights {
  unsigned add = 1;
  unsigned sub = 1;
  unsigned mul = 1;
  unsigned var = 1;  // ignored without variables
};

// Each gate picks an instruction kind by weight, then uniform operands.
Slp gen_random_slp(std::size_t size, std::size_t num_vars, std::uint64_t seed, const OpWeights& weights = {});

// Visits every program with exactly `size` gates, in a fixed order.
void enumerate_slps(std::size_t size, std::size_t num_vars, const std::function<void(const Slp&)>& visit);
// Number of programs enumerate_slps visits.
std::uint64_t count_slps(std::size_t size, std::size_t num_vars);

// Negated oracles answer every query wrongly; campaigns under them must fail.
enum class OracleWiring { True, Negated };

struct CampaignConfig {
  std::string campaign;
  // Instance source; both unset means the campaign's default family.
  std::optional<std::size_t> exhaustive;  // all programs of size 1..K, K <= 6
  std::optional<std::uint64_t> random_count;
  std::optional<std::size_t> random_size;  // sizes drawn from 1..S
  std::uint64_t seed = 0;
  std::size_t max_bits = std::size_t{1} << 14;
  std::size_t div2_exponent = 16;           // ord-div2 override e
  std::size_t squpoly_exponent = 64;        // E for non-square samples
  double squpoly_min_no = 0.95;             // required share of "no" on non-squares
  std::uint64_t dishonest_instances = 100;  // pos-via-2sos soundness sampling
  std::uint64_t dishonest_samples = 1000;
  std::optional<std::uint64_t> limit;       // number-range campaigns
  OracleWiring oracles = OracleWiring::True;
  unsigned workers = 0;                     // 0: hardware concurrency

  void validate() const;
  std::string to_json() const;
};

enum class InstanceStatus { Pass, Fail, Inconclusive };

struct InstanceRecord {
  std::uint64_t index = 0;
  std::string instance;
  std::string expected;
  std::string got;
  std::uint64_t oracle_calls = 0;
  InstanceStatus status = InstanceStatus::Pass;
  std::string detail;

  std::string to_json() const;
};

struct CampaignReport {
  CampaignConfig config;
  std::vector<InstanceRecord> records;  // ordered by index
  std::uint64_t pass = 0, fail = 0, inconclusive = 0;
  std::map<std::string, std::string> metrics;
  std::vector<std::string> aggregate_failures;

  std::uint64_t total() const { return records.size(); }
  bool ok() const { return fail == 0 && aggregate_failures.empty(); }
  std::string summary_json() const;
  // Config line, one line per instance, summary line.
  std::string to_jsonl() const;
};

const std::vector<std::string>& campaign_names();

// Throws std::invalid_argument for unknown names or bad configs.
CampaignReport run_campaign(const CampaignConfig& config);

}  // namespace slpkit
