#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slpkit/eval.hpp"
#include "slpkit/numtheory.hpp"
#include "slpkit/slp.hpp"

namespace slpkit {

enum class Problem { Pos, Equ, Bit, Div2, ThreeSos, TwoSos, Squ, Deg, Ord, PosPoly, SquPoly };

// CLI spelling: posslp, equslp, bitslp, div2slp, 3sosslp, 2sosslp, squslp,
// degslp, ordslp, pospolyslp, squpolyslp.
std::string_view problem_name(Problem p);
std::optional<Problem> problem_from_name(std::string_view name);
const std::vector<Problem>& all_problems();

// Binary parameters; which ones are present depends on the problem.
struct AuxParams {
  std::optional<BigInt> l;  // Div2, Ord
  std::optional<BigInt> d;  // Deg
  std::optional<BigInt> n;  // Bit
  std::optional<BigInt> i;  // Bit

  std::string to_string() const;
};

struct ProblemInstance {
  Problem problem;
  Slp slp;
  AuxParams aux;
};

// Throws std::invalid_argument when aux parameters are missing, extra or
// negative, or the variable count does not fit the problem.
void validate_instance(const ProblemInstance& inst);

struct Cost {
  std::uint64_t oracle_calls = 0;
  // Gate evaluations performed across every pass (exact, modular, symbolic).
  std::uint64_t gate_evals = 0;
};

struct Verdict {
  bool answer = false;
  // "exact", "characterization", "modular", "randomized", ...
  std::string provenance;
  std::optional<std::uint64_t> seed;  // set on randomized verdicts
  Cost cost;
};

struct DeciderOptions {
  EvalBudget budget;
  FactorBudget factor;
  std::uint64_t seed = 0;
  std::optional<std::size_t> sample_exponent;  // SquPoly only
};

// SplitMix64 finalizer over (seed, index); independent streams per index.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Largest l for which Div2 falls back to evaluation modulo 2^l.
inline constexpr std::size_t kDiv2Cap = std::size_t{1} << 26;
inline constexpr int kEquPrimes = 20;

Verdict decide_pos(const Slp& slp, const EvalBudget& budget = {});
Verdict decide_equ(const Slp& slp, std::uint64_t seed, const EvalBudget& budget = {});
Verdict decide_bit(const Slp& slp, std::size_t n, std::size_t i, const EvalBudget& budget = {});
Verdict decide_div2(const Slp& slp, const BigInt& l, const EvalBudget& budget = {});
Verdict decide_3sos(const Slp& slp, const EvalBudget& budget = {});
Verdict decide_2sos(const Slp& slp, const EvalBudget& budget = {}, const FactorBudget& factor = {});
Verdict decide_squ(const Slp& slp, const EvalBudget& budget = {});
// Exact expansion first; beyond budget, modular expansion over kEquPrimes
// random primes (provenance "randomized").
Verdict decide_deg(const Slp& slp, const BigInt& d, const EvalBudget& budget = {}, std::uint64_t seed = 0);
Verdict decide_ord(const Slp& slp, const BigInt& l, const EvalBudget& budget = {}, std::uint64_t seed = 0);
Verdict decide_pos_poly(const Slp& slp, const EvalBudget& budget = {});
// Samples t in [1, 2^E], E = 200 * size unless overridden, and tests f(t)
// for squareness. "no" is always right; "yes" may err.
Verdict decide_squ_poly_rand(const Slp& slp, std::optional<std::size_t> sample_exponent, std::uint64_t seed,
                             const EvalBudget& budget = {});

Verdict decide(const ProblemInstance& inst, const DeciderOptions& opts = {});

struct OracleQuery {
  Problem problem;
  std::string query;  // serialized program (or a size summary) plus aux
  bool answer;
};

// Serialized program (a size summary above 64 gates) plus aux parameters.
std::string describe_query(const Slp& slp, const AuxParams& aux);

// A counted decision procedure for one problem.
class OracleHandle {
 public:
  using Fn = std::function<bool(const Slp&, const AuxParams&)>;

  OracleHandle(Problem problem, Fn fn) : problem_(problem), fn_(std::move(fn)) {}

  bool operator()(const Slp& slp, const AuxParams& aux = {});

  Problem problem() const noexcept { return problem_; }
  std::uint64_t calls() const noexcept { return calls_; }
  const std::vector<OracleQuery>& trace() const noexcept { return trace_; }
  void set_tracing(bool on) noexcept { tracing_ = on; }
  void reset() noexcept {
    calls_ = 0;
    trace_.clear();
  }

 private:
  Problem problem_;
  Fn fn_;
  std::uint64_t calls_ = 0;
  bool tracing_ = false;
  std::vector<OracleQuery> trace_;
};

// Oracle backed by the library decider for `problem`. Randomized deciders
// derive a fresh seed per query from opts.seed and the call index.
OracleHandle make_oracle(Problem problem, const DeciderOptions& opts = {});

}  // namespace slpkit
