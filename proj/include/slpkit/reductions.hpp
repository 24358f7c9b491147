#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slpkit/deciders.hpp"
#include "slpkit/polynomial.hpp"
#include "slpkit/slp.hpp"

namespace slpkit {

// One run of a transform or driver, serializable as a single JSON line.
struct ReductionRecord {
  std::string name;
  std::string input;                                        // serialized program
  std::vector<std::string> outputs;                         // serialized programs
  std::vector<std::pair<std::string, std::string>> params;  // e.g. m, l, d, e
  std::vector<OracleQuery> trace;
  std::size_t input_size = 0;
  std::size_t output_size = 0;  // largest emitted program
  BigInt size_bound = 0;        // claimed bound on output_size
  std::optional<bool> answer;   // drivers, and forced transforms

  bool size_ok() const { return BigInt(static_cast<unsigned long>(output_size)) <= size_bound; }
  std::string to_json() const;
};

// 7 N^8: 3SoS iff N = 0. Adds 7 gates.
Slp equ_to_3sos(const Slp& slp);
// 3 N^4: 2SoS iff N = 0. Adds 4 gates.
Slp equ_to_2sos(const Slp& slp);

inline std::size_t equ_to_3sos_bound(std::size_t s) { return s + 7; }
inline std::size_t equ_to_2sos_bound(std::size_t s) { return s + 4; }

// Equality oracle answered by a 2SoS oracle on the 3 N^4 gadget. The
// returned handle calls `two_sos`, which must outlive it.
OracleHandle equ_via_2sos(OracleHandle& two_sos);

// N > 0 with at most 5 queries to a 3SoS oracle: zero tests on N, N+1, N+2
// through the 7 N^8 gadget, then N, then N+2.
bool pos_via_3sos(const Slp& slp, OracleHandle& three_sos);

// 3SoS membership with a Div2 oracle (queried with aux.l) and a Pos oracle.
bool three_sos_via_div2_pos(const Slp& slp, OracleHandle& div2, OracleHandle& pos);

struct Reversal {
  BigInt m;  // degree_upper_bound of the input
  Slp q;     // computes x^m f(1/x)
};

Reversal reverse_slp(const Slp& slp);
inline std::size_t reverse_bound(std::size_t s) { return 4 * s + 2; }

struct DegInstance {
  Slp slp;
  BigInt d;
};

struct OrdInstance {
  Slp slp;
  BigInt l;
};

// deg f <= d  iff  ord q >= l.
OrdInstance deg_to_ord(const Slp& slp, const BigInt& d);

// ord f >= l  iff  deg q <= d. With l > m only f = 0 qualifies, and the
// instance becomes (x f, 0); `forced` marks that case.
struct OrdToDeg {
  DegInstance instance;
  bool forced = false;
};
OrdToDeg ord_to_deg(const Slp& slp, const BigInt& l);

// f(B) with B = 2^(2^e) and l' = l 2^e; e defaults to 3 size(slp).
struct Div2Instance {
  Slp slp;
  BigInt l;
  std::size_t e = 0;
};
Div2Instance ord_to_div2(const Slp& slp, const BigInt& l, std::optional<std::size_t> exponent_override = {});
inline std::size_t ord_to_div2_bound(std::size_t s, std::size_t e) { return s + e + 2; }
// The answer survives when every coefficient of f is below B in magnitude.
bool ord_to_div2_sound(const Polynomial& f, std::size_t e);

// x_i := y alpha_i with alpha_i = 2^(2^(i s^2)); the output is univariate and
// its degree equals the total degree of f.
DegInstance mdeg_to_deg(const Slp& slp, const BigInt& d);
BigInt mdeg_to_deg_bound(std::size_t s, std::size_t num_vars);

struct TwoSosWitness {
  enum class Kind { SmallValue, Shift };
  Kind kind;
  BigInt value;  // N' for SmallValue, S for Shift

  static TwoSosWitness small_value(BigInt v) { return {Kind::SmallValue, std::move(v)}; }
  static TwoSosWitness shift(BigInt s) { return {Kind::Shift, std::move(s)}; }
};

struct TwoSosCheck {
  bool valid = false;     // the witness checks out
  bool positive = false;  // the sign it certifies (meaningful when valid)
  bool accepts_positive() const { return valid && positive; }
};

// M = 2^(3s) and T = 2M + 1.
BigInt two_sos_bound_m(std::size_t s);

// NP verifier for N > 0. SmallValue(N') is valid iff N' is the residue of N
// modulo T taken in [-M, M] and equ confirms N = N'. Shift(S) is valid iff
// equ rules out N = that residue (so |N| > M) and N + S is a 2SoS; it
// certifies N > 0. Throws MalformedWitness for |N'| > M, S < 0 or S > M.
TwoSosCheck pos_via_2sos_verify(const Slp& slp, const TwoSosWitness& witness, OracleHandle& equ,
                                OracleHandle& two_sos);

// ceil(4 ln^2(2^(2^s))) capped at 10^6.
BigInt default_gap_bound(std::size_t s);

// SmallValue branch, then shifts S = 0..gap_bound. Throws GapBoundExhausted
// when no shift is accepted and gap_bound < M (inconclusive); with
// gap_bound >= M every witness was tried and the answer is false.
bool pos_via_2sos_search(const Slp& slp, std::optional<BigInt> gap_bound, OracleHandle& equ,
                         OracleHandle& two_sos);

// Names accepted by run_reduction: equ-to-3sos, equ-to-2sos, pos-via-3sos,
// 3sos-via-div2, reverse, deg-to-ord, ord-to-deg, ord-to-div2, mdeg-to-deg,
// pos-via-2sos.
const std::vector<std::string>& reduction_names();

struct ReductionRequest {
  std::string name;
  std::optional<BigInt> l;
  std::optional<BigInt> d;
  std::optional<std::size_t> exponent_override;
  std::optional<BigInt> gap_bound;
  DeciderOptions oracle_options;
};

// Runs a transform (outputs filled) or a driver with library oracles
// (answer and trace filled). Throws std::invalid_argument for unknown names
// or missing parameters.
ReductionRecord run_reduction(const ReductionRequest& req, const Slp& slp);

}  // namespace slpkit
