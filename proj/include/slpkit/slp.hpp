#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slpkit/errors.hpp"

namespace slpkit {

using BigInt = mpz_class;

enum class Op : std::uint8_t { Var, Add, Sub, Mul };

// One gate of a straight-line program. For Var, `lhs` holds the 1-based
// variable index and `rhs` is unused. For arithmetic gates both operands are
// 0-based gate indices, where gate 0 is the implicit constant 1.
struct Instruction {
  Op op;
  std::size_t lhs = 0;
  std::size_t rhs = 0;

  static Instruction var(std::size_t k) { return {Op::Var, k, 0}; }
  static Instruction add(std::size_t i, std::size_t j) { return {Op::Add, i, j}; }
  static Instruction sub(std::size_t i, std::size_t j) { return {Op::Sub, i, j}; }
  static Instruction mul(std::size_t i, std::size_t j) { return {Op::Mul, i, j}; }

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

std::vector<Violation> validate_instructions(std::size_t num_vars,
                                             std::span<const Instruction> instrs);

// A validated, immutable straight-line program. Gate 0 is the constant 1 and
// is never stored; instruction p (1-based) defines gate p. The output is the
// last gate, so an empty program computes 1.
class Slp {
 public:
  // Throws ValidationError when any instruction is ill-formed.
  Slp(std::size_t num_vars, std::vector<Instruction> instrs);

  std::size_t num_vars() const noexcept { return num_vars_; }
  std::size_t size() const noexcept { return instrs_.size(); }
  std::size_t output() const noexcept { return instrs_.size(); }
  std::span<const Instruction> instructions() const noexcept { return instrs_; }
  const Instruction& at(std::size_t gate) const { return instrs_.at(gate - 1); }

  friend bool operator==(const Slp&, const Slp&) = default;

 private:
  std::size_t num_vars_;
  std::vector<Instruction> instrs_;
};

// Empty result means the program is well formed.
std::vector<Violation> validate(const Slp& slp);

Slp parse(std::string_view text);
std::string serialize(const Slp& slp);

// Incremental construction of programs, including splicing existing programs
// into a larger one. Every method returns the gate index it produced.
class SlpBuilder {
 public:
  explicit SlpBuilder(std::size_t num_vars = 0) : num_vars_(num_vars) {}

  static constexpr std::size_t one() noexcept { return 0; }
  std::size_t var(std::size_t k);
  std::size_t add(std::size_t i, std::size_t j);
  std::size_t sub(std::size_t i, std::size_t j);
  std::size_t mul(std::size_t i, std::size_t j);
  std::size_t zero();

  // Horner evaluation of the binary expansion; negation as (1-1) - |k|.
  std::size_t constant(const BigInt& k);
  // 2^t by square-and-double over the bits of t.
  std::size_t pow2(const BigInt& t);

  // Copies `program`, mapping its variable k to gate var_map[k-1]. Returns
  // the gate holding the program's output.
  std::size_t splice(const Slp& program, std::span<const std::size_t> var_map);
  // Copies `program` with its variables mapped to this builder's variables.
  std::size_t splice(const Slp& program);

  std::size_t last() const noexcept { return instrs_.size(); }
  std::size_t num_vars() const noexcept { return num_vars_; }

  // Emits a copy gate (g * 1) when `out` is not already the last gate.
  Slp finish(std::size_t out) &&;

 private:
  std::size_t push(Instruction ins);

  std::size_t num_vars_;
  std::vector<Instruction> instrs_;
};

Slp int_to_slp(const BigInt& k);
Slp pow2_slp(const BigInt& t);
// Program computing N + c where N is the value of `slp`.
Slp shift_slp(const Slp& slp, const BigInt& c);

std::size_t bit_length(const BigInt& n);

}  // namespace slpkit
