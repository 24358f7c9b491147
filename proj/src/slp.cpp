#include "slpkit/slp.hpp"

#include <charconv>
#include <optional>
#include <sstream>
#include <utility>

namespace slpkit {

namespace {

std::string join_violations(const std::vector<Violation>& violations) {
  std::string out = "invalid program";
  for (const auto& v : violations) {
    out += "; instruction " + std::to_string(v.position) + ": " + v.message;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) words.push_back(s.substr(i, j - i));
    i = j;
  }
  return words;
}

std::size_t parse_index(std::string_view word, std::size_t line) {
  std::size_t value = 0;
  if (word.empty() || word.front() < '0' || word.front() > '9') {
    throw ParseError(line, "expected a decimal index, got '" + std::string(word) + "'");
  }
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || ptr != word.data() + word.size()) {
    throw ParseError(line, "expected a decimal index, got '" + std::string(word) + "'");
  }
  return value;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

std::vector<Violation> validate_instructions(std::size_t num_vars,
                                             std::span<const Instruction> instrs) {
  std::vector<Violation> out;
  for (std::size_t idx = 0; idx < instrs.size(); ++idx) {
    const std::size_t position = idx + 1;
    const Instruction& ins = instrs[idx];
    if (ins.op == Op::Var) {
      if (ins.lhs < 1 || ins.lhs > num_vars) {
        out.push_back({position, "variable index out of range (var " + std::to_string(ins.lhs) +
                                     " with " + std::to_string(num_vars) + " variables)"});
      }
      continue;
    }
    for (const std::size_t operand : {ins.lhs, ins.rhs}) {
      if (operand >= position) {
        out.push_back({position, "operand " + std::to_string(operand) + " >= position " +
                                     std::to_string(position)});
      }
    }
  }
  return out;
}

Slp::Slp(std::size_t num_vars, std::vector<Instruction> instrs)
    : num_vars_(num_vars), instrs_(std::move(instrs)) {
  auto violations = validate_instructions(num_vars_, instrs_);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

std::vector<Violation> validate(const Slp& slp) {
  return validate_instructions(slp.num_vars(), slp.instructions());
}

Slp parse(std::string_view text) {
  std::optional<std::size_t> num_vars;
  std::vector<Instruction> instrs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      if (nl == std::string_view::npos) break;
      continue;
    }
    const auto words = split_words(line);
    const std::string_view kw = words.front();
    if (!num_vars) {
      if (kw != "slp" || words.size() != 2) {
        throw ParseError(line_no, "expected header 'slp <num_vars>'");
      }
      num_vars = parse_index(words[1], line_no);
    } else if (kw == "var") {
      if (words.size() != 2) throw ParseError(line_no, "'var' takes one index");
      instrs.push_back(Instruction::var(parse_index(words[1], line_no)));
    } else if (kw == "add" || kw == "sub" || kw == "mul") {
      if (words.size() != 3) {
        throw ParseError(line_no, "'" + std::string(kw) + "' takes two gate indices");
      }
      const Op op = kw == "add" ? Op::Add : kw == "sub" ? Op::Sub : Op::Mul;
      instrs.push_back({op, parse_index(words[1], line_no), parse_index(words[2], line_no)});
    } else if (kw == "div") {
      throw ParseError(line_no, "division gates are not supported");
    } else if (kw == "slp") {
      throw ParseError(line_no, "duplicate header");
    } else {
      throw ParseError(line_no, "unknown instruction '" + std::string(kw) + "'");
    }
    if (nl == std::string_view::npos) break;
  }
  if (!num_vars) throw ParseError(line_no == 0 ? 1 : line_no, "missing header 'slp <num_vars>'");
  return Slp(*num_vars, std::move(instrs));
}

std::string serialize(const Slp& slp) {
  std::ostringstream out;
  out << "slp " << slp.num_vars() << '\n';
  for (const auto& ins : slp.instructions()) {
    switch (ins.op) {
      case Op::Var: out << "var " << ins.lhs << '\n'; break;
      case Op::Add: out << "add " << ins.lhs << ' ' << ins.rhs << '\n'; break;
      case Op::Sub: out << "sub " << ins.lhs << ' ' << ins.rhs << '\n'; break;
      case Op::Mul: out << "mul " << ins.lhs << ' ' << ins.rhs << '\n'; break;
    }
  }
  return out.str();
}

std::size_t bit_length(const BigInt& n) {
  if (sgn(n) == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

// ---------------------------------------------------------------------------

std::size_t SlpBuilder::push(Instruction ins) {
  instrs_.push_back(ins);
  return instrs_.size();
}

std::size_t SlpBuilder::var(std::size_t k) {
  if (k < 1 || k > num_vars_) throw std::out_of_range("variable index out of range");
  return push(Instruction::var(k));
}

std::size_t SlpBuilder::add(std::size_t i, std::size_t j) { return push(Instruction::add(i, j)); }
std::size_t SlpBuilder::sub(std::size_t i, std::size_t j) { return push(Instruction::sub(i, j)); }
std::size_t SlpBuilder::mul(std::size_t i, std::size_t j) { return push(Instruction::mul(i, j)); }
std::size_t SlpBuilder::zero() { return sub(one(), one()); }

std::size_t SlpBuilder::constant(const BigInt& k) {
  if (k == 0) return zero();
  if (k < 0) {
    const std::size_t magnitude = constant(BigInt(-k));
    return sub(zero(), magnitude);
  }
  if (k == 1) return one();
  const std::size_t bits = bit_length(k);
  std::size_t acc = one();
  for (std::size_t b = bits - 1; b-- > 0;) {
    acc = add(acc, acc);
    if (mpz_tstbit(k.get_mpz_t(), b)) acc = add(acc, one());
  }
  return acc;
}

std::size_t SlpBuilder::pow2(const BigInt& t) {
  if (t < 0) throw std::invalid_argument("pow2: negative exponent");
  if (t == 0) return one();
  const std::size_t bits = bit_length(t);
  std::size_t acc = add(one(), one());  // leading bit of t
  for (std::size_t b = bits - 1; b-- > 0;) {
    acc = mul(acc, acc);
    if (mpz_tstbit(t.get_mpz_t(), b)) acc = add(acc, acc);
  }
  return acc;
}

std::size_t SlpBuilder::splice(const Slp& program, std::span<const std::size_t> var_map) {
  if (var_map.size() < program.num_vars()) {
    throw std::invalid_argument("splice: variable map shorter than program's variable count");
  }
  std::vector<std::size_t> gate(program.size() + 1);
  gate[0] = one();
  std::size_t g = 1;
  for (const auto& ins : program.instructions()) {
    switch (ins.op) {
      case Op::Var: gate[g] = var_map[ins.lhs - 1]; break;
      case Op::Add: gate[g] = add(gate[ins.lhs], gate[ins.rhs]); break;
      case Op::Sub: gate[g] = sub(gate[ins.lhs], gate[ins.rhs]); break;
      case Op::Mul: gate[g] = mul(gate[ins.lhs], gate[ins.rhs]); break;
    }
    ++g;
  }
  return gate[program.size()];
}

std::size_t SlpBuilder::splice(const Slp& program) {
  if (program.num_vars() > num_vars_) {
    throw std::invalid_argument("splice: program uses more variables than the builder");
  }
  std::vector<Instruction> copied(program.instructions().begin(), program.instructions().end());
  const std::size_t offset = instrs_.size();
  for (auto& ins : copied) {
    if (ins.op == Op::Var) continue;
    if (ins.lhs != 0) ins.lhs += offset;
    if (ins.rhs != 0) ins.rhs += offset;
  }
  instrs_.insert(instrs_.end(), copied.begin(), copied.end());
  return program.size() == 0 ? one() : program.size() + offset;
}

Slp SlpBuilder::finish(std::size_t out) && {
  if (out != instrs_.size() || instrs_.empty()) mul(out, one());
  return Slp(num_vars_, std::move(instrs_));
}

// ---------------------------------------------------------------------------

Slp int_to_slp(const BigInt& k) {
  SlpBuilder b;
  const std::size_t out = b.constant(k);
  return std::move(b).finish(out);
}

Slp pow2_slp(const BigInt& t) {
  SlpBuilder b;
  const std::size_t out = b.pow2(t);
  return std::move(b).finish(out);
}

Slp shift_slp(const Slp& slp, const BigInt& c) {
  if (c == 0) return slp;
  SlpBuilder b(slp.num_vars());
  const std::size_t n = b.splice(slp);
  const std::size_t out = c > 0 ? b.add(n, b.constant(c)) : b.sub(n, b.constant(BigInt(-c)));
  return std::move(b).finish(out);
}

}  // namespace slpkit
