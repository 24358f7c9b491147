#include "slpkit/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "slpkit/deciders.hpp"
#include "slpkit/eval.hpp"
#include "slpkit/harness.hpp"
#include "slpkit/numtheory.hpp"
#include "slpkit/reductions.hpp"

namespace slpkit {

namespace {

constexpr int kYes = 0, kNo = 1, kCampaignFailed = 2, kUsage = 3, kRuntime = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  ss << in.rdbuf();
  return ss.str();
}

Slp load(const std::string& path) {
  try {
    return parse(read_text(path));
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

BigInt big_arg(const std::string& text, const char* flag) {
  BigInt v;
  if (text.empty() || v.set_str(text, 10) != 0) throw UsageError(std::string("--") + flag + " expects an integer");
  return v;
}

std::optional<BigInt> opt_big(const std::string& text, const char* flag) {
  if (text.empty()) return std::nullopt;
  return big_arg(text, flag);
}

std::vector<BigInt> split_values(const std::string& text) {
  std::vector<BigInt> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(big_arg(item, "vars"));
  return out;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Straight-line program toolkit"};
  app.require_subcommand(1);
  int code = kYes;

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a program");
  std::string eval_file, eval_vars, eval_modulus;
  std::size_t eval_bits = std::size_t{1} << 20;
  eval_cmd->add_option("FILE", eval_file, "Program file, - for stdin")->required();
  eval_cmd->add_option("--vars", eval_vars, "Comma-separated variable values");
  eval_cmd->add_option("--mod", eval_modulus, "Reduce modulo T");
  eval_cmd->add_option("--max-bits", eval_bits, "Bit budget for exact evaluation");

  // decide
  auto* decide_cmd = app.add_subcommand("decide", "Decide a problem instance");
  std::string dec_problem, dec_file, dec_l, dec_d, dec_n, dec_i;
  std::uint64_t dec_seed = 0;
  std::optional<std::size_t> dec_sample;
  bool dec_json = false;
  decide_cmd->add_option("PROBLEM", dec_problem, "posslp, equslp, ...")->required();
  decide_cmd->add_option("FILE", dec_file, "Program file, - for stdin")->required();
  decide_cmd->add_option("--l", dec_l);
  decide_cmd->add_option("--d", dec_d);
  decide_cmd->add_option("--n", dec_n);
  decide_cmd->add_option("--i", dec_i);
  decide_cmd->add_option("--seed", dec_seed);
  decide_cmd->add_option("--sample-exp", dec_sample);
  decide_cmd->add_flag("--json", dec_json, "Print the full verdict as JSON");

  // reduce
  auto* reduce_cmd = app.add_subcommand("reduce", "Apply a transform or run a driver");
  std::string red_name, red_file, red_l, red_d, red_gap, red_out;
  std::optional<std::size_t> red_exp;
  std::uint64_t red_seed = 0;
  reduce_cmd->add_option("NAME", red_name)->required();
  reduce_cmd->add_option("FILE", red_file)->required();
  reduce_cmd->add_option("--l", red_l);
  reduce_cmd->add_option("--d", red_d);
  reduce_cmd->add_option("--override-exp", red_exp, "ord-to-div2 exponent e");
  reduce_cmd->add_option("--gap-bound", red_gap, "pos-via-2sos shift search bound");
  reduce_cmd->add_option("--seed", red_seed);
  reduce_cmd->add_option("-o,--output", red_out, "Write the output program here");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification campaign");
  std::string ver_name, ver_report;
  std::optional<std::size_t> ver_exhaustive, ver_size;
  std::optional<std::uint64_t> ver_random, ver_limit;
  std::uint64_t ver_seed = 0;
  unsigned ver_workers = 0;
  verify_cmd->add_option("CAMPAIGN", ver_name)->required();
  auto* ex_opt = verify_cmd->add_option("--exhaustive", ver_exhaustive, "All programs of size 1..K");
  auto* rnd_opt = verify_cmd->add_option("--random", ver_random, "Random instance count");
  verify_cmd->add_option("--size", ver_size, "Maximum random program size")->needs(rnd_opt);
  ex_opt->excludes(rnd_opt);
  verify_cmd->add_option("--seed", ver_seed);
  verify_cmd->add_option("--limit", ver_limit, "Range bound for number campaigns");
  verify_cmd->add_option("--workers", ver_workers);
  verify_cmd->add_option("--report", ver_report, "Write the JSON-lines report here");

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "Density scans");
  std::string scan_kind;
  std::uint64_t scan_limit = 0;
  scan_cmd->add_option("KIND", scan_kind)->required()->check(CLI::IsMember({"density-3sos", "density-2sos"}));
  scan_cmd->add_option("--limit", scan_limit)->required();

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Random program");
  std::size_t gen_size = 0, gen_vars = 0;
  std::uint64_t gen_seed = 0;
  gen_cmd->add_option("--size", gen_size)->required();
  gen_cmd->add_option("--vars", gen_vars);
  gen_cmd->add_option("--seed", gen_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kYes : kUsage;
  }

  try {
    if (*eval_cmd) {
      const Slp slp = load(eval_file);
      const std::vector<BigInt> vars = split_values(eval_vars);
      if (!eval_vars.empty() && vars.size() != slp.num_vars()) {
        throw UsageError("program has " + std::to_string(slp.num_vars()) + " variables");
      }
      if (!eval_modulus.empty()) {
        const BigInt t = big_arg(eval_modulus, "mod");
        if (t < 2) throw UsageError("--mod must be at least 2");
        if (vars.size() != slp.num_vars()) throw UsageError("--mod needs --vars for every variable");
        std::cout << slpkit::eval_mod(slp, std::span<const BigInt>(vars), t) << "\n";
      } else if (vars.size() == slp.num_vars()) {
        std::cout << eval_exact(slp, vars, EvalBudget::with_bits(eval_bits)) << "\n";
      } else if (slp.num_vars() == 1) {
        EvalBudget b = EvalBudget::with_bits(eval_bits);
        std::cout << expand_poly(slp, b).to_string() << "\n";
      } else {
        throw UsageError("multivariate programs need --vars");
      }
    } else if (*decide_cmd) {
      const auto problem = problem_from_name(dec_problem);
      if (!problem) throw UsageError("unknown problem: " + dec_problem);
      ProblemInstance inst{*problem, load(dec_file), {}};
      inst.aux.l = opt_big(dec_l, "l");
      inst.aux.d = opt_big(dec_d, "d");
      inst.aux.n = opt_big(dec_n, "n");
      inst.aux.i = opt_big(dec_i, "i");
      DeciderOptions opts;
      opts.seed = dec_seed;
      opts.sample_exponent = dec_sample;
      try {
        validate_instance(inst);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const Verdict v = decide(inst, opts);
      if (dec_json) {
        nlohmann::ordered_json j;
        j["problem"] = dec_problem;
        j["answer"] = v.answer;
        j["provenance"] = v.provenance;
        j["seed"] = v.seed ? nlohmann::ordered_json(*v.seed) : nlohmann::ordered_json(nullptr);
        j["oracle_calls"] = v.cost.oracle_calls;
        j["gate_evals"] = v.cost.gate_evals;
        std::cout << j.dump() << "\n";
      } else {
        std::cout << (v.answer ? "yes" : "no") << "\n";
      }
      code = v.answer ? kYes : kNo;
    } else if (*reduce_cmd) {
      const auto& names = reduction_names();
      if (std::find(names.begin(), names.end(), red_name) == names.end()) {
        throw UsageError("unknown reduction: " + red_name);
      }
      ReductionRequest req;
      req.name = red_name;
      req.l = opt_big(red_l, "l");
      req.d = opt_big(red_d, "d");
      req.exponent_override = red_exp;
      req.gap_bound = opt_big(red_gap, "gap-bound");
      req.oracle_options.seed = red_seed;
      const Slp slp = load(red_file);
      ReductionRecord rec;
      try {
        rec = run_reduction(req, slp);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (!red_out.empty()) {
        if (rec.outputs.empty()) throw UsageError(red_name + " produces no program; drop -o");
        std::ofstream out(red_out);
        if (!out) throw UsageError("cannot write " + red_out);
        out << rec.outputs.front();
      }
      std::cout << rec.to_json() << "\n";
    } else if (*verify_cmd) {
      CampaignConfig c;
      c.campaign = ver_name;
      c.exhaustive = ver_exhaustive;
      c.random_count = ver_random;
      c.random_size = ver_size;
      c.seed = ver_seed;
      c.limit = ver_limit;
      c.workers = ver_workers;
      try {
        c.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const CampaignReport rep = run_campaign(c);
      if (!ver_report.empty()) {
        std::ofstream out(ver_report);
        if (!out) throw UsageError("cannot write " + ver_report);
        out << rep.to_jsonl();
      }
      std::cout << rep.summary_json() << "\n";
      code = rep.ok() ? kYes : kCampaignFailed;
    } else if (*scan_cmd) {
      const DensityKind kind = scan_kind == "density-3sos" ? DensityKind::ThreeSquares : DensityKind::TwoSquares;
      DensityResult r;
      try {
        r = density_scan(kind, scan_limit);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      nlohmann::ordered_json j;
      j["scan"] = scan_kind;
      j["limit"] = scan_limit;
      j["count"] = r.count;
      j["ratio"] = r.ratio;
      std::cout << j.dump() << "\n";
    } else if (*gen_cmd) {
      if (gen_size == 0) throw UsageError("--size must be at least 1");
      std::cout << serialize(gen_random_slp(gen_size, gen_vars, gen_seed));
    }
  } catch (const UsageError& e) {
    std::cerr << "slp: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "slp: " << e.what() << "\n";
    return kRuntime;
  }
  return code;
}

}  // namespace slpkit
