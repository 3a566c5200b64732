// xorlrc: construct, encode, repair and verify XOR-only locally repairable codes.
#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xorlrc/codes.hpp"
#include "xorlrc/error.hpp"
#include "xorlrc/metrics.hpp"
#include "xorlrc/repair.hpp"
#include "xorlrc/storage.hpp"

namespace {

using namespace xorlrc;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string code;
  std::size_t k = 0;
  std::optional<std::size_t> s;
  std::optional<std::size_t> r;
  std::string erased;
  std::optional<std::string> missing;
  std::string dir;
  std::string in;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  bool exhaustive = false;
  std::optional<std::size_t> max_erasures;
  std::size_t workers = 1;
  std::string format = "text";
  bool print = false;
};

std::vector<std::size_t> parse_csv(const std::string& text, std::size_t n, const char* flag) {
  std::vector<std::size_t> out;
  if (text.empty()) return out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t value = 0;
    const auto* end = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(item.data(), end, value);
    if (item.empty() || ec != std::errc() || ptr != end) {
      throw UsageError(std::string(flag) + ": '" + item + "' is not a node index");
    }
    if (value >= n) {
      throw UsageError(std::string(flag) + ": index " + item + " out of range for n=" + std::to_string(n));
    }
    out.push_back(value);
  }
  return out;
}

LinearCode resolve_code(const Config& c) {
  if (c.code.empty()) throw UsageError("--code is required");
  return parse_code_id(c.code);
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  write_file_atomic(c.out, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::uint64_t need_seed(const Config& c) {
  if (!c.seed) throw UsageError("randomized commands require --seed");
  return *c.seed;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

// ---------------------------------------------------------------- commands

int cmd_gen(const Config& c) {
  const auto code = resolve_code(c);
  const std::string text = to_text(code.generator) + to_text(parity_check(code.generator));
  if (c.print || c.out.empty()) std::cout << text;
  if (!c.out.empty()) emit(c, text);
  return 0;
}

int cmd_encode(const Config& c) {
  const auto code = resolve_code(c);
  if (c.in.empty() || c.dir.empty()) throw UsageError("encode needs --in and --dir");
  const auto payload = read_file(c.in);
  const auto object = encode_object(code, payload);
  write_object(c.dir, object);
  std::cout << "encoded " << payload.size() << " bytes into " << object.shards.size() << " shards of "
            << object.manifest.fragment_length << " bytes\n";
  return 0;
}

int cmd_decode(const Config& c) {
  if (c.dir.empty() || c.out.empty()) throw UsageError("decode needs --dir and --out");
  const auto manifest = read_manifest(c.dir);
  const auto shards = read_available_shards(c.dir, manifest);
  const auto payload = decode_object(manifest, shards);
  write_file_atomic(c.out, payload);
  std::cout << "decoded " << payload.size() << " bytes from " << shards.size() << " of " << manifest.n << " shards\n";
  return 0;
}

int cmd_repair(const Config& c) {
  if (c.dir.empty()) throw UsageError("repair needs --dir");
  const auto manifest = read_manifest(c.dir);
  if (!c.code.empty() && c.code != manifest.code) {
    throw UsageError("--code " + c.code + " does not match manifest code " + manifest.code);
  }
  const auto shards = read_available_shards(c.dir, manifest);
  std::vector<std::size_t> missing;
  if (c.missing) {
    missing = parse_csv(*c.missing, manifest.n, "--missing");
  } else {
    std::vector<bool> present(manifest.n, false);
    for (const auto& s : shards) present[s.index] = true;
    for (std::size_t j = 0; j < manifest.n; ++j) {
      if (!present[j]) missing.push_back(j);
    }
  }
  for (auto m : missing) {
    for (const auto& s : shards) {
      if (s.index == m) throw UsageError("shard " + std::to_string(m) + " is present; remove it before repair");
    }
  }
  const auto result = repair_shards(manifest, shards, missing);
  for (const auto& shard : result.repaired) write_shard(c.dir, shard);
  std::cout << serialize(result.plan);
  return 0;
}

int cmd_plan(const Config& c) {
  const auto code = resolve_code(c);
  const ErasurePattern pattern(code.n, parse_csv(c.erased, code.n, "--erased"));
  if (c.r) {
    const auto outcome = parallel_repair_plan(code, pattern, *c.r);
    std::cout << serialize(outcome.plan);
    if (!outcome.success) {
      std::cerr << "no parallel " << *c.r << "-repair for nodes " << join(outcome.unrepairable) << '\n';
      return 1;
    }
    return 0;
  }
  if (!is_correctable(code, pattern)) {
    std::cerr << "erasure pattern is not correctable\n";
    return 1;
  }
  const auto outcome = easy_repair_plan(code, pattern);
  std::cout << serialize(outcome.plan);
  if (!outcome.success) {
    std::cerr << "easy repair stalled with nodes " << join(outcome.residual.erased()) << " still erased\n";
    return 1;
  }
  return 0;
}

int cmd_availability(const Config& c) {
  const auto code = resolve_code(c);
  const std::size_t r_max = c.r.value_or(2);
  const auto profile = availability_profile(code, r_max);
  std::ostringstream out;
  out << "node";
  for (std::size_t r = 1; r <= r_max; ++r) out << "\tr<=" << r;
  out << '\n';
  for (std::size_t i = 0; i < profile.per_node.size(); ++i) {
    out << i;
    for (auto v : profile.per_node[i]) out << '\t' << v;
    if (profile.constant_node[i]) out << "\tconstant";
    out << '\n';
  }
  out << 't';
  for (auto v : profile.t) out << '\t' << v;
  out << '\n';
  emit(c, out.str());
  return 0;
}

int cmd_distance(const Config& c) {
  const auto code = resolve_code(c);
  std::ostringstream out;
  out << "code: " << code.id << "\nn: " << code.n << "\nk: " << code.k << '\n';
  if (code.k <= kMaxEnumerationRows) {
    out << "d: " << min_distance(code).d << '\n';
  } else {
    out << "d: skipped (k > " << kMaxEnumerationRows << ")\n";
  }
  if (const auto conv = conv_code_of(code)) {
    const auto report = column_distance_report(*conv, c.s.value_or(3));
    for (const auto& [j, d] : report.column_distances) out << "column_distance d_" << j << ": " << d << '\n';
    for (const auto& [s, d] : report.sliding_distances) out << "sliding_block_distance s=" << s << ": " << d << '\n';
    out << "d_free_evidence: " << report.d_free_evidence << '\n';
  }
  emit(c, out.str());
  return 0;
}

SweepOptions sweep_options(const Config& c) {
  SweepOptions o;
  o.exhaustive = c.exhaustive;
  o.max_erasures = c.max_erasures;
  o.workers = c.workers;
  if (!c.exhaustive) {
    o.seed = need_seed(c);
    if (!c.trials) throw UsageError("sampled verification requires --trials (or use --exhaustive)");
    o.trials = *c.trials;
  }
  return o;
}

int cmd_verify(const Config& c) {
  const auto code = resolve_code(c);
  const auto options = sweep_options(c);
  std::ostringstream out;
  const char* mode = options.exhaustive ? "exhaustive" : "sampled";
  if (c.r) {
    if (!c.max_erasures) throw UsageError("parallel verification needs --max-erasures as the erasure count");
    const auto v = verify_parallel_capacity(code, *c.r, *c.max_erasures, options);
    out << (v.passed ? "PASS" : "FAIL") << " parallel r=" << *c.r << " erasures=" << *c.max_erasures << ' '
        << code.id << ' ' << mode << " examined=" << v.examined << '\n';
    if (v.counterexample) {
      out << "counterexample: " << join(v.counterexample->erased()) << '\n';
      out << serialize(parallel_repair_plan(code, *v.counterexample, *c.r).plan);
    }
    emit(c, out.str());
    return v.passed ? 0 : 1;
  }
  const auto v = verify_easy_repair_property(code, options);
  out << (v.passed ? "PASS" : "FAIL") << " easy-repair " << code.id << ' ' << mode << " examined=" << v.examined
      << " correctable=" << v.correctable << '\n';
  if (v.counterexample) {
    out << "counterexample: " << join(v.counterexample->erased()) << '\n';
    out << serialize(v.counterexample_outcome->plan);
  }
  emit(c, out.str());
  return v.passed ? 0 : 1;
}

int cmd_simulate(const Config& c) {
  const auto code = resolve_code(c);
  const auto seed = need_seed(c);
  if (!c.trials) throw UsageError("simulate requires --trials");
  if (!c.max_erasures) throw UsageError("simulate requires --max-erasures (erasures per trial)");
  const auto report = monte_carlo_repair(code, *c.trials, ErasureModel::fixed(*c.max_erasures), seed, c.r.value_or(3),
                                         c.workers);
  emit(c, format_report(report));
  return 0;
}

int cmd_table(const Config& c) {
  if (c.k == 0) throw UsageError("table requires --k");
  const auto rows = comparison_table(c.k);
  emit(c, c.format == "tsv" ? format_table_tsv(rows) : format_table_text(rows));
  return 0;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotCorrectable:
    case ErrorKind::ChecksumMismatch:
    case ErrorKind::LengthMismatch:
    case ErrorKind::Io:
    case ErrorKind::NoSolution:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XOR-only locally repairable codes: construction, storage, repair and verification"};
  app.require_subcommand(1);
  Config c;

  auto code_opt = [&](CLI::App* sub) { sub->add_option("--code", c.code, "code id, e.g. simplex:3, um:2:4"); };
  auto* gen = app.add_subcommand("gen", "print generator and parity-check matrices");
  code_opt(gen);
  gen->add_flag("--print", c.print, "print to standard output");
  gen->add_option("--out", c.out);

  auto* encode = app.add_subcommand("encode", "encode a file into shards");
  code_opt(encode);
  encode->add_option("--in", c.in);
  encode->add_option("--dir", c.dir);

  auto* decode = app.add_subcommand("decode", "recover the payload from available shards");
  decode->add_option("--dir", c.dir);
  decode->add_option("--out", c.out);

  auto* repair = app.add_subcommand("repair", "regenerate missing shards");
  code_opt(repair);
  repair->add_option("--dir", c.dir);
  repair->add_option("--missing", c.missing, "comma-separated node indices");

  auto* plan = app.add_subcommand("plan", "repair plan for an erasure pattern");
  code_opt(plan);
  plan->add_option("--erased", c.erased, "comma-separated node indices");
  plan->add_option("--r", c.r, "parallel repair with groups of at most r helpers");

  auto* avail = app.add_subcommand("availability", "disjoint repair groups per node");
  code_opt(avail);
  avail->add_option("--r", c.r, "largest group size (default 2)");
  avail->add_option("--out", c.out);

  auto* dist = app.add_subcommand("distance", "minimum and column distances");
  code_opt(dist);
  dist->add_option("--s", c.s, "largest column-distance index for UM codes (default 3)");
  dist->add_option("--out", c.out);

  auto* verify = app.add_subcommand("verify", "sweep erasure patterns for a repair property");
  code_opt(verify);
  verify->add_option("--r", c.r, "check parallel r-repair instead of easy repair");
  verify->add_flag("--exhaustive", c.exhaustive);
  verify->add_option("--max-erasures", c.max_erasures, "erasure cap; the exact count with --r");
  verify->add_option("--seed", c.seed);
  verify->add_option("--trials", c.trials);
  verify->add_option("--workers", c.workers)->check(CLI::PositiveNumber);
  verify->add_option("--out", c.out);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo repair statistics");
  code_opt(sim);
  sim->add_option("--seed", c.seed);
  sim->add_option("--trials", c.trials);
  sim->add_option("--max-erasures", c.max_erasures, "erasures per trial");
  sim->add_option("--r", c.r, "largest parallel group size (default 3)");
  sim->add_option("--workers", c.workers)->check(CLI::PositiveNumber);
  sim->add_option("--out", c.out);

  auto* table = app.add_subcommand("table", "comparison table for dimension k");
  table->add_option("--k", c.k);
  table->add_option("--format", c.format)->check(CLI::IsMember({"tsv", "text"}));
  table->add_option("--out", c.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) return cmd_gen(c);
    if (*encode) return cmd_encode(c);
    if (*decode) return cmd_decode(c);
    if (*repair) return cmd_repair(c);
    if (*plan) return cmd_plan(c);
    if (*avail) return cmd_availability(c);
    if (*dist) return cmd_distance(c);
    if (*verify) return cmd_verify(c);
    if (*sim) return cmd_simulate(c);
    if (*table) return cmd_table(c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
