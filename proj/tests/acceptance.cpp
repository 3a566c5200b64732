// Acceptance suite: one PASS/FAIL line per criterion. A criterion passes only
// when its checks hold and it finishes within its time budget.
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "xorlrc/codes.hpp"
#include "xorlrc/error.hpp"
#include "xorlrc/metrics.hpp"
#include "xorlrc/repair.hpp"
#include "xorlrc/sampling.hpp"
#include "xorlrc/storage.hpp"

using namespace xorlrc;

namespace {

struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

struct Run {
  int status = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(XORLRC_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string str(std::size_t v) { return std::to_string(v); }

// ---------------------------------------------------------------- criteria

void construction(Check& c) {
  const auto r = cli("gen --code simplex:3 --print");
  c.expect(r.status == 0, "gen exit status " + str(static_cast<std::size_t>(r.status)));
  c.expect(r.out == "3 7\n1001101\n0101011\n0010111\n4 7\n1101000\n1010100\n0110010\n1110001\n",
           "gen output differs:\n" + r.out);
}

void distances(Check& c) {
  auto want = [&](const LinearCode& code, std::size_t d) {
    const auto got = min_distance(code).d;
    c.expect(got == d, code.id + ": d=" + str(got) + ", expected " + str(d));
  };
  for (std::size_t k = 2; k <= 6; ++k) want(make_simplex(k), std::size_t{1} << (k - 1));
  for (std::size_t k = 2; k <= 6; ++k) want(make_c1(k), k);
  for (std::size_t k = 2; k <= 8; ++k) want(make_c2(k), 3);
  want(make_um2prime(), 4);
}

void column_distances(Check& c) {
  for (std::size_t b : {2U, 3U}) {
    const auto conv = um_simplex(b);
    const std::size_t two_k = std::size_t{1} << b;
    const std::size_t d_free = 3 * two_k / 2;
    c.expect(column_distance(conv, 0) == two_k, "base_k=" + str(b) + " d_0");
    for (std::size_t j = 1; j <= 3; ++j) {
      const auto d = column_distance(conv, j);
      c.expect(d == d_free, "base_k=" + str(b) + " d_" + str(j) + "=" + str(d));
    }
    const std::size_t s_max = b == 2 ? 3 : 2;
    for (std::size_t s = 1; s <= s_max; ++s) {
      const auto d = sliding_block_distance(conv, s);
      c.expect(d == d_free, "base_k=" + str(b) + " sliding s=" + str(s) + " d=" + str(d));
    }
  }
}

void availability(Check& c) {
  for (std::size_t k = 2; k <= 4; ++k) {
    const auto code = make_simplex(k);
    const auto t = availability_profile(code, 2).t[1];
    c.expect(t == (code.n - 1) / 2, code.id + ": t=" + str(t));
  }
  for (std::size_t k = 3; k <= 5; ++k) {
    const auto t = availability_profile(make_c1(k), 2).t[1];
    c.expect(t == k - 1, "c1:" + str(k) + ": t=" + str(t));
  }
  for (std::size_t k = 2; k <= 5; ++k) {
    const auto t = availability_profile(make_c2(k), 3).t[2];
    c.expect(t >= 2, "c2:" + str(k) + ": t(r=3)=" + str(t));
  }
}

void easy_repair(Check& c) {
  auto sweep = [&](const LinearCode& code, const SweepOptions& opts, const std::string& tag) {
    const auto v = verify_easy_repair_property(code, opts);
    std::string detail = code.id + " " + tag;
    if (v.counterexample) {
      detail += " counterexample:";
      for (auto e : v.counterexample->erased()) detail += " " + str(e);
    }
    c.expect(v.passed, detail);
    return v;
  };
  SweepOptions all;
  for (std::size_t k = 2; k <= 4; ++k) {
    const auto v = sweep(make_simplex(k), all, "exhaustive");
    c.expect(v.examined == (std::uint64_t{1} << make_simplex(k).n), "simplex sweep size");
  }
  for (std::size_t k = 2; k <= 5; ++k) sweep(make_c1(k), all, "exhaustive");
  for (std::size_t k = 2; k <= 7; ++k) sweep(make_c2(k), all, "exhaustive");

  const auto um = make_um(2, 2);
  SweepOptions capped;
  capped.max_erasures = 8;
  const auto v = sweep(um, capped, "exhaustive <=8");
  c.expect(v.examined > 1'200'000, "UM sweep examined only " + str(v.examined));
  SweepOptions sampled;
  sampled.exhaustive = false;
  sampled.seed = 20240501;
  sampled.trials = 100'000;
  sweep(um, sampled, "sampled");
}

void parallel_repair(Check& c) {
  SweepOptions all;
  auto check = [&](const LinearCode& code, std::size_t r, std::size_t e, const SweepOptions& opts) {
    const auto v = verify_parallel_capacity(code, r, e, opts);
    c.expect(v.passed, code.id + " r=" + str(r) + " e=" + str(e));
  };
  for (std::size_t k = 3; k <= 4; ++k) {
    const auto code = make_simplex(k);
    for (std::size_t e = 1; e <= (code.n - 1) / 2; ++e) check(code, 2, e, all);
  }
  for (std::size_t k = 3; k <= 5; ++k) {
    for (std::size_t e = 1; e <= k - 1; ++e) check(make_c1(k), 2, e, all);
  }
  for (std::size_t k = 2; k <= 7; ++k) {
    for (std::size_t e = 1; e <= 2; ++e) check(make_c2(k), 3, e, all);
  }
  const auto um2 = make_um(2, 3);
  for (std::size_t r = 2; r <= 5; ++r) check(um2, r, r, all);
  const auto um3 = make_um(3, 3);
  SweepOptions sampled;
  sampled.exhaustive = false;
  sampled.seed = 7;
  sampled.trials = 100'000;
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{2, 4}, {3, 7}, {4, 8}, {5, 11}};
  for (const auto& [r, e] : pairs) check(um3, r, e, sampled);
}

void census(Check& c) {
  for (std::size_t b : {2U, 3U}) {
    const auto code = make_um(b, 4);
    const RepairContext context(code);
    const std::size_t half = (std::size_t{1} << b) - 1;
    const std::size_t block = 2 * half;
    const std::size_t two_k = std::size_t{1} << b;
    const std::size_t d_free_minus_1 = two_k + two_k / 2 - 1;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
    std::map<int, std::pair<std::size_t, std::size_t>> seen;  // item -> (stated, smallest measured)
    auto count = [&](std::size_t node, std::size_t cap) {
      const auto key = std::make_pair(node, cap);
      auto it = memo.find(key);
      if (it == memo.end()) it = memo.emplace(key, max_disjoint_group_count(context, node, cap)).first;
      return it->second;
    };
    auto item = [&](int number, std::size_t node, std::size_t cap, std::size_t want) {
      const auto got = count(node, cap);
      auto [it, fresh] = seen.emplace(number, std::make_pair(want, got));
      if (!fresh) it->second.second = std::min(it->second.second, got);
      c.expect(got >= want, "base_k=" + str(b) + " item " + std::to_string(number) + " node " + str(node) +
                                " cap " + str(cap) + ": " + str(got) + " < " + str(want));
    };
    for (std::size_t j = 0; j < block; ++j) {
      item(1, j, 1, 1);
      item(2, j, 2, two_k - 1);
    }
    const std::size_t base = 2 * block;  // block i = 2
    for (std::size_t j = 0; j < half; ++j) {
      const std::size_t first = base + j;
      const std::size_t second = base + half + j;
      item(3, first, 2, two_k / 2);
      item(4, second, 2, two_k / 2 + 1);
      item(5, first, 3, two_k - 2 + 1);
      item(6, second, 3, two_k - 2 + 2);
      item(7, first, 4, two_k);
      item(8, second, 4, d_free_minus_1);
      item(9, first, 5, d_free_minus_1);
    }
    for (const auto& [number, values] : seen) {
      c.notes.push_back("base_k=" + str(b) + " item " + std::to_string(number) + ": stated " + str(values.first) +
                        ", measured " + str(values.second));
    }
  }
}

void tables(Check& c) {
  using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;
  const std::map<std::size_t, Pairs> expected = {
      {4, {{15, 8}, {15, 6}, {10, 4}, {9, 4}, {9, 3}, {6, 2}}},
      {6, {{63, 32}, {35, 12}, {21, 6}, {21, 6}, {14, 4}, {13, 3}, {12, 3}, {9, 2}}},
      {8, {{255, 128}, {75, 24}, {36, 8}, {30, 8}, {27, 6}, {20, 4}, {17, 3}, {12, 2}}},
  };
  for (const auto& [k, pairs] : expected) {
    const auto r = cli("table --k " + str(k) + " --format tsv");
    c.expect(r.status == 0, "table --k " + str(k) + " exit status");
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    c.expect(line == "code\tn\td\td_over_n", "table header");
    Pairs got;
    while (std::getline(in, line)) {
      std::istringstream fields(line);
      std::string id;
      std::size_t n = 0;
      std::size_t d = 0;
      fields >> id >> n >> d;
      got.emplace_back(n, d);
      if (k == 4 && id == "um2p4") c.expect(n == 9 && d == 4, "UM2' row");
    }
    c.expect(got == pairs, "table k=" + str(k) + " (n, d) pairs differ");
  }
}

void storage_round_trip(Check& c) {
  const std::vector<std::string> ids = {"simplex:2", "simplex:8", "c1:2",    "c1:8",     "c2:2",
                                        "c2:8",      "um:1:1",    "um:2:3",  "c0:4:2",   "c0:8:2",
                                        "c1:4:2",    "c1:8:2",    "umx:4:2", "umx:8:4",  "um2p4"};
  for (const auto& id : ids) {
    const auto code = parse_code_id(id);
    const RepairContext context(code);
    std::size_t mismatches = 0;
    std::size_t repair_mismatches = 0;
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
      CounterRng rng(0xa11ce, trial);
      std::vector<std::uint8_t> payload(1 + rng.below(256));
      for (auto& byte : payload) byte = static_cast<std::uint8_t>(rng.next());
      const auto obj = encode_object(code, payload);

      // Random correctable subset: draw erasure counts until one is correctable.
      NodeSet erased;
      do {
        erased.reset();
        const auto count = static_cast<std::size_t>(rng.below(code.n - code.k + 1));
        for (auto i : sample_subset(rng, code.n, count)) erased.set(i);
      } while (!context.is_correctable(erased));

      std::vector<Shard> available;
      std::vector<std::size_t> missing;
      for (const auto& s : obj.shards) {
        if (erased.test(s.index)) {
          missing.push_back(s.index);
        } else {
          available.push_back(s);
        }
      }
      if (decode_object(obj.manifest, available) != payload) ++mismatches;
      if (missing.empty()) continue;
      const auto easy = repair_shards(obj.manifest, available, missing, RepairStrategy::Auto);
      const auto full = repair_shards(obj.manifest, available, missing, RepairStrategy::DecodeOnly);
      for (std::size_t i = 0; i < missing.size(); ++i) {
        if (easy.repaired[i].data != full.repaired[i].data ||
            easy.repaired[i].data != obj.shards[missing[i]].data) {
          ++repair_mismatches;
        }
      }
    }
    c.expect(mismatches == 0, id + ": " + str(mismatches) + " decode mismatches");
    c.expect(repair_mismatches == 0, id + ": " + str(repair_mismatches) + " repair-path mismatches");
  }
}

void determinism(Check& c) {
  const std::vector<std::string> commands = {
      "simulate --code um:2:2 --trials 20000 --max-erasures 6 --seed 31",
      "simulate --code c1:5 --trials 20000 --max-erasures 4 --seed 5 --r 4",
      "verify --code um:2:2 --trials 20000 --max-erasures 8 --seed 99",
      "verify --code umx:6:2 --trials 20000 --seed 12",
      "verify --code um:2:3 --r 3 --max-erasures 3 --trials 20000 --seed 4",
  };
  for (const auto& cmd : commands) {
    const auto a = cli(cmd);
    const auto b = cli(cmd);
    const auto w1 = cli(cmd + " --workers 1");
    const auto w4 = cli(cmd + " --workers 4");
    c.expect(a.status == b.status && a.out == b.out, "repeat differs: " + cmd);
    c.expect(w1.status == w4.status && w1.out == w4.out, "--workers 4 differs: " + cmd);
    c.expect(a.out == w1.out, "default workers differs from 1: " + cmd);
    c.expect(a.status == 0 || cmd.rfind("verify", 0) == 0, "failed: " + cmd + "\n" + a.out);
  }
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    double budget_seconds;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "bit-exact simplex:3 G and H", 1, construction},
      {2, "exact minimum distances", 10, distances},
      {3, "UM column and sliding block distances", 30, column_distances},
      {4, "availability by exact packing", 60, availability},
      {5, "easy repair property sweeps", 600, easy_repair},
      {6, "parallel repair capacity", 600, parallel_repair},
      {7, "UM per-node disjoint group census", 300, census},
      {8, "comparison tables k=4,6,8", 30, tables},
      {9, "storage round trip and repair-path equivalence", 120, storage_round_trip},
      {10, "seeded determinism and worker independence", 600, determinism},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > cr.budget_seconds) {
      check.failures.push_back("took " + std::to_string(secs) + " s, budget " + std::to_string(cr.budget_seconds));
    }
    const bool ok = check.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("%s criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", cr.number, cr.name, secs);
    for (const auto& n : check.notes) std::printf("    %s\n", n.c_str());
    for (const auto& f : check.failures) std::printf("    %s\n", f.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
