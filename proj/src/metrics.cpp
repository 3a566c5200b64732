#include "xorlrc/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "xorlrc/error.hpp"
#include "xorlrc/sampling.hpp"

namespace xorlrc {

std::vector<std::size_t> sample_subset(CounterRng& rng, std::size_t n, std::size_t count) {
  std::vector<bool> picked(n, false);
  for (std::size_t j = n - count; j < n; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    picked[picked[t] ? j : t] = true;
  }
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < n; ++i) {
    if (picked[i]) out.push_back(i);
  }
  return out;
}

namespace {

// Minimum nonzero weight over row combinations whose message bits satisfy
// `accept`. Gray-code walk; the message is the Gray code of the counter.
template <typename Accept>
std::size_t min_weight_where(const BitMatrix& m, Accept accept, std::uint64_t* examined = nullptr) {
  if (m.rows() > kMaxEnumerationRows) {
    throw Error(ErrorKind::TooLarge, std::to_string(m.rows()) + " message bits exceed the enumeration guard of 24");
  }
  BitVector acc(m.cols());
  std::size_t best = std::numeric_limits<std::size_t>::max();
  const std::uint64_t count = std::uint64_t{1} << m.rows();
  for (std::uint64_t i = 1; i < count; ++i) {
    acc ^= m.row(static_cast<std::size_t>(std::countr_zero(i)));
    const std::uint64_t message = i ^ (i >> 1);
    if (!accept(message)) continue;
    const std::size_t w = acc.weight();
    if (w != 0 && w < best) best = w;
  }
  if (examined != nullptr) *examined = count - 1;
  if (best == std::numeric_limits<std::size_t>::max()) throw Error(ErrorKind::RankZero, "no nonzero codeword");
  return best;
}

std::uint64_t saturating_binomial_sum(std::size_t n, std::size_t max_e) {
  long double total = 0;
  long double c = 1;
  for (std::size_t e = 0; e <= max_e && e <= n; ++e) {
    total += c;
    c = c * static_cast<long double>(n - e) / static_cast<long double>(e + 1);
  }
  return total > 1.8e19L ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(total);
}

// Visits patterns of exactly e erasures for each e in [e_min, e_max], in
// order of e then lexicographic index tuples. fn(global_index, erased).
template <typename Fn>
void for_each_pattern(std::size_t n, std::size_t e_min, std::size_t e_max, std::size_t worker, std::size_t workers,
                      Fn&& fn) {
  std::uint64_t index = 0;
  for (std::size_t e = e_min; e <= e_max && e <= n; ++e) {
    std::vector<std::size_t> pick(e);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    while (true) {
      if (index % workers == worker) {
        NodeSet set;
        for (auto p : pick) set.set(p);
        fn(index, set);
      }
      ++index;
      // Advance to the next combination.
      std::size_t i = e;
      while (i > 0 && pick[i - 1] == n - e + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < e; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
}

template <typename Fn>
void run_workers(std::size_t workers, Fn&& fn) {
  if (workers <= 1) {
    fn(std::size_t{0});
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back([&fn, w] { fn(w); });
  for (auto& t : threads) t.join();
}

// Draws a pattern uniformly from all subsets with at most max_e erasures
// (all subsets when max_e is absent).
NodeSet draw_pattern(CounterRng& rng, std::size_t n, std::optional<std::size_t> max_e) {
  NodeSet set;
  if (!max_e || *max_e >= n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.next() >> 63) set.set(i);
    }
    return set;
  }
  // Erasure count weighted by binomial(n, e).
  std::vector<long double> weights(*max_e + 1);
  long double c = 1;
  long double total = 0;
  for (std::size_t e = 0; e <= *max_e; ++e) {
    weights[e] = c;
    total += c;
    c = c * static_cast<long double>(n - e) / static_cast<long double>(e + 1);
  }
  long double x = static_cast<long double>(rng.unit()) * total;
  std::size_t e = 0;
  while (e < *max_e && x >= weights[e]) {
    x -= weights[e];
    ++e;
  }
  for (auto i : sample_subset(rng, n, e)) set.set(i);
  return set;
}

void check_workers(const SweepOptions& options) {
  if (options.workers == 0) throw Error(ErrorKind::InvalidBound, "workers must be at least 1");
  if (!options.exhaustive && options.trials == 0) throw Error(ErrorKind::InvalidBound, "sampled sweep needs trials >= 1");
}

bool easy_repair_completes(const RepairContext& context, const NodeSet& erased) {
  NodeSet pending = erased;
  NodeSet available = context.all_nodes() & ~erased;
  while (pending.any()) {
    auto step = context.find_easy_repairable(available, pending);
    if (!step) return false;
    pending.reset(step->target);
    available.set(step->target);
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------- distances

DistanceReport min_distance(const LinearCode& code) {
  DistanceReport r;
  r.code_id = code.id;
  r.method = DistanceMethod::Exhaustive;
  r.d = min_weight_where(code.generator, [](std::uint64_t) { return true; }, &r.codewords_examined);
  return r;
}

std::size_t column_distance(const ConvCode& code, std::size_t j) {
  if (code.k * (j + 1) > 20) throw Error(ErrorKind::TooLarge, "column distance needs k*(j+1) <= 20");
  const BitMatrix truncated = sliding_generator(code, j).first_columns((j + 1) * code.n_block);
  const std::uint64_t first_block = (std::uint64_t{1} << code.k) - 1;
  return min_weight_where(truncated, [first_block](std::uint64_t u) { return (u & first_block) != 0; });
}

std::size_t sliding_block_distance(const ConvCode& code, std::size_t s) {
  if (code.k * (s + 1) > 20) throw Error(ErrorKind::TooLarge, "sliding block distance needs k*(s+1) <= 20");
  return min_weight_where(sliding_generator(code, s), [](std::uint64_t) { return true; });
}

ColumnDistanceReport column_distance_report(const ConvCode& code, std::size_t j_max) {
  ColumnDistanceReport r;
  r.base_k = code.base_k;
  for (std::size_t j = 0; j <= j_max && code.k * (j + 1) <= 20; ++j) {
    r.column_distances.emplace_back(j, column_distance(code, j));
  }
  r.d_free_evidence = std::numeric_limits<std::size_t>::max();
  for (std::size_t s = 1; s <= 4 && code.k * (s + 1) <= 20; ++s) {
    const std::size_t d = sliding_block_distance(code, s);
    r.sliding_distances.emplace_back(s, d);
    r.d_free_evidence = std::min(r.d_free_evidence, d);
  }
  return r;
}

// ---------------------------------------------------------------- sweeps

EasyRepairVerdict verify_easy_repair_property(const LinearCode& code, const SweepOptions& options) {
  check_workers(options);
  const RepairContext context(code);
  const std::size_t n = context.n();

  struct Partial {
    std::uint64_t examined = 0;
    std::uint64_t correctable = 0;
    std::optional<std::pair<std::uint64_t, NodeSet>> first_failure;
  };
  std::vector<Partial> partials(options.workers);

  auto check = [&](Partial& p, std::uint64_t index, const NodeSet& erased) {
    ++p.examined;
    if (!context.is_correctable(erased)) return;
    ++p.correctable;
    if (!easy_repair_completes(context, erased) && !p.first_failure) p.first_failure.emplace(index, erased);
  };

  if (options.exhaustive) {
    const std::size_t max_e = options.max_erasures.value_or(n);
    if (saturating_binomial_sum(n, max_e) > kMaxExhaustivePatterns) {
      throw Error(ErrorKind::TooLarge, "exhaustive sweep exceeds 2^25 patterns; cap the erasure count");
    }
    run_workers(options.workers, [&](std::size_t w) {
      for_each_pattern(n, 0, max_e, w, options.workers,
                       [&](std::uint64_t index, const NodeSet& erased) { check(partials[w], index, erased); });
    });
  } else {
    run_workers(options.workers, [&](std::size_t w) {
      for (std::uint64_t t = w; t < options.trials; t += options.workers) {
        CounterRng rng(options.seed, t);
        check(partials[w], t, draw_pattern(rng, n, options.max_erasures));
      }
    });
  }

  EasyRepairVerdict v;
  std::optional<std::pair<std::uint64_t, NodeSet>> first;
  for (const auto& p : partials) {
    v.examined += p.examined;
    v.correctable += p.correctable;
    if (p.first_failure && (!first || p.first_failure->first < first->first)) first = p.first_failure;
  }
  if (first) {
    v.passed = false;
    v.counterexample = ErasurePattern::from_set(n, first->second);
    v.counterexample_outcome = context.easy_repair_plan(*v.counterexample);
  }
  return v;
}

ParallelVerdict verify_parallel_capacity(const LinearCode& code, std::size_t r, std::size_t erasures,
                                         const SweepOptions& options) {
  check_workers(options);
  if (r < 1 || r > kMaxGroupSize) throw Error(ErrorKind::InvalidBound, "r must be in [1, 6]");
  const RepairContext context(code);
  const std::size_t n = context.n();
  if (erasures > n) throw Error(ErrorKind::InvalidBound, "more erasures than nodes");
  if (options.exhaustive && saturating_binomial_sum(n, erasures) > kMaxExhaustivePatterns) {
    throw Error(ErrorKind::TooLarge, "exhaustive sweep exceeds 2^25 patterns");
  }
  const GroupTable table(context, r);

  struct Partial {
    std::uint64_t examined = 0;
    std::optional<std::pair<std::uint64_t, NodeSet>> first_failure;
  };
  std::vector<Partial> partials(options.workers);
  auto check = [&](Partial& p, std::uint64_t index, const NodeSet& erased) {
    ++p.examined;
    if (!table.parallel_repairable(erased, r) && !p.first_failure) p.first_failure.emplace(index, erased);
  };

  run_workers(options.workers, [&](std::size_t w) {
    if (options.exhaustive) {
      for_each_pattern(n, erasures, erasures, w, options.workers,
                       [&](std::uint64_t index, const NodeSet& erased) { check(partials[w], index, erased); });
    } else {
      for (std::uint64_t t = w; t < options.trials; t += options.workers) {
        CounterRng rng(options.seed, t);
        NodeSet erased;
        for (auto i : sample_subset(rng, n, erasures)) erased.set(i);
        check(partials[w], t, erased);
      }
    }
  });

  ParallelVerdict v;
  std::optional<std::pair<std::uint64_t, NodeSet>> first;
  for (const auto& p : partials) {
    v.examined += p.examined;
    if (p.first_failure && (!first || p.first_failure->first < first->first)) first = p.first_failure;
  }
  if (first) {
    v.passed = false;
    v.counterexample = ErasurePattern::from_set(n, first->second);
  }
  return v;
}

// ---------------------------------------------------------------- tables

std::vector<ComparisonRow> comparison_table(std::size_t k) {
  if (k < 2 || k > 12) throw Error(ErrorKind::InvalidDimension, "comparison tables support 2 <= k <= 12");

  struct Candidate {
    ComparisonRow row;
    int family_rank;  // C0, C1, UM2', UM_x: the order the tables list ties
    LinearCode code;
  };
  std::vector<Candidate> items;
  const std::string ks = std::to_string(k);
  auto add = [&](std::string label, int rank, LinearCode code) {
    ComparisonRow row;
    row.label = std::move(label);
    row.code_id = code.id;
    items.push_back({std::move(row), rank, std::move(code)});
  };

  add("C0^(" + ks + ")", 0, make_simplex(k));
  for (std::size_t x = 2; x <= k / 2; ++x) {
    if (k % x != 0) continue;
    auto c0 = make_c0_repeat(k, x);
    auto c1 = make_c1_repeat(k, x);
    const std::string tag = ks + "," + std::to_string(x);
    if (c0.generator == c1.generator) {
      add("C0^(" + tag + ")=C1^(" + tag + ")", 0, c0);
      items.back().row.code_id = c0.id + "=" + c1.id;
    } else {
      add("C0^(" + tag + ")", 0, std::move(c0));
      add("C1^(" + tag + ")", 1, std::move(c1));
    }
  }
  add("C1^(" + ks + ")", 1, make_c1(k));
  if (k == 4) add("UM_2'^(4)", 2, make_um2prime());
  for (std::size_t x = 2; x <= k; ++x) {
    if (k % x == 0) add("UM_" + std::to_string(x) + "^(" + ks + ")", 3, make_umx(k, x));
  }

  for (auto& item : items) {
    item.row.n = item.code.n;
    item.row.d = min_distance(item.code).d;
    const std::size_t g = std::gcd(item.row.d, item.row.n);
    item.row.ratio_num = item.row.d / g;
    item.row.ratio_den = item.row.n / g;
  }
  std::stable_sort(items.begin(), items.end(), [](const Candidate& a, const Candidate& b) {
    if (a.row.n != b.row.n) return a.row.n > b.row.n;
    return a.family_rank < b.family_rank;
  });
  std::vector<ComparisonRow> rows;
  rows.reserve(items.size());
  for (auto& item : items) rows.push_back(std::move(item.row));
  return rows;
}

std::string format_table_tsv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  out << "code\tn\td\td_over_n\n";
  for (const auto& r : rows) {
    out << r.code_id << '\t' << r.n << '\t' << r.d << '\t' << r.ratio_num << '/' << r.ratio_den << '\n';
  }
  return out.str();
}

std::string format_table_text(const std::vector<ComparisonRow>& rows) {
  std::size_t width = 4;
  for (const auto& r : rows) width = std::max(width, r.label.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "Code" << "  " << std::right << std::setw(5) << "n"
      << "  " << std::setw(5) << "d" << "  " << std::left << "d/n" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << r.label << "  " << std::right << std::setw(5) << r.n
        << "  " << std::setw(5) << r.d << "  " << std::left << r.ratio_num << '/' << r.ratio_den << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------- simulation

SimulationReport monte_carlo_repair(const LinearCode& code, std::uint64_t trials, const ErasureModel& model,
                                    std::uint64_t seed, std::size_t r_max, std::size_t workers) {
  if (trials == 0) throw Error(ErrorKind::InvalidBound, "trials must be at least 1");
  if (workers == 0) throw Error(ErrorKind::InvalidBound, "workers must be at least 1");
  if (r_max < 1 || r_max > kMaxGroupSize) throw Error(ErrorKind::InvalidBound, "r_max must be in [1, 6]");
  const RepairContext context(code);
  const std::size_t n = context.n();
  if (model.kind == ErasureModel::Kind::FixedCount && model.count > n) {
    throw Error(ErrorKind::InvalidBound, "more erasures than nodes");
  }
  if (model.kind == ErasureModel::Kind::PerNodeProbability && !(model.probability >= 0.0 && model.probability <= 1.0)) {
    throw Error(ErrorKind::InvalidBound, "erasure probability must be in [0, 1]");
  }
  const GroupTable table(context, r_max);

  struct Partial {
    std::vector<std::uint64_t> histogram;
    std::uint64_t correctable = 0;
    std::uint64_t easy = 0;
    std::vector<std::uint64_t> parallel;
    std::uint64_t xors = 0;
    std::uint64_t repaired = 0;
  };
  std::vector<Partial> partials(workers);

  run_workers(workers, [&](std::size_t w) {
    Partial& p = partials[w];
    p.histogram.assign(n + 1, 0);
    p.parallel.assign(r_max, 0);
    for (std::uint64_t t = w; t < trials; t += workers) {
      CounterRng rng(seed, t);
      NodeSet erased;
      if (model.kind == ErasureModel::Kind::FixedCount) {
        for (auto i : sample_subset(rng, n, model.count)) erased.set(i);
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          if (rng.unit() < model.probability) erased.set(i);
        }
      }
      ++p.histogram[erased.count()];
      if (context.is_correctable(erased)) ++p.correctable;
      const auto outcome = context.easy_repair_plan(ErasurePattern::from_set(n, erased));
      if (outcome.success) {
        ++p.easy;
        p.xors += outcome.plan.xor_count();
        p.repaired += outcome.plan.steps.size();
      }
      for (std::size_t r = 1; r <= r_max; ++r) {
        if (table.parallel_repairable(erased, r)) ++p.parallel[r - 1];
      }
    }
  });

  Partial total;
  total.histogram.assign(n + 1, 0);
  total.parallel.assign(r_max, 0);
  for (const auto& p : partials) {
    for (std::size_t e = 0; e <= n; ++e) total.histogram[e] += p.histogram[e];
    for (std::size_t r = 0; r < r_max; ++r) total.parallel[r] += p.parallel[r];
    total.correctable += p.correctable;
    total.easy += p.easy;
    total.xors += p.xors;
    total.repaired += p.repaired;
  }
  while (total.histogram.size() > 1 && total.histogram.back() == 0) total.histogram.pop_back();

  SimulationReport report;
  report.code_id = code.id;
  report.trials = trials;
  report.master_seed = seed;
  report.erasure_histogram = total.histogram;
  const auto frac = [trials](std::uint64_t c) { return static_cast<double>(c) / static_cast<double>(trials); };
  report.fraction_correctable = frac(total.correctable);
  report.fraction_easy_repaired = frac(total.easy);
  for (auto c : total.parallel) report.fraction_parallel.push_back(frac(c));
  report.mean_xor_per_repaired_node =
      total.repaired == 0 ? 0.0 : static_cast<double>(total.xors) / static_cast<double>(total.repaired);
  return report;
}

std::string format_report(const SimulationReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6);
  out << "code: " << report.code_id << '\n';
  out << "trials: " << report.trials << '\n';
  out << "seed: " << report.master_seed << '\n';
  out << "erasure_histogram:";
  for (std::size_t e = 0; e < report.erasure_histogram.size(); ++e) out << ' ' << e << ':' << report.erasure_histogram[e];
  out << '\n';
  out << "fraction_correctable: " << report.fraction_correctable << '\n';
  out << "fraction_easy_repaired: " << report.fraction_easy_repaired << '\n';
  for (std::size_t r = 0; r < report.fraction_parallel.size(); ++r) {
    out << "fraction_parallel_r" << (r + 1) << ": " << report.fraction_parallel[r] << '\n';
  }
  out << "mean_xor_per_repaired_node: " << report.mean_xor_per_repaired_node << '\n';
  return out.str();
}

}  // namespace xorlrc
