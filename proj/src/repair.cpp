#include "xorlrc/repair.hpp"

#include <algorithm>
#include <charconv>
#include <array>
#include <bit>
#include <sstream>

#include "xorlrc/error.hpp"

namespace xorlrc {

namespace {

constexpr std::size_t kDenseMaxK = 22;

template <typename Fn>
void for_each_node(const NodeSet& set, Fn&& fn) {
  for (std::size_t i = set._Find_first(); i < set.size(); i = set._Find_next(i)) fn(i);
}

std::vector<std::size_t> to_indices(const NodeSet& set) {
  std::vector<std::size_t> out;
  for_each_node(set, [&](std::size_t i) { out.push_back(i); });
  return out;
}

std::string join_helpers(const std::vector<std::size_t>& helpers) {
  if (helpers.empty()) return "zero";
  std::string out;
  for (std::size_t i = 0; i < helpers.size(); ++i) {
    if (i) out += '+';
    out += std::to_string(helpers[i]);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- ErasurePattern

ErasurePattern::ErasurePattern(std::size_t n, std::vector<std::size_t> erased) : n_(n), erased_(std::move(erased)) {
  std::sort(erased_.begin(), erased_.end());
  erased_.erase(std::unique(erased_.begin(), erased_.end()), erased_.end());
  if (!erased_.empty() && erased_.back() >= n_) {
    throw Error(ErrorKind::DimensionMismatch,
                "erased index " + std::to_string(erased_.back()) + " out of range for n=" + std::to_string(n_));
  }
  live_.reserve(n_ - erased_.size());
  std::size_t e = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (e < erased_.size() && erased_[e] == i) {
      ++e;
    } else {
      live_.push_back(i);
    }
  }
}

ErasurePattern ErasurePattern::from_set(std::size_t n, const NodeSet& erased) {
  return ErasurePattern(n, to_indices(erased));
}

NodeSet ErasurePattern::erased_set() const {
  if (n_ > kMaxRepairNodes) throw Error(ErrorKind::TooLarge, "pattern exceeds node set capacity");
  NodeSet s;
  for (auto i : erased_) s.set(i);
  return s;
}

bool ErasurePattern::is_erased(std::size_t i) const { return std::binary_search(erased_.begin(), erased_.end(), i); }

// ---------------------------------------------------------------- plans

std::size_t RepairPlan::xor_count() const {
  std::size_t total = 0;
  for (const auto& s : steps) total += s.helpers.empty() ? 0 : s.helpers.size() - 1;
  return total;
}

std::string serialize(const RepairPlan& plan) {
  std::ostringstream out;
  switch (plan.mode) {
    case PlanMode::Sequential: out << "# mode: sequential\n"; break;
    case PlanMode::Parallel: out << "# mode: parallel r=" << plan.r_bound << "\n"; break;
    case PlanMode::Decode: out << "# mode: decode\n"; break;
  }
  for (const auto& s : plan.steps) out << "repair " << s.target << " <- " << join_helpers(s.helpers) << "\n";
  return out.str();
}

namespace {

std::size_t parse_index(const std::string& word, const std::string& line) {
  std::size_t value = 0;
  const auto* end = word.data() + word.size();
  const auto [ptr, ec] = std::from_chars(word.data(), end, value);
  if (word.empty() || ec != std::errc() || ptr != end) throw Error(ErrorKind::Parse, "bad plan line '" + line + "'");
  return value;
}

}  // namespace

RepairPlan parse_plan(std::string_view text) {
  RepairPlan plan;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# mode: ", 0) == 0) {
      const std::string mode = line.substr(8);
      if (mode == "sequential") {
        plan.mode = PlanMode::Sequential;
      } else if (mode == "decode") {
        plan.mode = PlanMode::Decode;
      } else if (mode.rfind("parallel r=", 0) == 0) {
        plan.mode = PlanMode::Parallel;
        plan.r_bound = parse_index(mode.substr(11), line);
      } else {
        throw Error(ErrorKind::Parse, "unknown plan mode '" + mode + "'");
      }
      have_header = true;
      continue;
    }
    if (line[0] == '#') continue;
    std::istringstream words(line);
    std::string verb;
    std::string arrow;
    std::string target;
    std::string helpers;
    std::string extra;
    RepairStep step;
    if (!(words >> verb >> target >> arrow >> helpers) || (words >> extra) || verb != "repair" || arrow != "<-") {
      throw Error(ErrorKind::Parse, "bad plan line '" + line + "'");
    }
    step.target = parse_index(target, line);
    if (helpers != "zero") {
      std::istringstream hs(helpers);
      std::string h;
      while (std::getline(hs, h, '+')) step.helpers.push_back(parse_index(h, line));
    }
    step.order = plan.steps.size();
    plan.steps.push_back(std::move(step));
  }
  if (!have_header) throw Error(ErrorKind::Parse, "plan has no mode header");
  if (plan.mode != PlanMode::Parallel) {
    for (const auto& s : plan.steps) plan.r_bound = std::max(plan.r_bound, s.helpers.size());
  }
  return plan;
}

// ---------------------------------------------------------------- RepairContext

RepairContext::RepairContext(const LinearCode& code) : k_(code.generator.rows()), family_(code.family) {
  const std::size_t n = code.generator.cols();
  if (n > kMaxRepairNodes) {
    throw Error(ErrorKind::TooLarge, "repair engine supports at most 256 nodes, got " + std::to_string(n));
  }
  if (k_ > kMaxRepairK) throw Error(ErrorKind::TooLarge, "repair engine supports k <= 64");
  columns_.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    columns_[c] = code.generator.column_word(c);
    all_.set(c);
  }
  if (k_ <= kDenseMaxK) {
    dense_.resize(std::size_t{1} << k_);
    for (std::size_t c = 0; c < n; ++c) dense_[columns_[c]].push_back(static_cast<std::uint32_t>(c));
  } else {
    for (std::size_t c = 0; c < n; ++c) sparse_[columns_[c]].push_back(static_cast<std::uint32_t>(c));
  }
}

const std::vector<std::uint32_t>* RepairContext::nodes_with_value(std::uint64_t value) const {
  if (!dense_.empty()) {
    if (value >= dense_.size()) return nullptr;
    const auto& list = dense_[value];
    return list.empty() ? nullptr : &list;
  }
  auto it = sparse_.find(value);
  return it == sparse_.end() ? nullptr : &it->second;
}

std::optional<std::size_t> RepairContext::find_value(std::uint64_t value, const NodeSet& allowed,
                                                     std::size_t after) const {
  const auto* list = nodes_with_value(value);
  if (list == nullptr) return std::nullopt;
  for (auto idx : *list) {
    if ((after == kNone || idx > after) && allowed.test(idx)) return idx;
  }
  return std::nullopt;
}

bool RepairContext::is_correctable(const NodeSet& erased) const {
  std::array<std::uint64_t, 64> basis{};
  std::size_t r = 0;
  const NodeSet live = all_ & ~erased;
  for (std::size_t j = live._Find_first(); j < live.size() && r < k_; j = live._Find_next(j)) {
    std::uint64_t v = columns_[j];
    while (v != 0) {
      const int hb = 63 - std::countl_zero(v);
      if (basis[hb] == 0) {
        basis[hb] = v;
        ++r;
        break;
      }
      v ^= basis[hb];
    }
  }
  return r == k_;
}

std::optional<RepairStep> RepairContext::find_easy_repairable(const NodeSet& available, const NodeSet& pending) const {
  for (std::size_t t = pending._Find_first(); t < pending.size(); t = pending._Find_next(t)) {
    const std::uint64_t target = columns_[t];
    if (target == 0) return RepairStep{t, {}, 0};
    if (auto twin = find_value(target, available)) return RepairStep{t, {*twin}, 0};
    for (std::size_t j = available._Find_first(); j < available.size(); j = available._Find_next(j)) {
      const std::uint64_t rest = target ^ columns_[j];
      if (rest == 0) continue;
      if (auto m = find_value(rest, available)) {
        return RepairStep{t, {std::min(j, *m), std::max(j, *m)}, 0};
      }
    }
  }
  return std::nullopt;
}

EasyRepairOutcome RepairContext::easy_repair_plan(const ErasurePattern& pattern) const {
  if (pattern.n() != n()) throw Error(ErrorKind::DimensionMismatch, "pattern length differs from code length");
  EasyRepairOutcome out;
  out.plan.mode = PlanMode::Sequential;
  NodeSet pending = pattern.erased_set();
  NodeSet available = all_ & ~pending;
  while (pending.any()) {
    auto step = find_easy_repairable(available, pending);
    if (!step) break;
    step->order = out.plan.steps.size();
    out.plan.r_bound = std::max(out.plan.r_bound, step->helpers.size());
    pending.reset(step->target);
    available.set(step->target);
    out.plan.steps.push_back(std::move(*step));
  }
  out.success = pending.none();
  out.residual = ErasurePattern::from_set(n(), pending);
  if (!out.success && has_easy_repair_theorem(family_)) {
    out.theorem_violation = is_correctable(pattern.erased_set());
  }
  return out;
}

std::optional<std::vector<std::size_t>> RepairContext::find_group_within(std::size_t target, const NodeSet& allowed,
                                                                         std::size_t r) const {
  const std::uint64_t value = columns_.at(target);
  if (value == 0) return std::vector<std::size_t>{};
  NodeSet pool = allowed;
  pool.reset(target);
  const std::vector<std::size_t> nodes = to_indices(pool);

  std::vector<std::size_t> chosen;
  // Picks `remaining` more nodes from nodes[from..] and closes with a lookup.
  auto search = [&](auto&& self, std::size_t from, std::size_t remaining, std::uint64_t partial) -> bool {
    if (remaining == 1) {
      const std::size_t after = chosen.empty() ? kNone : chosen.back();
      if (auto last = find_value(value ^ partial, pool, after)) {
        chosen.push_back(*last);
        return true;
      }
      return false;
    }
    for (std::size_t i = from; i < nodes.size(); ++i) {
      chosen.push_back(nodes[i]);
      if (self(self, i + 1, remaining - 1, partial ^ columns_[nodes[i]])) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (std::size_t size = 1; size <= r && size <= nodes.size(); ++size) {
    chosen.clear();
    if (search(search, 0, size, 0)) return chosen;
  }
  return std::nullopt;
}

ParallelRepairOutcome RepairContext::parallel_repair_plan(const ErasurePattern& pattern, std::size_t r) const {
  if (r == 0) throw Error(ErrorKind::InvalidBound, "parallel repair bound must be at least 1");
  if (pattern.n() != n()) throw Error(ErrorKind::DimensionMismatch, "pattern length differs from code length");
  ParallelRepairOutcome out;
  out.plan.mode = PlanMode::Parallel;
  out.plan.r_bound = r;
  const NodeSet live = all_ & ~pattern.erased_set();
  for (auto t : pattern.erased()) {
    auto helpers = find_group_within(t, live, r);
    if (!helpers) {
      out.unrepairable.push_back(t);
      continue;
    }
    out.plan.steps.push_back(RepairStep{t, std::move(*helpers), out.plan.steps.size()});
  }
  out.success = out.unrepairable.empty();
  return out;
}

std::vector<RepairGroup> RepairContext::enumerate_repair_groups(std::size_t target, std::size_t max_size) const {
  if (max_size < 1 || max_size > kMaxGroupSize) {
    throw Error(ErrorKind::InvalidBound, "repair group size bound must be in [1, 6]");
  }
  if (target >= n()) throw Error(ErrorKind::DimensionMismatch, "target index out of range");
  const std::uint64_t value = columns_[target];
  NodeSet pool = all_;
  pool.reset(target);
  const std::vector<std::size_t> nodes = to_indices(pool);

  std::vector<RepairGroup> out;
  std::vector<std::size_t> chosen;

  // A group is minimal when no nonempty proper subset XORs to the target.
  auto minimal = [&](const std::vector<std::size_t>& g) {
    const std::size_t size = g.size();
    for (std::uint32_t mask = 1; mask + 1 < (1U << size); ++mask) {
      std::uint64_t acc = 0;
      for (std::size_t b = 0; b < size; ++b) {
        if (mask >> b & 1U) acc ^= columns_[g[b]];
      }
      if (acc == value) return false;
    }
    return true;
  };

  auto search = [&](auto&& self, std::size_t from, std::size_t remaining, std::uint64_t partial) -> void {
    if (remaining == 1) {
      const auto* list = nodes_with_value(value ^ partial);
      if (list == nullptr) return;
      for (auto idx : *list) {
        if (idx == target || (!chosen.empty() && idx <= chosen.back())) continue;
        chosen.push_back(idx);
        if (minimal(chosen)) out.push_back(RepairGroup{target, chosen});
        chosen.pop_back();
      }
      return;
    }
    for (std::size_t i = from; i < nodes.size(); ++i) {
      chosen.push_back(nodes[i]);
      self(self, i + 1, remaining - 1, partial ^ columns_[nodes[i]]);
      chosen.pop_back();
    }
  };
  for (std::size_t size = 1; size <= max_size && size <= nodes.size(); ++size) search(search, 0, size, 0);
  return out;
}

// ---------------------------------------------------------------- GroupTable

GroupTable::GroupTable(const RepairContext& context, std::size_t max_size)
    : context_(&context), max_size_(max_size), groups_(context.n()) {
  for (std::size_t t = 0; t < context.n(); ++t) {
    if (context.column(t) == 0) continue;
    for (auto& g : context.enumerate_repair_groups(t, max_size)) {
      Entry e{{}, g.helpers.size()};
      for (auto h : g.helpers) e.members.set(h);
      groups_[t].push_back(e);
    }
  }
}

bool GroupTable::parallel_repairable(const NodeSet& erased, std::size_t r) const {
  if (r > max_size_) throw Error(ErrorKind::InvalidBound, "bound exceeds the table's group size");
  for (std::size_t t = erased._Find_first(); t < erased.size(); t = erased._Find_next(t)) {
    if (context_->column(t) == 0) continue;
    bool found = false;
    for (const auto& g : groups_[t]) {
      if (g.size > r) break;  // groups are ordered by size
      if ((g.members & erased).none()) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------- packing

namespace {

constexpr std::uint64_t kPackingBudget = 200'000'000;

// Exact maximum set packing of repair groups. Every group XORs to the
// target, so for each set bit b of the target column a group holds an odd
// number (so at least one) of nodes whose column has bit b. The free nodes
// covering the scarcest bit bound how many more groups can fit.
class PackingSolver {
 public:
  PackingSolver(const RepairContext& context, std::size_t target, std::vector<NodeSet> groups)
      : groups_(std::move(groups)) {
    const std::uint64_t value = context.column(target);
    for (int b = 0; b < 64; ++b) {
      if (!(value >> b & 1U)) continue;
      NodeSet cover;
      for (std::size_t i = 0; i < context.n(); ++i) {
        if (i != target && (context.column(i) >> b & 1U)) cover.set(i);
      }
      covers_.push_back(cover);
    }
  }

  // Largest packing among `candidates`, stopping early once `goal` is met.
  std::size_t solve(const std::vector<std::size_t>& candidates, std::size_t goal) {
    best_ = 0;
    goal_ = goal;
    visits_ = 0;
    recurse(candidates, 0);
    return best_;
  }

 private:
  void recurse(const std::vector<std::size_t>& cand, std::size_t chosen) {
    if (++visits_ > kPackingBudget) throw Error(ErrorKind::TooLarge, "set packing search exceeded its budget");
    if (best_ >= goal_) return;
    if (cand.empty()) {
      best_ = std::max(best_, chosen);
      return;
    }
    NodeSet used;
    for (auto g : cand) used |= groups_[g];

    std::size_t bound = cand.size();
    const NodeSet* scarce = nullptr;
    for (const auto& cover : covers_) {
      const std::size_t c = (cover & used).count();
      if (c < bound) {
        bound = c;
        scarce = &cover;
      }
    }
    if (chosen + bound <= best_) return;

    const NodeSet pivot_pool = scarce != nullptr ? (*scarce & used) : used;
    const std::size_t v = pivot_pool._Find_first();

    std::vector<std::size_t> next;
    for (auto g : cand) {
      if (!groups_[g].test(v)) continue;
      next.clear();
      for (auto h : cand) {
        if ((groups_[h] & groups_[g]).none()) next.push_back(h);
      }
      recurse(next, chosen + 1);
      if (best_ >= goal_) return;
    }
    next.clear();
    for (auto h : cand) {
      if (!groups_[h].test(v)) next.push_back(h);
    }
    recurse(next, chosen);
  }

  std::vector<NodeSet> groups_;
  std::vector<NodeSet> covers_;
  std::size_t best_ = 0;
  std::size_t goal_ = 0;
  std::uint64_t visits_ = 0;
};

std::vector<NodeSet> masks_of(const std::vector<RepairGroup>& groups) {
  std::vector<NodeSet> masks;
  masks.reserve(groups.size());
  for (const auto& g : groups) {
    NodeSet m;
    for (auto h : g.helpers) m.set(h);
    masks.push_back(m);
  }
  return masks;
}

std::vector<std::size_t> iota_indices(std::size_t count) {
  std::vector<std::size_t> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = i;
  return v;
}

void check_packing_args(const RepairContext& context, std::size_t target, std::size_t max_size) {
  if (max_size < 1 || max_size > kMaxGroupSize) {
    throw Error(ErrorKind::InvalidBound, "repair group size bound must be in [1, 6]");
  }
  if (target >= context.n()) throw Error(ErrorKind::DimensionMismatch, "target index out of range");
}

}  // namespace

std::size_t max_disjoint_group_count(const RepairContext& context, std::size_t target, std::size_t max_size) {
  check_packing_args(context, target, max_size);
  auto groups = context.enumerate_repair_groups(target, max_size);
  PackingSolver solver(context, target, masks_of(groups));
  return solver.solve(iota_indices(groups.size()), groups.size() + 1);
}

Packing max_disjoint_groups(const LinearCode& code, std::size_t target, std::size_t max_size) {
  const RepairContext context(code);
  check_packing_args(context, target, max_size);
  auto groups = context.enumerate_repair_groups(target, max_size);
  std::sort(groups.begin(), groups.end());  // lexicographic by helpers
  const auto masks = masks_of(groups);
  PackingSolver solver(context, target, masks);

  Packing out;
  out.count = solver.solve(iota_indices(groups.size()), groups.size() + 1);

  // Greedy lexicographic witness: take each group in order if an optimal
  // packing still exists with it included.
  NodeSet taken;
  for (std::size_t g = 0; g < groups.size() && out.witness.size() < out.count; ++g) {
    if ((masks[g] & taken).any()) continue;
    const NodeSet trial = taken | masks[g];
    std::vector<std::size_t> rest;
    for (std::size_t h = g + 1; h < groups.size(); ++h) {
      if ((masks[h] & trial).none()) rest.push_back(h);
    }
    const std::size_t need = out.count - out.witness.size() - 1;
    if (need == 0 || solver.solve(rest, need) >= need) {
      taken = trial;
      out.witness.push_back(groups[g]);
    }
  }
  return out;
}

AvailabilityProfile availability_profile(const LinearCode& code, std::size_t r_max) {
  if (r_max < 1 || r_max > kMaxGroupSize) throw Error(ErrorKind::InvalidBound, "r_max must be in [1, 6]");
  const RepairContext context(code);
  AvailabilityProfile p;
  p.r_max = r_max;
  p.per_node.assign(context.n(), std::vector<std::size_t>(r_max, 0));
  p.constant_node.assign(context.n(), false);
  p.t.assign(r_max, 0);
  bool any = false;
  for (std::size_t i = 0; i < context.n(); ++i) {
    if (context.column(i) == 0) {
      p.constant_node[i] = true;
      continue;
    }
    for (std::size_t r = 1; r <= r_max; ++r) p.per_node[i][r - 1] = max_disjoint_group_count(context, i, r);
    for (std::size_t r = 0; r < r_max; ++r) p.t[r] = any ? std::min(p.t[r], p.per_node[i][r]) : p.per_node[i][r];
    any = true;
  }
  return p;
}

std::optional<std::size_t> locality(const LinearCode& code) {
  const RepairContext context(code);
  std::size_t worst = 0;
  for (std::size_t i = 0; i < context.n(); ++i) {
    if (context.column(i) == 0) continue;
    auto group = context.find_group_within(i, context.all_nodes(), kMaxGroupSize);
    if (!group) return std::nullopt;
    worst = std::max(worst, group->size());
  }
  return worst;
}

// ---------------------------------------------------------------- wrappers

bool is_correctable(const LinearCode& code, const ErasurePattern& pattern) {
  if (pattern.n() != code.n) throw Error(ErrorKind::DimensionMismatch, "pattern length differs from code length");
  return is_right_invertible(code.generator.select_columns(pattern.live()));
}

bool is_correctable_via_parity_check(const LinearCode& code, const ErasurePattern& pattern) {
  if (pattern.n() != code.n) throw Error(ErrorKind::DimensionMismatch, "pattern length differs from code length");
  const BitMatrix h = parity_check(code.generator).select_columns(pattern.erased());
  // Left invertible: the erased columns are linearly independent.
  return rank(h.transpose()) == pattern.erased().size();
}

std::optional<RepairStep> find_easy_repairable(const LinearCode& code, const ErasurePattern& pattern) {
  const RepairContext context(code);
  if (pattern.n() != context.n()) throw Error(ErrorKind::DimensionMismatch, "pattern length differs from code length");
  const NodeSet erased = pattern.erased_set();
  return context.find_easy_repairable(context.all_nodes() & ~erased, erased);
}

EasyRepairOutcome easy_repair_plan(const LinearCode& code, const ErasurePattern& pattern) {
  return RepairContext(code).easy_repair_plan(pattern);
}

ParallelRepairOutcome parallel_repair_plan(const LinearCode& code, const ErasurePattern& pattern, std::size_t r) {
  return RepairContext(code).parallel_repair_plan(pattern, r);
}

std::vector<RepairGroup> enumerate_repair_groups(const LinearCode& code, std::size_t target, std::size_t max_size) {
  return RepairContext(code).enumerate_repair_groups(target, max_size);
}

std::optional<BitVector> replay_plan(const RepairPlan& plan, const BitVector& received, const ErasurePattern& pattern) {
  if (received.size() != pattern.n()) throw Error(ErrorKind::DimensionMismatch, "codeword length differs from pattern");
  BitVector word = received;
  std::vector<bool> known(pattern.n(), true);
  std::vector<bool> live(pattern.n(), true);
  for (auto e : pattern.erased()) {
    known[e] = false;
    live[e] = false;
    word.set(e, false);
  }
  for (const auto& step : plan.steps) {
    bool value = false;
    for (auto h : step.helpers) {
      if (h >= pattern.n()) return std::nullopt;
      const bool usable = plan.mode == PlanMode::Sequential ? known[h] : live[h];
      if (!usable) return std::nullopt;
      value ^= word.get(h);
    }
    if (step.target >= pattern.n()) return std::nullopt;
    word.set(step.target, value);
    known[step.target] = true;
  }
  if (std::find(known.begin(), known.end(), false) != known.end()) return std::nullopt;
  return word;
}

}  // namespace xorlrc
