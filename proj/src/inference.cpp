#include "commusage/inference.hpp"

#include "commusage/parallel.hpp"
#include "commusage/sanitize.hpp"

namespace commusage {

PreparedTuples::PreparedTuples(std::span<const RouteTuple> tuples) {
  offsets_.reserve(tuples.size() + 1);
  for (const auto& tuple : tuples) add(tuple);
}

void PreparedTuples::add(const RouteTuple& tuple) {
  const std::size_t base = path_ids_.size();
  for (Asn asn : tuple.path) {
    auto [it, inserted] = ids_.try_emplace(asn, static_cast<AsnId>(asns_.size()));
    if (inserted) asns_.push_back(asn);
    path_ids_.push_back(it->second);
    marked_.push_back(0);
  }
  for (const auto& c : tuple.communities) {
    const Asn upper = c.upper_asn();
    if (is_non_public_asn(upper)) continue;
    for (std::size_t pos = 0; pos < tuple.path.size(); ++pos) {
      if (tuple.path[pos] == upper) marked_[base + pos] = 1;
    }
  }
  offsets_.push_back(path_ids_.size());
  max_path_length_ = std::max(max_path_length_, tuple.path.size());
}

std::span<const AsnId> PreparedTuples::path(std::size_t tuple) const {
  return std::span<const AsnId>(path_ids_).subspan(offsets_[tuple],
                                                   offsets_[tuple + 1] - offsets_[tuple]);
}

std::span<const std::uint8_t> PreparedTuples::marked(std::size_t tuple) const {
  return std::span<const std::uint8_t>(marked_).subspan(offsets_[tuple],
                                                        offsets_[tuple + 1] - offsets_[tuple]);
}

std::optional<AsnId> PreparedTuples::find(Asn asn) const {
  auto it = ids_.find(asn);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

namespace {

// share = hits / (hits + misses) >= threshold, with a support floor.
bool share_at_least(std::uint64_t hits, std::uint64_t misses, double threshold,
                    std::uint64_t min_samples) noexcept {
  const std::uint64_t total = hits + misses;
  if (total == 0 || total < min_samples) return false;
  return static_cast<double>(hits) / static_cast<double>(total) >= threshold;
}

}  // namespace

bool is_tagger(const UsageCounters& c, const Thresholds& th) noexcept {
  return share_at_least(c.t, c.s, th.tagger, th.min_samples);
}
bool is_silent(const UsageCounters& c, const Thresholds& th) noexcept {
  return share_at_least(c.s, c.t, th.silent, th.min_samples);
}
bool is_forward(const UsageCounters& c, const Thresholds& th) noexcept {
  return share_at_least(c.f, c.c, th.forward, th.min_samples);
}
bool is_cleaner(const UsageCounters& c, const Thresholds& th) noexcept {
  return share_at_least(c.c, c.f, th.cleaner, th.min_samples);
}

TaggingClass get_tagging(const UsageCounters& c, const Thresholds& th) noexcept {
  if (c.t + c.s == 0) return TaggingClass::None;
  if (is_tagger(c, th)) return TaggingClass::Tagger;
  if (is_silent(c, th)) return TaggingClass::Silent;
  return TaggingClass::Undecided;
}

ForwardingClass get_forwarding(const UsageCounters& c, const Thresholds& th) noexcept {
  if (c.f + c.c == 0) return ForwardingClass::None;
  if (is_forward(c, th)) return ForwardingClass::Forward;
  if (is_cleaner(c, th)) return ForwardingClass::Cleaner;
  return ForwardingClass::Undecided;
}

Classification get_class(Asn asn, const UsageCounters& c, const Thresholds& th) noexcept {
  return Classification{asn, c, get_tagging(c, th), get_forwarding(c, th)};
}

Snapshot::Snapshot(std::span<const UsageCounters> counters, const Thresholds& th)
    : counters_(counters.begin(), counters.end()), flags_(counters.size(), 0) {
  for (std::size_t id = 0; id < counters_.size(); ++id) {
    if (commusage::is_tagger(counters_[id], th)) flags_[id] |= kTagger;
    if (commusage::is_forward(counters_[id], th)) flags_[id] |= kForward;
  }
}

bool cond1(const Snapshot& snap, std::span<const AsnId> path, std::size_t pos) {
  for (std::size_t i = 0; i < pos; ++i) {
    if (!snap.is_forward(path[i])) return false;
  }
  return true;
}

std::optional<std::size_t> find_downstream_tagger(const Snapshot& snap,
                                                  std::span<const AsnId> path,
                                                  std::size_t pos) {
  for (std::size_t j = pos + 1; j < path.size(); ++j) {
    if (snap.is_tagger(path[j])) return j;
    if (!snap.is_forward(path[j])) return std::nullopt;
  }
  return std::nullopt;
}

namespace {

void count_range(const Snapshot& snap, const PreparedTuples& tuples, std::size_t pos, Phase phase,
                 std::size_t begin, std::size_t end, std::span<UsageCounters> out) {
  for (std::size_t i = begin; i < end; ++i) {
    const auto path = tuples.path(i);
    if (path.size() <= pos) continue;
    if (!cond1(snap, path, pos)) continue;
    const auto marked = tuples.marked(i);
    auto& counters = out[path[pos]];
    if (phase == Phase::Tagging) {
      if (marked[pos]) {
        ++counters.t;
      } else {
        ++counters.s;
      }
    } else {
      auto witness = find_downstream_tagger(snap, path, pos);
      if (!witness) continue;
      if (marked[*witness]) {
        ++counters.f;
      } else {
        ++counters.c;
      }
    }
  }
}

}  // namespace

void count_column(KnowledgeBase& kb, const PreparedTuples& tuples, std::size_t pos, Phase phase,
                  std::size_t jobs) {
  const Snapshot& snap = kb.snapshot();
  if (jobs <= 1 || tuples.size() < 2) {
    count_range(snap, tuples, pos, phase, 0, tuples.size(), kb.live_counters());
    return;
  }
  std::vector<std::vector<UsageCounters>> partial(
      std::min(jobs, tuples.size()), std::vector<UsageCounters>(kb.live_counters().size()));
  parallel_chunks(tuples.size(), jobs, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    count_range(snap, tuples, pos, phase, begin, end, partial[chunk]);
  });
  auto live = kb.live_counters();
  for (const auto& p : partial) {
    for (std::size_t id = 0; id < live.size(); ++id) live[id] += p[id];
  }
}

namespace {

std::map<Asn, Classification> classify_all(const PreparedTuples& tuples,
                                           std::span<const UsageCounters> counters,
                                           const Thresholds& th) {
  std::map<Asn, Classification> result;
  for (AsnId id = 0; id < tuples.asn_count(); ++id) {
    result.emplace(tuples.asn(id), get_class(tuples.asn(id), counters[id], th));
  }
  return result;
}

}  // namespace

std::map<Asn, Classification> run_inference(const PreparedTuples& tuples,
                                            const InferenceConfig& cfg,
                                            const PhaseObserver& observer) {
  cfg.thresholds.validate();
  if (cfg.max_column == 0) throw std::invalid_argument("max_column must be at least 1");
  KnowledgeBase kb(tuples.asn_count());
  const std::size_t columns = std::min(cfg.max_column, tuples.max_path_length());
  for (std::size_t pos = 0; pos < columns; ++pos) {
    for (Phase phase : {Phase::Tagging, Phase::Forwarding}) {
      kb.refresh_snapshot(cfg.thresholds);
      count_column(kb, tuples, pos, phase, cfg.jobs);
      if (observer) observer(pos, phase, kb);
    }
  }
  return classify_all(tuples, kb.live_counters(), cfg.thresholds);
}

std::map<Asn, Classification> run_inference(std::span<const RouteTuple> tuples,
                                            const InferenceConfig& cfg) {
  return run_inference(PreparedTuples(tuples), cfg);
}

std::map<Asn, Classification> run_inference_rowbased(const PreparedTuples& tuples,
                                                     const InferenceConfig& cfg) {
  cfg.thresholds.validate();
  std::vector<UsageCounters> counters(tuples.asn_count());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const auto path = tuples.path(i);
    const auto marked = tuples.marked(i);
    for (std::size_t pos = 0; pos < path.size(); ++pos) {
      if (marked[pos]) {
        ++counters[path[pos]].t;
      } else {
        ++counters[path[pos]].s;
      }
    }
  }
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const auto path = tuples.path(i);
    const auto marked = tuples.marked(i);
    for (std::size_t pos = path.size(); pos-- > 1;) {
      // pos is the downstream AS A[x+1]; pos - 1 is A[x].
      if (!marked[pos]) {
        ++counters[path[pos - 1]].c;
      } else {
        for (std::size_t j = 0; j < pos; ++j) ++counters[path[j]].f;
      }
    }
  }
  return classify_all(tuples, counters, cfg.thresholds);
}

}  // namespace commusage
