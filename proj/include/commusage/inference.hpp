#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "commusage/model.hpp"

namespace commusage {

/// Dense index of an ASN inside a PreparedTuples instance.
using AsnId = std::uint32_t;

/// Route tuples compiled for the column passes. ASNs are interned to dense
/// ids and every path position carries a flag telling whether the tuple's
/// community set holds a community whose upper field is the ASN at that
/// position. Stray and private communities never set a flag.
class PreparedTuples {
 public:
  PreparedTuples() = default;
  explicit PreparedTuples(std::span<const RouteTuple> tuples);

  /// Appends one tuple; lets callers stream input without keeping RouteTuples.
  void add(const RouteTuple& tuple);

  std::size_t size() const noexcept { return offsets_.size() - 1; }
  std::span<const AsnId> path(std::size_t tuple) const;
  std::span<const std::uint8_t> marked(std::size_t tuple) const;

  std::size_t asn_count() const noexcept { return asns_.size(); }
  Asn asn(AsnId id) const { return asns_[id]; }
  std::optional<AsnId> find(Asn asn) const;
  std::size_t max_path_length() const noexcept { return max_path_length_; }

 private:
  std::vector<Asn> asns_;
  std::unordered_map<Asn, AsnId> ids_;
  std::vector<AsnId> path_ids_;
  std::vector<std::uint8_t> marked_;
  std::vector<std::size_t> offsets_{0};
  std::size_t max_path_length_ = 0;
};

bool is_tagger(const UsageCounters& c, const Thresholds& th) noexcept;
bool is_silent(const UsageCounters& c, const Thresholds& th) noexcept;
bool is_forward(const UsageCounters& c, const Thresholds& th) noexcept;
bool is_cleaner(const UsageCounters& c, const Thresholds& th) noexcept;

TaggingClass get_tagging(const UsageCounters& c, const Thresholds& th) noexcept;
ForwardingClass get_forwarding(const UsageCounters& c, const Thresholds& th) noexcept;
Classification get_class(Asn asn, const UsageCounters& c, const Thresholds& th) noexcept;

/// Counters frozen at a phase boundary, with the tagger and forward
/// predicates evaluated once per AS. All condition checks read a snapshot.
class Snapshot {
 public:
  Snapshot() = default;
  Snapshot(std::span<const UsageCounters> counters, const Thresholds& th);

  const UsageCounters& counters(AsnId id) const { return counters_[id]; }
  bool is_tagger(AsnId id) const { return (flags_[id] & kTagger) != 0; }
  bool is_forward(AsnId id) const { return (flags_[id] & kForward) != 0; }
  std::size_t size() const noexcept { return counters_.size(); }

 private:
  static constexpr std::uint8_t kTagger = 1;
  static constexpr std::uint8_t kForward = 2;
  std::vector<UsageCounters> counters_;
  std::vector<std::uint8_t> flags_;
};

/// Live per-AS counters plus the snapshot conditions are evaluated against.
class KnowledgeBase {
 public:
  explicit KnowledgeBase(std::size_t asn_count) : live_(asn_count), snapshot_(live_, Thresholds{}) {}

  UsageCounters& live(AsnId id) { return live_[id]; }
  const UsageCounters& live(AsnId id) const { return live_[id]; }
  std::span<const UsageCounters> live_counters() const noexcept { return live_; }
  std::span<UsageCounters> live_counters() noexcept { return live_; }

  const Snapshot& snapshot() const noexcept { return snapshot_; }
  void refresh_snapshot(const Thresholds& th) { snapshot_ = Snapshot(live_, th); }

 private:
  std::vector<UsageCounters> live_;
  Snapshot snapshot_;
};

/// Every AS upstream of `pos` is forward. Vacuously true at the peer.
bool cond1(const Snapshot& snap, std::span<const AsnId> path, std::size_t pos);

/// Nearest downstream tagger reachable from `pos` through forward ASes.
/// The scan stops at the first AS that is neither tagger nor forward; an AS
/// that is both is taken as the witness.
std::optional<std::size_t> find_downstream_tagger(const Snapshot& snap,
                                                  std::span<const AsnId> path,
                                                  std::size_t pos);

enum class Phase : std::uint8_t { Tagging, Forwarding };

/// Counts one (column, phase) step into kb's live counters, reading only
/// kb.snapshot(). `pos` is zero-based (the peer column is 0).
void count_column(KnowledgeBase& kb, const PreparedTuples& tuples, std::size_t pos, Phase phase,
                  std::size_t jobs = 1);

struct InferenceConfig {
  Thresholds thresholds;
  std::size_t max_column = 7;
  std::size_t jobs = 1;
};

/// Called after each (column, phase) step with the knowledge base state.
using PhaseObserver = std::function<void(std::size_t pos, Phase phase, const KnowledgeBase& kb)>;

/// Column-based inference: for each column, a tagging pass then a forwarding
/// pass, each against a fresh snapshot. Returns a classification for every
/// ASN appearing in any path.
std::map<Asn, Classification> run_inference(const PreparedTuples& tuples,
                                            const InferenceConfig& cfg,
                                            const PhaseObserver& observer = {});
std::map<Asn, Classification> run_inference(std::span<const RouteTuple> tuples,
                                            const InferenceConfig& cfg);

/// Row-based baseline without conditions, kept for comparison. Pass one
/// counts tagging at every position. Pass two walks each path from the
/// origin side: when the community of A[x+1] is missing, A[x] gets a cleaner
/// count, otherwise every AS from the peer up to A[x] gets a forward count.
std::map<Asn, Classification> run_inference_rowbased(const PreparedTuples& tuples,
                                                     const InferenceConfig& cfg);

}  // namespace commusage
