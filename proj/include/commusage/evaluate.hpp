#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "commusage/inference.hpp"
#include "commusage/model.hpp"
#include "commusage/simulate.hpp"

namespace commusage {

enum class Behavior : std::uint8_t { Tagging, Forwarding };

std::string_view to_string(Behavior behavior);

/// Assigned role (rows, with hidden/leaf sub-rows) against inferred class
/// (columns: positive class, negative class, undecided, none).
struct ConfusionMatrix {
  struct Row {
    std::string label;
    std::array<std::uint64_t, 4> cells{};
    std::uint64_t total() const noexcept { return cells[0] + cells[1] + cells[2] + cells[3]; }
  };

  Behavior behavior = Behavior::Tagging;
  std::vector<Row> rows;

  static constexpr std::size_t kPositive = 0;
  static constexpr std::size_t kNegative = 1;
  static constexpr std::size_t kUndecided = 2;
  static constexpr std::size_t kNone = 3;

  std::array<std::string_view, 4> column_labels() const;
  const Row& row(std::string_view label) const;
  std::uint64_t total() const noexcept;
};

struct ConfusionPair {
  ConfusionMatrix tagging;
  ConfusionMatrix forwarding;
};

/// Every AS of the ground truth lands in exactly one row and one column per
/// behavior. Row precedence: leaf > hidden > plain for forwarding, hidden >
/// plain for tagging. ASes absent from `cls` count as none.
ConfusionPair confusion(const GroundTruth& gt, const std::map<Asn, Classification>& cls);

/// How a definite class is scored for precision.
enum class PrecisionConvention : std::uint8_t {
  /// Every AS with a definite class counts; a selective tagger is never wrong.
  AllDefinite,
  /// Hidden and leaf rows are left out; a selective tagger inferred silent
  /// is wrong, inferred tagger is correct.
  VisibleOnly,
};

struct Metrics {
  Behavior behavior = Behavior::Tagging;
  std::optional<double> recall;
  std::optional<double> precision;
  std::uint64_t eligible = 0;          // recall denominator
  std::uint64_t eligible_correct = 0;  // recall numerator
  std::uint64_t definite = 0;          // scored definite classes
  std::uint64_t correct = 0;
  std::uint64_t wrong = 0;
};

/// Recall over ASes whose role is consistent (not selective), not hidden
/// and, for forwarding, not leaf; undecided and none count as misses.
/// Precision per `convention`. Metrics with a zero denominator are absent.
Metrics precision_recall(const GroundTruth& gt, const std::map<Asn, Classification>& cls,
                         Behavior behavior,
                         PrecisionConvention convention = PrecisionConvention::AllDefinite);

/// Class-string histogram in the full / partial / none-undecided grouping.
struct ClassSummary {
  std::map<std::string, std::uint64_t> by_class;  // "tf", "nn", "ut", ...
  std::uint64_t full = 0;                          // tc sc tf sf
  std::uint64_t partial = 0;                       // tn sn nc nf
  std::uint64_t none = 0;                          // nn
  std::uint64_t tagging_undecided = 0;             // u* except uu
  std::uint64_t forwarding_undecided = 0;          // *u except uu
  std::uint64_t both_undecided = 0;                // uu
};

ClassSummary summarize_classes(const std::map<Asn, Classification>& cls);

struct SweepRange {
  double from = 0.50;
  double to = 1.00;
  double step = 0.01;

  /// Throws std::invalid_argument for an inverted range, a non-positive
  /// step, or bounds outside [0.5, 1.0].
  void validate() const;
  /// Thresholds from `from` to `to` inclusive, each rounded to 1e-9.
  std::vector<double> thresholds() const;
};

/// Which thresholds a sweep varies; the others keep the base config value.
enum class SweepMode : std::uint8_t { Global, TaggingOnly, ForwardingOnly };

struct RocPoint {
  double threshold = 0;
  Behavior behavior = Behavior::Tagging;
  std::optional<double> tpr;
  std::optional<double> fpr;
};

/// Reruns inference per threshold. Positives are eligible taggers
/// (forwards); negatives eligible silents (cleaners). Output is ordered by
/// threshold, tagging before forwarding.
std::vector<RocPoint> roc_sweep(const PreparedTuples& tuples, const GroundTruth& gt,
                                const SweepRange& range, const InferenceConfig& base,
                                SweepMode mode = SweepMode::Global, std::size_t jobs = 1);

/// Thresholds for one sweep step under `mode`.
Thresholds sweep_thresholds(const Thresholds& base, double value, SweepMode mode);

/// Per collector-peer totals of community occurrences by origin class over
/// unfiltered community sets: [peer, foreign, stray, private].
std::map<Asn, std::array<std::uint64_t, 4>> peer_community_profile(
    std::span<const RouteTuple> tuples);

void write_confusion(std::ostream& out, const ConfusionMatrix& m);
void write_metrics(std::ostream& out, std::span<const Metrics> metrics);
void write_class_summary(std::ostream& out, const ClassSummary& summary);
void write_roc(std::ostream& out, std::span<const RocPoint> points);
void write_peer_profile(std::ostream& out,
                        const std::map<Asn, std::array<std::uint64_t, 4>>& profile);

}  // namespace commusage
