#include "commusage/evaluate.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "commusage/parallel.hpp"
#include "commusage/sanitize.hpp"

namespace commusage {

std::string_view to_string(Behavior behavior) {
  return behavior == Behavior::Tagging ? "tagging" : "forwarding";
}

std::array<std::string_view, 4> ConfusionMatrix::column_labels() const {
  if (behavior == Behavior::Tagging) return {"tagger", "silent", "undecided", "none"};
  return {"forward", "cleaner", "undecided", "none"};
}

const ConfusionMatrix::Row& ConfusionMatrix::row(std::string_view label) const {
  for (const auto& r : rows) {
    if (r.label == label) return r;
  }
  throw std::out_of_range("no confusion row '" + std::string(label) + "'");
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& r : rows) sum += r.total();
  return sum;
}

namespace {

const Classification* lookup(const std::map<Asn, Classification>& cls, Asn asn) {
  auto it = cls.find(asn);
  return it == cls.end() ? nullptr : &it->second;
}

std::size_t tagging_column(const Classification* c) {
  if (!c) return ConfusionMatrix::kNone;
  switch (c->tagging) {
    case TaggingClass::Tagger: return ConfusionMatrix::kPositive;
    case TaggingClass::Silent: return ConfusionMatrix::kNegative;
    case TaggingClass::Undecided: return ConfusionMatrix::kUndecided;
    case TaggingClass::None: return ConfusionMatrix::kNone;
  }
  return ConfusionMatrix::kNone;
}

std::size_t forwarding_column(const Classification* c) {
  if (!c) return ConfusionMatrix::kNone;
  switch (c->forwarding) {
    case ForwardingClass::Forward: return ConfusionMatrix::kPositive;
    case ForwardingClass::Cleaner: return ConfusionMatrix::kNegative;
    case ForwardingClass::Undecided: return ConfusionMatrix::kUndecided;
    case ForwardingClass::None: return ConfusionMatrix::kNone;
  }
  return ConfusionMatrix::kNone;
}

bool tagging_matches(TaggingRole role, TaggingClass inferred) {
  return (role == TaggingRole::Tagger && inferred == TaggingClass::Tagger) ||
         (role == TaggingRole::Silent && inferred == TaggingClass::Silent);
}

bool forwarding_matches(ForwardingRole role, ForwardingClass inferred) {
  return (role == ForwardingRole::Forward && inferred == ForwardingClass::Forward) ||
         (role == ForwardingRole::Cleaner && inferred == ForwardingClass::Cleaner);
}

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionPair confusion(const GroundTruth& gt, const std::map<Asn, Classification>& cls) {
  ConfusionPair out;
  out.tagging.behavior = Behavior::Tagging;
  for (const char* label : {"tagger", "silent", "selective", "tagger (hidden)", "silent (hidden)",
                            "selective (hidden)"}) {
    out.tagging.rows.push_back({label, {}});
  }
  out.forwarding.behavior = Behavior::Forwarding;
  for (const char* label : {"forward", "cleaner", "forward (hidden)", "cleaner (hidden)",
                            "forward (leaf)", "cleaner (leaf)"}) {
    out.forwarding.rows.push_back({label, {}});
  }

  for (const auto& [asn, role] : gt.roles) {
    const Classification* c = lookup(cls, asn);

    std::size_t trow = static_cast<std::size_t>(role.tagging);
    if (gt.tagging_hidden.contains(asn)) trow += 3;
    ++out.tagging.rows[trow].cells[tagging_column(c)];

    std::size_t frow = static_cast<std::size_t>(role.forwarding);
    if (gt.leaf.contains(asn)) {
      frow += 4;
    } else if (gt.forwarding_hidden.contains(asn)) {
      frow += 2;
    }
    ++out.forwarding.rows[frow].cells[forwarding_column(c)];
  }
  return out;
}

Metrics precision_recall(const GroundTruth& gt, const std::map<Asn, Classification>& cls,
                         Behavior behavior, PrecisionConvention convention) {
  Metrics m;
  m.behavior = behavior;
  const bool visible_only = convention == PrecisionConvention::VisibleOnly;
  for (const auto& [asn, role] : gt.roles) {
    const Classification* c = lookup(cls, asn);
    if (behavior == Behavior::Tagging) {
      const TaggingClass inferred = c ? c->tagging : TaggingClass::None;
      const bool hidden = gt.tagging_hidden.contains(asn);
      const bool selective = role.tagging == TaggingRole::Selective;
      const bool match = tagging_matches(role.tagging, inferred);
      if (!selective && !hidden) {
        ++m.eligible;
        if (match) ++m.eligible_correct;
      }
      const bool definite = inferred == TaggingClass::Tagger || inferred == TaggingClass::Silent;
      if (!definite || (visible_only && hidden)) continue;
      ++m.definite;
      bool correct = match;
      if (selective) correct = !visible_only || inferred == TaggingClass::Tagger;
      ++(correct ? m.correct : m.wrong);
    } else {
      const ForwardingClass inferred = c ? c->forwarding : ForwardingClass::None;
      const bool excluded = gt.forwarding_hidden.contains(asn) || gt.leaf.contains(asn);
      const bool match = forwarding_matches(role.forwarding, inferred);
      if (!excluded) {
        ++m.eligible;
        if (match) ++m.eligible_correct;
      }
      const bool definite =
          inferred == ForwardingClass::Forward || inferred == ForwardingClass::Cleaner;
      if (!definite || (visible_only && excluded)) continue;
      ++m.definite;
      ++(match ? m.correct : m.wrong);
    }
  }
  m.recall = ratio(m.eligible_correct, m.eligible);
  m.precision = ratio(m.correct, m.definite);
  return m;
}

ClassSummary summarize_classes(const std::map<Asn, Classification>& cls) {
  ClassSummary s;
  for (const auto& [asn, c] : cls) {
    ++s.by_class[render_class(c)];
    const bool tu = c.tagging == TaggingClass::Undecided;
    const bool fu = c.forwarding == ForwardingClass::Undecided;
    const bool tn = c.tagging == TaggingClass::None;
    const bool fn = c.forwarding == ForwardingClass::None;
    if (tu && fu) {
      ++s.both_undecided;
    } else if (tu) {
      ++s.tagging_undecided;
    } else if (fu) {
      ++s.forwarding_undecided;
    } else if (tn && fn) {
      ++s.none;
    } else if (tn || fn) {
      ++s.partial;
    } else {
      ++s.full;
    }
  }
  return s;
}

void SweepRange::validate() const {
  if (!(step > 0)) throw std::invalid_argument("sweep step must be positive");
  if (from > to) throw std::invalid_argument("sweep range is inverted");
  if (from < 0.5 || to > 1.0) throw std::invalid_argument("sweep bounds outside [0.5, 1.0]");
}

std::vector<double> SweepRange::thresholds() const {
  validate();
  const auto count = static_cast<std::size_t>(std::llround((to - from) / step)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double value = std::round((from + static_cast<double>(i) * step) * 1e9) / 1e9;
    if (value > to + 1e-12) break;
    out.push_back(value);
  }
  return out;
}

Thresholds sweep_thresholds(const Thresholds& base, double value, SweepMode mode) {
  Thresholds th = base;
  if (mode != SweepMode::ForwardingOnly) th.tagger = th.silent = value;
  if (mode != SweepMode::TaggingOnly) th.forward = th.cleaner = value;
  return th;
}

std::vector<RocPoint> roc_sweep(const PreparedTuples& tuples, const GroundTruth& gt,
                                const SweepRange& range, const InferenceConfig& base,
                                SweepMode mode, std::size_t jobs) {
  const auto thresholds = range.thresholds();
  std::vector<RocPoint> points(thresholds.size() * 2);
  parallel_chunks(thresholds.size(), jobs, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      InferenceConfig cfg = base;
      cfg.jobs = 1;
      cfg.thresholds = sweep_thresholds(base.thresholds, thresholds[i], mode);
      const auto cls = run_inference(tuples, cfg);

      std::uint64_t tpos = 0, tp = 0, tneg = 0, tfp = 0;
      std::uint64_t fpos = 0, fp_tp = 0, fneg = 0, ffp = 0;
      for (const auto& [asn, role] : gt.roles) {
        const Classification* c = lookup(cls, asn);
        if (!gt.tagging_hidden.contains(asn)) {
          const bool inferred_tagger = c && c->tagging == TaggingClass::Tagger;
          if (role.tagging == TaggingRole::Tagger) {
            ++tpos;
            tp += inferred_tagger;
          } else if (role.tagging == TaggingRole::Silent) {
            ++tneg;
            tfp += inferred_tagger;
          }
        }
        if (!gt.forwarding_hidden.contains(asn) && !gt.leaf.contains(asn)) {
          const bool inferred_forward = c && c->forwarding == ForwardingClass::Forward;
          if (role.forwarding == ForwardingRole::Forward) {
            ++fpos;
            fp_tp += inferred_forward;
          } else {
            ++fneg;
            ffp += inferred_forward;
          }
        }
      }
      points[2 * i] = {thresholds[i], Behavior::Tagging, ratio(tp, tpos), ratio(tfp, tneg)};
      points[2 * i + 1] = {thresholds[i], Behavior::Forwarding, ratio(fp_tp, fpos),
                           ratio(ffp, fneg)};
    }
  });
  return points;
}

std::map<Asn, std::array<std::uint64_t, 4>> peer_community_profile(
    std::span<const RouteTuple> tuples) {
  std::map<Asn, std::array<std::uint64_t, 4>> profile;
  for (const auto& t : tuples) {
    if (t.path.empty()) continue;
    auto& row = profile[t.path.peer()];
    for (const auto& c : t.communities) {
      ++row[static_cast<std::size_t>(classify_community_origin(c, t.path))];
    }
  }
  return profile;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(v);
}

std::string format_fixed(std::optional<double> v, int digits) {
  if (!v) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, *v);
  return buf;
}

}  // namespace

void write_confusion(std::ostream& out, const ConfusionMatrix& m) {
  const auto labels = m.column_labels();
  out << "#behavior=" << to_string(m.behavior) << '\n';
  out << "#role\t" << labels[0] << '\t' << labels[1] << '\t' << labels[2] << '\t' << labels[3]
      << '\n';
  for (const auto& row : m.rows) {
    out << row.label;
    for (auto cell : row.cells) out << '\t' << cell;
    out << '\n';
  }
}

void write_metrics(std::ostream& out, std::span<const Metrics> metrics) {
  out << "#behavior\trecall\tprecision\teligible\teligible_correct\tdefinite\tcorrect\twrong\n";
  for (const auto& m : metrics) {
    out << to_string(m.behavior) << '\t' << format_fixed(m.recall, 2) << '\t'
        << format_fixed(m.precision, 2) << '\t' << m.eligible << '\t' << m.eligible_correct << '\t'
        << m.definite << '\t' << m.correct << '\t' << m.wrong << '\n';
  }
}

void write_class_summary(std::ostream& out, const ClassSummary& s) {
  out << "#class\tcount\n";
  for (const auto& [name, count] : s.by_class) out << name << '\t' << count << '\n';
  out << "#group\tcount\n";
  out << "full\t" << s.full << '\n'
      << "partial\t" << s.partial << '\n'
      << "none\t" << s.none << '\n'
      << "tagging_undecided\t" << s.tagging_undecided << '\n'
      << "forwarding_undecided\t" << s.forwarding_undecided << '\n'
      << "both_undecided\t" << s.both_undecided << '\n';
}

void write_roc(std::ostream& out, std::span<const RocPoint> points) {
  out << "#threshold\tbehavior\ttpr\tfpr\n";
  for (const auto& p : points) {
    out << format_double(p.threshold) << '\t' << to_string(p.behavior) << '\t'
        << format_fixed(p.tpr, 6) << '\t' << format_fixed(p.fpr, 6) << '\n';
  }
}

void write_peer_profile(std::ostream& out,
                        const std::map<Asn, std::array<std::uint64_t, 4>>& profile) {
  out << "#asn\tpeer\tforeign\tstray\tprivate\n";
  for (const auto& [asn, counts] : profile) {
    out << asn.value << '\t' << counts[0] << '\t' << counts[1] << '\t' << counts[2] << '\t'
        << counts[3] << '\n';
  }
}

}  // namespace commusage
