#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "commusage/evaluate.hpp"
#include "commusage/inference.hpp"
#include "commusage/sanitize.hpp"
#include "commusage/simulate.hpp"
#include "commusage/text_format.hpp"

namespace commusage::cli {
namespace {

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

// Output files are written through this so a failed run leaves nothing
// half-written behind.
class OutputFile {
 public:
  explicit OutputFile(std::string path) : path_(std::move(path)), out_(path_) {
    if (!out_) throw IoError("cannot open '" + path_ + "' for writing");
  }
  ~OutputFile() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      fs::remove(path_, ec);
    }
  }
  OutputFile(const OutputFile&) = delete;
  OutputFile& operator=(const OutputFile&) = delete;

  std::ostream& stream() { return out_; }
  void commit() {
    out_.close();
    if (!out_) throw IoError("failed writing '" + path_ + "'");
    committed_ = true;
  }

 private:
  std::string path_;
  std::ofstream out_;
  bool committed_ = false;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int precision = 1; precision <= 17; ++precision) {
    char shorter[32];
    std::snprintf(shorter, sizeof shorter, "%.*g", precision, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& args)
      : start_(std::chrono::steady_clock::now()) {
    set("command", std::move(command));
    set("version", kVersion);
    std::string joined;
    for (std::size_t i = 1; i < args.size(); ++i) {
      if (i > 1) joined += ' ';
      joined += args[i];
    }
    set("args", joined);
  }

  void set(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
  void set(const std::string& key, double value) { set(key, format_double(value)); }
  void set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }

  void set_thresholds(const Thresholds& th) {
    set("threshold.tagger", th.tagger);
    set("threshold.silent", th.silent);
    set("threshold.forward", th.forward);
    set("threshold.cleaner", th.cleaner);
    set("min_samples", th.min_samples);
  }

  void write(const std::string& output_path) {
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", elapsed.count());
    OutputFile file(output_path + ".manifest");
    for (const auto& [key, value] : entries_) file.stream() << key << '=' << value << '\n';
    file.stream() << "wall_time_s=" << wall << '\n';
    file.commit();
  }

 private:
  std::chrono::steady_clock::time_point start_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct SanitizeCounts {
  std::uint64_t read = 0;
  std::uint64_t dropped = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t kept = 0;
};

// Streams route records through sanitation and deduplication, handing
// every surviving tuple to `keep` and every dropped record to `drop`.
template <class Keep, class Drop>
SanitizeCounts stream_tuples(std::istream& in, const AllocationTable* alloc, Keep&& keep,
                             Drop&& drop) {
  SanitizeCounts counts;
  TupleDeduplicator dedup;
  for_each_route_record(in, [&](RawRouteRecord&& record, std::string_view line, std::size_t) {
    ++counts.read;
    auto outcome = sanitize_record(record, alloc);
    if (auto* reason = std::get_if<DropReason>(&outcome)) {
      ++counts.dropped;
      drop(*reason, line);
      return;
    }
    auto& tuple = std::get<RouteTuple>(outcome);
    if (!dedup.insert(tuple)) {
      ++counts.duplicates;
      return;
    }
    ++counts.kept;
    keep(tuple);
  });
  return counts;
}

void record_counts(Manifest& manifest, const SanitizeCounts& counts) {
  manifest.set("tuples.read", counts.read);
  manifest.set("tuples.dropped", counts.dropped);
  manifest.set("tuples.deduplicated", counts.duplicates);
  manifest.set("tuples.kept", counts.kept);
}

PreparedTuples load_prepared(const std::string& path, SanitizeCounts* counts) {
  auto in = open_input(path);
  PreparedTuples prepared;
  *counts = stream_tuples(
      in, nullptr, [&](const RouteTuple& t) { prepared.add(t); }, [](DropReason, std::string_view) {});
  return prepared;
}

std::vector<RouteTuple> load_tuples(const std::string& path, SanitizeCounts* counts) {
  auto in = open_input(path);
  std::vector<RouteTuple> tuples;
  *counts = stream_tuples(
      in, nullptr, [&](const RouteTuple& t) { tuples.push_back(t); },
      [](DropReason, std::string_view) {});
  return tuples;
}

void check_jobs(std::size_t jobs) {
  if (jobs == 0) throw std::invalid_argument("--jobs must be at least 1");
}

// Options shared by classify and sweep.
struct InferenceOptions {
  double threshold = 0.99;
  std::optional<double> tagger, silent, forward, cleaner;
  std::size_t max_column = 7;
  std::uint64_t min_samples = 1;
  std::size_t jobs = 1;

  void add_to(CLI::App& cmd, bool with_shares) {
    if (with_shares) {
      cmd.add_option("--threshold", threshold, "Share threshold for all four classifiers")
          ->capture_default_str();
      cmd.add_option("--tagger", tagger, "Tagger share threshold");
      cmd.add_option("--silent", silent, "Silent share threshold");
      cmd.add_option("--forward", forward, "Forward share threshold");
      cmd.add_option("--cleaner", cleaner, "Cleaner share threshold");
    }
    cmd.add_option("--max-column", max_column, "Number of path columns to process")
        ->capture_default_str();
    cmd.add_option("--min-samples", min_samples, "Minimum observations for a definite class")
        ->capture_default_str();
    cmd.add_option("--jobs", jobs, "Worker threads")->capture_default_str();
  }

  InferenceConfig config() const {
    InferenceConfig cfg;
    cfg.thresholds = Thresholds::uniform(threshold, min_samples);
    if (tagger) cfg.thresholds.tagger = *tagger;
    if (silent) cfg.thresholds.silent = *silent;
    if (forward) cfg.thresholds.forward = *forward;
    if (cleaner) cfg.thresholds.cleaner = *cleaner;
    cfg.thresholds.validate();
    if (max_column == 0) throw std::invalid_argument("--max-column must be at least 1");
    check_jobs(jobs);
    cfg.max_column = max_column;
    cfg.jobs = jobs;
    return cfg;
  }
};

GroundTruth load_roles(const std::string& path) {
  auto in = open_input(path);
  return read_roles(in);
}

void require_in_roles(const GroundTruth& gt, Asn asn, const std::string& source) {
  if (!gt.roles.contains(asn)) {
    throw std::invalid_argument("AS" + to_string(asn) + " from " + source +
                                " has no assigned role");
  }
}

void check_tuple_universe(const GroundTruth& gt, const std::string& tuples_path) {
  SanitizeCounts counts;
  auto in = open_input(tuples_path);
  stream_tuples(
      in, nullptr,
      [&](const RouteTuple& t) {
        for (Asn asn : t.path) require_in_roles(gt, asn, tuples_path);
      },
      [](DropReason, std::string_view) {});
}

int cmd_sanitize(const std::vector<std::string>& args, const std::string& in_path,
                 const std::string& out_path, const std::string& alloc_path,
                 std::string drop_path) {
  Manifest manifest("sanitize", args);
  manifest.set("input", in_path);
  if (drop_path.empty()) drop_path = out_path + ".drops";

  std::optional<AllocationTable> alloc;
  if (!alloc_path.empty()) {
    auto alloc_in = open_input(alloc_path);
    alloc = read_allocation_table(alloc_in);
    manifest.set("alloc", alloc_path);
    manifest.set("alloc.size", std::uint64_t{alloc->size()});
  }

  auto in = open_input(in_path);
  OutputFile out(out_path);
  OutputFile drops(drop_path);
  auto counts = stream_tuples(
      in, alloc ? &*alloc : nullptr,
      [&](const RouteTuple& t) { out.stream() << format_route_tuple(t) << '\n'; },
      [&](DropReason reason, std::string_view line) {
        drops.stream() << format_drop_line(reason, line) << '\n';
      });
  out.commit();
  drops.commit();
  manifest.set("drop_log", drop_path);
  record_counts(manifest, counts);
  manifest.write(out_path);
  return kExitOk;
}

int cmd_classify(const std::vector<std::string>& args, const std::string& in_path,
                 const std::string& out_path, const InferenceOptions& opts, bool rowbased) {
  const auto cfg = opts.config();
  Manifest manifest("classify", args);
  manifest.set("input", in_path);
  manifest.set_thresholds(cfg.thresholds);
  manifest.set("max_column", std::uint64_t{cfg.max_column});
  manifest.set("algorithm", rowbased ? "rowbased" : "column");
  manifest.set("jobs", std::uint64_t{cfg.jobs});

  SanitizeCounts counts;
  auto prepared = load_prepared(in_path, &counts);
  auto result = rowbased ? run_inference_rowbased(prepared, cfg) : run_inference(prepared, cfg);

  OutputFile out(out_path);
  write_classifications(out.stream(), result);
  out.commit();
  record_counts(manifest, counts);
  manifest.set("ases", std::uint64_t{result.size()});
  manifest.write(out_path);
  return kExitOk;
}

struct SimulateOptions {
  std::string substrate, scenario, out_tuples, out_roles, rel;
  std::uint64_t seed = 0;
  double noise_prob = 0.05;
  double noisy_share = 0.5;
  double selective_share = 0.5;
  std::size_t jobs = 1;
};

int cmd_simulate(const std::vector<std::string>& args, const SimulateOptions& opts) {
  check_jobs(opts.jobs);
  auto kind = parse_scenario_kind(opts.scenario);
  if (!kind) throw std::invalid_argument("unknown scenario '" + opts.scenario + "'");
  Scenario scenario;
  scenario.kind = *kind;
  scenario.seed = opts.seed;
  scenario.noise_prob = opts.noise_prob;
  scenario.noisy_as_share = opts.noisy_share;
  scenario.selective_share = opts.selective_share;
  scenario.validate();

  Manifest manifest("simulate", args);
  manifest.set("substrate", opts.substrate);
  manifest.set("scenario", std::string(to_string(scenario.kind)));
  manifest.set("seed", opts.seed);
  manifest.set("noise_prob", scenario.noise_prob);
  manifest.set("noisy_share", scenario.noisy_as_share);
  manifest.set("selective_share", scenario.selective_share);
  manifest.set("jobs", std::uint64_t{opts.jobs});

  RelationshipTable rel;
  if (!opts.rel.empty()) {
    auto rel_in = open_input(opts.rel);
    rel = read_relationships(rel_in);
    manifest.set("rel", opts.rel);
  }
  if (scenario.selective() && rel.empty()) throw MissingRelationships();

  SanitizeCounts counts;
  auto substrate = load_tuples(opts.substrate, &counts);
  auto gt = generate_ground_truth(substrate, scenario, rel, opts.jobs);

  OutputFile tuples_out(opts.out_tuples);
  write_route_tuples(tuples_out.stream(), gt.synthetic_tuples);
  OutputFile roles_out(opts.out_roles);
  write_roles(roles_out.stream(), gt);
  tuples_out.commit();
  roles_out.commit();

  record_counts(manifest, counts);
  manifest.set("synthetic_tuples", std::uint64_t{gt.synthetic_tuples.size()});
  manifest.set("ases", std::uint64_t{gt.roles.size()});
  manifest.set("tagging_hidden", std::uint64_t{gt.tagging_hidden.size()});
  manifest.set("forwarding_hidden", std::uint64_t{gt.forwarding_hidden.size()});
  manifest.set("leaf", std::uint64_t{gt.leaf.size()});
  manifest.set("unknown_relationships", gt.unknown_relationships);
  manifest.write(opts.out_tuples);
  return kExitOk;
}

std::optional<PrecisionConvention> parse_convention(std::string_view name) {
  if (name == "all-definite") return PrecisionConvention::AllDefinite;
  if (name == "visible-only") return PrecisionConvention::VisibleOnly;
  return std::nullopt;
}

std::vector<Behavior> parse_behaviors(std::string_view name) {
  if (name == "tagging") return {Behavior::Tagging};
  if (name == "forwarding") return {Behavior::Forwarding};
  if (name == "both") return {Behavior::Tagging, Behavior::Forwarding};
  throw std::invalid_argument("unknown behavior '" + std::string(name) + "'");
}

int cmd_evaluate(const std::vector<std::string>& args, const std::string& tuples_path,
                 const std::string& roles_path, const std::string& cls_path,
                 const std::string& prefix, const std::string& behavior_name,
                 const std::string& convention_name) {
  const auto behaviors = parse_behaviors(behavior_name);
  auto convention = parse_convention(convention_name);
  if (!convention) throw std::invalid_argument("unknown precision convention '" + convention_name + "'");

  auto gt = load_roles(roles_path);
  std::map<Asn, Classification> cls;
  {
    auto in = open_input(cls_path);
    cls = read_classifications(in);
  }
  for (const auto& [asn, c] : cls) require_in_roles(gt, asn, cls_path);
  check_tuple_universe(gt, tuples_path);

  Manifest manifest("evaluate", args);
  manifest.set("tuples", tuples_path);
  manifest.set("roles", roles_path);
  manifest.set("classification", cls_path);
  manifest.set("behavior", behavior_name);
  manifest.set("precision", convention_name);

  const auto matrices = confusion(gt, cls);
  std::vector<Metrics> metrics;
  std::vector<std::unique_ptr<OutputFile>> files;
  for (Behavior b : behaviors) {
    files.push_back(std::make_unique<OutputFile>(prefix + "." + std::string(to_string(b)) + ".tsv"));
    write_confusion(files.back()->stream(),
                    b == Behavior::Tagging ? matrices.tagging : matrices.forwarding);
    metrics.push_back(precision_recall(gt, cls, b, *convention));
  }
  files.push_back(std::make_unique<OutputFile>(prefix + ".metrics.tsv"));
  write_metrics(files.back()->stream(), metrics);
  files.push_back(std::make_unique<OutputFile>(prefix + ".classes.tsv"));
  write_class_summary(files.back()->stream(), summarize_classes(cls));
  for (auto& f : files) f->commit();

  manifest.set("ases", std::uint64_t{gt.roles.size()});
  manifest.set("classified", std::uint64_t{cls.size()});
  manifest.write(prefix);
  return kExitOk;
}

std::optional<SweepMode> parse_sweep_mode(std::string_view name) {
  if (name == "global") return SweepMode::Global;
  if (name == "tagging") return SweepMode::TaggingOnly;
  if (name == "forwarding") return SweepMode::ForwardingOnly;
  return std::nullopt;
}

int cmd_sweep(const std::vector<std::string>& args, const std::string& tuples_path,
              const std::string& roles_path, const std::string& out_path, const SweepRange& range,
              const std::string& mode_name, const InferenceOptions& opts) {
  range.validate();
  auto mode = parse_sweep_mode(mode_name);
  if (!mode) throw std::invalid_argument("unknown sweep mode '" + mode_name + "'");
  const auto cfg = opts.config();

  auto gt = load_roles(roles_path);
  SanitizeCounts counts;
  auto prepared = load_prepared(tuples_path, &counts);
  for (AsnId id = 0; id < prepared.asn_count(); ++id) {
    require_in_roles(gt, prepared.asn(id), tuples_path);
  }

  Manifest manifest("sweep", args);
  manifest.set("tuples", tuples_path);
  manifest.set("roles", roles_path);
  manifest.set("from", range.from);
  manifest.set("to", range.to);
  manifest.set("step", range.step);
  manifest.set("mode", mode_name);
  manifest.set_thresholds(cfg.thresholds);
  manifest.set("max_column", std::uint64_t{cfg.max_column});
  manifest.set("jobs", std::uint64_t{cfg.jobs});

  auto points = roc_sweep(prepared, gt, range, cfg, *mode, cfg.jobs);
  OutputFile out(out_path);
  write_roc(out.stream(), points);
  out.commit();
  record_counts(manifest, counts);
  manifest.set("points", std::uint64_t{points.size()});
  manifest.write(out_path);
  return kExitOk;
}

int cmd_profile(const std::vector<std::string>& args, const std::string& tuples_path,
                const std::string& out_path) {
  Manifest manifest("profile", args);
  manifest.set("tuples", tuples_path);
  SanitizeCounts counts;
  auto tuples = load_tuples(tuples_path, &counts);
  auto profile = peer_community_profile(tuples);
  OutputFile out(out_path);
  write_peer_profile(out.stream(), profile);
  out.commit();
  record_counts(manifest, counts);
  manifest.set("peers", std::uint64_t{profile.size()});
  manifest.write(out_path);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Infer BGP community usage (tagging and forwarding) per AS", "commusage"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough(false);

  std::function<int()> action;

  // sanitize
  std::string s_in, s_out, s_alloc, s_drops;
  auto* sanitize = app.add_subcommand("sanitize", "Clean and deduplicate raw route records");
  sanitize->add_option("input", s_in, "Raw route records")->required();
  sanitize->add_option("output", s_out, "Sanitized tuples")->required();
  sanitize->add_option("--alloc", s_alloc, "Allocated ASN list; records with others are dropped");
  sanitize->add_option("--drop-log", s_drops, "Drop log path (default: OUTPUT.drops)");
  sanitize->callback([&] { action = [&] { return cmd_sanitize(args, s_in, s_out, s_alloc, s_drops); }; });

  // classify
  std::string c_in, c_out;
  bool c_rowbased = false;
  InferenceOptions c_opts;
  auto* classify = app.add_subcommand("classify", "Infer per-AS tagging and forwarding classes");
  classify->add_option("input", c_in, "Route tuples")->required();
  classify->add_option("output", c_out, "Classification TSV")->required();
  c_opts.add_to(*classify, true);
  classify->add_flag("--rowbased", c_rowbased, "Use the row-based baseline without conditions");
  classify->callback([&] { action = [&] { return cmd_classify(args, c_in, c_out, c_opts, c_rowbased); }; });

  // simulate
  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Generate tuples with known community usage");
  simulate->add_option("substrate", sim.substrate, "Route tuples supplying the paths")->required();
  simulate->add_option("scenario", sim.scenario,
                       "alltf, alltc, random, random+noise, random-p or random-pp")
      ->required();
  simulate->add_option("out_tuples", sim.out_tuples, "Synthetic tuples")->required();
  simulate->add_option("out_roles", sim.out_roles, "Assigned roles")->required();
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--rel", sim.rel, "AS relationships (a|b|-1 or a|b|0)");
  simulate->add_option("--noise-prob", sim.noise_prob, "Noise probability")->capture_default_str();
  simulate->add_option("--noisy-share", sim.noisy_share, "Share of noisy ASes")->capture_default_str();
  simulate->add_option("--selective-share", sim.selective_share,
                       "Share of taggers that tag selectively")
      ->capture_default_str();
  simulate->add_option("--jobs", sim.jobs, "Worker threads")->capture_default_str();
  simulate->callback([&] { action = [&] { return cmd_simulate(args, sim); }; });

  // evaluate
  std::string e_tuples, e_roles, e_cls, e_prefix, e_behavior = "both", e_precision = "all-definite";
  auto* evaluate = app.add_subcommand("evaluate", "Compare a classification with assigned roles");
  evaluate->add_option("tuples", e_tuples, "Synthetic tuples")->required();
  evaluate->add_option("roles", e_roles, "Assigned roles")->required();
  evaluate->add_option("classification", e_cls, "Classification TSV")->required();
  evaluate->add_option("out_prefix", e_prefix, "Prefix for the output files")->required();
  evaluate->add_option("--behavior", e_behavior, "tagging, forwarding or both")->capture_default_str();
  evaluate->add_option("--precision", e_precision, "all-definite or visible-only")
      ->capture_default_str();
  evaluate->callback([&] {
    action = [&] {
      return cmd_evaluate(args, e_tuples, e_roles, e_cls, e_prefix, e_behavior, e_precision);
    };
  });

  // sweep
  std::string w_tuples, w_roles, w_out, w_mode = "global";
  SweepRange w_range;
  InferenceOptions w_opts;
  auto* sweep = app.add_subcommand("sweep", "Rerun inference over a threshold range (ROC)");
  sweep->add_option("tuples", w_tuples, "Synthetic tuples")->required();
  sweep->add_option("roles", w_roles, "Assigned roles")->required();
  sweep->add_option("output", w_out, "ROC TSV")->required();
  sweep->add_option("--from", w_range.from, "First threshold")->capture_default_str();
  sweep->add_option("--to", w_range.to, "Last threshold")->capture_default_str();
  sweep->add_option("--step", w_range.step, "Threshold step")->capture_default_str();
  sweep->add_option("--mode", w_mode, "global, tagging or forwarding")->capture_default_str();
  w_opts.add_to(*sweep, false);
  sweep->callback([&] {
    action = [&] { return cmd_sweep(args, w_tuples, w_roles, w_out, w_range, w_mode, w_opts); };
  });

  // profile
  std::string p_in, p_out;
  auto* profile = app.add_subcommand("profile", "Count communities per collector peer by origin");
  profile->add_option("input", p_in, "Route tuples")->required();
  profile->add_option("output", p_out, "Profile TSV")->required();
  profile->callback([&] { action = [&] { return cmd_profile(args, p_in, p_out); }; });

  try {
    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    return action();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace commusage::cli
