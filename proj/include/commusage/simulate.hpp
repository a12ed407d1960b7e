#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "commusage/model.hpp"

namespace commusage {

enum class TaggingRole : std::uint8_t { Tagger, Silent, Selective };
enum class ForwardingRole : std::uint8_t { Forward, Cleaner };

struct Role {
  TaggingRole tagging = TaggingRole::Silent;
  ForwardingRole forwarding = ForwardingRole::Forward;
  friend bool operator==(const Role&, const Role&) = default;
};

/// "tf", "tc", "sf", "sc", "xf", "xc" (x = selective tagger).
std::string render_role(Role role);
std::optional<Role> parse_role(std::string_view text);

enum class ScenarioKind : std::uint8_t { AllTf, AllTc, Random, RandomNoise, RandomP, RandomPp };

/// Names: alltf, alltc, random, random+noise, random-p, random-pp.
std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);

struct Scenario {
  ScenarioKind kind = ScenarioKind::Random;
  double noise_prob = 0.05;
  double noisy_as_share = 0.5;
  double selective_share = 0.5;
  std::uint64_t seed = 0;

  bool selective() const noexcept {
    return kind == ScenarioKind::RandomP || kind == ScenarioKind::RandomPp;
  }
  bool noisy() const noexcept { return kind == ScenarioKind::RandomNoise; }
  /// Throws std::invalid_argument for probabilities outside [0, 1].
  void validate() const;
};

/// Business relationship of `b` as seen from `a`.
enum class Relation : std::uint8_t { Provider, Customer, Peer, Unknown };

class RelationshipTable {
 public:
  void add_provider_customer(Asn provider, Asn customer);
  void add_peer(Asn a, Asn b);
  /// What `b` is to `a`: Provider means b is a provider of a.
  Relation relation(Asn a, Asn b) const;
  bool empty() const noexcept { return links_.empty(); }
  std::size_t size() const noexcept { return links_.size(); }

 private:
  static std::uint64_t key(Asn a, Asn b) noexcept {
    return (std::uint64_t{a.value} << 32) | b.value;
  }
  // Stored in both directions.
  std::unordered_map<std::uint64_t, Relation> links_;
};

/// CAIDA as-rel serialization: `a|b|-1` (a provider of b) or `a|b|0`
/// (peers); further fields are ignored, `#` lines are comments.
RelationshipTable read_relationships(std::istream& in);

/// Small counter-seeded generator (SplitMix64) for per-tuple noise streams.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t seed) noexcept : state_(seed) {}
  static StreamRng for_stream(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next() noexcept;
  /// Uniform in [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Uniform in [0, 1) from a 64-bit engine, independent of the standard
/// library's distribution implementations.
double uniform01(std::mt19937_64& rng) noexcept;

using RoleMap = std::map<Asn, Role>;

/// Assigns a role to every AS in `ases`. Random scenarios draw uniformly
/// from {tf, tc, sf, sc}; the selective scenarios then turn each tagger into
/// a selective tagger with probability `selective_share`.
RoleMap assign_roles(std::span<const Asn> ases, const Scenario& scenario, std::mt19937_64& rng);

/// Whether `tagger` attaches its own community when announcing to
/// `receiver` (nullopt = the route collector). Selective taggers always tag
/// toward the collector; under random-pp only toward customers, otherwise
/// toward everything but providers. Unknown relationships count as provider.
bool link_tags(Role tagger_role, Asn tagger, std::optional<Asn> receiver, ScenarioKind kind,
               const RelationshipTable& rel);

/// Noise injected into one tuple's synthesis.
struct NoiseInput {
  const std::unordered_set<Asn>* noisy_ases = nullptr;
  double probability = 0.0;
  StreamRng* rng = nullptr;
};

/// Community set received by the collector from path.peer(), computed from
/// the origin upward: out = tag(A) + (A forwards ? out(downstream) : {}).
/// With noise, a noisy AS adds its upstream neighbor's community (value 2)
/// and the peer may add the origin's community (value 3). Genuine tags use
/// value 1.
CommunitySet synth_output(const AsPath& path, const RoleMap& roles, ScenarioKind kind,
                          const RelationshipTable& rel, const NoiseInput& noise = {});

struct Visibility {
  std::set<Asn> tagging_hidden;
  std::set<Asn> forwarding_hidden;
};

/// ASes that never appear anywhere but at the origin position.
std::set<Asn> compute_leaf_ases(std::span<const RouteTuple> substrate);

/// Tagging of A is hidden when no occurrence of A has an all-forward
/// upstream (and, for selective taggers, a tag toward its upstream
/// neighbor). Forwarding of a non-leaf A is hidden when no transit
/// occurrence has an all-forward upstream and a downstream tag reaching A.
Visibility annotate_visibility(std::span<const RouteTuple> substrate, const RoleMap& roles,
                               ScenarioKind kind, const RelationshipTable& rel,
                               const std::set<Asn>& leaf);

struct GroundTruth {
  RoleMap roles;
  std::set<Asn> tagging_hidden;
  std::set<Asn> forwarding_hidden;
  std::set<Asn> leaf;
  std::vector<RouteTuple> synthetic_tuples;
  /// Selective-tagging decisions that hit a pair with no known relationship.
  std::uint64_t unknown_relationships = 0;
};

class MissingRelationships : public std::invalid_argument {
 public:
  MissingRelationships()
      : std::invalid_argument("selective scenarios need a business relationship table") {}
};

/// Assigns roles over the ASes of the substrate's unique paths, rewrites
/// every path's community set with synth_output and annotates visibility.
/// Fully determined by (substrate, scenario, rel); `jobs` only affects speed.
GroundTruth generate_ground_truth(std::span<const RouteTuple> substrate, const Scenario& scenario,
                                  const RelationshipTable& rel, std::size_t jobs = 1);

/// Roles file: `asn<TAB>role<TAB>hiddenT<TAB>hiddenF<TAB>leaf`.
void write_roles(std::ostream& out, const GroundTruth& gt);
/// Reads a roles file into a GroundTruth without tuples.
GroundTruth read_roles(std::istream& in);

}  // namespace commusage
