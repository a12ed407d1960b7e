#include "commusage/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>

#include "commusage/parallel.hpp"
#include "commusage/text_format.hpp"

namespace commusage {

std::string render_role(Role role) {
  std::string out(2, '?');
  switch (role.tagging) {
    case TaggingRole::Tagger: out[0] = 't'; break;
    case TaggingRole::Silent: out[0] = 's'; break;
    case TaggingRole::Selective: out[0] = 'x'; break;
  }
  out[1] = role.forwarding == ForwardingRole::Forward ? 'f' : 'c';
  return out;
}

std::optional<Role> parse_role(std::string_view text) {
  if (text.size() != 2) return std::nullopt;
  Role role;
  switch (text[0]) {
    case 't': role.tagging = TaggingRole::Tagger; break;
    case 's': role.tagging = TaggingRole::Silent; break;
    case 'x': role.tagging = TaggingRole::Selective; break;
    default: return std::nullopt;
  }
  switch (text[1]) {
    case 'f': role.forwarding = ForwardingRole::Forward; break;
    case 'c': role.forwarding = ForwardingRole::Cleaner; break;
    default: return std::nullopt;
  }
  return role;
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::AllTf: return "alltf";
    case ScenarioKind::AllTc: return "alltc";
    case ScenarioKind::Random: return "random";
    case ScenarioKind::RandomNoise: return "random+noise";
    case ScenarioKind::RandomP: return "random-p";
    case ScenarioKind::RandomPp: return "random-pp";
  }
  return "?";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) {
  for (auto kind : {ScenarioKind::AllTf, ScenarioKind::AllTc, ScenarioKind::Random,
                    ScenarioKind::RandomNoise, ScenarioKind::RandomP, ScenarioKind::RandomPp}) {
    if (to_string(kind) == name) return kind;
  }
  if (name == "random-noise") return ScenarioKind::RandomNoise;
  return std::nullopt;
}

void Scenario::validate() const {
  for (double p : {noise_prob, noisy_as_share, selective_share}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("probability " + std::to_string(p) + " outside [0, 1]");
    }
  }
}

void RelationshipTable::add_provider_customer(Asn provider, Asn customer) {
  links_[key(customer, provider)] = Relation::Provider;
  links_[key(provider, customer)] = Relation::Customer;
}

void RelationshipTable::add_peer(Asn a, Asn b) {
  links_[key(a, b)] = Relation::Peer;
  links_[key(b, a)] = Relation::Peer;
}

Relation RelationshipTable::relation(Asn a, Asn b) const {
  auto it = links_.find(key(a, b));
  return it == links_.end() ? Relation::Unknown : it->second;
}

RelationshipTable read_relationships(std::istream& in) {
  RelationshipTable table;
  std::string line;
  std::size_t line_no = 0;
  auto parse_u32 = [&](std::string_view text) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ParseError(line_no, "bad ASN '" + std::string(text) + "'");
    }
    return Asn{v};
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_skippable_line(line)) continue;
    std::string_view rest = line;
    std::vector<std::string_view> fields;
    while (true) {
      auto bar = rest.find('|');
      fields.push_back(rest.substr(0, bar));
      if (bar == std::string_view::npos) break;
      rest.remove_prefix(bar + 1);
    }
    if (fields.size() < 3) throw ParseError(line_no, "expected a|b|rel");
    const Asn a = parse_u32(fields[0]);
    const Asn b = parse_u32(fields[1]);
    if (fields[2] == "-1") {
      table.add_provider_customer(a, b);
    } else if (fields[2] == "0") {
      table.add_peer(a, b);
    } else {
      throw ParseError(line_no, "unknown relationship '" + std::string(fields[2]) + "'");
    }
  }
  return table;
}

StreamRng StreamRng::for_stream(std::uint64_t seed, std::uint64_t stream) noexcept {
  StreamRng mix(seed ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
  return StreamRng(mix.next());
}

std::uint64_t StreamRng::next() noexcept {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

RoleMap assign_roles(std::span<const Asn> ases, const Scenario& scenario, std::mt19937_64& rng) {
  static constexpr Role kRandomRoles[4] = {
      {TaggingRole::Tagger, ForwardingRole::Forward},
      {TaggingRole::Tagger, ForwardingRole::Cleaner},
      {TaggingRole::Silent, ForwardingRole::Forward},
      {TaggingRole::Silent, ForwardingRole::Cleaner},
  };
  RoleMap roles;
  for (Asn asn : ases) {
    switch (scenario.kind) {
      case ScenarioKind::AllTf:
        roles[asn] = {TaggingRole::Tagger, ForwardingRole::Forward};
        break;
      case ScenarioKind::AllTc:
        roles[asn] = {TaggingRole::Tagger, ForwardingRole::Cleaner};
        break;
      default:
        roles[asn] = kRandomRoles[rng() % 4];
        break;
    }
  }
  if (scenario.selective()) {
    for (auto& [asn, role] : roles) {
      if (role.tagging == TaggingRole::Tagger && uniform01(rng) < scenario.selective_share) {
        role.tagging = TaggingRole::Selective;
      }
    }
  }
  return roles;
}

bool link_tags(Role tagger_role, Asn tagger, std::optional<Asn> receiver, ScenarioKind kind,
               const RelationshipTable& rel) {
  switch (tagger_role.tagging) {
    case TaggingRole::Tagger: return true;
    case TaggingRole::Silent: return false;
    case TaggingRole::Selective: break;
  }
  if (!receiver) return true;
  const Relation r = rel.relation(tagger, *receiver);
  if (kind == ScenarioKind::RandomPp) return r == Relation::Customer;
  return r == Relation::Customer || r == Relation::Peer;
}

namespace {

const Role& role_of(const RoleMap& roles, Asn asn) {
  auto it = roles.find(asn);
  if (it == roles.end()) {
    throw std::invalid_argument("no role assigned to AS" + to_string(asn));
  }
  return it->second;
}

std::optional<Asn> upstream_of(const AsPath& path, std::size_t pos) {
  if (pos == 0) return std::nullopt;
  return path[pos - 1];
}

}  // namespace

CommunitySet synth_output(const AsPath& path, const RoleMap& roles, ScenarioKind kind,
                          const RelationshipTable& rel, const NoiseInput& noise) {
  const bool noisy = kind == ScenarioKind::RandomNoise && noise.rng && noise.noisy_ases;
  std::vector<Community> out;
  for (std::size_t pos = path.size(); pos-- > 0;) {
    const Asn asn = path[pos];
    const Role& role = role_of(roles, asn);
    if (role.forwarding == ForwardingRole::Cleaner) out.clear();
    if (link_tags(role, asn, upstream_of(path, pos), kind, rel)) {
      out.push_back(Community::tag(asn, 1));
    }
    if (noisy && pos > 0 && noise.noisy_ases->contains(asn) &&
        noise.rng->uniform() < noise.probability) {
      out.push_back(Community::tag(path[pos - 1], 2));
    }
  }
  if (noisy && !path.empty() && noise.rng->uniform() < noise.probability) {
    out.push_back(Community::tag(path.origin(), 3));
  }
  return CommunitySet(std::move(out));
}

std::set<Asn> compute_leaf_ases(std::span<const RouteTuple> substrate) {
  std::set<Asn> all;
  std::unordered_set<Asn> transit;
  for (const auto& t : substrate) {
    for (std::size_t pos = 0; pos < t.path.size(); ++pos) {
      all.insert(t.path[pos]);
      if (pos + 1 < t.path.size()) transit.insert(t.path[pos]);
    }
  }
  std::set<Asn> leaf;
  for (Asn asn : all) {
    if (!transit.contains(asn)) leaf.insert(asn);
  }
  return leaf;
}

Visibility annotate_visibility(std::span<const RouteTuple> substrate, const RoleMap& roles,
                               ScenarioKind kind, const RelationshipTable& rel,
                               const std::set<Asn>& leaf) {
  std::unordered_set<Asn> tagging_visible;
  std::unordered_set<Asn> forwarding_visible;
  std::set<Asn> all;
  for (const auto& tuple : substrate) {
    const AsPath& path = tuple.path;
    const std::size_t n = path.size();
    all.insert(path.begin(), path.end());
    // tags[pos]: the AS at pos attaches its own community toward pos - 1.
    std::vector<char> tags(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
      tags[pos] = link_tags(role_of(roles, path[pos]), path[pos], upstream_of(path, pos), kind, rel);
    }
    for (std::size_t pos = 0; pos < n; ++pos) {
      const Asn asn = path[pos];
      const Role& role = role_of(roles, asn);
      if (role.tagging != TaggingRole::Selective || tags[pos]) tagging_visible.insert(asn);
      if (pos + 1 < n) {
        for (std::size_t j = pos + 1; j < n; ++j) {
          if (tags[j]) {
            forwarding_visible.insert(asn);
            break;
          }
          if (role_of(roles, path[j]).forwarding == ForwardingRole::Cleaner) break;
        }
      }
      // Everything further downstream is hidden behind this cleaner.
      if (role.forwarding == ForwardingRole::Cleaner) break;
    }
  }
  Visibility v;
  for (Asn asn : all) {
    if (!tagging_visible.contains(asn)) v.tagging_hidden.insert(asn);
    if (!leaf.contains(asn) && !forwarding_visible.contains(asn)) v.forwarding_hidden.insert(asn);
  }
  return v;
}

GroundTruth generate_ground_truth(std::span<const RouteTuple> substrate, const Scenario& scenario,
                                  const RelationshipTable& rel, std::size_t jobs) {
  scenario.validate();
  if (scenario.selective() && rel.empty()) throw MissingRelationships();

  // One synthetic tuple per distinct path; the substrate's communities are ignored.
  GroundTruth gt;
  {
    std::unordered_set<std::string> seen;
    for (const auto& t : substrate) {
      if (seen.insert(to_string(t.path)).second) {
        gt.synthetic_tuples.push_back(RouteTuple{t.collector, t.peer_asn, t.path, {}});
      }
    }
  }
  std::vector<Asn> ases;
  {
    std::set<Asn> all;
    for (const auto& t : gt.synthetic_tuples) all.insert(t.path.begin(), t.path.end());
    ases.assign(all.begin(), all.end());
  }

  std::mt19937_64 rng(scenario.seed);
  gt.roles = assign_roles(ases, scenario, rng);

  std::unordered_set<Asn> noisy_ases;
  if (scenario.noisy()) {
    for (Asn asn : ases) {
      if (uniform01(rng) < scenario.noisy_as_share) noisy_ases.insert(asn);
    }
  }

  std::atomic<std::uint64_t> unknown{0};
  parallel_chunks(gt.synthetic_tuples.size(), jobs,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    std::uint64_t local_unknown = 0;
                    for (std::size_t i = begin; i < end; ++i) {
                      auto& tuple = gt.synthetic_tuples[i];
                      StreamRng stream = StreamRng::for_stream(scenario.seed, i);
                      NoiseInput noise{&noisy_ases, scenario.noise_prob, &stream};
                      tuple.communities =
                          synth_output(tuple.path, gt.roles, scenario.kind, rel, noise);
                      if (scenario.selective()) {
                        for (std::size_t pos = 1; pos < tuple.path.size(); ++pos) {
                          if (gt.roles.at(tuple.path[pos]).tagging == TaggingRole::Selective &&
                              rel.relation(tuple.path[pos], tuple.path[pos - 1]) ==
                                  Relation::Unknown) {
                            ++local_unknown;
                          }
                        }
                      }
                    }
                    unknown += local_unknown;
                  });
  gt.unknown_relationships = unknown.load();

  gt.leaf = compute_leaf_ases(gt.synthetic_tuples);
  auto visibility = annotate_visibility(gt.synthetic_tuples, gt.roles, scenario.kind, rel, gt.leaf);
  gt.tagging_hidden = std::move(visibility.tagging_hidden);
  gt.forwarding_hidden = std::move(visibility.forwarding_hidden);
  return gt;
}

void write_roles(std::ostream& out, const GroundTruth& gt) {
  out << "#asn\trole\thiddenT\thiddenF\tleaf\n";
  for (const auto& [asn, role] : gt.roles) {
    out << asn.value << '\t' << render_role(role) << '\t' << gt.tagging_hidden.contains(asn) << '\t'
        << gt.forwarding_hidden.contains(asn) << '\t' << gt.leaf.contains(asn) << '\n';
  }
}

GroundTruth read_roles(std::istream& in) {
  GroundTruth gt;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_skippable_line(line)) continue;
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    while (true) {
      auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != 5) throw ParseError(line_no, "expected asn, role and three flags");
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), value);
    if (fields[0].empty() || ec != std::errc{} || ptr != fields[0].data() + fields[0].size()) {
      throw ParseError(line_no, "bad ASN '" + std::string(fields[0]) + "'");
    }
    auto role = parse_role(fields[1]);
    if (!role) throw ParseError(line_no, "bad role '" + std::string(fields[1]) + "'");
    const Asn asn{value};
    gt.roles[asn] = *role;
    for (std::size_t i = 2; i < 5; ++i) {
      if (fields[i] != "0" && fields[i] != "1") throw ParseError(line_no, "flag must be 0 or 1");
    }
    if (fields[2] == "1") gt.tagging_hidden.insert(asn);
    if (fields[3] == "1") gt.forwarding_hidden.insert(asn);
    if (fields[4] == "1") gt.leaf.insert(asn);
  }
  return gt;
}

}  // namespace commusage
