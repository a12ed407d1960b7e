#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace commusage {

/// An autonomous system number. 16-bit ASNs are the subrange <= 65535.
struct Asn {
  std::uint32_t value = 0;

  constexpr bool is_16bit() const noexcept { return value <= 0xFFFFu; }

  friend constexpr auto operator<=>(Asn, Asn) = default;
};

std::string to_string(Asn asn);

/// A BGP community, either regular (upper:low, 16 bits each) or large
/// (upper:mid:low, 32 bits each). The upper field conventionally carries the
/// ASN of the network that defined the value; everything else is opaque.
class Community {
 public:
  enum class Kind : std::uint8_t { Regular, Large };

  static constexpr Community regular(std::uint16_t upper, std::uint16_t low) noexcept {
    return Community{Kind::Regular, upper, 0, low};
  }
  static constexpr Community large(std::uint32_t upper, std::uint32_t mid,
                                   std::uint32_t low) noexcept {
    return Community{Kind::Large, upper, mid, low};
  }

  /// Builds the community an AS would use to mark a route with `value`:
  /// regular for 16-bit ASNs, large (asn:value:0) otherwise.
  static constexpr Community tag(Asn asn, std::uint16_t value) noexcept {
    return asn.is_16bit() ? regular(static_cast<std::uint16_t>(asn.value), value)
                          : large(asn.value, value, 0);
  }

  constexpr Kind kind() const noexcept { return kind_; }
  constexpr bool is_large() const noexcept { return kind_ == Kind::Large; }
  constexpr Asn upper_asn() const noexcept { return Asn{upper_}; }
  constexpr std::uint32_t upper() const noexcept { return upper_; }
  constexpr std::uint32_t mid() const noexcept { return mid_; }
  constexpr std::uint32_t low() const noexcept { return low_; }

  // Regular communities order before large ones, then by fields.
  friend constexpr auto operator<=>(const Community&, const Community&) = default;

 private:
  constexpr Community(Kind kind, std::uint32_t upper, std::uint32_t mid, std::uint32_t low) noexcept
      : kind_(kind), upper_(upper), mid_(mid), low_(low) {}

  Kind kind_;
  std::uint32_t upper_;
  std::uint32_t mid_;
  std::uint32_t low_;
};

std::string to_string(const Community& c);

/// Parses "A:B" or "A:B:C" (decimal). Returns nullopt on any syntax or range
/// error, including a regular upper/low field above 65535.
std::optional<Community> parse_community(std::string_view text);

/// Sorted, duplicate-free collection of communities.
class CommunitySet {
 public:
  CommunitySet() = default;
  CommunitySet(std::initializer_list<Community> items);
  explicit CommunitySet(std::vector<Community> items);

  void insert(Community c);
  bool contains(Community c) const;
  /// True if any member's upper field equals `asn` (the "asn:*" test).
  bool has_upper(Asn asn) const;

  bool empty() const noexcept { return items_.empty(); }
  std::size_t size() const noexcept { return items_.size(); }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }
  const std::vector<Community>& items() const noexcept { return items_; }

  friend bool operator==(const CommunitySet&, const CommunitySet&) = default;

 private:
  std::vector<Community> items_;
};

/// AS path ordered from the collector peer (position 0) to the origin
/// (position size()-1). Positions are zero-based throughout the library.
class AsPath {
 public:
  AsPath() = default;
  AsPath(std::initializer_list<Asn> asns) : asns_(asns) {}
  explicit AsPath(std::vector<Asn> asns) : asns_(std::move(asns)) {}

  std::size_t size() const noexcept { return asns_.size(); }
  bool empty() const noexcept { return asns_.empty(); }
  Asn operator[](std::size_t pos) const { return asns_[pos]; }
  Asn peer() const { return asns_.front(); }
  Asn origin() const { return asns_.back(); }
  bool contains(Asn asn) const;
  auto begin() const noexcept { return asns_.begin(); }
  auto end() const noexcept { return asns_.end(); }
  const std::vector<Asn>& asns() const noexcept { return asns_; }

  friend bool operator==(const AsPath&, const AsPath&) = default;

 private:
  std::vector<Asn> asns_;
};

std::string to_string(const AsPath& path);

/// One deduplicated (collector, AS path, community set) observation.
struct RouteTuple {
  std::string collector;
  Asn peer_asn;
  AsPath path;
  CommunitySet communities;

  friend bool operator==(const RouteTuple&, const RouteTuple&) = default;
};

enum class CommunityOrigin : std::uint8_t { Peer, Foreign, Stray, Private };

std::string_view to_string(CommunityOrigin origin);

enum class TaggingClass : std::uint8_t { Tagger, Silent, Undecided, None };
enum class ForwardingClass : std::uint8_t { Forward, Cleaner, Undecided, None };

char render(TaggingClass c) noexcept;
char render(ForwardingClass c) noexcept;
std::optional<TaggingClass> parse_tagging_class(char c) noexcept;
std::optional<ForwardingClass> parse_forwarding_class(char c) noexcept;

struct UsageCounters {
  std::uint64_t t = 0;  // own community seen
  std::uint64_t s = 0;  // own community absent
  std::uint64_t f = 0;  // downstream tagger's community passed through
  std::uint64_t c = 0;  // downstream tagger's community removed

  UsageCounters& operator+=(const UsageCounters& o) noexcept {
    t += o.t;
    s += o.s;
    f += o.f;
    c += o.c;
    return *this;
  }
  friend bool operator==(const UsageCounters&, const UsageCounters&) = default;
};

/// Share thresholds for the four classifiers plus a minimum number of
/// observations. Each share must lie in [0.5, 1.0] so that the two classes of
/// a pair cannot both hold.
struct Thresholds {
  double tagger = 0.99;
  double silent = 0.99;
  double forward = 0.99;
  double cleaner = 0.99;
  std::uint64_t min_samples = 1;

  static Thresholds uniform(double share, std::uint64_t min_samples = 1) {
    return Thresholds{share, share, share, share, min_samples};
  }

  /// Throws std::invalid_argument when a share is outside [0.5, 1.0] or
  /// min_samples is zero.
  void validate() const;
};

struct Classification {
  Asn asn;
  UsageCounters counters;
  TaggingClass tagging = TaggingClass::None;
  ForwardingClass forwarding = ForwardingClass::None;

  friend bool operator==(const Classification&, const Classification&) = default;
};

/// Two-character class string, e.g. "tf", "sc", "nu".
std::string render_class(const Classification& c);
std::string render_class(TaggingClass t, ForwardingClass f);

}  // namespace commusage

template <>
struct std::hash<commusage::Asn> {
  std::size_t operator()(commusage::Asn a) const noexcept {
    return std::hash<std::uint32_t>{}(a.value);
  }
};
