#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "commusage/model.hpp"

namespace commusage {

/// An AS_SET path segment, as produced by route aggregation.
struct AsSet {
  std::vector<Asn> members;
  friend bool operator==(const AsSet&, const AsSet&) = default;
};

using PathElement = std::variant<Asn, AsSet>;

/// A route observation as decoded from a collector dump, before cleaning:
/// the path may contain prepending, AS_SETs and loops, and the community
/// list may contain duplicates.
struct RawRouteRecord {
  std::string collector;
  Asn peer_asn;
  std::vector<PathElement> raw_path;
  std::vector<Community> communities;
};

/// Set of allocated public ASNs used to discard records with unallocated
/// ASNs in their path.
class AllocationTable {
 public:
  AllocationTable() = default;
  explicit AllocationTable(std::unordered_set<Asn> allocated) : allocated_(std::move(allocated)) {}

  void add(Asn asn) { allocated_.insert(asn); }
  bool is_allocated(Asn asn) const { return allocated_.contains(asn); }
  std::size_t size() const noexcept { return allocated_.size(); }

 private:
  std::unordered_set<Asn> allocated_;
};

enum class DropReason : std::uint8_t { EmptyPath, LoopDetected, UnallocatedAsn };

std::string_view to_string(DropReason reason);

/// True for ASNs in the IANA special-purpose ranges: 0, 23456 (AS_TRANS),
/// 64496-64511 (documentation), 64512-65535 (private and reserved),
/// 65536-65551 (documentation), 4200000000-4294967295 (private and reserved).
bool is_non_public_asn(Asn asn) noexcept;

std::vector<Asn> collapse_prepending(std::vector<Asn> path);
std::vector<Asn> strip_as_sets(const std::vector<PathElement>& raw_path);
std::vector<Asn> ensure_peer_prepended(Asn peer_asn, std::vector<Asn> path);

/// Position of the community's upper field relative to the path.
CommunityOrigin classify_community_origin(const Community& c, const AsPath& path);

/// Either a clean tuple or the reason the record was discarded.
using SanitizeOutcome = std::variant<RouteTuple, DropReason>;

/// Strips AS_SETs, prepends the peer ASN when missing, collapses
/// prepending, rejects loops and (with an allocation table) unallocated
/// ASNs, then collapses the community list into a set.
SanitizeOutcome sanitize_record(const RawRouteRecord& raw,
                                const AllocationTable* alloc = nullptr);

/// Keeps the first tuple for each distinct (path, communities) pair, in
/// first-occurrence order. The collector label is not part of the key.
std::vector<RouteTuple> dedup_tuples(std::vector<RouteTuple> tuples);

/// Streaming form of dedup_tuples: remembers the keys seen so far.
class TupleDeduplicator {
 public:
  /// Returns true the first time a (path, communities) pair is offered.
  bool insert(const RouteTuple& tuple);
  std::size_t size() const noexcept { return seen_.size(); }

 private:
  std::unordered_set<std::string> seen_;
};

}  // namespace commusage
