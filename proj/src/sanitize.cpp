#include "commusage/sanitize.hpp"

#include <algorithm>
#include <cstring>

namespace commusage {

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::EmptyPath: return "EmptyPath";
    case DropReason::LoopDetected: return "LoopDetected";
    case DropReason::UnallocatedAsn: return "UnallocatedAsn";
  }
  return "?";
}

bool is_non_public_asn(Asn asn) noexcept {
  const auto v = asn.value;
  return v == 0 || v == 23456 || (v >= 64496 && v <= 65551) || v >= 4200000000u;
}

std::vector<Asn> collapse_prepending(std::vector<Asn> path) {
  path.erase(std::unique(path.begin(), path.end()), path.end());
  return path;
}

std::vector<Asn> strip_as_sets(const std::vector<PathElement>& raw_path) {
  std::vector<Asn> out;
  out.reserve(raw_path.size());
  for (const auto& element : raw_path) {
    if (const auto* asn = std::get_if<Asn>(&element)) out.push_back(*asn);
  }
  return out;
}

std::vector<Asn> ensure_peer_prepended(Asn peer_asn, std::vector<Asn> path) {
  if (path.empty() || path.front() != peer_asn) path.insert(path.begin(), peer_asn);
  return path;
}

CommunityOrigin classify_community_origin(const Community& c, const AsPath& path) {
  const Asn upper = c.upper_asn();
  if (is_non_public_asn(upper)) return CommunityOrigin::Private;
  if (!path.empty() && path.peer() == upper) return CommunityOrigin::Peer;
  if (path.contains(upper)) return CommunityOrigin::Foreign;
  return CommunityOrigin::Stray;
}

namespace {

bool has_loop(const std::vector<Asn>& path) {
  // Paths are short; a sorted copy avoids hashing.
  std::vector<Asn> sorted = path;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

}  // namespace

SanitizeOutcome sanitize_record(const RawRouteRecord& raw, const AllocationTable* alloc) {
  auto path = strip_as_sets(raw.raw_path);
  if (path.empty()) return DropReason::EmptyPath;
  path = collapse_prepending(ensure_peer_prepended(raw.peer_asn, std::move(path)));
  if (has_loop(path)) return DropReason::LoopDetected;
  if (alloc) {
    for (Asn asn : path) {
      if (!alloc->is_allocated(asn)) return DropReason::UnallocatedAsn;
    }
  }
  return RouteTuple{raw.collector, raw.peer_asn, AsPath(std::move(path)),
                    CommunitySet(raw.communities)};
}

bool TupleDeduplicator::insert(const RouteTuple& tuple) {
  // Binary key: path length, ASNs, then (kind, upper, mid, low) per community.
  std::string key;
  key.reserve(4 + tuple.path.size() * 4 + tuple.communities.size() * 13);
  auto put = [&key](std::uint32_t v) {
    char bytes[4];
    std::memcpy(bytes, &v, 4);
    key.append(bytes, 4);
  };
  put(static_cast<std::uint32_t>(tuple.path.size()));
  for (Asn asn : tuple.path) put(asn.value);
  for (const auto& c : tuple.communities) {
    key.push_back(static_cast<char>(c.kind()));
    put(c.upper());
    put(c.mid());
    put(c.low());
  }
  return seen_.insert(std::move(key)).second;
}

std::vector<RouteTuple> dedup_tuples(std::vector<RouteTuple> tuples) {
  TupleDeduplicator dedup;
  std::vector<RouteTuple> out;
  out.reserve(tuples.size());
  for (auto& t : tuples) {
    if (dedup.insert(t)) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace commusage
