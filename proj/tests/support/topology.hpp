#pragma once

// Synthetic AS-level topologies for tests: a provider hierarchy under a
// tier-1 clique, some lateral peering, and valley-free best paths from a
// set of collector peers to every origin.

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "commusage/model.hpp"
#include "commusage/simulate.hpp"

namespace commusage::testing {

struct TopologyParams {
  std::size_t ases = 1000;
  std::size_t tier1 = 8;
  double transit_share = 0.2;
  std::size_t max_providers = 3;
  double peering_per_transit = 1.5;
  std::size_t collector_peers = 60;
  // Each origin announces this many prefixes. The first uses the lowest
  // next-hop index among equally preferred routes, every other prefix a
  // random order, so origins with several uplinks show distinct paths.
  std::size_t prefixes_per_origin = 1;
  // Every n-th AS gets a 32-bit ASN so that large communities show up.
  std::size_t wide_asn_every = 7;
  std::uint64_t seed = 1;
};

struct Topology {
  std::vector<Asn> ases;
  std::vector<std::pair<Asn, Asn>> provider_customer;
  std::vector<std::pair<Asn, Asn>> peerings;
  std::vector<Asn> collector_peers;
  RelationshipTable relationships;
  // One tuple per distinct (collector peer, path) with a route; no communities.
  std::vector<RouteTuple> tuples;
};

Topology make_topology(const TopologyParams& params);

/// `a|b|-1` and `a|b|0` lines.
void write_relationships(std::ostream& out, const Topology& topo);

}  // namespace commusage::testing
