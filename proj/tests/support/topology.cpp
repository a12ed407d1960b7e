#include "topology.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <random>
#include <set>

namespace commusage::testing {
namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

enum class RouteKind : std::uint8_t { None, Origin, Customer, Peer, Provider };

struct Graph {
  std::vector<std::vector<std::uint32_t>> providers;
  std::vector<std::vector<std::uint32_t>> customers;
  std::vector<std::vector<std::uint32_t>> peers;
};

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

// Best valley-free routes toward `origin`: customer routes over peer routes
// over provider routes, then shortest, then lowest next-hop rank.
void routes_to(const Graph& g, std::uint32_t origin, const std::vector<std::uint32_t>& rank,
               std::vector<std::uint32_t>& dist,
               std::vector<std::uint32_t>& next, std::vector<RouteKind>& kind) {
  const std::size_t n = g.providers.size();
  dist.assign(n, kUnreached);
  next.assign(n, kUnreached);
  kind.assign(n, RouteKind::None);
  dist[origin] = 0;
  kind[origin] = RouteKind::Origin;

  // Customer routes climb provider links breadth-first.
  std::vector<std::uint32_t> frontier{origin};
  while (!frontier.empty()) {
    std::vector<std::uint32_t> upper;
    for (std::uint32_t x : frontier) {
      for (std::uint32_t p : g.providers[x]) {
        if (kind[p] == RouteKind::None) {
          kind[p] = RouteKind::Customer;
          dist[p] = dist[x] + 1;
          next[p] = x;
          upper.push_back(p);
        } else if (kind[p] == RouteKind::Customer && dist[p] == dist[x] + 1 &&
                   rank[x] < rank[next[p]]) {
          next[p] = x;
        }
      }
    }
    frontier = std::move(upper);
  }

  // One peering hop from an AS holding a customer (or origin) route.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> peer_routes;
  for (std::uint32_t y = 0; y < n; ++y) {
    if (kind[y] != RouteKind::None) continue;
    std::uint32_t best_dist = kUnreached, best_next = kUnreached;
    for (std::uint32_t z : g.peers[y]) {
      if (kind[z] != RouteKind::Customer && kind[z] != RouteKind::Origin) continue;
      if (dist[z] + 1 < best_dist || (dist[z] + 1 == best_dist && rank[z] < rank[best_next])) {
        best_dist = dist[z] + 1;
        best_next = z;
      }
    }
    if (best_next != kUnreached) peer_routes.emplace_back(y, best_next);
  }
  for (auto [y, z] : peer_routes) {
    kind[y] = RouteKind::Peer;
    dist[y] = dist[z] + 1;
    next[y] = z;
  }

  // Everything else learns from providers, shortest first.
  using Item = std::pair<std::uint32_t, std::uint32_t>;  // (dist, as)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (std::uint32_t x = 0; x < n; ++x) {
    if (kind[x] != RouteKind::None) queue.emplace(dist[x], x);
  }
  while (!queue.empty()) {
    auto [d, x] = queue.top();
    queue.pop();
    if (d != dist[x]) continue;
    for (std::uint32_t c : g.customers[x]) {
      if (kind[c] != RouteKind::None && kind[c] != RouteKind::Provider) continue;
      if (d + 1 < dist[c] || (d + 1 == dist[c] && rank[x] < rank[next[c]])) {
        const bool improved = d + 1 < dist[c];
        kind[c] = RouteKind::Provider;
        dist[c] = d + 1;
        next[c] = x;
        if (improved) queue.emplace(d + 1, c);
      }
    }
  }
}

}  // namespace

Topology make_topology(const TopologyParams& params) {
  std::mt19937_64 rng(params.seed);
  const std::size_t n = std::max(params.ases, params.tier1 + 1);
  Topology topo;
  topo.ases.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool wide = params.wide_asn_every && i % params.wide_asn_every == params.wide_asn_every - 1;
    topo.ases.push_back(Asn{static_cast<std::uint32_t>(wide ? 200000 + i : 1000 + i)});
  }

  Graph g;
  g.providers.resize(n);
  g.customers.resize(n);
  g.peers.resize(n);
  std::set<std::pair<std::uint32_t, std::uint32_t>> linked;
  auto link_key = [](std::uint32_t a, std::uint32_t b) {
    return std::pair<std::uint32_t, std::uint32_t>{std::min(a, b), std::max(a, b)};
  };

  auto add_peering = [&](std::uint32_t a, std::uint32_t b) {
    if (a == b || !linked.insert(link_key(a, b)).second) return;
    g.peers[a].push_back(b);
    g.peers[b].push_back(a);
    topo.peerings.emplace_back(topo.ases[a], topo.ases[b]);
  };

  // Providers are drawn with weight (customers + 1): each transit sits in
  // `attach` once plus once per customer. This keeps the hierarchy flat.
  std::vector<std::uint32_t> transits, attach;
  for (std::uint32_t i = 0; i < params.tier1; ++i) {
    transits.push_back(i);
    attach.push_back(i);
    for (std::uint32_t j = 0; j < i; ++j) add_peering(j, i);
  }
  for (std::uint32_t i = static_cast<std::uint32_t>(params.tier1); i < n; ++i) {
    const std::size_t want = 1 + pick(rng, params.max_providers);
    for (std::size_t k = 0; k < want; ++k) {
      const std::uint32_t p = attach[pick(rng, attach.size())];
      if (!linked.insert(link_key(p, i)).second) continue;
      g.providers[i].push_back(p);
      g.customers[p].push_back(i);
      topo.provider_customer.emplace_back(topo.ases[p], topo.ases[i]);
      attach.push_back(p);
    }
    if (std::uniform_real_distribution<double>(0, 1)(rng) < params.transit_share) {
      transits.push_back(i);
      attach.push_back(i);
    }
  }
  const auto peer_links = static_cast<std::size_t>(params.peering_per_transit *
                                                   static_cast<double>(transits.size()));
  for (std::size_t k = 0; k < peer_links; ++k) {
    add_peering(transits[pick(rng, transits.size())], transits[pick(rng, transits.size())]);
  }
  for (auto [p, c] : topo.provider_customer) topo.relationships.add_provider_customer(p, c);
  for (auto [a, b] : topo.peerings) topo.relationships.add_peer(a, b);

  // Collector peers: all tier-1s, then transits, then stubs, drawn at random.
  std::vector<std::uint32_t> candidates(n);
  for (std::uint32_t i = 0; i < n; ++i) candidates[i] = i;
  std::shuffle(candidates.begin() + static_cast<std::ptrdiff_t>(params.tier1), candidates.end(), rng);
  std::stable_partition(candidates.begin() + static_cast<std::ptrdiff_t>(params.tier1),
                        candidates.end(), [&](std::uint32_t i) {
                          return !g.customers[i].empty() && pick(rng, 3) != 0;
                        });
  candidates.resize(std::min(n, std::max(params.collector_peers, params.tier1)));
  for (std::uint32_t i : candidates) topo.collector_peers.push_back(topo.ases[i]);

  std::vector<std::uint32_t> dist, next;
  std::vector<RouteKind> kind;
  std::vector<std::uint32_t> identity(n), rank(n);
  for (std::uint32_t i = 0; i < n; ++i) identity[i] = i;
  static const char* kCollectors[] = {"rrc00", "rrc01", "route-views2"};
  for (std::uint32_t origin = 0; origin < n; ++origin) {
    std::set<std::vector<std::uint32_t>> seen;
    for (std::size_t prefix = 0; prefix < std::max<std::size_t>(1, params.prefixes_per_origin);
         ++prefix) {
      if (prefix == 0) {
        rank = identity;
      } else {
        std::shuffle(rank.begin(), rank.end(), rng);
      }
      routes_to(g, origin, rank, dist, next, kind);
      for (std::size_t k = 0; k < candidates.size(); ++k) {
        std::uint32_t at = candidates[k];
        if (kind[at] == RouteKind::None) continue;
        std::vector<std::uint32_t> hops;
        while (true) {
          hops.push_back(at);
          if (at == origin) break;
          at = next[at];
        }
        if (!seen.insert(hops).second) continue;
        std::vector<Asn> path;
        for (std::uint32_t h : hops) path.push_back(topo.ases[h]);
        topo.tuples.push_back(
            RouteTuple{kCollectors[k % 3], path.front(), AsPath(std::move(path)), {}});
      }
    }
  }
  return topo;
}

void write_relationships(std::ostream& out, const Topology& topo) {
  for (auto [p, c] : topo.provider_customer) out << p.value << '|' << c.value << "|-1\n";
  for (auto [a, b] : topo.peerings) out << a.value << '|' << b.value << "|0\n";
}

}  // namespace commusage::testing
