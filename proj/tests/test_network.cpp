#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "centilab/network.hpp"

using namespace centilab;

namespace {

// Independent oracle: exhaustive DFS over simple paths, minimizing total weight.
Dur bruteDistance(const Network& net, int i, int j, bool useMax) {
  if (i == j) return 0;
  int n = net.processes();
  std::vector<bool> seen(n, false);
  Dur best = kInf;
  auto dfs = [&](auto&& self, int at, Dur acc) -> void {
    if (at == j) {
      best = std::min(best, acc);
      return;
    }
    seen[at] = true;
    for (int nx = 0; nx < n; ++nx) {
      const ChannelSpec* c = net.channel(at, nx);
      if (!c || seen[nx]) continue;
      self(self, nx, satAdd(acc, useMax ? c->max : c->min));
    }
    seen[at] = false;
  };
  dfs(dfs, i, 0);
  return best;
}

Network bankNet() {
  // Charlie=0, Susan=1, Bob=2: relaying through Susan beats the direct bound.
  return Network(3, {{0, 1, 1, 5}, {1, 2, 1, 4}, {0, 2, 1, 10}},
                 {"Charlie", "Susan", "Bob"});
}

}  // namespace

TEST_CASE("max distance uses the cheapest relay path") {
  Network net = bankNet();
  CHECK(net.maxDistance(0, 2) == 9);
  CHECK(net.maxDistance(0, 1) == 5);
  CHECK(net.maxDistance(1, 2) == 4);
  CHECK(net.maxDistance(0, 0) == 0);
  CHECK(isInf(net.maxDistance(2, 0)));
}

TEST_CASE("min distance composes along min weights") {
  Network net(3, {{0, 1, 2, kInf}, {1, 2, 3, kInf}});
  CHECK(net.minDistance(0, 2) == 5);
  CHECK(net.minDistance(1, 1) == 0);
  CHECK(isInf(net.minDistance(2, 0)));
}

TEST_CASE("bound guarantee threshold") {
  Network net = bankNet();
  for (int t = 0; t < 4; ++t) {
    CHECK(net.boundGuarantee({0, t}, {2, t + 9}));
    CHECK_FALSE(net.boundGuarantee({0, t}, {2, t + 8}));
    CHECK(net.boundGuarantee({0, t}, {0, t}));  // reflexive, D(i,i)=0
  }
  // no path: never guaranteed, whatever the gap
  CHECK_FALSE(net.boundGuarantee({2, 0}, {0, 100}));
}

TEST_CASE("diameter") {
  Network complete3(3, {{0, 1, 1, 2}, {1, 0, 1, 2}, {0, 2, 1, 2},
                        {2, 0, 1, 2}, {1, 2, 1, 2}, {2, 1, 1, 2}});
  CHECK(complete3.diameter(0) == 2);

  Network single(1, {});
  CHECK(single.diameter(0) == 0);

  Network star(3, {{0, 1, 1, 3}, {0, 2, 1, 7}});
  CHECK(star.diameter(0) == 7);
}

TEST_CASE("context classification precedence") {
  CHECK(Network(2, {{0, 1, 1, 3}}).classifyContext() == ContextClass::MaxOnly);
  CHECK(Network(2, {{0, 1, 2, kInf}}).classifyContext() == ContextClass::MinOnly);
  CHECK(Network(2, {{0, 1, 4, 4}}).classifyContext() == ContextClass::Fixed);
  CHECK(Network(2, {{0, 1, 1, kInf}}).classifyContext() == ContextClass::AsyncDelivery);
  // [1,1] is both fixed and max-only; Fixed wins.
  CHECK(Network(2, {{0, 1, 1, 1}}).classifyContext() == ContextClass::Fixed);
  // mixed [1,1] and [1,2] is MaxOnly, not Fixed
  CHECK(Network(3, {{0, 1, 1, 1}, {1, 2, 1, 2}}).classifyContext() == ContextClass::MaxOnly);
  CHECK(Network(3, {{0, 1, 2, 3}, {1, 2, 1, kInf}}).classifyContext() ==
        ContextClass::GeneralBounded);
  // min=1, max=inf everywhere: AsyncDelivery despite also matching MinOnly
  CHECK(Network(3, {{0, 1, 1, kInf}, {1, 2, 1, kInf}}).classifyContext() ==
        ContextClass::AsyncDelivery);
}

TEST_CASE("construction validation") {
  CHECK_THROWS_AS(Network(2, {{0, 0, 1, 1}}), ArgumentError);
  CHECK_THROWS_AS(Network(2, {{0, 1, 0, 1}}), ArgumentError);
  CHECK_THROWS_AS(Network(2, {{0, 1, 3, 2}}), ArgumentError);
  CHECK_THROWS_AS(Network(2, {{0, 2, 1, 1}}), ArgumentError);
  CHECK_THROWS_AS(Network(2, {{0, 1, 1, 1}, {0, 1, 1, 2}}), ArgumentError);
  CHECK_THROWS_AS(bankNet().maxDistance(0, 7), ArgumentError);
}

TEST_CASE("distances match brute-force path enumeration on random graphs") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + (int)(rng() % 4);
    std::vector<ChannelSpec> chans;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j || rng() % 3 == 0) continue;
        Dur mn = 1 + (Dur)(rng() % 3);
        Dur mx = (rng() % 4 == 0) ? kInf : mn + (Dur)(rng() % 4);
        chans.push_back({i, j, mn, mx});
      }
    Network net(n, chans);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CHECK(net.maxDistance(i, j) == bruteDistance(net, i, j, true));
        CHECK(net.minDistance(i, j) == bruteDistance(net, i, j, false));
        // min-weighted distance never exceeds the max-weighted one
        CHECK(satLeq(net.minDistance(i, j), net.maxDistance(i, j)));
        // triangle inequality
        for (int k = 0; k < n; ++k)
          CHECK(satLeq(net.maxDistance(i, j),
                       satAdd(net.maxDistance(i, k), net.maxDistance(k, j))));
      }
  }
}

TEST_CASE("bound guarantee is reflexive and transitive") {
  Network net = bankNet();
  std::mt19937 rng(99);
  std::vector<Node> nodes;
  for (int p = 0; p < 3; ++p)
    for (int t = 0; t <= 12; ++t) nodes.push_back({p, t});
  for (const Node& a : nodes) CHECK(net.boundGuarantee(a, a));
  for (int s = 0; s < 4000; ++s) {
    Node a = nodes[rng() % nodes.size()];
    Node b = nodes[rng() % nodes.size()];
    Node c = nodes[rng() % nodes.size()];
    if (net.boundGuarantee(a, b) && net.boundGuarantee(b, c))
      CHECK(net.boundGuarantee(a, c));
  }
}

TEST_CASE("json round trip") {
  Network net(3, {{0, 1, 2, kInf}, {1, 2, 1, 4}}, {"a", "b", "c"});
  Network back = Network::fromJson(net.toJson());
  CHECK(back.processes() == 3);
  CHECK(isInf(back.channel(0, 1)->max));
  CHECK(back.channel(1, 2)->max == 4);
  CHECK(back.label(1) == "b");
  CHECK(back.toJson() == net.toJson());
}
