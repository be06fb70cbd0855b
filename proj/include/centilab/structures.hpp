#ifndef CENTILAB_STRUCTURES_HPP
#define CENTILAB_STRUCTURES_HPP

#include <optional>
#include <vector>

#include "centilab/causality.hpp"

namespace centilab {

struct CentipedeWitness {
  std::vector<int> seq;    // i_0..i_k
  std::vector<Node> body;  // theta_0..theta_k
  int t = 0, deadline = 0;
};

struct CentibroomWitness {
  Node node;
  int origin = 0;
  int t = 0, deadline = 0;
  std::vector<int> group;
};

struct GenCentipedeWitness {
  Node origin;
  std::vector<std::vector<int>> groups;
  std::vector<Node> body;  // theta_1..theta_k (origin excluded)
  int deadline = 0;
};

// Re-checks a witness against the causal primitives only; used by detectors
// and independently by tests.
inline bool validCentipede(const CausalIndex& ix, const CentipedeWitness& w) {
  const Network& net = ix.net();
  size_t k = w.seq.size() - 1;
  if (w.body.size() != w.seq.size()) return false;
  if (w.body.front() != Node{w.seq[0], w.t}) return false;
  if (k > 0 && w.body.back() != Node{w.seq[k], w.deadline}) return false;
  for (size_t h = 0; h + 1 < w.body.size(); ++h)
    if (!ix.syncausalReach(w.body[h], w.body[h + 1])) return false;
  for (size_t h = 1; h + 1 < w.body.size(); ++h)
    if (!net.boundGuarantee(w.body[h], {w.seq[h], w.deadline})) return false;
  return true;
}

inline bool validCentibroom(const CausalIndex& ix, const CentibroomWitness& w) {
  if (!ix.syncausalReach({w.origin, w.t}, w.node)) return false;
  for (int g : w.group)
    if (!ix.net().boundGuarantee(w.node, {g, w.deadline})) return false;
  return true;
}

inline bool validGenCentipede(const CausalIndex& ix, const GenCentipedeWitness& w) {
  if (w.body.size() != w.groups.size()) return false;
  Node prev = w.origin;
  for (size_t h = 0; h < w.body.size(); ++h) {
    if (!ix.syncausalReach(prev, w.body[h])) return false;
    for (int i : w.groups[h])
      if (!ix.net().boundGuarantee(w.body[h], {i, w.deadline})) return false;
    prev = w.body[h];
  }
  return true;
}

namespace detail {

// Earliest (time, proc) bridge between a and b; both already syncausally
// related. Used to normalize witnesses to the bridge form.
inline Node earliestBridge(const CausalIndex& ix, const Node& a, const Node& b) {
  return ix.bridges(a, b).front();
}

inline std::vector<Node> gridByTime(const CausalIndex& ix, int from, int to) {
  std::vector<Node> out;
  for (int t = from; t <= std::min(to, ix.horizon()); ++t)
    for (int p = 0; p < ix.processes(); ++p) out.push_back({p, t});
  return out;
}

}  // namespace detail

// Frontier search: S_h holds nodes reachable along the body chain whose
// guarantee leg to (i_h, deadline) holds. Witnesses are normalized so every
// interior body node bridges its predecessor and the raw chain node.
inline std::optional<CentipedeWitness> findCentipede(const CausalIndex& ix,
                                                     const std::vector<int>& seq,
                                                     int t, int deadline) {
  if (seq.empty()) throw ArgumentError("empty process sequence");
  if (t > deadline || deadline > ix.horizon() || t < 0)
    throw ArgumentError("bad interval");
  const Network& net = ix.net();
  size_t k = seq.size() - 1;
  Node origin{seq[0], t};
  if (!ix.onGrid(origin)) throw ArgumentError("origin off grid");
  CentipedeWitness w{seq, {origin}, t, deadline};
  if (k == 0) return w;

  std::vector<std::vector<Node>> raw(k);  // raw[h-1]: S_h members
  std::vector<std::vector<int>> back(k);  // index into previous frontier
  std::vector<Node> prev{origin};
  for (size_t h = 1; h < k; ++h) {
    for (const Node& cand : detail::gridByTime(ix, t, deadline)) {
      if (!net.boundGuarantee(cand, {seq[h], deadline})) continue;
      for (size_t pi = 0; pi < prev.size(); ++pi)
        if (ix.syncausalReach(prev[pi], cand)) {
          raw[h - 1].push_back(cand);
          back[h - 1].push_back((int)pi);
          break;
        }
    }
    if (raw[h - 1].empty()) return std::nullopt;
    prev = raw[h - 1];
  }
  Node last{seq[k], deadline};
  int endBack = -1;
  for (size_t pi = 0; pi < prev.size(); ++pi)
    if (ix.syncausalReach(prev[pi], last)) {
      endBack = (int)pi;
      break;
    }
  if (endBack < 0) return std::nullopt;

  // reconstruct the raw chain theta_1..theta_{k-1}
  std::vector<Node> chain(k + 1);
  chain[k] = last;
  int at = endBack;
  for (size_t h = k; h-- > 1;) {
    chain[h] = raw[h - 1][at];
    at = back[h - 1][at];
  }
  chain[0] = origin;
  // normalize interior nodes to bridges; the guarantee legs transfer since
  // each bridge reaches the raw node it replaces by a guarantee
  for (size_t h = 1; h < k; ++h)
    chain[h] = detail::earliestBridge(ix, chain[h - 1], chain[h]);
  w.body = chain;
  if (!validCentipede(ix, w)) throw std::logic_error("centipede witness invalid");
  return w;
}

inline std::optional<CentibroomWitness> findCentibroom(const CausalIndex& ix,
                                                       int i0, int t,
                                                       const std::vector<int>& group,
                                                       int deadline) {
  if (t > deadline || deadline > ix.horizon() || t < 0)
    throw ArgumentError("bad interval");
  Node origin{i0, t};
  for (const Node& cand : detail::gridByTime(ix, t, deadline)) {
    if (!ix.syncausalReach(origin, cand)) continue;
    bool all = true;
    for (int g : group)
      if (!ix.net().boundGuarantee(cand, {g, deadline})) {
        all = false;
        break;
      }
    if (all) {
      CentibroomWitness w{cand, i0, t, deadline, group};
      if (!validCentibroom(ix, w)) throw std::logic_error("centibroom witness invalid");
      return w;
    }
  }
  return std::nullopt;
}

inline std::optional<CentibroomWitness> findBridgingCentibroom(
    const CausalIndex& ix, int i0, int t, const std::vector<int>& group,
    int deadline) {
  if (!findCentibroom(ix, i0, t, group, deadline)) return std::nullopt;
  Node origin{i0, t};
  for (const Node& cand : detail::gridByTime(ix, t, deadline)) {
    if (!ix.syncausalReach(origin, cand)) continue;
    bool ok = true;
    for (int g : group) {
      auto bs = ix.bridges(origin, {g, deadline});
      if (std::find(bs.begin(), bs.end(), cand) == bs.end()) {
        ok = false;
        break;
      }
    }
    if (ok) return CentibroomWitness{cand, i0, t, deadline, group};
  }
  return std::nullopt;
}

inline std::optional<GenCentipedeWitness> findGeneralizedCentipede(
    const CausalIndex& ix, const Node& origin,
    const std::vector<std::vector<int>>& groups, int deadline) {
  if (origin.time > deadline || deadline > ix.horizon())
    throw ArgumentError("bad interval");
  const Network& net = ix.net();
  size_t k = groups.size();
  GenCentipedeWitness w{origin, groups, {}, deadline};
  if (k == 0) return w;

  std::vector<std::vector<Node>> raw(k);
  std::vector<std::vector<int>> back(k);
  std::vector<Node> prev{origin};
  for (size_t h = 0; h < k; ++h) {
    for (const Node& cand : detail::gridByTime(ix, origin.time, deadline)) {
      bool legs = true;
      for (int i : groups[h])
        if (!net.boundGuarantee(cand, {i, deadline})) {
          legs = false;
          break;
        }
      if (!legs) continue;
      for (size_t pi = 0; pi < prev.size(); ++pi)
        if (ix.syncausalReach(prev[pi], cand)) {
          raw[h].push_back(cand);
          back[h].push_back((int)pi);
          break;
        }
    }
    if (raw[h].empty()) return std::nullopt;
    prev = raw[h];
  }
  std::vector<Node> chain(k);
  int at = 0;  // any member of the last frontier; take the earliest
  for (size_t h = k; h-- > 0;) {
    chain[h] = raw[h][at];
    at = back[h][at];
  }
  Node before = origin;
  for (size_t h = 0; h < k; ++h) {
    chain[h] = detail::earliestBridge(ix, before, chain[h]);
    before = chain[h];
  }
  w.body = chain;
  if (!validGenCentipede(ix, w)) throw std::logic_error("gen centipede witness invalid");
  return w;
}

// ND-past entries of group members at time t that admit a centibroom to the
// whole group within (0..t). Determines common-knowledge valuation at (r,t).
inline std::vector<CausalIndex::ConeEntry> centibroomPast(const CausalIndex& ix,
                                                          int t,
                                                          const std::vector<int>& group) {
  if (group.empty()) throw ArgumentError("empty group");
  std::vector<CausalIndex::ConeEntry> uni;
  for (int g : group)
    for (const auto& e : ix.ndPast({g, t})) uni.push_back(e);
  std::sort(uni.begin(), uni.end());
  uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
  std::vector<CausalIndex::ConeEntry> out;
  for (const auto& e : uni)
    if (findCentibroom(ix, e.node.proc, e.node.time, group, t)) out.push_back(e);
  return out;
}

}  // namespace centilab

#endif
