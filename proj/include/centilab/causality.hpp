#ifndef CENTILAB_CAUSALITY_HPP
#define CENTILAB_CAUSALITY_HPP

#include <algorithm>
#include <map>
#include <vector>

#include "centilab/runtime.hpp"

namespace centilab {

// Square reachability matrix over the node grid, one bit per node pair.
class BitMat {
 public:
  explicit BitMat(int n = 0) : n_(n), words_((n + 63) / 64), bits_(n_ * words_, 0) {}
  void set(int r, int c) { bits_[r * words_ + c / 64] |= 1ull << (c % 64); }
  bool get(int r, int c) const {
    return bits_[r * words_ + c / 64] >> (c % 64) & 1;
  }
  void orRow(int dst, int src) {
    for (int w = 0; w < words_; ++w) bits_[dst * words_ + w] |= bits_[src * words_ + w];
  }

 private:
  int n_, words_;
  std::vector<unsigned long long> bits_;
};

// Per-run causal reachability: Lamport happened-before over local and message
// edges, and syncausality which adds timeout edges (j learns at t+max that a
// bounded channel was silent at t).
class CausalIndex {
 public:
  CausalIndex(const Network& net, const Run& run) : net_(&net), run_(&run) {
    n_ = net.processes();
    T_ = run.horizon;
    int g = n_ * (T_ + 1);
    lam_ = BitMat(g);
    syn_ = BitMat(g);

    // realized message edges, and per (channel, round) send marks
    std::map<std::pair<int, int>, std::vector<bool>> sent;
    for (const auto& [key, c] : net.channels()) {
      (void)c;
      sent[key] = std::vector<bool>(T_ + 1, false);
    }
    std::vector<std::vector<std::pair<int, int>>> msg(g);  // node -> message heads
    for (const auto& e : run.events) {
      if (e.kind == EventKind::Send) sent[{e.proc, e.peer}][e.time] = true;
      if (e.kind == EventKind::Receive) {
        const Event& s = run.events[e.link];
        msg[nodeId({s.proc, s.time})].push_back({e.proc, e.time});
      }
    }
    std::vector<std::vector<std::pair<int, int>>> timeout(g);
    for (const auto& [key, c] : net.channels()) {
      if (isInf(c.max)) continue;
      for (int t = 0; t <= T_; ++t)
        if (!sent[key][t] && t + c.max <= T_)
          timeout[nodeId({key.first, t})].push_back({key.second, (int)(t + c.max)});
    }

    // every edge strictly increases time, so rows close in one sweep from
    // the latest round backwards
    for (int t = T_; t >= 0; --t)
      for (int p = 0; p < n_; ++p) {
        int v = nodeId({p, t});
        lam_.set(v, v);
        syn_.set(v, v);
        auto absorb = [&](int w, bool lamToo) {
          if (lamToo) lam_.orRow(v, w);
          syn_.orRow(v, w);
        };
        if (t < T_) absorb(nodeId({p, t + 1}), true);
        for (const auto& [q, tq] : msg[v]) absorb(nodeId({q, tq}), true);
        for (const auto& [q, tq] : timeout[v]) absorb(nodeId({q, tq}), false);
      }

    ndAt_.assign(g, {});
    for (const NdEntry& en : ndEvents(net, run)) ndAt_[nodeId(en.node)].push_back(en.desc);
    for (auto& v : ndAt_) std::sort(v.begin(), v.end());
  }

  const Network& net() const { return *net_; }
  const Run& run() const { return *run_; }
  int horizon() const { return T_; }
  int processes() const { return n_; }

  bool onGrid(const Node& a) const {
    return a.proc >= 0 && a.proc < n_ && a.time >= 0 && a.time <= T_;
  }

  bool lamportReach(const Node& a, const Node& b) const {
    checkGrid(a);
    checkGrid(b);
    return lam_.get(nodeId(a), nodeId(b));
  }

  bool syncausalReach(const Node& a, const Node& b) const {
    checkGrid(a);
    checkGrid(b);
    return syn_.get(nodeId(a), nodeId(b));
  }

  const std::vector<std::string>& ndAt(const Node& a) const {
    checkGrid(a);
    return ndAt_[nodeId(a)];
  }

  struct ConeEntry {
    Node node;
    std::vector<std::string> nd;
    bool operator==(const ConeEntry& o) const { return node == o.node && nd == o.nd; }
    bool operator<(const ConeEntry& o) const {
      return node < o.node || (node == o.node && nd < o.nd);
    }
  };

  std::vector<ConeEntry> pastCone(const Node& theta) const {
    return collect([&](const Node& x) { return syncausalReach(x, theta); });
  }
  std::vector<ConeEntry> futCone(const Node& theta) const {
    return collect([&](const Node& x) { return syncausalReach(theta, x); });
  }
  // realized future by time tP: happened-before successors only
  std::vector<Node> futConeAt(const Node& theta, int tP) const {
    std::vector<Node> out;
    for (int p = 0; p < n_; ++p)
      for (int t = 0; t <= std::min(tP, T_); ++t)
        if (lamportReach(theta, {p, t})) out.push_back({p, t});
    return out;
  }
  std::vector<ConeEntry> ndPast(const Node& theta) const {
    std::vector<ConeEntry> out;
    for (ConeEntry& e : pastCone(theta))
      if (!e.nd.empty()) out.push_back(std::move(e));
    return out;
  }

  // All beta with a ~> beta -> b (guarantee) such that no earlier beta' has
  // a ~> beta' -> beta; sorted by (time, proc).
  std::vector<Node> bridges(const Node& a, const Node& b) const {
    if (!syncausalReach(a, b))
      throw ArgumentError("bridges: endpoints not syncausally related");
    std::vector<Node> cands;
    for (int p = 0; p < n_; ++p)
      for (int t = a.time; t <= T_; ++t) {
        Node beta{p, t};
        if (syncausalReach(a, beta) && net_->boundGuarantee(beta, b))
          cands.push_back(beta);
      }
    std::vector<Node> out;
    for (const Node& beta : cands) {
      bool minimal = true;
      for (const Node& other : cands)
        if (other != beta && net_->boundGuarantee(other, beta)) {
          minimal = false;
          break;
        }
      if (minimal) out.push_back(beta);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  int nodeId(const Node& a) const { return a.proc * (T_ + 1) + a.time; }
  void checkGrid(const Node& a) const {
    if (!onGrid(a)) throw ArgumentError("node off grid: " + to_string(a));
  }
  template <class Pred>
  std::vector<ConeEntry> collect(Pred pred) const {
    std::vector<ConeEntry> out;
    for (int p = 0; p < n_; ++p)
      for (int t = 0; t <= T_; ++t)
        if (pred(Node{p, t})) out.push_back({{p, t}, ndAt_[nodeId({p, t})]});
    return out;
  }

  const Network* net_;
  const Run* run_;
  int n_ = 0, T_ = 0;
  BitMat lam_, syn_;
  std::vector<std::vector<std::string>> ndAt_;
};

}  // namespace centilab

#endif
