#ifndef CENTILAB_CONES_HPP
#define CENTILAB_CONES_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "centilab/epistemics.hpp"

namespace centilab {

// Influence cones over the process/time grid, legal (lower-bound respecting)
// message chains, cuts, causal fronts, and the certificates that characterize
// knowledge of ignorance when channels carry minimum transmission times.

// nodes guaranteed to be influenced by theta regardless of how the run
// unfolds: everything at or beyond the max-weighted distance
inline std::set<Node> boxAff(const Network& net, const Node& theta, int horizon) {
  std::set<Node> out;
  for (int j = 0; j < net.processes(); ++j) {
    Dur d = net.maxDistance(theta.proc, j);
    if (isInf(d)) continue;
    for (int t = theta.time; t <= horizon; ++t)
      if ((Dur)t >= satAdd((Dur)theta.time, d)) out.insert({j, t});
  }
  return out;
}

// nodes that cannot be influenced by theta in any run: everything strictly
// below the min-weighted distance
inline std::set<Node> boxUnaff(const Network& net, const Node& theta, int horizon) {
  std::set<Node> out;
  for (int j = 0; j < net.processes(); ++j) {
    Dur d = net.minDistance(theta.proc, j);
    for (int t = 0; t <= horizon; ++t)
      if (isInf(d) || (Dur)t < satAdd((Dur)theta.time, d)) out.insert({j, t});
  }
  return out;
}

// the part of theta's future already realized by time tP
inline std::set<Node> futRealized(const CausalIndex& ix, const Node& theta, int tP) {
  std::vector<Node> v = ix.futConeAt(theta, tP);
  return {v.begin(), v.end()};
}

// necessarily-affected given the realized prefix: guaranteed cones seeded at
// every realized future node
inline std::set<Node> boxAffAt(const CausalIndex& ix, const Node& theta, int tP) {
  std::set<Node> out;
  for (const Node& f : ix.futConeAt(theta, tP)) {
    std::set<Node> b = boxAff(ix.net(), f, ix.horizon());
    out.insert(b.begin(), b.end());
  }
  return out;
}

// potentially-affected given the realized prefix. Nodes at or before tP are
// settled: they are potentially affected only if actually realized. Beyond tP
// any min-distance continuation from a realized node is still open.
inline std::set<Node> diamondAffAt(const CausalIndex& ix, const Node& theta, int tP) {
  std::vector<Node> fut = ix.futConeAt(theta, tP);
  std::set<Node> out(fut.begin(), fut.end());
  for (const Node& f : fut)
    for (int j = 0; j < ix.processes(); ++j) {
      Dur d = ix.net().minDistance(f.proc, j);
      if (isInf(d)) continue;
      for (int t = tP + 1; t <= ix.horizon(); ++t)
        if ((Dur)t >= satAdd((Dur)f.time, d)) out.insert({j, t});
    }
  return out;
}

struct ConeReport {
  Node origin;
  int at = 0;
  std::set<Node> futRealized, boxAff, boxAffAt, diamondAffAt;
  std::set<Node> boxUnaff, boxUnaffAt, diamondUnaffAt;

  nlohmann::json toJson() const {
    auto enc = [](const std::set<Node>& s) {
      nlohmann::json arr = nlohmann::json::array();
      for (const Node& n : s) arr.push_back({{"proc", n.proc}, {"time", n.time}});
      return arr;
    };
    return {{"origin", {{"proc", origin.proc}, {"time", origin.time}}},
            {"at", at},
            {"fut_realized", enc(futRealized)},
            {"box_aff", enc(boxAff)},
            {"box_aff_at", enc(boxAffAt)},
            {"diamond_aff_at", enc(diamondAffAt)},
            {"box_unaff", enc(boxUnaff)},
            {"box_unaff_at", enc(boxUnaffAt)},
            {"diamond_unaff_at", enc(diamondUnaffAt)}};
  }
};

inline ConeReport coneReport(const CausalIndex& ix, const Node& theta, int tP) {
  if (!ix.onGrid(theta)) throw ArgumentError("node off grid: " + to_string(theta));
  if (tP < theta.time || tP > ix.horizon())
    throw ArgumentError("report time outside [origin, horizon]");
  ConeReport rep;
  rep.origin = theta;
  rep.at = tP;
  rep.futRealized = futRealized(ix, theta, tP);
  rep.boxAff = boxAff(ix.net(), theta, ix.horizon());
  rep.boxAffAt = boxAffAt(ix, theta, tP);
  rep.diamondAffAt = diamondAffAt(ix, theta, tP);
  rep.boxUnaff = boxUnaff(ix.net(), theta, ix.horizon());
  for (int p = 0; p < ix.processes(); ++p)
    for (int t = 0; t <= ix.horizon(); ++t) {
      Node n{p, t};
      if (!rep.diamondAffAt.count(n)) rep.boxUnaffAt.insert(n);
      if (!rep.boxAffAt.count(n)) rep.diamondUnaffAt.insert(n);
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Legal message chains: strictly increasing times, hops only along channels,
// each hop at least the channel minimum. Upper bounds play no role here.

namespace conedetail {
inline std::vector<Node> legalSuccessors(const Network& net, const Node& a,
                                         int tMax) {
  std::vector<Node> out;
  for (int t = a.time + 1; t <= tMax; ++t) out.push_back({a.proc, t});
  for (const auto& [key, c] : net.channels()) {
    if (key.first != a.proc) continue;
    for (int t = a.time; t <= tMax; ++t)
      if (satLeq(c.min, (Dur)(t - a.time))) out.push_back({key.second, t});
  }
  return out;
}

// nodes reachable from a by a legal chain, capped at tMax; includes a itself
inline std::set<Node> legalReachable(const Network& net, const Node& a, int tMax,
                                     const std::set<Node>* avoid = nullptr) {
  std::set<Node> seen{a};
  std::vector<Node> frontier{a};
  while (!frontier.empty()) {
    Node cur = frontier.back();
    frontier.pop_back();
    for (const Node& nxt : legalSuccessors(net, cur, tMax)) {
      if (avoid && avoid->count(nxt)) continue;
      if (seen.insert(nxt).second) frontier.push_back(nxt);
    }
  }
  return seen;
}
}  // namespace conedetail

// adjacency of the chain graph between theta0 and theta1: only nodes lying on
// at least one theta0 -> theta1 legal chain are kept
inline std::map<Node, std::vector<Node>> potentialGraph(const Network& net,
                                                        const Node& theta0,
                                                        const Node& theta1) {
  std::map<Node, std::vector<Node>> g;
  std::set<Node> fromStart =
      conedetail::legalReachable(net, theta0, theta1.time);
  for (const Node& n : fromStart) {
    if (!conedetail::legalReachable(net, n, theta1.time).count(theta1)) continue;
    auto& edges = g[n];
    for (const Node& s : conedetail::legalSuccessors(net, n, theta1.time))
      if (fromStart.count(s) &&
          conedetail::legalReachable(net, s, theta1.time).count(theta1))
        edges.push_back(s);
  }
  return g;
}

inline bool legalChainExists(const Network& net, const Node& theta0,
                             const Node& theta1) {
  if (theta1.time < theta0.time) return false;
  return conedetail::legalReachable(net, theta0, theta1.time).count(theta1) > 0;
}

// C intersects every theta0 -> theta1 legal chain, and every member of C lies
// on at least one such chain. With no chains at all the notion is undefined;
// `vacuous` is raised instead of guessing a truth value.
inline bool isCut(const Network& net, const Node& theta0, const Node& theta1,
                  const std::set<Node>& C, bool* vacuous = nullptr) {
  if (vacuous) *vacuous = false;
  if (!legalChainExists(net, theta0, theta1)) {
    if (vacuous) *vacuous = true;
    return false;
  }
  for (const Node& c : C) {
    if (!legalChainExists(net, theta0, c) || !legalChainExists(net, c, theta1))
      return false;  // off the chain bundle
  }
  if (C.count(theta0) || C.count(theta1)) return true;
  std::set<Node> reach =
      conedetail::legalReachable(net, theta0, theta1.time, &C);
  return reach.count(theta1) == 0;
}

// no member of C is causally reached by theta0 in this run
inline bool isClean(const CausalIndex& ix, const Node& theta0,
                    const std::set<Node>& C) {
  for (const Node& c : C)
    if (ix.onGrid(theta0) && ix.onGrid(c) && ix.lamportReach(theta0, c))
      return false;
  return true;
}

// nodes phi on the theta0 -> theta1 chain bundle that are the unique contact
// point with theta2's past on some chain continuation to theta1
inline std::set<Node> causalFront(const CausalIndex& ix, const Node& theta2,
                                  const Node& theta0, const Node& theta1) {
  const Network& net = ix.net();
  std::set<Node> past;
  for (int p = 0; p < ix.processes(); ++p)
    for (int t = 0; t <= ix.horizon(); ++t)
      if (ix.lamportReach({p, t}, theta2)) past.insert({p, t});

  std::set<Node> front;
  if (theta1.time > ix.horizon()) return front;
  std::set<Node> fromStart =
      conedetail::legalReachable(net, theta0, theta1.time);
  for (const Node& phi : fromStart) {
    if (!past.count(phi)) continue;
    if (!conedetail::legalReachable(net, phi, theta1.time).count(theta1))
      continue;
    if (phi == theta1) {
      front.insert(phi);  // the one-node chain has no other contact point
      continue;
    }
    // a continuation to theta1 that never re-enters theta2's past
    std::set<Node> avoid = past;
    avoid.erase(phi);
    if (conedetail::legalReachable(net, phi, theta1.time, &avoid).count(theta1))
      front.insert(phi);
  }
  return front;
}

struct FrontCertificate {
  Node theta0, theta1, theta2;
  std::set<Node> front;
  bool cut = false;
  bool clean = false;
  bool vacuous = false;  // no legal chain at all; cut undefined
  bool verdict = false;  // cut && clean

  nlohmann::json toJson() const {
    nlohmann::json f = nlohmann::json::array();
    for (const Node& n : front) f.push_back({{"proc", n.proc}, {"time", n.time}});
    return {{"theta0", to_string(theta0)}, {"theta1", to_string(theta1)},
            {"theta2", to_string(theta2)}, {"front", f},
            {"is_cut", cut},               {"is_clean", clean},
            {"vacuous", vacuous},          {"verdict", verdict}};
  }
};

struct IgnoranceVerdict {
  bool structural = false;  // from the front certificate
  bool epistemic = false;   // from direct model checking
  bool agree = false;
  FrontCertificate cert;
};

// Does theta2 know that theta0 cannot have influenced theta1? Answered twice:
// by the clean-cut certificate on the causal front and by evaluating the
// knowledge formula itself over the run set. The two must coincide.
inline IgnoranceVerdict knowsNotReach(Checker& ck, FormulaPool& pool, int runIdx,
                                      const Node& theta2, const Node& theta0,
                                      const Node& theta1) {
  const CausalIndex& ix = ck.index(runIdx);
  IgnoranceVerdict v;
  v.cert.theta0 = theta0;
  v.cert.theta1 = theta1;
  v.cert.theta2 = theta2;
  v.cert.front = causalFront(ix, theta2, theta0, theta1);
  v.cert.cut = isCut(ix.net(), theta0, theta1, v.cert.front, &v.cert.vacuous);
  if (v.cert.vacuous) v.cert.cut = true;  // unreachable pair: every set blocks
  v.cert.clean = isClean(ix, theta0, v.cert.front);
  v.cert.verdict = v.cert.cut && v.cert.clean;
  v.structural = v.cert.verdict;

  const Formula* f =
      pool.know(theta2.proc, pool.negation(pool.reach(theta0, theta1)));
  v.epistemic = ck.check(runIdx, theta2.time, f);
  v.agree = v.structural == v.epistemic;
  return v;
}

// Does theta2 know that theta1 does not know the nondeterministic event
// happened by t1? Reduces to knowsNotReach from (i0, t'+1) where t' is the
// latest round theta2 still knows the event has not happened.
inline IgnoranceVerdict knowsIgnorance(Checker& ck, FormulaPool& pool, int runIdx,
                                       const Node& theta2, int i0,
                                       const std::string& token,
                                       const Node& theta1, int t1) {
  EventRef ev{i0, token};
  int tPrime = -1;
  for (int t = 0; t <= ck.runs().horizon; ++t) {
    const Formula* f =
        pool.know(theta2.proc, pool.negation(pool.at(t, pool.occurred(ev))));
    if (ck.check(runIdx, theta2.time, f)) tPrime = t;
  }

  const Formula* direct = pool.know(
      theta2.proc,
      pool.negation(pool.at(
          theta1.time,
          pool.know(theta1.proc, pool.at(t1, pool.occurred(ev))))));
  bool epistemic = ck.check(runIdx, theta2.time, direct);

  if (tPrime >= ck.runs().horizon) {
    // theta2 knows the event never happens inside the grid; ignorance of
    // theta1 is immediate and there is no origin node left to cut off
    IgnoranceVerdict v;
    v.cert.theta1 = theta1;
    v.cert.theta2 = theta2;
    v.cert.vacuous = true;
    v.cert.cut = v.cert.clean = v.cert.verdict = true;
    v.structural = true;
    v.epistemic = epistemic;
    v.agree = v.structural == v.epistemic;
    return v;
  }
  Node theta0{i0, tPrime + 1};
  IgnoranceVerdict v = knowsNotReach(ck, pool, runIdx, theta2, theta0, theta1);
  v.epistemic = epistemic;
  v.agree = v.structural == v.epistemic;
  return v;
}

}  // namespace centilab

#endif
