#ifndef CENTILAB_RESPONSE_HPP
#define CENTILAB_RESPONSE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "centilab/epistemics.hpp"

namespace centilab {

struct ResponseAction {
  std::string token;
  int proc = 0;
};

// trigger e_t at process triggerProc, then alpha_1..alpha_k in order
struct ORSpec {
  int triggerProc = 0;
  std::string triggerToken;
  std::vector<ResponseAction> responses;
};

// trigger, then all responses simultaneously; the group is the response procs
struct SRSpec {
  int triggerProc = 0;
  std::string triggerToken;
  std::vector<ResponseAction> responses;
};

// trigger, then response sets A^1..A^k: simultaneous within a set, ordered
// across sets
struct OGRSpec {
  int triggerProc = 0;
  std::string triggerToken;
  std::vector<std::vector<ResponseAction>> groups;
};

inline std::vector<int> groupProcs(const std::vector<ResponseAction>& as) {
  std::set<int> s;
  for (const auto& a : as) s.insert(a.proc);
  return {s.begin(), s.end()};
}

// event set V with triggers T and ordering edges; events are performed by a
// single process each
struct GRSpec {
  std::vector<std::string> events;
  std::map<std::string, int> proc;
  std::vector<std::string> triggers;
  std::vector<std::pair<std::string, std::string>> order;  // e comes before e'
};

struct Verdict {
  bool solves = true;
  std::string counterexample;
};

inline Verdict violation(int run, const std::string& what) {
  return {false, "run " + std::to_string(run) + ": " + what};
}

// first occurrence of the named input or action in the run, -1 if absent
inline int eventTime(const Run& r, int proc, const std::string& token) {
  int best = -1;
  for (const Event& e : r.events)
    if ((e.kind == EventKind::ExternalInput || e.kind == EventKind::Internal) &&
        e.proc == proc && e.payload == token && (best < 0 || e.time < best))
      best = e.time;
  return best;
}

namespace detail {
inline void requireTriggerable(const RunSet& rs, int proc, const std::string& tok) {
  for (const Run& r : rs.runs)
    if (eventTime(r, proc, tok) >= 0) return;
  throw ConfigError("trigger " + tok + " never occurs in the run set");
}
}  // namespace detail

inline Verdict checkSolvesOr(const RunSet& rs, const ORSpec& spec) {
  if (spec.responses.empty()) throw ConfigError("empty response list");
  std::set<std::string> toks{spec.triggerToken};
  for (const auto& a : spec.responses)
    if (!toks.insert(a.token).second) throw ConfigError("duplicate token in spec");
  detail::requireTriggerable(rs, spec.triggerProc, spec.triggerToken);
  for (int ri = 0; ri < (int)rs.runs.size(); ++ri) {
    const Run& r = rs.runs[ri];
    int tt = eventTime(r, spec.triggerProc, spec.triggerToken);
    int prev = tt;
    for (const auto& a : spec.responses) {
      int ta = eventTime(r, a.proc, a.token);
      if (tt < 0) {
        if (ta >= 0) return violation(ri, "clause 2: " + a.token + " without trigger");
        continue;
      }
      if (ta < 0) return violation(ri, "clause 1: " + a.token + " missing");
      if (ta < prev) return violation(ri, "clause 1: " + a.token + " out of order");
      prev = ta;
    }
  }
  return {};
}

inline Verdict checkSolvesSr(const RunSet& rs, const SRSpec& spec) {
  if (spec.responses.empty()) throw ConfigError("empty response list");
  detail::requireTriggerable(rs, spec.triggerProc, spec.triggerToken);
  for (int ri = 0; ri < (int)rs.runs.size(); ++ri) {
    const Run& r = rs.runs[ri];
    int tt = eventTime(r, spec.triggerProc, spec.triggerToken);
    int common = -2;
    for (const auto& a : spec.responses) {
      int ta = eventTime(r, a.proc, a.token);
      if (tt < 0 && ta >= 0)
        return violation(ri, "clause 2: " + a.token + " without trigger");
      if (tt < 0) continue;
      if (ta < 0) return violation(ri, "clause 1: " + a.token + " missing");
      if (ta < tt) return violation(ri, "clause 1: " + a.token + " before trigger");
      if (common == -2) common = ta;
      if (ta != common)
        return violation(ri, "clause 1: " + a.token + " not simultaneous");
    }
  }
  return {};
}

inline Verdict checkWeaklySolvesOgr(const RunSet& rs, const OGRSpec& spec) {
  for (const auto& g : spec.groups)
    if (g.empty()) throw ConfigError("empty response group");
  for (int ri = 0; ri < (int)rs.runs.size(); ++ri) {
    const Run& r = rs.runs[ri];
    std::vector<int> when(spec.groups.size(), -1);
    for (size_t h = 0; h < spec.groups.size(); ++h) {
      int common = -2;
      for (const auto& a : spec.groups[h]) {
        int ta = eventTime(r, a.proc, a.token);
        if (common == -2) common = ta;
        if (ta != common)
          return violation(ri, "group " + std::to_string(h + 1) + " not simultaneous");
      }
      when[h] = common == -2 ? -1 : common;
    }
    for (size_t h = 0; h < spec.groups.size(); ++h) {
      if (when[h] < 0) continue;
      for (size_t h2 = 0; h2 < h; ++h2)
        if (when[h2] < 0 || when[h2] > when[h])
          return violation(ri, "group " + std::to_string(h2 + 1) +
                                   " does not precede group " + std::to_string(h + 1));
    }
  }
  return {};
}

inline Verdict checkSolvesOgr(const RunSet& rs, const OGRSpec& spec) {
  Verdict weak = checkWeaklySolvesOgr(rs, spec);
  if (!weak.solves) return weak;
  detail::requireTriggerable(rs, spec.triggerProc, spec.triggerToken);
  for (int ri = 0; ri < (int)rs.runs.size(); ++ri) {
    const Run& r = rs.runs[ri];
    int tt = eventTime(r, spec.triggerProc, spec.triggerToken);
    for (size_t h = 0; h < spec.groups.size(); ++h)
      for (const auto& a : spec.groups[h]) {
        int ta = eventTime(r, a.proc, a.token);
        if (tt < 0 && ta >= 0)
          return violation(ri, "clause 2: " + a.token + " without trigger");
        if (tt >= 0 && ta < 0) return violation(ri, "clause 1: " + a.token + " missing");
        if (tt >= 0 && ta < tt)
          return violation(ri, "clause 1: " + a.token + " before trigger");
      }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Generalized Response

struct CondensedGR {
  std::vector<std::vector<std::string>> comps;  // member tokens, sorted
  std::vector<int> triggers;                    // component indices
  std::set<std::pair<int, int>> edges;          // from the given covering edges
};

namespace detail {
inline std::map<std::string, int> grIndex(const GRSpec& spec) {
  std::map<std::string, int> idx;
  for (size_t i = 0; i < spec.events.size(); ++i) {
    if (!idx.emplace(spec.events[i], (int)i).second)
      throw ConfigError("duplicate event " + spec.events[i]);
    if (!spec.proc.count(spec.events[i]))
      throw ConfigError("no process for event " + spec.events[i]);
  }
  return idx;
}

// reflexive-transitive closure of the order edges
inline std::vector<std::vector<bool>> grClosure(const GRSpec& spec,
                                                const std::map<std::string, int>& idx) {
  size_t n = spec.events.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) leq[i][i] = true;
  for (const auto& [a, b] : spec.order) {
    if (!idx.count(a) || !idx.count(b)) throw ConfigError("order edge off event set");
    leq[idx.at(a)][idx.at(b)] = true;
  }
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      if (leq[i][k])
        for (size_t j = 0; j < n; ++j)
          if (leq[k][j]) leq[i][j] = true;
  return leq;
}
}  // namespace detail

inline CondensedGR condense(const GRSpec& spec) {
  auto idx = detail::grIndex(spec);
  auto leq = detail::grClosure(spec, idx);
  size_t n = spec.events.size();
  for (const std::string& tau : spec.triggers) {
    if (!idx.count(tau)) throw ConfigError("trigger off event set");
    for (size_t i = 0; i < n; ++i)
      if (leq[i][idx.at(tau)] && (int)i != idx.at(tau))
        throw ConfigError("trigger " + tau + " is not minimal");
  }
  // strongly connected components: mutual closure reachability
  std::vector<int> comp(n, -1);
  CondensedGR out;
  for (size_t i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    int id = (int)out.comps.size();
    std::vector<std::string> members;
    for (size_t j = i; j < n; ++j)
      if (comp[j] < 0 && leq[i][j] && leq[j][i]) {
        comp[j] = id;
        members.push_back(spec.events[j]);
      }
    std::sort(members.begin(), members.end());
    out.comps.push_back(std::move(members));
  }
  // edges come from the covering relation as given, so chains match the
  // drawn activation arrows rather than all transitive shortcuts
  for (const auto& [a, b] : spec.order) {
    int ca = comp[idx.at(a)], cb = comp[idx.at(b)];
    if (ca != cb) out.edges.insert({ca, cb});
  }
  for (const std::string& tau : spec.triggers) out.triggers.push_back(comp[idx.at(tau)]);
  std::sort(out.triggers.begin(), out.triggers.end());
  out.triggers.erase(std::unique(out.triggers.begin(), out.triggers.end()),
                     out.triggers.end());
  return out;
}

// all trigger-rooted edge paths ending at the target component
inline std::vector<std::vector<int>> componentChains(const CondensedGR& c, int target) {
  if (target < 0 || target >= (int)c.comps.size())
    throw ArgumentError("target component out of range");
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  auto dfs = [&](auto&& self, int v) -> void {
    path.push_back(v);
    if (v == target) out.push_back(path);
    for (const auto& [a, b] : c.edges)
      if (a == v) self(self, b);
    path.pop_back();
  };
  for (int tau : c.triggers) dfs(dfs, tau);
  return out;
}

// Checked on the condensed form: a component occurs when all its members do,
// simultaneously. Trigger components are environment-driven inputs, so only
// the non-trigger components carry the occurrence biconditional.
inline Verdict checkSolvesGr(const RunSet& rs, const GRSpec& spec) {
  CondensedGR c = condense(spec);
  size_t m = c.comps.size();
  std::vector<char> isTrigger(m, 0);
  for (int tau : c.triggers) isTrigger[tau] = 1;
  for (int ri = 0; ri < (int)rs.runs.size(); ++ri) {
    const Run& r = rs.runs[ri];
    std::vector<int> when(m, -1);  // component time, -1 when absent
    for (size_t ci = 0; ci < m; ++ci) {
      int common = -2;
      for (const std::string& tok : c.comps[ci]) {
        int te = eventTime(r, spec.proc.at(tok), tok);
        if (common == -2) common = te;
        if (te != common)
          return violation(ri, "component {" + c.comps[ci][0] +
                                   ",..} not simultaneous");
      }
      when[ci] = common;
    }
    for (const auto& [a, b] : c.edges)
      if (when[a] >= 0 && when[b] >= 0 && when[a] > when[b])
        return violation(ri, "ordering: {" + c.comps[a][0] + ",..} after {" +
                                 c.comps[b][0] + ",..}");
    for (size_t ci = 0; ci < m; ++ci) {
      if (isTrigger[ci]) continue;
      bool parentsOccur = true;
      for (const auto& [a, b] : c.edges)
        if (b == (int)ci && when[a] < 0) parentsOccur = false;
      if ((when[ci] >= 0) != parentsOccur)
        return violation(ri, "occurrence: {" + c.comps[ci][0] + ",..}" +
                                 (when[ci] >= 0 ? " without " : " despite ") +
                                 "its prerequisites");
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Knowledge-driven reference protocols. Responses are pure outputs under a
// fip transport, so firing times can be precomputed on the transport run set
// and inserted as internal events without disturbing any local state.

namespace detail {
inline void fireAtOnset(RunSet& rs, Checker& ck, int triggerProc,
                        const std::string& triggerToken,
                        const std::vector<std::pair<ResponseAction, const Formula*>>& rules,
                        bool* horizonShort) {
  if (horizonShort) *horizonShort = false;
  for (int ri = 0; ri < (int)rs.runs.size(); ++ri) {
    Run& r = rs.runs[ri];
    bool triggered = eventTime(r, triggerProc, triggerToken) >= 0;
    int seq = 1 << 20;  // after every simulator-assigned sequence number
    for (const auto& [act, formula] : rules) {
      int onset = -1;
      for (int t = 0; t <= rs.horizon && onset < 0; ++t)
        if (ck.check(ri, t, formula)) onset = t;
      if (onset < 0) {
        // silence in untriggered runs is the intended behavior; only a
        // triggered run that never attains the onset means the horizon is
        // too short to synthesize the protocol
        if (triggered && horizonShort) *horizonShort = true;
        continue;
      }
      r.events.push_back(
          {EventKind::Internal, act.proc, onset, seq++, act.token, -1, -1});
    }
  }
}

inline RunSet fipTransportRuns(const Scenario& sc) {
  if (sc.protocol != "fip" || sc.protoOverride)
    throw ConfigError("reference response protocols require the fip transport");
  return enumerateRuns(sc);
}
}  // namespace detail

// alpha_h fires at the onset of K_{i_h}...K_{i_1} ndocc(e_t)
inline RunSet nonHesitantRuns(const Scenario& sc, const ORSpec& spec,
                              bool* horizonShort = nullptr) {
  RunSet rs = detail::fipTransportRuns(sc);
  Checker ck(rs);
  FormulaPool pool;
  const Formula* nd = pool.ndocc({spec.triggerProc, spec.triggerToken});
  std::vector<std::pair<ResponseAction, const Formula*>> rules;
  std::vector<int> prefix;
  for (const auto& a : spec.responses) {
    prefix.push_back(a.proc);
    rules.push_back({a, pool.nest(prefix, nd)});
  }
  detail::fireAtOnset(rs, ck, spec.triggerProc, spec.triggerToken, rules, horizonShort);
  return rs;
}

// every group member fires at the onset of C_G ndocc(e_t)
inline RunSet considerateRuns(const Scenario& sc, const SRSpec& spec,
                              bool* horizonShort = nullptr) {
  RunSet rs = detail::fipTransportRuns(sc);
  Checker ck(rs);
  FormulaPool pool;
  const Formula* c = pool.common(groupProcs(spec.responses),
                                 pool.ndocc({spec.triggerProc, spec.triggerToken}));
  std::vector<std::pair<ResponseAction, const Formula*>> rules;
  for (const auto& a : spec.responses) rules.push_back({a, c});
  detail::fireAtOnset(rs, ck, spec.triggerProc, spec.triggerToken, rules, horizonShort);
  return rs;
}

// A^h fires at the onset of C_{I^h}...C_{I^1} ndocc(e_t)
inline RunSet groupConsiderateRuns(const Scenario& sc, const OGRSpec& spec,
                                   bool* horizonShort = nullptr) {
  RunSet rs = detail::fipTransportRuns(sc);
  Checker ck(rs);
  FormulaPool pool;
  const Formula* nd = pool.ndocc({spec.triggerProc, spec.triggerToken});
  std::vector<std::pair<ResponseAction, const Formula*>> rules;
  std::vector<std::vector<int>> prefix;
  for (const auto& g : spec.groups) {
    prefix.push_back(groupProcs(g));
    const Formula* c = pool.nestCommon(prefix, nd);
    for (const auto& a : g) rules.push_back({a, c});
  }
  detail::fireAtOnset(rs, ck, spec.triggerProc, spec.triggerToken, rules, horizonShort);
  return rs;
}

}  // namespace centilab

#endif
