#ifndef CENTILAB_SNAPSHOT_HPP
#define CENTILAB_SNAPSHOT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "centilab/structures.hpp"

namespace centilab {

// Coordinated global state recording. Version 1 spreads the initiator's
// deadline t0 + diameter(i0); version 2 lets every relay improve the deadline
// to its own t' + diameter(j) when that is sooner. Initiation is modeled as
// an external input arriving at the initiator; every process floods one
// application message per round on each outgoing channel, and control tags
// ride on those messages.

namespace snapdetail {

// payload grammar: "app" [";init:" S] [";ign"]
inline std::optional<long long> initTag(const std::string& payload) {
  size_t p = payload.find(";init:");
  if (p == std::string::npos) return std::nullopt;
  return std::stoll(payload.substr(p + 6));
}

inline bool ignoreMarked(const std::string& payload) {
  return payload.size() >= 4 && payload.rfind(";ign") == payload.size() - 4;
}

inline std::string stripIgnore(const std::string& payload) {
  return ignoreMarked(payload) ? payload.substr(0, payload.size() - 4) : payload;
}

// local deadline variable of proc after seeing rounds 0..time of hist.
// -1 when the process has not heard of any initiation yet.
inline long long snapVarAt(const Network& net, int version, int proc, int time,
                           const std::vector<std::vector<Arrival>>& hist) {
  long long diam = (long long)net.diameter(proc);
  long long s = -1;
  for (int t = 0; t <= time; ++t) {
    for (const Arrival& a : hist[t]) {
      long long cand = -1;
      if (a.isInput)
        cand = t + diam;  // this process is an initiator
      else if (auto tag = initTag(a.token)) {
        cand = *tag;
        if (version == 2) cand = std::min(cand, t + diam);
      }
      if (cand < 0) continue;
      if (s < 0)
        s = cand;  // first suggestion wins under version 1
      else if (version == 2)
        s = std::min(s, cand);
    }
  }
  return s;
}

}  // namespace snapdetail

class SnapshotProtocol : public Protocol {
 public:
  SnapshotProtocol(const Network& net, int version) : version_(version) {
    if (version != 1 && version != 2)
      throw ArgumentError("snapshot version must be 1 or 2");
    ContextClass cc = net.classifyContext();
    if (cc != ContextClass::Fixed && cc != ContextClass::MaxOnly)
      throw ConfigError("snapshot protocol needs bounded channels with min 1 or fixed delays");
    for (int i = 0; i < net.processes(); ++i)
      if (isInf(net.diameter(i)))
        throw ConfigError("snapshot protocol needs a finite diameter");
  }
  std::string id() const override { return "snap" + std::to_string(version_); }

  Actions act(const LocalView& v) const override {
    long long s = snapdetail::snapVarAt(*v.net, version_, v.proc, v.time, *v.hist);
    Actions a;
    if (s >= 0 && v.time == s) a.internals.push_back("record:" + std::to_string(s));
    for (const auto& [key, c] : v.net->channels()) {
      if (key.first != v.proc) continue;
      std::string payload = "app";
      if (s >= 0) payload += ";init:" + std::to_string(s);
      // a send departing in [s, s + max) could land inside the recording
      // window at the receiver and must not be mistaken for pre-deadline
      // traffic
      if (s >= 0 && v.time >= s && v.time < s + (long long)c.max) payload += ";ign";
      a.sends.push_back({key.second, payload});
    }
    return a;
  }

 private:
  int version_;
};

inline std::shared_ptr<const Protocol> snapshotProtocol(const Network& net,
                                                        int version) {
  return std::make_shared<SnapshotProtocol>(net, version);
}

struct RecordedMessage {
  int src = -1;
  int sendTime = -1;
  std::string payload;  // ignore mark stripped
  bool operator==(const RecordedMessage& o) const {
    return src == o.src && sendTime == o.sendTime && payload == o.payload;
  }
  bool operator<(const RecordedMessage& o) const {
    return std::tie(src, sendTime, payload) < std::tie(o.src, o.sendTime, o.payload);
  }
};

struct SnapshotRecord {
  int snapTime = -1;                 // the common recording round, -1 if none
  std::vector<int> recordedAt;       // per process; all must equal snapTime
  std::vector<int> localState;       // interned state ids at the recording round
  std::map<std::pair<int, int>, std::vector<RecordedMessage>> channels;

  nlohmann::json toJson(const Interner& interner) const {
    nlohmann::json procs = nlohmann::json::array();
    for (size_t p = 0; p < recordedAt.size(); ++p)
      procs.push_back({{"proc", (int)p},
                       {"recorded_at", recordedAt[p]},
                       {"state", localState[p] < 0
                                     ? nlohmann::json(nullptr)
                                     : nlohmann::json(interner.text(localState[p]))}});
    nlohmann::json chans = nlohmann::json::array();
    for (const auto& [key, msgs] : channels) {
      nlohmann::json mj = nlohmann::json::array();
      for (const auto& m : msgs)
        mj.push_back({{"src", m.src}, {"send_time", m.sendTime}, {"payload", m.payload}});
      chans.push_back({{"src", key.first}, {"dst", key.second}, {"in_transit", mj}});
    }
    return {{"snapshot_time", snapTime}, {"processes", procs}, {"channels", chans}};
  }
};

// Reconstructs what each process recorded in the run: the local state at its
// deadline round, and the non-ignored arrivals inside [s, s + D(h,j)) on each
// inbound channel.
inline SnapshotRecord extractSnapshotRecord(const Network& net, const Run& r,
                                            int version) {
  const int n = net.processes();
  SnapshotRecord rec;
  rec.recordedAt.assign(n, -1);
  rec.localState.assign(n, -1);
  std::vector<long long> s(n, -1);
  for (int p = 0; p < n; ++p) {
    s[p] = snapdetail::snapVarAt(net, version, p, r.horizon, r.hist[p]);
    if (s[p] >= 0 && s[p] <= r.horizon) {
      rec.recordedAt[p] = (int)s[p];
      // the cut sits on the round boundary: state entering round t*, with
      // round-t* arrivals landing in the channel records instead
      rec.localState[p] = r.stateId[p][s[p] >= 1 ? s[p] - 1 : 0];
    }
  }
  for (const auto& [key, c] : net.channels()) {
    (void)c;
    auto& out = rec.channels[key];
    int j = key.second;
    if (s[j] < 0) continue;
    long long hi = s[j] + (long long)net.maxDistance(key.first, j);
    for (int t = (int)s[j]; t <= r.horizon && t < hi; ++t)
      for (const Arrival& a : r.hist[j][t])
        if (!a.isInput && a.src == key.first && !snapdetail::ignoreMarked(a.token))
          out.push_back({a.src, a.sendTime, snapdetail::stripIgnore(a.token)});
    std::sort(out.begin(), out.end());
  }
  rec.snapTime = rec.recordedAt.empty() ? -1 : rec.recordedAt[0];
  for (int p = 0; p < n; ++p)
    if (rec.recordedAt[p] != rec.snapTime) rec.snapTime = -1;
  return rec;
}

// The actual global cut on the boundary entering round t: messages sent
// before t and delivered at t or later (including ones still in transit at
// the horizon).
inline std::map<std::pair<int, int>, std::vector<RecordedMessage>> inTransitAt(
    const Network& net, const Run& r, int t) {
  std::map<std::pair<int, int>, std::vector<RecordedMessage>> out;
  for (const auto& [key, c] : net.channels()) {
    (void)c;
    out[key];
  }
  for (const auto& [sendIdx, d] : r.deliveries) {
    const Event& e = r.events[sendIdx];
    if (e.time >= t) continue;
    if (d >= 0 && d < t) continue;
    out[{e.proc, e.peer}].push_back(
        {e.proc, e.time, snapdetail::stripIgnore(e.payload)});
  }
  for (auto& [key, msgs] : out) std::sort(msgs.begin(), msgs.end());
  return out;
}

// A record is consistent when it equals the true global cut at a single
// common round: every local state is the run's state at that round and every
// channel record is exactly the in-transit set.
inline bool checkSnapshotConsistency(const Network& net, const Run& r,
                                     const SnapshotRecord& rec,
                                     std::string* why = nullptr) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (rec.snapTime < 0) return fail("no common recording round");
  for (int p = 0; p < net.processes(); ++p) {
    if (rec.recordedAt[p] != rec.snapTime)
      return fail("process " + std::to_string(p) + " recorded at a different round");
    int cutRound = rec.snapTime >= 1 ? rec.snapTime - 1 : 0;
    if (rec.localState[p] != r.stateId[p][cutRound])
      return fail("process " + std::to_string(p) + " state differs from the cut");
  }
  auto truth = inTransitAt(net, r, rec.snapTime);
  for (const auto& [key, msgs] : truth) {
    auto it = rec.channels.find(key);
    const std::vector<RecordedMessage> empty;
    const auto& got = it == rec.channels.end() ? empty : it->second;
    if (got != msgs)
      return fail("channel " + std::to_string(key.first) + "->" +
                  std::to_string(key.second) + " record differs from the cut");
  }
  if (why) why->clear();
  return true;
}

// Initiation node of the run: the earliest external input. Returns false when
// the run was never initiated.
inline bool initiationNode(const Run& r, Node* out) {
  bool found = false;
  for (const Event& e : r.events)
    if (e.kind == EventKind::ExternalInput &&
        (!found || e.time < out->time || (e.time == out->time && e.proc < out->proc))) {
      *out = {e.proc, e.time};
      found = true;
    }
  return found;
}

// Compares every run's recording delay with the earliest deadline admitting a
// centibroom for the initiation node over all processes; lists the runs where
// the protocol was slower (the structural lower bound says it can never be
// faster).
inline std::vector<std::string> optimalityProbe(const RunSet& rs, int version) {
  std::vector<std::string> report;
  std::vector<int> everyone;
  for (int p = 0; p < rs.net.processes(); ++p) everyone.push_back(p);
  for (int ri = 0; ri < (int)rs.runs.size(); ++ri) {
    const Run& r = rs.runs[ri];
    Node init{};
    if (!initiationNode(r, &init)) continue;
    SnapshotRecord rec = extractSnapshotRecord(rs.net, r, version);
    if (rec.snapTime < 0) {
      report.push_back("run " + std::to_string(ri) + ": no common recording round");
      continue;
    }
    CausalIndex ix(rs.net, r);
    int best = -1;
    for (int d = init.time; d <= rs.horizon && best < 0; ++d)
      if (findCentibroom(ix, init.proc, init.time, everyone, d)) best = d;
    if (best >= 0 && rec.snapTime > best)
      report.push_back("run " + std::to_string(ri) + ": recorded at " +
                       std::to_string(rec.snapTime) + " but a coordination point exists at " +
                       std::to_string(best));
  }
  return report;
}

}  // namespace centilab

#endif
