#ifndef CENTILAB_RUNTIME_HPP
#define CENTILAB_RUNTIME_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <unordered_map>
#include <vector>

#include "centilab/network.hpp"

namespace centilab {

enum class EventKind { ExternalInput, Send, Receive, Internal };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::ExternalInput: return "input";
    case EventKind::Send: return "send";
    case EventKind::Receive: return "receive";
    default: return "internal";
  }
}

struct Event {
  EventKind kind;
  int proc;
  int time;
  int seq;  // sequence within (proc, time); identity = (kind, proc, time, seq)
  std::string payload;
  int link = -1;  // Receive: index of the matching Send in Run::events
  int peer = -1;  // Send: destination; Receive: source
};

// One item visible to a process at the start of a round.
struct Arrival {
  bool isInput = false;
  std::string token;  // input token or message payload
  int src = -1;       // sender (receives only)
  int sendTime = -1;
};

// Maps local-state descriptions to small ids; shared by all runs of a RunSet
// so that equal ids mean equal local states.
class Interner {
 public:
  int intern(const std::string& s) {
    auto it = ids_.find(s);
    if (it != ids_.end()) return it->second;
    int id = (int)texts_.size();
    texts_.push_back(s);
    ids_.emplace(texts_.back(), id);
    return id;
  }
  const std::string& text(int id) const { return texts_.at(id); }
  int size() const { return (int)texts_.size(); }

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> texts_;
};

struct Run {
  int horizon = 0;
  std::vector<Event> events;
  std::vector<std::string> initial;                     // per-process initial value
  std::vector<std::vector<int>> stateId;                // [proc][time]
  std::vector<std::vector<std::vector<Arrival>>> hist;  // [proc][time] arrivals
  std::vector<std::pair<int, int>> deliveries;          // (send event idx, round or -1)

  int deliveryOf(int sendIdx) const {
    for (const auto& [s, d] : deliveries)
      if (s == sendIdx) return d;
    return -1;
  }
};

// Canonical description of a local state: chained on the previous round's id
// plus this round's arrivals, so equal ids mean equal full histories.
inline int internState(Interner& interner, int proc, int t, int prevSid,
                       const std::string& init,
                       const std::vector<Arrival>& arrivals) {
  std::string desc = t == 0 ? "p" + std::to_string(proc) + ";i:" + init
                            : "#" + std::to_string(prevSid);
  std::vector<std::string> parts;
  for (const Arrival& a : arrivals)
    parts.push_back(a.isInput ? "e:" + a.token
                              : "r:" + std::to_string(a.src) + ":" +
                                    std::to_string(a.sendTime) + ":" + a.token);
  std::sort(parts.begin(), parts.end());
  for (const auto& s : parts) desc += "|" + s;
  return interner.intern(desc);
}

struct LocalView {
  const Network* net;
  int proc;
  int time;
  const std::string* init;
  const std::vector<std::vector<Arrival>>* hist;  // rounds 0..time filled
  int stateId;
};

struct ActionSend {
  int dst;
  std::string payload;  // kStatePayload is replaced by the sender's state id
};
struct Actions {
  std::vector<ActionSend> sends;
  std::vector<std::string> internals;
};

inline const std::string kStatePayload = "#state";

class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual std::string id() const = 0;
  virtual Actions act(const LocalView& v) const = 0;
};

struct InputSpec {
  int proc = 0;
  std::string token;
  int from = 0, to = 0;  // occurrence window, inclusive
  bool optional = true;
};
struct InitSpec {
  int proc = 0;
  std::vector<std::string> values;
};
// Narrows the delivery choices of messages sent at sendTime on (src,dst).
// Entries must be a subset of the legal choices; -1 means left in transit.
struct DeliveryRestriction {
  int src = 0, dst = 0, sendTime = 0;
  std::vector<int> choices;
};

struct Scenario {
  Network net{0, {}};
  std::string protocol = "fip";
  int horizon = 0;
  std::vector<InputSpec> inputs;
  std::vector<InitSpec> inits;
  // When set, channels without an explicit restriction deliver as late as
  // possible (at max, or in transit past the horizon) instead of branching.
  bool latestOnlyDefault = false;
  std::vector<DeliveryRestriction> restrictions;
  std::shared_ptr<const Protocol> protoOverride;
  long long cap = 0;  // 0 = default cap
};

constexpr long long kDefaultRunCap = 200000;

struct RunSet {
  Network net{0, {}};
  std::string protocol;
  int horizon = 0;
  std::shared_ptr<Interner> interner;
  std::vector<Run> runs;

  // runs sharing run[r].stateId[proc][time]
  const std::vector<int>& sameStateRuns(int runIdx, int proc, int time) const {
    auto key = std::make_tuple(proc, time, runs[runIdx].stateId[proc][time]);
    return classes_.at(key);
  }
  void buildClasses() {
    classes_.clear();
    for (int r = 0; r < (int)runs.size(); ++r)
      for (int p = 0; p < net.processes(); ++p)
        for (int t = 0; t <= horizon; ++t)
          classes_[std::make_tuple(p, t, runs[r].stateId[p][t])].push_back(r);
  }

 private:
  std::map<std::tuple<int, int, int>, std::vector<int>> classes_;
};

// ---------------------------------------------------------------------------
// Protocols

class FipProtocol : public Protocol {
 public:
  std::string id() const override { return "fip"; }
  Actions act(const LocalView& v) const override {
    Actions a;
    for (const auto& [key, c] : v.net->channels()) {
      (void)c;
      if (key.first == v.proc) a.sends.push_back({key.second, kStatePayload});
    }
    return a;
  }
};

// Never sends; useful as an inert transport for hand-built runs.
class SilentProtocol : public Protocol {
 public:
  std::string id() const override { return "silent"; }
  Actions act(const LocalView&) const override { return {}; }
};

// Floods a marker on all outgoing channels from the first round the process
// has heard anything (input or message). Silent rounds carry information
// through timeout edges.
class RelayProtocol : public Protocol {
 public:
  std::string id() const override { return "relay"; }
  Actions act(const LocalView& v) const override {
    bool heard = false;
    for (int t = 0; t <= v.time && !heard; ++t)
      heard = !(*v.hist)[t].empty();
    Actions a;
    if (!heard) return a;
    for (const auto& [key, c] : v.net->channels()) {
      (void)c;
      if (key.first == v.proc) a.sends.push_back({key.second, "m"});
    }
    return a;
  }
};

// Process 0 holds a number k in its initial state and, in the round an
// external input arrives, tells processes 1 and 2 about it with "depth"
// tags k and k-1 split by parity. It never sends otherwise.
class ConwayProtocol : public Protocol {
 public:
  explicit ConwayProtocol(const Network& net) {
    if (net.processes() != 3 || net.channels().size() != 2 ||
        !net.channel(0, 1) || !net.channel(0, 2) ||
        net.channel(0, 1)->min != 1 || net.channel(0, 1)->max != 1 ||
        net.channel(0, 2)->min != 1 || net.channel(0, 2)->max != 1)
      throw ConfigError("conway protocol needs the V net {0->1:[1,1], 0->2:[1,1]}");
  }
  std::string id() const override { return "conway"; }
  Actions act(const LocalView& v) const override {
    Actions a;
    if (v.proc != 0) return a;
    for (const Arrival& ar : (*v.hist)[v.time]) {
      if (!ar.isInput) continue;
      long long k = std::stoll(*v.init);
      std::string tag = "occ:" + ar.token + ":";
      if (k % 2 == 1) {
        a.sends.push_back({2, tag + std::to_string(k)});
        a.sends.push_back({1, tag + std::to_string(k - 1)});
      } else {
        a.sends.push_back({1, tag + std::to_string(k)});
        if (k > 0) a.sends.push_back({2, tag + std::to_string(k - 1)});
      }
    }
    return a;
  }
};

inline std::shared_ptr<const Protocol> makeProtocol(const std::string& name,
                                                    const Network& net) {
  if (name == "fip") return std::make_shared<FipProtocol>();
  if (name == "silent") return std::make_shared<SilentProtocol>();
  if (name == "relay") return std::make_shared<RelayProtocol>();
  if (name == "conway") return std::make_shared<ConwayProtocol>(net);
  throw ConfigError("unknown protocol: " + name);
}

// ---------------------------------------------------------------------------
// Simulation

namespace detail {

// Replayable nondeterminism: indices into per-point choice lists. When the
// cursor runs past the recorded prefix, choice 0 is taken and the arity is
// appended, which lets enumerateRuns advance an odometer over all scripts.
struct ChoiceTape {
  std::vector<int> idx;
  std::vector<int> arity;  // filled during replay
  size_t cursor = 0;
  int next(int n) {
    if (cursor == idx.size()) idx.push_back(0);
    if (cursor == arity.size()) arity.push_back(n);
    return idx[cursor++];
  }
  bool advance() {  // odometer step; false when exhausted
    while (!idx.empty()) {
      if (++idx.back() < arity.back()) return true;
      idx.pop_back();
      arity.pop_back();
    }
    return false;
  }
};

}  // namespace detail

// Legal delivery rounds for a message sent at s on channel c, horizon T.
// -1 encodes "still in transit at the horizon".
inline std::vector<int> legalDeliveryChoices(const ChannelSpec& c, int s, int T) {
  std::vector<int> out;
  Dur lo = s + c.min;
  Dur hi = isInf(c.max) ? (Dur)T : std::min<Dur>(s + c.max, T);
  for (Dur d = lo; d <= hi; ++d) out.push_back((int)d);
  if (isInf(c.max) || s + c.max > T) out.push_back(-1);
  return out;
}

class Simulator {
 public:
  explicit Simulator(const Scenario& sc)
      : sc_(sc),
        proto_(sc.protoOverride ? sc.protoOverride
                                : makeProtocol(sc.protocol, sc.net)) {
    for (const auto& in : sc_.inputs) {
      if (in.proc < 0 || in.proc >= sc_.net.processes())
        throw ConfigError("input process out of range");
      if (in.from < 0 || in.to < in.from || in.to > sc_.horizon)
        throw ConfigError("input window invalid");
      if (!keys_.insert({in.proc, in.token}).second)
        throw ConfigError("duplicate input spec for process/token");
    }
    for (const auto& r : sc_.restrictions)
      restr_[{r.src, r.dst, r.sendTime}] = r.choices;
  }

  const Protocol& protocol() const { return *proto_; }

  // inputTimes: per input spec, the chosen round or -1 for "does not occur".
  Run run(Interner& interner, const std::vector<std::string>& initVals,
          const std::vector<int>& inputTimes, detail::ChoiceTape& tape) const {
    const Network& net = sc_.net;
    const int n = net.processes(), T = sc_.horizon;
    Run r;
    r.horizon = T;
    r.initial = initVals;
    r.stateId.assign(n, {});
    r.hist.assign(n, std::vector<std::vector<Arrival>>(T + 1));
    std::map<int, std::vector<int>> due;  // round -> send event indices

    for (int t = 0; t <= T; ++t) {
      std::vector<int> seq(n, 0);
      // receives due this round, in send-event order
      if (auto it = due.find(t); it != due.end())
        for (int sendIdx : it->second) {
          const Event& s = r.events[sendIdx];
          Event e{EventKind::Receive, s.peer, t, seq[s.peer]++, s.payload, sendIdx, s.proc};
          r.hist[s.peer][t].push_back({false, s.payload, s.proc, s.time});
          r.events.push_back(e);
        }
      // external inputs
      for (size_t k = 0; k < sc_.inputs.size(); ++k)
        if (inputTimes[k] == t) {
          const InputSpec& in = sc_.inputs[k];
          r.events.push_back(
              {EventKind::ExternalInput, in.proc, t, seq[in.proc]++, in.token});
          r.hist[in.proc][t].push_back({true, in.token, -1, -1});
        }
      // local states
      for (int p = 0; p < n; ++p)
        r.stateId[p].push_back(internState(interner, p, t,
                                           t ? r.stateId[p][t - 1] : -1,
                                           initVals[p], r.hist[p][t]));
      // protocol actions; sends at the horizon would be undeliverable and
      // are not generated
      for (int p = 0; p < n; ++p) {
        LocalView v{&net, p, t, &r.initial[p], &r.hist[p], r.stateId[p][t]};
        Actions acts = proto_->act(v);
        for (const std::string& tok : acts.internals)
          r.events.push_back({EventKind::Internal, p, t, seq[p]++, tok});
        if (t == T) continue;
        for (const ActionSend& s : acts.sends) {
          const ChannelSpec* c = net.channel(p, s.dst);
          if (!c) throw ConfigError("protocol sent on missing channel");
          std::string payload = s.payload == kStatePayload
                                    ? "s" + std::to_string(r.stateId[p][t])
                                    : s.payload;
          int sendIdx = (int)r.events.size();
          r.events.push_back({EventKind::Send, p, t, seq[p]++, payload, -1, s.dst});
          int d = chooseDelivery(*c, t, T, tape);
          r.deliveries.push_back({sendIdx, d});
          if (d >= 0) due[d].push_back(sendIdx);
        }
      }
    }
    return r;
  }

 private:
  int chooseDelivery(const ChannelSpec& c, int t, int T,
                     detail::ChoiceTape& tape) const {
    std::vector<int> choices = legalDeliveryChoices(c, t, T);
    auto it = restr_.find({c.src, c.dst, t});
    if (it != restr_.end()) {
      for (int ch : it->second)
        if (std::find(choices.begin(), choices.end(), ch) == choices.end())
          throw ConfigError("delivery restriction outside legal window");
      choices = it->second;
    } else if (sc_.latestOnlyDefault) {
      choices = {choices.back()};  // max in-window round, or -1 when clipped
    }
    if (choices.empty()) throw ConfigError("empty delivery choice set");
    return choices[tape.next((int)choices.size())];
  }

  const Scenario& sc_;
  std::shared_ptr<const Protocol> proto_;
  std::set<std::pair<int, std::string>> keys_;
  std::map<std::tuple<int, int, int>, std::vector<int>> restr_;
};

// A fully resolved environment script for generateRun.
struct Script {
  std::vector<std::string> initVals;  // per process; empty = default "0"
  std::vector<int> inputTimes;        // per scenario input spec; -1 = absent
  std::map<std::tuple<int, int, int>, int> deliveries;  // (src,dst,sendTime)->round|-1
};

// Messages the script does not mention deliver as late as possible (at max,
// or in transit when the window is clipped by the horizon).
inline Run generateRun(const Scenario& sc, const Script& script,
                       Interner& interner) {
  Scenario scripted = sc;
  scripted.latestOnlyDefault = true;
  scripted.restrictions.clear();
  for (const auto& [key, d] : script.deliveries)
    scripted.restrictions.push_back(
        {std::get<0>(key), std::get<1>(key), std::get<2>(key), {d}});
  Simulator sim(scripted);
  std::vector<std::string> init(sc.net.processes(), "0");
  for (size_t p = 0; p < script.initVals.size(); ++p) init[p] = script.initVals[p];
  std::vector<int> inputTimes(sc.inputs.size(), -1);
  for (size_t k = 0; k < script.inputTimes.size(); ++k)
    inputTimes[k] = script.inputTimes[k];
  detail::ChoiceTape tape;
  return sim.run(interner, init, inputTimes, tape);
}

inline RunSet enumerateRuns(const Scenario& sc) {
  Simulator sim(sc);
  RunSet rs;
  rs.net = sc.net;
  rs.protocol = sc.protoOverride ? sc.protoOverride->id() : sc.protocol;
  rs.horizon = sc.horizon;
  rs.interner = std::make_shared<Interner>();
  long long cap = sc.cap > 0 ? sc.cap : kDefaultRunCap;

  const int n = sc.net.processes();
  std::vector<std::vector<std::string>> initChoices(n, {"0"});
  std::vector<char> initSeen(n, 0);
  for (const auto& is : sc.inits) {
    if (is.proc < 0 || is.proc >= n) throw ConfigError("init process out of range");
    if (is.values.empty()) throw ConfigError("empty initial value set");
    if (initSeen[is.proc])
      throw ConfigError("duplicate init spec for process " + std::to_string(is.proc));
    initSeen[is.proc] = 1;
    initChoices[is.proc] = is.values;
  }
  std::vector<std::vector<int>> inputChoices;
  for (const auto& in : sc.inputs) {
    std::vector<int> c;
    if (in.optional) c.push_back(-1);
    for (int t = in.from; t <= in.to; ++t) c.push_back(t);
    inputChoices.push_back(c);
  }

  std::vector<size_t> initIdx(n, 0), inIdx(sc.inputs.size(), 0);
  auto bump = [](std::vector<size_t>& idx, auto& lists) -> bool {
    for (size_t k = 0; k < idx.size(); ++k) {
      if (++idx[k] < lists[k].size()) return true;
      idx[k] = 0;
    }
    return false;
  };

  do {  // initial states
    std::vector<std::string> initVals(n);
    for (int p = 0; p < n; ++p) initVals[p] = initChoices[p][initIdx[p]];
    std::fill(inIdx.begin(), inIdx.end(), 0);
    do {  // input schedules
      std::vector<int> inputTimes(sc.inputs.size());
      for (size_t k = 0; k < inputTimes.size(); ++k)
        inputTimes[k] = inputChoices[k][inIdx[k]];
      detail::ChoiceTape tape;
      do {  // delivery choices
        tape.cursor = 0;
        rs.runs.push_back(sim.run(*rs.interner, initVals, inputTimes, tape));
        if ((long long)rs.runs.size() > cap)
          throw SizingError("run cap exceeded: more than " + std::to_string(cap) +
                            " runs");
      } while (tape.advance());
    } while (bump(inIdx, inputChoices));
  } while (bump(initIdx, initChoices));

  rs.buildClasses();
  return rs;
}

// ---------------------------------------------------------------------------
// Auditing

inline std::vector<std::string> validateRun(const Network& net, const Run& r,
                                            const Protocol* proto = nullptr) {
  std::vector<std::string> bad;
  std::set<std::tuple<int, int, int, int>> ids;
  std::map<int, int> deliveredAt;
  for (const auto& [s, d] : r.deliveries) {
    if (deliveredAt.count(s)) bad.push_back("send delivered twice");
    deliveredAt[s] = d;
  }
  for (size_t k = 0; k < r.events.size(); ++k) {
    const Event& e = r.events[k];
    if (e.proc < 0 || e.proc >= net.processes()) bad.push_back("event process out of range");
    if (e.time < 0 || e.time > r.horizon) bad.push_back("event time out of range");
    if (!ids.insert({(int)e.kind, e.proc, e.time, e.seq}).second)
      bad.push_back("duplicate event identity");
    if (e.kind == EventKind::Receive) {
      if (e.link < 0 || e.link >= (int)r.events.size() ||
          r.events[e.link].kind != EventKind::Send) {
        bad.push_back("receive without matching send");
        continue;
      }
      const Event& s = r.events[e.link];
      const ChannelSpec* c = net.channel(s.proc, e.proc);
      if (!c) {
        bad.push_back("receive on missing channel");
        continue;
      }
      if (e.time <= s.time) bad.push_back("receive precedes send");
      if (e.time < s.time + c->min)
        bad.push_back("receive before channel min on " + std::to_string(s.proc) +
                      "->" + std::to_string(e.proc));
      if (!isInf(c->max) && e.time > s.time + c->max)
        bad.push_back("receive after channel max on " + std::to_string(s.proc) +
                      "->" + std::to_string(e.proc));
      auto it = deliveredAt.find(e.link);
      if (it == deliveredAt.end() || it->second != e.time)
        bad.push_back("delivery log mismatch");
    }
    if (e.kind == EventKind::Send) {
      auto it = deliveredAt.find((int)k);
      if (it != deliveredAt.end() && it->second < 0) {
        const ChannelSpec* c = net.channel(e.proc, e.peer);
        if (c && !isInf(c->max) && e.time + c->max <= r.horizon)
          bad.push_back("message past its max while marked in transit");
      }
    }
  }
  if (proto) {
    // determinism audit: replay the protocol against the logged history
    for (int p = 0; p < net.processes(); ++p)
      for (int t = 0; t <= r.horizon; ++t) {
        LocalView v{&net, p, t, &r.initial[p], &r.hist[p], r.stateId[p][t]};
        Actions acts = proto->act(v);
        size_t logged = 0;
        for (const auto& e : r.events)
          if (e.kind == EventKind::Send && e.proc == p && e.time == t) ++logged;
        size_t expect = t == r.horizon ? 0 : acts.sends.size();
        if (logged != expect) bad.push_back("send log disagrees with protocol");
      }
  }
  return bad;
}

struct NdEntry {
  Node node;
  std::string desc;
  int eventIdx = -1;  // -1 for initial-state entries
};

// ND occurrences: external inputs, initial states, and early receives
// (delivered strictly before send time + channel max).
inline std::vector<NdEntry> ndEvents(const Network& net, const Run& r) {
  std::vector<NdEntry> out;
  for (int p = 0; p < net.processes(); ++p)
    out.push_back({{p, 0}, "init:" + r.initial[p], -1});
  for (size_t k = 0; k < r.events.size(); ++k) {
    const Event& e = r.events[k];
    if (e.kind == EventKind::ExternalInput)
      out.push_back({{e.proc, e.time}, "e:" + e.payload, (int)k});
    else if (e.kind == EventKind::Receive) {
      const Event& s = r.events[e.link];
      const ChannelSpec* c = net.channel(s.proc, e.proc);
      if (isInf(c->max) || e.time < s.time + c->max)
        out.push_back({{e.proc, e.time},
                       "r:" + std::to_string(s.proc) + ":" +
                           std::to_string(s.time) + ":" + e.payload,
                       (int)k});
    }
  }
  return out;
}

// JSON trace format
inline nlohmann::json runToJson(const Network& net, const Run& r) {
  nlohmann::json evs = nlohmann::json::array();
  for (const auto& e : r.events) {
    nlohmann::json ej = {{"kind", to_string(e.kind)}, {"proc", e.proc},
                         {"time", e.time},           {"seq", e.seq},
                         {"payload", e.payload}};
    if (e.link >= 0) ej["link"] = e.link;
    if (e.peer >= 0) ej["peer"] = e.peer;
    evs.push_back(ej);
  }
  nlohmann::json dels = nlohmann::json::array();
  for (const auto& [s, d] : r.deliveries)
    dels.push_back({{"send_ref", s}, {"deliver_at", d}});
  return {{"network", net.toJson()},
          {"horizon", r.horizon},
          {"initial", r.initial},
          {"events", evs},
          {"env", {{"deliveries", dels}}}};
}

inline EventKind eventKindFromString(const std::string& s) {
  if (s == "input") return EventKind::ExternalInput;
  if (s == "send") return EventKind::Send;
  if (s == "receive") return EventKind::Receive;
  if (s == "internal") return EventKind::Internal;
  throw ArgumentError("unknown event kind: " + s);
}

// Rebuilds a Run (including arrival histories and interned states) from the
// trace format emitted by runToJson.
inline Run runFromJson(const Network& net, const nlohmann::json& j,
                       Interner& interner) {
  Run r;
  r.horizon = j.at("horizon").get<int>();
  r.initial = j.contains("initial")
                  ? j.at("initial").get<std::vector<std::string>>()
                  : std::vector<std::string>(net.processes(), "0");
  const int n = net.processes();
  r.hist.assign(n, std::vector<std::vector<Arrival>>(r.horizon + 1));
  for (const auto& ej : j.at("events")) {
    Event e;
    e.kind = eventKindFromString(ej.at("kind").get<std::string>());
    e.proc = ej.at("proc").get<int>();
    e.time = ej.at("time").get<int>();
    e.seq = ej.value("seq", 0);
    e.payload = ej.value("payload", std::string());
    e.link = ej.value("link", -1);
    e.peer = ej.value("peer", -1);
    r.events.push_back(e);
  }
  if (j.contains("env") && j.at("env").contains("deliveries"))
    for (const auto& dj : j.at("env").at("deliveries"))
      r.deliveries.push_back(
          {dj.at("send_ref").get<int>(), dj.at("deliver_at").get<int>()});
  for (const Event& e : r.events) {
    if (e.kind == EventKind::ExternalInput)
      r.hist[e.proc][e.time].push_back({true, e.payload, -1, -1});
    else if (e.kind == EventKind::Receive) {
      int sendTime = e.link >= 0 && e.link < (int)r.events.size()
                         ? r.events[e.link].time
                         : -1;
      r.hist[e.proc][e.time].push_back({false, e.payload, e.peer, sendTime});
    }
  }
  r.stateId.assign(n, {});
  for (int t = 0; t <= r.horizon; ++t)
    for (int p = 0; p < n; ++p)
      r.stateId[p].push_back(internState(interner, p, t,
                                         t ? r.stateId[p][t - 1] : -1,
                                         r.initial[p], r.hist[p][t]));
  return r;
}

}  // namespace centilab

#endif
