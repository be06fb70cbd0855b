// centilab command line: scenario simulation, run enumeration, causal-graph
// dumps, structure detection, formula checking, response verdicts, snapshots,
// cone reports, ignorance certificates, and the verification battery.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "centilab/batteries.hpp"
#include "centilab/cones.hpp"
#include "centilab/response.hpp"
#include "centilab/snapshot.hpp"
#include "centilab/structures.hpp"

namespace {

using nlohmann::json;
using namespace centilab;

json loadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  // parse with exceptions on: a syntax error carries its byte position
  return json::parse(in);
}

Node parseNodeText(const std::string& s) {
  int p = 0, t = 0;
  if (std::sscanf(s.c_str(), " ( %d , %d )", &p, &t) != 2)
    throw ArgumentError("expected a node \"(proc,time)\", got: " + s);
  return {p, t};
}

Scenario scenarioFromJson(const json& j) {
  Scenario sc;
  sc.net = Network::fromJson(j.at("network"));
  sc.protocol = j.value("protocol", std::string("fip"));
  sc.horizon = j.at("horizon").get<int>();
  for (const auto& ij : j.value("inputs", json::array())) {
    InputSpec in;
    in.proc = ij.at("proc").get<int>();
    in.token = ij.at("token").get<std::string>();
    in.from = ij.value("from", 0);
    in.to = ij.value("to", in.from);
    in.optional = ij.value("optional", true);
    sc.inputs.push_back(in);
  }
  for (const auto& ij : j.value("inits", json::array()))
    sc.inits.push_back(
        {ij.at("proc").get<int>(), ij.at("values").get<std::vector<std::string>>()});
  sc.latestOnlyDefault = j.value("latest_only_default", false);
  for (const auto& rj : j.value("restrictions", json::array()))
    sc.restrictions.push_back({rj.at("src").get<int>(), rj.at("dst").get<int>(),
                               rj.at("send_time").get<int>(),
                               rj.at("choices").get<std::vector<int>>()});
  sc.cap = j.value("cap", 0LL);
  return sc;
}

Script scriptFromJson(const json& j) {
  Script s;
  if (j.contains("init_values"))
    s.initVals = j.at("init_values").get<std::vector<std::string>>();
  if (j.contains("input_times"))
    s.inputTimes = j.at("input_times").get<std::vector<int>>();
  for (const auto& dj : j.value("deliveries", json::array()))
    s.deliveries[{dj.at("src").get<int>(), dj.at("dst").get<int>(),
                  dj.at("send_time").get<int>()}] = dj.at("deliver_at").get<int>();
  return s;
}

// generateRun leaves unscripted inputs out entirely; for the CLI a mandatory
// input defaults to the start of its window instead
void resolveInputTimes(const Scenario& sc, Script& s) {
  size_t given = s.inputTimes.size();
  s.inputTimes.resize(sc.inputs.size(), -1);
  for (size_t k = given; k < sc.inputs.size(); ++k)
    if (!sc.inputs[k].optional) s.inputTimes[k] = sc.inputs[k].from;
}

void applyCap(Scenario& sc, long long flagCap) {
  if (const char* env = std::getenv("CENTILAB_CAP"))
    sc.cap = std::strtoll(env, nullptr, 10);
  if (flagCap > 0) sc.cap = flagCap;  // explicit flag beats the environment
}

json nodeJson(const Network& net, const Node& n) {
  json j = {{"proc", n.proc}, {"time", n.time}};
  const std::string& l = net.label(n.proc);
  j["display"] = "(" + (l.empty() ? std::to_string(n.proc) : l) + "," +
                 std::to_string(n.time) + ")";
  return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// realized message and timeout edges of a run, as drawn by the causal index
struct EdgeList {
  std::vector<std::tuple<Node, Node, std::string>> msg;  // with payload
  std::vector<std::pair<Node, Node>> timeout;
};

EdgeList collectEdges(const Network& net, const Run& r) {
  EdgeList el;
  std::map<std::pair<int, int>, std::vector<bool>> sent;
  for (const auto& [key, c] : net.channels()) {
    (void)c;
    sent[key] = std::vector<bool>(r.horizon + 1, false);
  }
  for (const Event& e : r.events) {
    if (e.kind == EventKind::Send && e.time <= r.horizon)
      sent[{e.proc, e.peer}][e.time] = true;
    if (e.kind == EventKind::Receive) {
      const Event& s = r.events[e.link];
      el.msg.push_back({{s.proc, s.time}, {e.proc, e.time}, e.payload});
    }
  }
  for (const auto& [key, c] : net.channels())
    if (!isInf(c.max))
      for (int t = 0; t + c.max <= r.horizon; ++t)
        if (!sent[key][t])
          el.timeout.push_back({{key.first, t}, {key.second, (int)(t + c.max)}});
  return el;
}

int cmdSimulate(const std::string& scenarioPath, long long cap) {
  json j = loadJson(scenarioPath);
  Scenario sc = scenarioFromJson(j);
  applyCap(sc, cap);
  Script script;
  if (j.contains("script")) script = scriptFromJson(j.at("script"));
  resolveInputTimes(sc, script);
  Interner in;
  Run r = generateRun(sc, script, in);
  emit(runToJson(sc.net, r));
  return 0;
}

int cmdEnumerate(const std::string& scenarioPath, long long cap) {
  Scenario sc = scenarioFromJson(loadJson(scenarioPath));
  applyCap(sc, cap);
  RunSet rs = enumerateRuns(sc);
  emit({{"run_count", rs.runs.size()},
        {"horizon", rs.horizon},
        {"protocol", rs.protocol}});
  return 0;
}

int cmdCausal(const std::string& tracePath, bool diagram) {
  json j = loadJson(tracePath);
  Network net = Network::fromJson(j.at("network"));
  Interner in;
  Run r = runFromJson(net, j, in);
  CausalIndex ix(net, r);
  EdgeList el = collectEdges(net, r);
  if (!diagram) {
    json nodes = json::array(), msgs = json::array(), touts = json::array();
    for (int p = 0; p < net.processes(); ++p)
      for (int t = 0; t <= r.horizon; ++t) {
        json nj = nodeJson(net, {p, t});
        nj["nd"] = ix.ndAt({p, t});
        nodes.push_back(nj);
      }
    for (const auto& [a, b, payload] : el.msg)
      msgs.push_back({{"from", nodeJson(net, a)},
                      {"to", nodeJson(net, b)},
                      {"payload", payload}});
    for (const auto& [a, b] : el.timeout)
      touts.push_back({{"from", nodeJson(net, a)}, {"to", nodeJson(net, b)}});
    emit({{"horizon", r.horizon},
          {"nodes", nodes},
          {"message_edges", msgs},
          {"timeout_edges", touts}});
    return 0;
  }
  // text space-time diagram: rows are processes, columns rounds; a node shows
  // '*' when a nondeterministic event lands on it
  std::ostringstream out;
  out << "t:   ";
  for (int t = 0; t <= r.horizon; ++t) out << t % 10 << " ";
  out << "\n";
  for (int p = 0; p < net.processes(); ++p) {
    std::string name = net.label(p).empty() ? "p" + std::to_string(p) : net.label(p);
    out << name.substr(0, 4);
    for (size_t k = name.size(); k < 5; ++k) out << " ";
    for (int t = 0; t <= r.horizon; ++t)
      out << (ix.ndAt({p, t}).empty() ? "." : "*") << " ";
    out << "\n";
  }
  auto disp = [&](const Node& n) {
    const std::string& l = net.label(n.proc);
    return "(" + (l.empty() ? std::to_string(n.proc) : l) + "," +
           std::to_string(n.time) + ")";
  };
  for (const auto& [a, b, payload] : el.msg)
    out << disp(a) << " -> " << disp(b) << "  msg " << payload << "\n";
  for (const auto& [a, b] : el.timeout)
    out << disp(a) << " -> " << disp(b) << "  timeout\n";
  std::cout << out.str();
  return 0;
}

int cmdDetect(const std::string& kind, const std::string& tracePath,
              const std::string& specPath) {
  json tj = loadJson(tracePath);
  json sj = loadJson(specPath);
  Network net = Network::fromJson(tj.at("network"));
  Interner in;
  Run r = runFromJson(net, tj, in);
  CausalIndex ix(net, r);
  auto bodyJson = [&](const std::vector<Node>& body) {
    json arr = json::array();
    for (const Node& n : body) arr.push_back(nodeJson(net, n));
    return arr;
  };
  if (kind == "centipede") {
    auto w = findCentipede(ix, sj.at("seq").get<std::vector<int>>(),
                           sj.at("t").get<int>(), sj.at("deadline").get<int>());
    if (!w) {
      emit({{"exists", false}});
      return 1;
    }
    std::string display;
    for (const Node& n : w->body)
      display += (display.empty() ? "" : ",") +
                 nodeJson(net, n).at("display").get<std::string>();
    emit({{"exists", true}, {"seq", w->seq}, {"t", w->t},
          {"deadline", w->deadline}, {"body", bodyJson(w->body)},
          {"display", display}});
    return 0;
  }
  if (kind == "centibroom") {
    auto w = findCentibroom(ix, sj.at("origin").get<int>(), sj.at("t").get<int>(),
                            sj.at("group").get<std::vector<int>>(),
                            sj.at("deadline").get<int>());
    if (!w) {
      emit({{"exists", false}});
      return 1;
    }
    emit({{"exists", true}, {"origin", w->origin}, {"t", w->t},
          {"group", w->group}, {"deadline", w->deadline},
          {"node", nodeJson(net, w->node)}});
    return 0;
  }
  // gencentipede
  Node origin{sj.at("origin").at("proc").get<int>(),
              sj.at("origin").at("time").get<int>()};
  auto w = findGeneralizedCentipede(
      ix, origin, sj.at("groups").get<std::vector<std::vector<int>>>(),
      sj.at("deadline").get<int>());
  if (!w) {
    emit({{"exists", false}});
    return 1;
  }
  emit({{"exists", true}, {"origin", nodeJson(net, w->origin)},
        {"groups", w->groups}, {"deadline", w->deadline},
        {"body", bodyJson(w->body)}});
  return 0;
}

int cmdCheck(const std::string& scenarioPath, int runIdx, int at,
             const std::string& formulaText, long long cap) {
  Scenario sc = scenarioFromJson(loadJson(scenarioPath));
  applyCap(sc, cap);
  RunSet rs = enumerateRuns(sc);
  if (runIdx < 0 || runIdx >= (int)rs.runs.size())
    throw ArgumentError("run index out of range (have " +
                        std::to_string(rs.runs.size()) + " runs)");
  if (at < 0 || at > rs.horizon) throw ArgumentError("time outside the horizon");
  FormulaPool pool;
  const Formula* f = parseFormula(pool, formulaText);
  Checker ck(rs);
  bool holds = ck.check(runIdx, at, f);
  emit({{"formula", formulaText}, {"run", runIdx}, {"at", at}, {"holds", holds},
        {"run_count", rs.runs.size()}});
  return holds ? 0 : 1;
}

std::vector<ResponseAction> actionsFromJson(const json& arr) {
  std::vector<ResponseAction> out;
  for (const auto& aj : arr)
    out.push_back({aj.at("token").get<std::string>(), aj.at("proc").get<int>()});
  return out;
}

int cmdRespond(const std::string& kind, const std::string& scenarioPath,
               const std::string& specPath, bool reference, long long cap) {
  Scenario sc = scenarioFromJson(loadJson(scenarioPath));
  applyCap(sc, cap);
  json sj = loadJson(specPath);
  Verdict v;
  bool horizonShort = false;
  if (kind == "or") {
    ORSpec spec{sj.at("trigger").at("proc").get<int>(),
                sj.at("trigger").at("token").get<std::string>(),
                actionsFromJson(sj.at("responses"))};
    RunSet rs = reference ? nonHesitantRuns(sc, spec, &horizonShort)
                          : enumerateRuns(sc);
    v = checkSolvesOr(rs, spec);
  } else if (kind == "sr") {
    SRSpec spec{sj.at("trigger").at("proc").get<int>(),
                sj.at("trigger").at("token").get<std::string>(),
                actionsFromJson(sj.at("responses"))};
    RunSet rs = reference ? considerateRuns(sc, spec, &horizonShort)
                          : enumerateRuns(sc);
    v = checkSolvesSr(rs, spec);
  } else if (kind == "ogr") {
    OGRSpec spec;
    spec.triggerProc = sj.at("trigger").at("proc").get<int>();
    spec.triggerToken = sj.at("trigger").at("token").get<std::string>();
    for (const auto& gj : sj.at("groups")) spec.groups.push_back(actionsFromJson(gj));
    RunSet rs = reference ? groupConsiderateRuns(sc, spec, &horizonShort)
                          : enumerateRuns(sc);
    v = checkSolvesOgr(rs, spec);
  } else {  // gr
    if (reference)
      throw ConfigError("no reference protocol for generalized response specs");
    GRSpec spec;
    spec.events = sj.at("events").get<std::vector<std::string>>();
    for (const auto& [tok, pj] : sj.at("proc").items())
      spec.proc[tok] = pj.get<int>();
    spec.triggers = sj.at("triggers").get<std::vector<std::string>>();
    for (const auto& oj : sj.at("order"))
      spec.order.push_back({oj.at(0).get<std::string>(), oj.at(1).get<std::string>()});
    v = checkSolvesGr(enumerateRuns(sc), spec);
  }
  json out = {{"kind", kind}, {"solves", v.solves}};
  if (!v.solves) out["counterexample"] = v.counterexample;
  if (reference) out["horizon_short"] = horizonShort;
  emit(out);
  return v.solves ? 0 : 1;
}

int cmdSnapshot(const std::string& netPath, const std::string& initText, int algo,
                int horizon) {
  Network net = Network::fromJson(loadJson(netPath));
  Node init = parseNodeText(initText);
  if (init.proc < 0 || init.proc >= net.processes())
    throw ArgumentError("initiator off the network");
  if (horizon < 0) {
    // latest possible recording round: initiation spreads and each process
    // waits out its own eccentricity
    Dur worst = 0;
    for (int p = 0; p < net.processes(); ++p)
      worst = std::max(worst, satAdd(net.maxDistance(init.proc, p), net.diameter(p)));
    if (isInf(worst)) throw ConfigError("network does not bound the snapshot");
    horizon = init.time + (int)worst;
  }
  Scenario sc;
  sc.net = net;
  sc.horizon = horizon;
  sc.inputs.push_back({init.proc, "go", init.time, init.time, false});
  sc.protoOverride = snapshotProtocol(net, algo);
  sc.latestOnlyDefault = true;  // one canonical run; deliveries at the bound
  Script script;
  resolveInputTimes(sc, script);
  Interner in;
  Run r = generateRun(sc, script, in);
  SnapshotRecord rec = extractSnapshotRecord(net, r, algo);
  std::string why;
  bool ok = checkSnapshotConsistency(net, r, rec, &why);
  json out = {{"algo", algo}, {"horizon", horizon},
              {"record", rec.toJson(in)}, {"consistent", ok}};
  if (!ok) out["why"] = why;
  emit(out);
  return ok ? 0 : 1;
}

int cmdCones(const std::string& tracePath, const std::string& nodeText, int at,
             bool diagram) {
  json tj = loadJson(tracePath);
  Network net = Network::fromJson(tj.at("network"));
  Interner in;
  Run r = runFromJson(net, tj, in);
  CausalIndex ix(net, r);
  ConeReport rep = coneReport(ix, parseNodeText(nodeText), at);
  emit(rep.toJson());
  if (diagram) {
    // heat grid on stderr: A certainly affected, a possibly, U certainly
    // unaffected, u possibly, '.' undetermined
    std::ostringstream g;
    for (int p = 0; p < net.processes(); ++p) {
      for (int t = 0; t <= r.horizon; ++t) {
        Node n{p, t};
        char c = '.';
        if (rep.boxAffAt.count(n)) c = 'A';
        else if (rep.boxUnaffAt.count(n)) c = 'U';
        else if (rep.diamondAffAt.count(n)) c = 'a';
        else if (rep.diamondUnaffAt.count(n)) c = 'u';
        g << c << " ";
      }
      g << "\n";
    }
    std::cerr << g.str();
  }
  return 0;
}

int cmdIgnorance(const std::string& scenarioPath, int runIdx,
                 const std::string& t2, const std::string& t0,
                 const std::string& t1, long long cap) {
  Scenario sc = scenarioFromJson(loadJson(scenarioPath));
  applyCap(sc, cap);
  RunSet rs = enumerateRuns(sc);
  if (runIdx < 0 || runIdx >= (int)rs.runs.size())
    throw ArgumentError("run index out of range");
  Checker ck(rs);
  FormulaPool pool;
  IgnoranceVerdict v = knowsNotReach(ck, pool, runIdx, parseNodeText(t2),
                                     parseNodeText(t0), parseNodeText(t1));
  json out = v.cert.toJson();
  out["epistemic"] = v.epistemic;
  out["agree"] = v.agree;
  emit(out);
  return v.structural ? 0 : 1;
}

int cmdVerify(const std::string& suite, const std::string& scale) {
  if (suite != "theorems") throw ArgumentError("unknown suite: " + suite);
  bool ok = true;
  json arr = json::array();
  for (const auto& c : runVerificationSuite(scale)) {
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"notes", c.notes}});
    std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << "\n";
    ok = ok && c.pass;
  }
  emit({{"criteria", arr}, {"pass", ok}});
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"centilab: bounded-delay message-passing simulator and analysis"};
  app.require_subcommand(1);

  std::string scenarioPath, tracePath, netPath, specPath, formulaText;
  std::string nodeText, theta0, theta1, theta2, initText;
  std::string suite = "theorems", scale = "small";
  int runIdx = 0, at = 0, algo = 2, horizon = -1;
  long long cap = 0, seed = 0;
  bool asJson = false, asDiagram = false, reference = false;

  auto* sim = app.add_subcommand("simulate", "generate one run from a scenario");
  sim->add_option("--scenario", scenarioPath)->required();
  sim->add_option("--cap", cap);

  auto* enu = app.add_subcommand("enumerate", "count the runs of a scenario");
  enu->add_option("--scenario", scenarioPath)->required();
  enu->add_option("--cap", cap);

  auto* cau = app.add_subcommand("causal", "dump the causal graph of a trace");
  cau->add_option("--trace", tracePath)->required();
  cau->add_flag("--dump,--json", asJson);
  cau->add_flag("--diagram", asDiagram);

  auto* det = app.add_subcommand("detect", "search a trace for a causal structure");
  std::string detKind;
  det->add_option("kind", detKind)
      ->required()
      ->check(CLI::IsMember({"centipede", "centibroom", "gencentipede"}));
  det->add_option("--trace", tracePath)->required();
  det->add_option("--spec", specPath)->required();

  auto* chk = app.add_subcommand("check", "evaluate a formula at a run point");
  chk->add_option("--scenario", scenarioPath)->required();
  chk->add_option("--run", runIdx)->required();
  chk->add_option("--at", at)->required();
  chk->add_option("--formula", formulaText)->required();
  chk->add_option("--cap", cap);

  auto* rsp = app.add_subcommand("respond", "response problem verdicts");
  auto* rspChk = rsp->add_subcommand("check", "check a response spec");
  std::string rspKind;
  rspChk->add_option("--kind", rspKind)
      ->required()
      ->check(CLI::IsMember({"or", "sr", "ogr", "gr"}));
  rspChk->add_option("--scenario", scenarioPath)->required();
  rspChk->add_option("--spec", specPath)->required();
  rspChk->add_flag("--reference", reference,
                   "run the knowledge-onset reference protocol");
  rspChk->add_option("--cap", cap);
  rsp->require_subcommand(1);

  auto* snp = app.add_subcommand("snapshot", "record a global snapshot");
  snp->add_option("--net", netPath)->required();
  snp->add_option("--init", initText, "initiation node \"(i,t)\"")->required();
  snp->add_option("--algo", algo)->check(CLI::IsMember({1, 2}));
  snp->add_option("--horizon", horizon);

  auto* con = app.add_subcommand("cones", "affected/unaffected cone report");
  con->add_option("--trace", tracePath)->required();
  con->add_option("--node", nodeText)->required();
  con->add_option("--at", at)->required();
  con->add_flag("--json", asJson);
  con->add_flag("--diagram", asDiagram);

  auto* ign = app.add_subcommand("ignorance", "knowledge-of-non-causation certificate");
  ign->add_option("--scenario", scenarioPath)->required();
  ign->add_option("--run", runIdx)->required();
  ign->add_option("--theta2", theta2, "observer node")->required();
  ign->add_option("--theta0", theta0, "candidate cause")->required();
  ign->add_option("--theta1", theta1, "candidate effect")->required();
  ign->add_option("--cap", cap);

  auto* ver = app.add_subcommand("verify", "run the verification batteries");
  ver->add_option("--suite", suite);
  ver->add_option("--scale", scale)->check(CLI::IsMember({"small", "full"}));
  ver->add_option("--seed", seed, "accepted for interface stability; unused");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return cmdSimulate(scenarioPath, cap);
    if (enu->parsed()) return cmdEnumerate(scenarioPath, cap);
    if (cau->parsed()) return cmdCausal(tracePath, asDiagram);
    if (det->parsed()) return cmdDetect(detKind, tracePath, specPath);
    if (chk->parsed()) return cmdCheck(scenarioPath, runIdx, at, formulaText, cap);
    if (rsp->parsed())
      return cmdRespond(rspKind, scenarioPath, specPath, reference, cap);
    if (snp->parsed()) return cmdSnapshot(netPath, initText, algo, horizon);
    if (con->parsed()) return cmdCones(tracePath, nodeText, at, asDiagram);
    if (ign->parsed())
      return cmdIgnorance(scenarioPath, runIdx, theta2, theta0, theta1, cap);
    if (ver->parsed()) return cmdVerify(suite, scale);
  } catch (const json::parse_error& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FormulaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SizingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: bad document shape: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
