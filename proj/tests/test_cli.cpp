// End-to-end tests of the command line binary (path in $CENTILAB_BIN).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace {

std::string bin() {
  const char* p = std::getenv("CENTILAB_BIN");
  REQUIRE(p != nullptr);
  return p;
}

std::filesystem::path scratch() {
  auto d = std::filesystem::temp_directory_path() / "centilab_cli_test";
  std::filesystem::create_directories(d);
  return d;
}

void writeFile(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string readFile(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// returns the exit code; stdout lands in `out`
int run(const std::string& args, const std::filesystem::path& out) {
  std::string cmd = bin() + " " + args + " > " + out.string() + " 2> " +
                    (out.string() + ".err");
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* kBankScenario = R"({
  "network": {
    "processes": 4,
    "channels": [
      {"src": 0, "dst": 1, "min": 1, "max": 5},
      {"src": 0, "dst": 2, "min": 1, "max": 10},
      {"src": 1, "dst": 2, "min": 1, "max": 4},
      {"src": 1, "dst": 3, "min": 1, "max": 5},
      {"src": 0, "dst": 3, "min": 1, "max": 6}
    ],
    "labels": ["Charlie", "Susan", "Bob", "Alice"]
  },
  "protocol": "fip",
  "horizon": 7,
  "inputs": [{"proc": 0, "token": "deposit", "from": 0, "to": 0, "optional": false}],
  "script": {
    "deliveries": [
      {"src": 0, "dst": 1, "send_time": 0, "deliver_at": 3},
      {"src": 1, "dst": 3, "send_time": 3, "deliver_at": 7},
      {"src": 0, "dst": 3, "send_time": 0, "deliver_at": 4}
    ]
  }
})";

const char* kSmallScenario = R"({
  "network": {"processes": 3, "channels": [
    {"src": 0, "dst": 1, "min": 1, "max": 2},
    {"src": 1, "dst": 2, "min": 1, "max": 2}
  ]},
  "protocol": "fip",
  "horizon": 3,
  "inputs": [{"proc": 0, "token": "e", "from": 0, "to": 0, "optional": true}]
})";

}  // namespace

TEST_CASE("usage errors exit 2") {
  auto d = scratch();
  CHECK(run("frobnicate", d / "u1.json") == 2);
  CHECK(run("detect", d / "u2.json") == 2);
  writeFile(d / "bad.json", "{\"oops");
  CHECK(run("enumerate --scenario " + (d / "bad.json").string(), d / "u3.json") == 2);
  // the malformed-JSON diagnostic names the offending position
  std::string err = readFile(d / "u3.json.err");
  CHECK(err.find("parse error") != std::string::npos);
  CHECK(err.find("line") != std::string::npos);
}

TEST_CASE("simulate then detect the three-hop witness") {
  auto d = scratch();
  writeFile(d / "bank.json", kBankScenario);
  REQUIRE(run("simulate --scenario " + (d / "bank.json").string(),
              d / "trace.json") == 0);

  writeFile(d / "cent.json", R"({"seq": [0, 2, 3], "t": 0, "deadline": 7})");
  REQUIRE(run("detect centipede --trace " + (d / "trace.json").string() +
                  " --spec " + (d / "cent.json").string(),
              d / "wit.json") == 0);
  std::string wit = readFile(d / "wit.json");
  CHECK(wit.find("(Charlie,0),(Susan,3),(Alice,7)") != std::string::npos);

  // one round earlier the witness cannot close
  writeFile(d / "cent6.json", R"({"seq": [0, 2, 3], "t": 0, "deadline": 6})");
  CHECK(run("detect centipede --trace " + (d / "trace.json").string() +
                " --spec " + (d / "cent6.json").string(),
            d / "wit6.json") == 1);
  CHECK(readFile(d / "wit6.json").find("\"exists\": false") != std::string::npos);
}

TEST_CASE("check exit code mirrors the verdict") {
  auto d = scratch();
  writeFile(d / "small.json", kSmallScenario);
  std::string base = "check --scenario " + (d / "small.json").string();
  CHECK(run(base + " --run 0 --at 0 --formula \"time=0\"", d / "c1.json") == 0);
  CHECK(run(base + " --run 0 --at 0 --formula \"!time=0\"", d / "c2.json") == 1);
  CHECK(run(base + " --run 0 --at 0 --formula \"K[\"", d / "c3.json") == 2);
  CHECK(run(base + " --run 99999 --at 0 --formula \"time=0\"", d / "c4.json") == 2);
}

TEST_CASE("enumerate respects the cap override") {
  auto d = scratch();
  writeFile(d / "small.json", kSmallScenario);
  REQUIRE(run("enumerate --scenario " + (d / "small.json").string(),
              d / "n.json") == 0);
  CHECK(readFile(d / "n.json").find("\"run_count\": 128") != std::string::npos);
  std::string cmd = "CENTILAB_CAP=5 " + bin() + " enumerate --scenario " +
                    (d / "small.json").string() + " > /dev/null 2> /dev/null";
  int rc = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(rc) == 2);
}

TEST_CASE("identical invocations are byte-identical") {
  auto d = scratch();
  writeFile(d / "bank.json", kBankScenario);
  REQUIRE(run("simulate --scenario " + (d / "bank.json").string(), d / "t1.json") == 0);
  REQUIRE(run("simulate --scenario " + (d / "bank.json").string(), d / "t2.json") == 0);
  CHECK(readFile(d / "t1.json") == readFile(d / "t2.json"));
  REQUIRE(run("causal --trace " + (d / "t1.json").string() + " --dump",
              d / "g1.json") == 0);
  REQUIRE(run("causal --trace " + (d / "t1.json").string() + " --dump",
              d / "g2.json") == 0);
  CHECK(readFile(d / "g1.json") == readFile(d / "g2.json"));
  CHECK(readFile(d / "g1.json").find("timeout_edges") != std::string::npos);
}

TEST_CASE("snapshot emits a consistent record") {
  auto d = scratch();
  writeFile(d / "net.json", R"({"processes": 2, "channels": [
    {"src": 0, "dst": 1, "min": 1, "max": 2},
    {"src": 1, "dst": 0, "min": 1, "max": 2}
  ]})");
  REQUIRE(run("snapshot --net " + (d / "net.json").string() +
                  " --init \"(0,0)\" --algo 2",
              d / "snap.json") == 0);
  std::string out = readFile(d / "snap.json");
  CHECK(out.find("\"consistent\": true") != std::string::npos);
  CHECK(out.find("\"snapshot_time\": 2") != std::string::npos);
}

TEST_CASE("cones and ignorance emit their reports") {
  auto d = scratch();
  writeFile(d / "bank.json", kBankScenario);
  REQUIRE(run("simulate --scenario " + (d / "bank.json").string(), d / "t.json") == 0);
  REQUIRE(run("cones --trace " + (d / "t.json").string() +
                  " --node \"(0,0)\" --at 4",
              d / "cones.json") == 0);
  CHECK(readFile(d / "cones.json").find("box_aff_at") != std::string::npos);

  writeFile(d / "small.json", kSmallScenario);
  REQUIRE(run("ignorance --scenario " + (d / "small.json").string() +
                  " --run 0 --theta2 \"(2,3)\" --theta0 \"(0,0)\" --theta1 \"(1,0)\"",
              d / "ign.json") == 0);
  std::string ign = readFile(d / "ign.json");
  CHECK(ign.find("\"agree\": true") != std::string::npos);
  CHECK(ign.find("\"verdict\": true") != std::string::npos);
}

TEST_CASE("respond check accepts the reference protocol and rejects silence") {
  auto d = scratch();
  writeFile(d / "sc.json", R"({
    "network": {"processes": 3, "channels": [
      {"src": 0, "dst": 1, "min": 1, "max": 2},
      {"src": 1, "dst": 2, "min": 1, "max": 2},
      {"src": 2, "dst": 0, "min": 1, "max": 2}
    ]},
    "protocol": "fip",
    "horizon": 4,
    "inputs": [{"proc": 0, "token": "e", "from": 0, "to": 0, "optional": true}]
  })");
  writeFile(d / "or.json", R"({"trigger": {"proc": 0, "token": "e"},
    "responses": [{"proc": 1, "token": "a1"}, {"proc": 2, "token": "a2"}]})");
  std::string base = "respond check --kind or --scenario " +
                     (d / "sc.json").string() + " --spec " + (d / "or.json").string();
  CHECK(run(base + " --reference", d / "r1.json") == 0);
  CHECK(run(base, d / "r2.json") == 1);
  CHECK(readFile(d / "r2.json").find("clause 1") != std::string::npos);
}

TEST_CASE("verify runs the battery clean") {
  auto d = scratch();
  REQUIRE(run("verify --suite theorems --scale small", d / "v.json") == 0);
  CHECK(readFile(d / "v.json").find("\"pass\": true") != std::string::npos);
  CHECK(run("verify --suite nope", d / "v2.json") == 2);
}
