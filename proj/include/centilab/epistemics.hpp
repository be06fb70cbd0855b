#ifndef CENTILAB_EPISTEMICS_HPP
#define CENTILAB_EPISTEMICS_HPP

#include <deque>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "centilab/causality.hpp"

namespace centilab {

// External input or internal action named by (proc, token); proc -1 matches
// any process with that token.
struct EventRef {
  int proc = -1;
  std::string token;
};

enum class FKind {
  True,
  Occurred,  // the event happened at or before the evaluation time
  Occurs,    // the event happens exactly at the evaluation time
  Ndocc,     // the nondeterministic event happens somewhere in the run
  TimeIs,
  Reach,  // realized happened-before between two grid nodes
  Not,
  And,
  Or,
  Implies,
  At,
  Know,    // K_i
  Every,   // E_G
  Common,  // C_G
};

struct Formula {
  FKind kind = FKind::True;
  EventRef ev;
  int t = -1;    // TimeIs / At payload
  Node a, b;     // Reach payload
  int proc = -1; // Know payload
  std::vector<int> group;
  const Formula* lhs = nullptr;
  const Formula* rhs = nullptr;
};

inline std::string to_string(const EventRef& e) {
  return e.proc < 0 ? e.token : std::to_string(e.proc) + ":" + e.token;
}

inline std::string to_string(const Formula* f) {
  auto groupText = [](const std::vector<int>& g) {
    std::string s = "{";
    for (size_t i = 0; i < g.size(); ++i)
      s += (i ? "," : "") + std::to_string(g[i]);
    return s + "}";
  };
  switch (f->kind) {
    case FKind::True: return "true";
    case FKind::Occurred: return "occ(" + to_string(f->ev) + ")";
    case FKind::Occurs: return "occurs(" + to_string(f->ev) + ")";
    case FKind::Ndocc: return "ndocc(" + to_string(f->ev) + ")";
    case FKind::TimeIs: return "time=" + std::to_string(f->t);
    case FKind::Reach:
      return "reach((" + std::to_string(f->a.proc) + "," + std::to_string(f->a.time) +
             "),(" + std::to_string(f->b.proc) + "," + std::to_string(f->b.time) + "))";
    case FKind::Not: return "!" + to_string(f->lhs);
    case FKind::And: return "(" + to_string(f->lhs) + " & " + to_string(f->rhs) + ")";
    case FKind::Or: return "(" + to_string(f->lhs) + " | " + to_string(f->rhs) + ")";
    case FKind::Implies:
      return "(" + to_string(f->lhs) + " -> " + to_string(f->rhs) + ")";
    case FKind::At:
      return "at[" + std::to_string(f->t) + "] " + to_string(f->lhs);
    case FKind::Know: return "K[" + std::to_string(f->proc) + "] " + to_string(f->lhs);
    case FKind::Every: return "E[" + groupText(f->group) + "] " + to_string(f->lhs);
    case FKind::Common: return "C[" + groupText(f->group) + "] " + to_string(f->lhs);
  }
  return "?";
}

// Hash-consing pool: structurally equal formulas share one node, so the
// checker can memoize on pointer identity.
class FormulaPool {
 public:
  const Formula* truth() { return intern({}); }
  const Formula* occurred(EventRef e) { return atom(FKind::Occurred, std::move(e)); }
  const Formula* occurs(EventRef e) { return atom(FKind::Occurs, std::move(e)); }
  const Formula* ndocc(EventRef e) { return atom(FKind::Ndocc, std::move(e)); }
  const Formula* timeIs(int t) {
    Formula f;
    f.kind = FKind::TimeIs;
    f.t = t;
    return intern(std::move(f));
  }
  const Formula* reach(Node a, Node b) {
    Formula f;
    f.kind = FKind::Reach;
    f.a = a;
    f.b = b;
    return intern(std::move(f));
  }
  const Formula* negation(const Formula* x) { return unary(FKind::Not, x); }
  const Formula* conj(const Formula* l, const Formula* r) {
    return binary(FKind::And, l, r);
  }
  const Formula* disj(const Formula* l, const Formula* r) {
    return binary(FKind::Or, l, r);
  }
  const Formula* implies(const Formula* l, const Formula* r) {
    return binary(FKind::Implies, l, r);
  }
  const Formula* at(int t, const Formula* x) {
    Formula f;
    f.kind = FKind::At;
    f.t = t;
    f.lhs = x;
    return intern(std::move(f));
  }
  const Formula* know(int i, const Formula* x) {
    Formula f;
    f.kind = FKind::Know;
    f.proc = i;
    f.lhs = x;
    return intern(std::move(f));
  }
  const Formula* everyone(std::vector<int> g, const Formula* x) {
    return grouped(FKind::Every, std::move(g), x);
  }
  const Formula* common(std::vector<int> g, const Formula* x) {
    return grouped(FKind::Common, std::move(g), x);
  }
  // K_{i_k} ... K_{i_1} x
  const Formula* nest(const std::vector<int>& seq, const Formula* x) {
    const Formula* f = x;
    for (int i : seq) f = know(i, f);
    return f;
  }
  // C_{G_k} ... C_{G_1} x
  const Formula* nestCommon(const std::vector<std::vector<int>>& groups,
                            const Formula* x) {
    const Formula* f = x;
    for (const auto& g : groups) f = common(g, f);
    return f;
  }
  // E_G^m x
  const Formula* everyonePow(const std::vector<int>& g, int m, const Formula* x) {
    const Formula* f = x;
    for (int k = 0; k < m; ++k) f = everyone(g, f);
    return f;
  }

 private:
  const Formula* atom(FKind k, EventRef e) {
    Formula f;
    f.kind = k;
    f.ev = std::move(e);
    return intern(std::move(f));
  }
  const Formula* unary(FKind k, const Formula* x) {
    Formula f;
    f.kind = k;
    f.lhs = x;
    return intern(std::move(f));
  }
  const Formula* binary(FKind k, const Formula* l, const Formula* r) {
    Formula f;
    f.kind = k;
    f.lhs = l;
    f.rhs = r;
    return intern(std::move(f));
  }
  const Formula* grouped(FKind k, std::vector<int> g, const Formula* x) {
    Formula f;
    f.kind = k;
    f.group = std::move(g);
    f.lhs = x;
    return intern(std::move(f));
  }
  const Formula* intern(Formula f) {
    std::string key = std::to_string((int)f.kind) + "|" + to_string(&f);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    nodes_.push_back(std::move(f));
    table_[key] = &nodes_.back();
    return &nodes_.back();
  }
  std::deque<Formula> nodes_;
  std::unordered_map<std::string, const Formula*> table_;
};

// Finite model checker over an enumerated RunSet. Pure given the runset;
// memoizes on (formula node, run, time) and caches per-run causal indexes.
class Checker {
 public:
  explicit Checker(const RunSet& rs) : rs_(&rs), ix_(rs.runs.size()) {}

  bool check(int runIdx, int t, const Formula* f) {
    if (runIdx < 0 || runIdx >= (int)rs_->runs.size())
      throw ArgumentError("run index out of range");
    if (t < 0 || t > rs_->horizon) throw ArgumentError("time beyond horizon");
    validate(f);
    return eval(runIdx, t, f);
  }

  // closure of {run} under same-local-state steps by members of G at time t
  std::vector<int> gReachable(int runIdx, int t, const std::vector<int>& g) const {
    std::vector<char> seen(rs_->runs.size(), 0);
    std::vector<int> stack{runIdx}, out;
    seen[runIdx] = 1;
    while (!stack.empty()) {
      int r = stack.back();
      stack.pop_back();
      out.push_back(r);
      for (int i : g)
        for (int r2 : rs_->sameStateRuns(r, i, t))
          if (!seen[r2]) {
            seen[r2] = 1;
            stack.push_back(r2);
          }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const RunSet& runs() const { return *rs_; }

  const CausalIndex& index(int runIdx) {
    if (!ix_[runIdx]) ix_[runIdx] = std::make_unique<CausalIndex>(rs_->net, rs_->runs[runIdx]);
    return *ix_[runIdx];
  }

 private:
  bool matches(const Event& e, const EventRef& ref) const {
    if (e.kind != EventKind::ExternalInput && e.kind != EventKind::Internal)
      return false;
    if (ref.proc >= 0 && e.proc != ref.proc) return false;
    return e.payload == ref.token;
  }

  void validate(const Formula* f) const {
    switch (f->kind) {
      case FKind::TimeIs:
      case FKind::At:
        if (f->t < 0 || f->t > rs_->horizon)
          throw FormulaError("timestamp beyond horizon in " + to_string(f));
        break;
      case FKind::Reach: {
        auto bad = [&](const Node& n) {
          return n.proc < 0 || n.proc >= rs_->net.processes() || n.time < 0 ||
                 n.time > rs_->horizon;
        };
        if (bad(f->a) || bad(f->b))
          throw FormulaError("node beyond grid in " + to_string(f));
        break;
      }
      case FKind::Know:
        if (f->proc < 0 || f->proc >= rs_->net.processes())
          throw FormulaError("unknown process in " + to_string(f));
        break;
      case FKind::Every:
      case FKind::Common:
        for (int i : f->group)
          if (i < 0 || i >= rs_->net.processes())
            throw FormulaError("unknown process in " + to_string(f));
        break;
      default:
        break;
    }
    if (f->lhs) validate(f->lhs);
    if (f->rhs) validate(f->rhs);
  }

  bool eval(int r, int t, const Formula* f) {
    Key key{f, r, t};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool v = evalRaw(r, t, f);
    memo_[key] = v;
    return v;
  }

  bool evalRaw(int r, int t, const Formula* f) {
    const Run& run = rs_->runs[r];
    switch (f->kind) {
      case FKind::True:
        return true;
      case FKind::Occurred:
        for (const Event& e : run.events)
          if (e.time <= t && matches(e, f->ev)) return true;
        return false;
      case FKind::Occurs:
        for (const Event& e : run.events)
          if (e.time == t && matches(e, f->ev)) return true;
        return false;
      case FKind::Ndocc:
        for (const Event& e : run.events)
          if (matches(e, f->ev)) return true;
        return false;
      case FKind::TimeIs:
        return t == f->t;
      case FKind::Reach:
        return index(r).lamportReach(f->a, f->b);
      case FKind::Not:
        return !eval(r, t, f->lhs);
      case FKind::And:
        return eval(r, t, f->lhs) && eval(r, t, f->rhs);
      case FKind::Or:
        return eval(r, t, f->lhs) || eval(r, t, f->rhs);
      case FKind::Implies:
        return !eval(r, t, f->lhs) || eval(r, t, f->rhs);
      case FKind::At:
        return eval(r, f->t, f->lhs);
      case FKind::Know: {
        // the value is constant on the local-state class, so cache it for
        // every member at once
        const auto& cls = rs_->sameStateRuns(r, f->proc, t);
        bool v = true;
        for (int r2 : cls)
          if (!eval(r2, t, f->lhs)) {
            v = false;
            break;
          }
        for (int r2 : cls) memo_[{f, r2, t}] = v;
        return v;
      }
      case FKind::Every:
        // expand to a conjunction of K_i nodes so the class-wide cache applies
        for (int i : f->group)
          if (!eval(r, t, ipool_.know(i, f->lhs))) return false;
        return true;
      case FKind::Common: {
        // constant on the whole reachability component
        auto comp = gReachable(r, t, f->group);
        bool v = true;
        for (int r2 : comp)
          if (!eval(r2, t, f->lhs)) {
            v = false;
            break;
          }
        for (int r2 : comp) memo_[{f, r2, t}] = v;
        return v;
      }
    }
    throw FormulaError("unhandled formula kind");
  }

  struct Key {
    const Formula* f;
    int run, t;
    bool operator==(const Key& o) const {
      return f == o.f && run == o.run && t == o.t;
    }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      size_t h = std::hash<const void*>()(k.f);
      h ^= std::hash<long long>()((long long)k.run << 20 | k.t) + 0x9e3779b9 +
           (h << 6) + (h >> 2);
      return h;
    }
  };

  const RunSet* rs_;
  std::vector<std::unique_ptr<CausalIndex>> ix_;
  std::unordered_map<Key, bool, KeyHash> memo_;
  FormulaPool ipool_;  // internal nodes for expanded E_G conjuncts
};

inline bool holdsNestedCommon(Checker& ck, FormulaPool& pool, int runIdx, int t,
                              const std::vector<std::vector<int>>& groups,
                              const Formula* f) {
  return ck.check(runIdx, t, pool.nestCommon(groups, f));
}

// ---------------------------------------------------------------------------
// Text syntax:  K[i] f | E[{1,2}] f | C[{1,2}] f | at[t] f | !f | f & f |
// f | f | f -> f | occ(e) | occurs(e) | ndocc(e) | time=t |
// reach((i,t),(j,t')) | true. Events are "token" or "proc:token".
class FormulaParser {
 public:
  FormulaParser(FormulaPool& pool, std::string text)
      : pool_(&pool), s_(std::move(text)) {}

  const Formula* parse() {
    const Formula* f = implication();
    skipWs();
    if (pos_ != s_.size()) throw FormulaError("trailing input at '" + rest() + "'");
    return f;
  }

 private:
  const Formula* implication() {
    const Formula* l = disjunction();
    skipWs();
    if (eat("->")) return pool_->implies(l, implication());
    return l;
  }
  const Formula* disjunction() {
    const Formula* l = conjunction();
    while (true) {
      skipWs();
      // a lone '|' is disjunction; "->" handled above
      if (pos_ < s_.size() && s_[pos_] == '|') {
        ++pos_;
        l = pool_->disj(l, conjunction());
      } else {
        return l;
      }
    }
  }
  const Formula* conjunction() {
    const Formula* l = unary();
    while (true) {
      skipWs();
      if (pos_ < s_.size() && s_[pos_] == '&') {
        ++pos_;
        l = pool_->conj(l, unary());
      } else {
        return l;
      }
    }
  }
  const Formula* unary() {
    skipWs();
    if (eat("!")) return pool_->negation(unary());
    if (eat("K[")) {
      int i = integer();
      expect("]");
      return pool_->know(i, unary());
    }
    if (eat("E[")) {
      auto g = group();
      expect("]");
      return pool_->everyone(g, unary());
    }
    if (eat("C[")) {
      auto g = group();
      expect("]");
      return pool_->common(g, unary());
    }
    if (eat("at[")) {
      int t = integer();
      expect("]");
      return pool_->at(t, unary());
    }
    if (eat("(")) {
      const Formula* f = implication();
      expect(")");
      return f;
    }
    return atom();
  }
  const Formula* atom() {
    skipWs();
    if (eat("true")) return pool_->truth();
    if (eat("occurs(")) return eventAtom(&FormulaPool::occurs);
    if (eat("occ(")) return eventAtom(&FormulaPool::occurred);
    if (eat("ndocc(")) return eventAtom(&FormulaPool::ndocc);
    if (eat("time=")) return pool_->timeIs(integer());
    if (eat("reach(")) {
      Node a = node();
      expect(",");
      Node b = node();
      expect(")");
      return pool_->reach(a, b);
    }
    throw FormulaError("cannot parse formula at '" + rest() + "'");
  }
  const Formula* eventAtom(const Formula* (FormulaPool::*make)(EventRef)) {
    EventRef e;
    std::string first = ident();
    skipWs();
    if (eat(":")) {
      e.proc = std::stoi(first);
      e.token = ident();
    } else {
      e.token = first;
    }
    expect(")");
    return (pool_->*make)(std::move(e));
  }
  Node node() {
    expect("(");
    int p = integer();
    expect(",");
    int t = integer();
    expect(")");
    return {p, t};
  }
  std::vector<int> group() {
    expect("{");
    std::vector<int> g;
    skipWs();
    if (!eat("}")) {
      g.push_back(integer());
      while (eat(",")) g.push_back(integer());
      expect("}");
    }
    return g;
  }
  int integer() {
    skipWs();
    size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && isdigit((unsigned char)s_[pos_])) ++pos_;
    if (pos_ == start) throw FormulaError("expected number at '" + rest() + "'");
    return std::stoi(s_.substr(start, pos_ - start));
  }
  std::string ident() {
    skipWs();
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_' || s_[pos_] == '-'))
      ++pos_;
    if (pos_ == start) throw FormulaError("expected name at '" + rest() + "'");
    return s_.substr(start, pos_ - start);
  }
  void skipWs() {
    while (pos_ < s_.size() && isspace((unsigned char)s_[pos_])) ++pos_;
  }
  bool eat(const std::string& tok) {
    skipWs();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!eat(tok)) throw FormulaError("expected '" + tok + "' at '" + rest() + "'");
  }
  std::string rest() const { return s_.substr(pos_, 24); }

  FormulaPool* pool_;
  std::string s_;
  size_t pos_ = 0;
};

inline const Formula* parseFormula(FormulaPool& pool, const std::string& text) {
  return FormulaParser(pool, text).parse();
}

}  // namespace centilab

#endif
