#ifndef CENTILAB_NETWORK_HPP
#define CENTILAB_NETWORK_HPP

#include <map>
#include <utility>
#include <vector>

#include "centilab/base.hpp"
#include "json.hpp"

namespace centilab {

struct ChannelSpec {
  int src = 0;
  int dst = 0;
  Dur min = 1;
  Dur max = 1;  // kInf = no upper bound
};

enum class ContextClass { Fixed, MaxOnly, AsyncDelivery, MinOnly, GeneralBounded };

inline const char* to_string(ContextClass c) {
  switch (c) {
    case ContextClass::Fixed: return "Fixed";
    case ContextClass::MaxOnly: return "MaxOnly";
    case ContextClass::AsyncDelivery: return "AsyncDelivery";
    case ContextClass::MinOnly: return "MinOnly";
    default: return "GeneralBounded";
  }
}

// Immutable channel graph with per-edge [min,max] delivery bounds. All-pairs
// distances over both weightings are computed once at construction.
class Network {
 public:
  Network(int processes, std::vector<ChannelSpec> channels,
          std::vector<std::string> labels = {})
      : n_(processes), labels_(std::move(labels)) {
    if (n_ < 0) throw ArgumentError("negative process count");
    for (const auto& c : channels) {
      if (c.src < 0 || c.src >= n_ || c.dst < 0 || c.dst >= n_)
        throw ArgumentError("channel endpoint out of range");
      if (c.src == c.dst) throw ArgumentError("self-channels are forbidden");
      if (c.min < 1) throw ArgumentError("channel min must be >= 1");
      if (c.min > c.max) throw ArgumentError("channel min exceeds max");
      if (!channels_.emplace(std::make_pair(c.src, c.dst), c).second)
        throw ArgumentError("duplicate channel");
    }
    maxDist_ = allPairs(/*useMax=*/true);
    minDist_ = allPairs(/*useMax=*/false);
  }

  int processes() const { return n_; }

  const std::map<std::pair<int, int>, ChannelSpec>& channels() const { return channels_; }

  const ChannelSpec* channel(int src, int dst) const {
    auto it = channels_.find({src, dst});
    return it == channels_.end() ? nullptr : &it->second;
  }

  const std::string& label(int i) const {
    static const std::string empty;
    return i >= 0 && i < (int)labels_.size() ? labels_[i] : empty;
  }

  Dur maxDistance(int i, int j) const {
    checkProc(i);
    checkProc(j);
    return maxDist_[i][j];
  }

  Dur minDistance(int i, int j) const {
    checkProc(i);
    checkProc(j);
    return minDist_[i][j];
  }

  // (i,t) guarantees (j,t'): t + D(i,j) <= t' with D over max weights.
  bool boundGuarantee(const Node& a, const Node& b) const {
    checkProc(a.proc);
    checkProc(b.proc);
    Dur reach = satAdd((Dur)a.time, maxDist_[a.proc][b.proc]);
    return !isInf(reach) && reach <= (Dur)b.time;
  }

  Dur diameter(int i) const {
    checkProc(i);
    Dur d = 0;
    for (int j = 0; j < n_; ++j)
      d = std::max(d, maxDist_[i][j]);
    return d;
  }

  ContextClass classifyContext() const {
    bool allFixed = true, allMaxOnly = true, allAsync = true, allMinOnly = true;
    for (const auto& [key, c] : channels_) {
      (void)key;
      if (!(c.min == c.max && !isInf(c.max))) allFixed = false;
      if (!(c.min == 1 && !isInf(c.max))) allMaxOnly = false;
      if (!(c.min == 1 && isInf(c.max))) allAsync = false;
      if (!isInf(c.max)) allMinOnly = false;
    }
    if (allFixed) return ContextClass::Fixed;
    if (allMaxOnly) return ContextClass::MaxOnly;
    if (allAsync) return ContextClass::AsyncDelivery;
    if (allMinOnly) return ContextClass::MinOnly;
    return ContextClass::GeneralBounded;
  }

  static Network fromJson(const nlohmann::json& j) {
    int n = j.at("processes").get<int>();
    std::vector<ChannelSpec> chans;
    if (j.contains("channels"))
      for (const auto& cj : j.at("channels")) {
        ChannelSpec c;
        c.src = cj.at("src").get<int>();
        c.dst = cj.at("dst").get<int>();
        c.min = cj.at("min").get<Dur>();
        c.max = cj.at("max").is_null() ? kInf : cj.at("max").get<Dur>();
        chans.push_back(c);
      }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return Network(n, std::move(chans), std::move(labels));
  }

  nlohmann::json toJson() const {
    nlohmann::json chans = nlohmann::json::array();
    for (const auto& [key, c] : channels_) {
      (void)key;
      nlohmann::json cj = {{"src", c.src}, {"dst", c.dst}, {"min", c.min}};
      cj["max"] = isInf(c.max) ? nlohmann::json(nullptr) : nlohmann::json(c.max);
      chans.push_back(cj);
    }
    nlohmann::json j = {{"processes", n_}, {"channels", chans}};
    if (!labels_.empty()) j["labels"] = labels_;
    return j;
  }

 private:
  void checkProc(int i) const {
    if (i < 0 || i >= n_) throw ArgumentError("invalid process id " + std::to_string(i));
  }

  std::vector<std::vector<Dur>> allPairs(bool useMax) const {
    std::vector<std::vector<Dur>> d(n_, std::vector<Dur>(n_, kInf));
    for (int i = 0; i < n_; ++i) d[i][i] = 0;
    for (const auto& [key, c] : channels_) {
      (void)key;
      Dur w = useMax ? c.max : c.min;
      d[c.src][c.dst] = std::min(d[c.src][c.dst], w);
    }
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          Dur via = satAdd(d[i][k], d[k][j]);
          if (via < d[i][j]) d[i][j] = via;
        }
    return d;
  }

  int n_;
  std::map<std::pair<int, int>, ChannelSpec> channels_;
  std::vector<std::string> labels_;
  std::vector<std::vector<Dur>> maxDist_, minDist_;
};

}  // namespace centilab

#endif
