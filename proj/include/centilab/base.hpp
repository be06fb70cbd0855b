#ifndef CENTILAB_BASE_HPP
#define CENTILAB_BASE_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace centilab {

// Durations and times are measured in whole rounds. kInf stands for an
// unbounded transmission time; arithmetic on it saturates.
using Dur = long long;
constexpr Dur kInf = std::numeric_limits<long long>::max() / 4;

inline bool isInf(Dur d) { return d >= kInf; }

inline Dur satAdd(Dur a, Dur b) {
  if (isInf(a) || isInf(b)) return kInf;
  return a + b;
}

// a + gap <= b with saturation: an infinite component never fits a finite gap.
inline bool satLeq(Dur a, Dur b) {
  if (isInf(a)) return isInf(b);
  return a <= b;
}

struct Node {
  int proc = 0;
  int time = 0;
  bool operator==(const Node& o) const { return proc == o.proc && time == o.time; }
  bool operator!=(const Node& o) const { return !(*this == o); }
  // (time, proc) order: used for deterministic witness selection.
  bool operator<(const Node& o) const {
    if (time != o.time) return time < o.time;
    return proc < o.proc;
  }
};

inline std::string to_string(const Node& n) {
  return "(" + std::to_string(n.proc) + "," + std::to_string(n.time) + ")";
}

struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SizingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormulaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace centilab

#endif
