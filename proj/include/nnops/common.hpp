#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace nnops {

// Caller mistakes detectable up front: bad parameters, bad configuration,
// dimension mismatches.
class argument_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failures discovered mid-computation: scan caps, underflow,
// samples outside the admissible range.
class computation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Neumaier compensated accumulator. Lattice sums can run to 10^6 positive
// terms; plain recursive summation would cost ~count*eps relative error,
// this keeps it near one ulp.
class neumaier_sum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline unsigned resolve_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1u;
}

// Static chunking over [0, count). Workers own disjoint index ranges and
// write to disjoint slots, so results do not depend on the thread count.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t, std::size_t)>& body) {
  const unsigned t = resolve_threads(threads);
  if (t <= 1 || count < 2 * t) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  const std::size_t chunk = (count + t - 1) / t;
  for (unsigned w = 0; w < t; ++w) {
    const std::size_t lo = w * chunk;
    if (lo >= count) break;
    const std::size_t hi = std::min(count, lo + chunk);
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

// Round-trip decimal formatting, C locale, '.' separator.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shorter form for display names and aligned tables.
inline std::string format_double_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace nnops
