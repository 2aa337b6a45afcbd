#pragma once

#include "acx/linalg.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace acx {

/// Halton points in [0,1)^dim, shifted modulo 1 by a rotation drawn from seed.
/// The first k points of a sequence are the same for every length >= k.
class HaltonSequence {
 public:
  HaltonSequence(int dim, std::uint64_t seed);
  Vec next();
  int dim() const { return dim_; }

 private:
  int dim_;
  std::uint64_t index_ = 1;
  Vec shift_;
};

/// Deterministic unit vectors in R^dim from a low-discrepancy sequence.
std::vector<Vec> sphere_samples(int dim, int count, std::uint64_t seed);

/// Seeded uniform double in [0,1) from raw mt19937_64 bits (portable).
double uniform01(std::uint64_t& state);

/// Number of worker threads: ACX_THREADS if set, hardware otherwise.
int worker_count();

/// Runs body(i) for i in [0, count). Each index is handled by exactly one thread.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace acx
