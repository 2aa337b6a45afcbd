#include "acx/sampling.hpp"

#include "acx/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace acx {
namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113};

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

double uniform01(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

HaltonSequence::HaltonSequence(int dim, std::uint64_t seed) : dim_(dim), shift_(Vec::Zero(dim)) {
  if (dim <= 0 || dim > static_cast<int>(std::size(kPrimes))) {
    throw ConfigurationError("Halton dimension out of range: " + std::to_string(dim));
  }
  if (seed != 0) {
    std::uint64_t state = seed;
    for (int k = 0; k < dim; ++k) shift_[k] = uniform01(state);
  }
}

Vec HaltonSequence::next() {
  Vec u(dim_);
  for (int k = 0; k < dim_; ++k) {
    const double x = radical_inverse(index_, kPrimes[k]) + shift_[k];
    u[k] = x - std::floor(x);
  }
  ++index_;
  return u;
}

std::vector<Vec> sphere_samples(int dim, int count, std::uint64_t seed) {
  std::vector<Vec> out;
  out.reserve(count);
  HaltonSequence seq(dim, seed);
  // Rejection from the cube keeps the distribution uniform on the sphere.
  const long max_tries = 100000L + 2000L * count;
  for (long tries = 0; static_cast<int>(out.size()) < count && tries < max_tries; ++tries) {
    Vec x = 2.0 * seq.next().array() - 1.0;
    const double n = x.norm();
    if (n > 1.0 || n < 1e-3) continue;
    out.push_back(x / n);
  }
  return out;
}

int worker_count() {
  if (const char* env = std::getenv("ACX_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int count, const std::function<void(int)>& body) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < count; i = next++) {
          if (failed) return;
          try {
            body(i);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
            return;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace acx
