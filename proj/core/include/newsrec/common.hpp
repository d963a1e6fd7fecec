/* Copyright 2026 The newsrec Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace newsrec {

// Production builds run on 32-bit reals. Gradient-check test builds compile
// the whole library with NEWSREC_REAL_IS_DOUBLE for finite-difference headroom.
#ifdef NEWSREC_REAL_IS_DOUBLE
using Real = double;
#else
using Real = float;
#endif

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tensor dimension mismatches and invalid op arguments.
struct ShapeError : Error {
  using Error::Error;
};

// Invalid configuration values (bad dims, rates, missing options).
struct ConfigError : Error {
  using Error::Error;
};

// API misuse: calling an operation outside its contract.
struct UsageError : Error {
  using Error::Error;
};

// Bad input data: unknown ids, out-of-range references.
struct DataError : Error {
  using Error::Error;
};

// Malformed external files.
struct FormatError : DataError {
  using DataError::DataError;
};

// Non-finite values or degenerate numerical situations.
struct NumericError : Error {
  using Error::Error;
};

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic random stream. All sampling goes through explicit formulas
// (not std::*_distribution) so sequences are identical across library
// versions on the same platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(splitmix64(seed)) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    return static_cast<int>(uniform() * static_cast<double>(n)) % n;
  }

  // Standard normal via Box-Muller; caches the spare draw.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Independent substream addressed by a path of indices; the parent
  // stream is left untouched.
  static Rng derive(uint64_t base_seed, std::initializer_list<uint64_t> path) {
    uint64_t s = splitmix64(base_seed);
    for (uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x1234567ULL));
    return Rng(s);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace newsrec
