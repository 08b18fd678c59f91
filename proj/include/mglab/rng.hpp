// Copyright 2026 The mglab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MGLAB_RNG_HPP_
#define MGLAB_RNG_HPP_

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace mglab {

// Counter-based random stream. A stream is identified by a 64-bit key; the
// i-th draw is a pure function of (key, i). Streams for distinct roles are
// derived from a master seed by name, so adding draws to one role never
// shifts the draws of another.
//
// Sampling helpers are written out explicitly (no <random> distributions) so
// results are identical across standard libraries.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream() = default;
  explicit RngStream(std::uint64_t key) : key_(key) {}

  // Stream for `component` of `master`, optionally specialised by up to
  // three integer coordinates (player, step, state, ...).
  static RngStream Derive(std::uint64_t master, std::string_view component,
                          std::uint64_t a = 0, std::uint64_t b = 0,
                          std::uint64_t c = 0);

  // Child stream; does not consume draws from this stream.
  RngStream Split(std::uint64_t tag) const;

  std::uint64_t NextU64();
  std::uint64_t operator()() { return NextU64(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() {
    return std::numeric_limits<std::uint64_t>::max();
  }

  // Uniform in [0, 1) with 53 bits.
  double Uniform();
  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n);
  bool Bernoulli(double p) { return Uniform() < p; }
  // Index drawn from a (not necessarily normalised) nonnegative weight vector.
  int Categorical(std::span<const double> weights);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// SplitMix64 finaliser; exposed for hashing seeds.
std::uint64_t Mix64(std::uint64_t x);

}  // namespace mglab

#endif  // MGLAB_RNG_HPP_
