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

#include "mglab/rng.hpp"

namespace mglab {

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t HashString(std::string_view s) {
  // FNV-1a, then mixed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return Mix64(h);
}

std::uint64_t Combine(std::uint64_t h, std::uint64_t v) {
  return Mix64(h ^ Mix64(v + 0x632be59bd9b4e019ULL));
}

}  // namespace

RngStream RngStream::Derive(std::uint64_t master, std::string_view component,
                            std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = Combine(Mix64(master), HashString(component));
  h = Combine(h, a);
  h = Combine(h, b);
  h = Combine(h, c);
  return RngStream(h);
}

RngStream RngStream::Split(std::uint64_t tag) const {
  return RngStream(Combine(key_ ^ 0x5851f42d4c957f2dULL, tag));
}

std::uint64_t RngStream::NextU64() {
  // Two rounds of mixing over (key, counter): a keyed counter-mode generator.
  const std::uint64_t x = Mix64(key_ + 0x9e3779b97f4a7c15ULL * (++counter_));
  return Mix64(x ^ key_);
}

double RngStream::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::Below(std::uint64_t n) {
  if (n <= 1) return 0;
  // Rejection sampling for exact uniformity.
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return x % n;
}

int RngStream::Categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = Uniform() * total;
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = static_cast<int>(i);
    if (u < acc) return static_cast<int>(i);
  }
  return last_positive;
}

}  // namespace mglab
