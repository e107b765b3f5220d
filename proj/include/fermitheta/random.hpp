#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace fermitheta {

// Counter-based generator: output k of stream (seed, index) is the SplitMix64
// finalizer applied to a mix of the three words, so any (seed, index) pair
// can be opened independently and in any order.
class RandomStream {
 public:
  static constexpr std::string_view kAlgorithm = "splitmix64-counter";

  RandomStream(std::uint64_t base_seed, std::uint64_t stream_index);

  std::uint64_t base_seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double uniform();
  // Standard normal via Box-Muller (pairs; the second value is cached).
  double gaussian();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::vector<double> gaussian_stream(RandomStream& stream, std::size_t count);
std::vector<double> gaussian_stream(std::uint64_t base_seed, std::uint64_t stream_index, std::size_t count);

}  // namespace fermitheta
