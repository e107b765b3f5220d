#include "fermitheta/random.hpp"

#include <cmath>
#include <numbers>

namespace fermitheta {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t base_seed, std::uint64_t stream_index)
    : seed_(base_seed), stream_(stream_index), key_(mix(mix(base_seed + kGolden) ^ (stream_index * kGolden + 0x632be59bd9b4e019ULL))) {}

std::uint64_t RandomStream::next_u64() { return mix(key_ + (++counter_) * kGolden); }

double RandomStream::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::vector<double> gaussian_stream(RandomStream& stream, std::size_t count) {
  std::vector<double> out(count);
  for (auto& v : out) v = stream.gaussian();
  return out;
}

std::vector<double> gaussian_stream(std::uint64_t base_seed, std::uint64_t stream_index, std::size_t count) {
  RandomStream s(base_seed, stream_index);
  return gaussian_stream(s, count);
}

}  // namespace fermitheta
