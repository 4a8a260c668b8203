#ifndef CLAIMCAST_RNG_HPP
#define CLAIMCAST_RNG_HPP

#include <cmath>
#include <cstdint>

namespace claimcast {

// Counter-based random stream: the generator is splitmix64 over a Weyl
// sequence whose starting key is a hash of (master_seed, stream ids...).
// derive() children depend only on the parent's identity, never on how many
// draws the parent has made, so nested simulation loops can be reordered or
// parallelized without changing any stream's output.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_id = 0)
      : key_(combine(combine(0x243F6A8885A308D3ull, master_seed), stream_id)) {}

  RngStream derive(std::uint64_t id) const {
    RngStream child = *this;
    child.key_ = combine(key_, id);
    child.counter_ = 0;
    return child;
  }
  RngStream derive(std::uint64_t a, std::uint64_t b) const {
    return derive(a).derive(b);
  }
  RngStream derive(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    return derive(a).derive(b).derive(c);
  }

  std::uint64_t next_u64() {
    counter_ += 0x9E3779B97F4A7C15ull;
    return mix(key_ + counter_);
  }

  // [0, 1)
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }
  // (0, 1), usable with quantile functions and log()
  double uniform_open() {
    return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }
  // strictly positive exponential variate
  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  static std::uint64_t combine(std::uint64_t key, std::uint64_t id) {
    return mix(key ^ ((id + 1) * 0xD1342543DE82EF95ull));
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace claimcast

#endif  // CLAIMCAST_RNG_HPP
