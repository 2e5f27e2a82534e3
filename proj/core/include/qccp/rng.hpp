#pragma once

#include <complex>
#include <cstdint>

namespace qccp {

// Deterministic in-repo generator so results are reproducible bit-for-bit
// across platforms and thread schedules.
//
// Algorithm (fully specified, library-independent):
//   * State: xoshiro256**. The four 64-bit state words are produced by
//     iterating splitmix64 from the seed value.
//   * Substreams: substream(seed, index) iterates splitmix64 from
//     seed + (index + 1) * 0x9E3779B97F4A7C15 (the splitmix64 increment),
//     so each restart index yields an independent stream of the same seed.
//   * uniform(): top 53 bits of next() scaled to [0, 1).
//   * normal(): Box-Muller on two uniforms, with the first uniform shifted
//     into (0, 1]; the second sample of each pair is cached.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);
    static Rng substream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next();
    double uniform();                 // [0, 1)
    double normal();                  // standard normal
    std::complex<double> cnormal();   // independent N(0,1) real and imag parts
    int uniform_int(int n);           // uniform on {0..n-1}, rejection sampled

  private:
    std::uint64_t s_[4];
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace qccp
