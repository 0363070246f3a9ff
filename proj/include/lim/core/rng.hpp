#pragma once
#include <array>
#include <cstdint>
#include <limits>

namespace lim {

// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

// The one place the generator family is pinned. A stream is the Philox key
// (the 64-bit seed) plus the upper two counter words (the 64-bit stream id);
// the lower two counter words count blocks. Distinct stream ids never share
// a counter, so streams are independent by construction.
class RngStream {
  public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed = 0, std::uint64_t stream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next_u64(); }

    std::uint64_t next_u64();
    double uniform();      // [0,1), 53 bits
    double uniform_pos();  // (0,1)
    double normal();
    double exponential();
    std::uint64_t below(std::uint64_t n);  // uniform on {0..n-1}

    // Deterministic child stream; does not advance this stream.
    RngStream child(std::uint64_t k) const;
    // Fresh independent stream keyed by one draw from this one.
    RngStream split();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::uint64_t blocks_used() const { return block_; }

  private:
    void refill();

    std::uint64_t seed_, stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

} // namespace lim
