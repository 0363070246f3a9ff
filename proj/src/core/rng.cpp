#include "lim/core/rng.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace lim {

namespace {
constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = std::uint64_t(a) * b;
    hi = std::uint32_t(p >> 32);
    lo = std::uint32_t(p);
}
} // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                           std::array<std::uint32_t, 2> k) {
    for (int r = 0; r < 10; ++r) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, c[0], hi0, lo0);
        mulhilo(kM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kW0;
        k[1] += kW1;
    }
    return c;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

void RngStream::refill() {
    std::array<std::uint32_t, 4> ctr{std::uint32_t(block_), std::uint32_t(block_ >> 32),
                                     std::uint32_t(stream_), std::uint32_t(stream_ >> 32)};
    buf_ = philox4x32_10(ctr, {std::uint32_t(seed_), std::uint32_t(seed_ >> 32)});
    ++block_;
    pos_ = 0;
}

std::uint64_t RngStream::next_u64() {
    if (pos_ > 2) refill();
    std::uint64_t v = std::uint64_t(buf_[pos_]) | (std::uint64_t(buf_[pos_ + 1]) << 32);
    pos_ += 2;
    return v;
}

double RngStream::uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::uniform_pos() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

double RngStream::normal() {
    boost::random::normal_distribution<double> d;
    return d(*this);
}

double RngStream::exponential() {
    boost::random::exponential_distribution<double> d;
    return d(*this);
}

std::uint64_t RngStream::below(std::uint64_t n) {
    boost::random::uniform_int_distribution<std::uint64_t> d(0, n - 1);
    return d(*this);
}

RngStream RngStream::child(std::uint64_t k) const {
    return RngStream(seed_, splitmix64(stream_ ^ splitmix64(k + 0x632BE59BD9B4E019ull)));
}

RngStream RngStream::split() { return RngStream(next_u64(), stream_); }

} // namespace lim
