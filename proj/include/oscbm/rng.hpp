#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace oscbm::rng {

// Philox4x32-10 counter-based generator.  A stream is keyed by
// (seed, label, replicate); consecutive draws advance the 64-bit block
// counter, so streams are independent of evaluation order and window size.
class Philox {
  public:
    Philox(uint64_t seed, int64_t label, uint64_t replicate)
        : key_{static_cast<uint32_t>(seed & 0xffffffffu),
               static_cast<uint32_t>(seed >> 32)},
          label_(static_cast<uint32_t>(static_cast<int32_t>(label))),
          replicate_(static_cast<uint32_t>(replicate)),
          block_(0),
          have_(0) {}

    // Uniform on (0, 1): ((x >> 11) + 0.5) * 2^-53, never 0 or 1.
    double uniform() {
        if (have_ == 0) refill();
        --have_;
        uint64_t x = buf_[have_];
        return (static_cast<double>(x >> 11) + 0.5) * 0x1p-53;
    }

    void skip_to_block(uint64_t block) {
        block_ = block;
        have_ = 0;
    }

  private:
    static constexpr uint32_t kW32A = 0x9E3779B9u;
    static constexpr uint32_t kW32B = 0xBB67AE85u;
    static constexpr uint32_t kM4x32A = 0xD2511F53u;
    static constexpr uint32_t kM4x32B = 0xCD9E8D57u;

    static void round(std::array<uint32_t, 4>& c, uint32_t k0, uint32_t k1) {
        uint64_t p0 = static_cast<uint64_t>(kM4x32A) * c[0];
        uint64_t p1 = static_cast<uint64_t>(kM4x32B) * c[2];
        uint32_t h0 = static_cast<uint32_t>(p0 >> 32), l0 = static_cast<uint32_t>(p0);
        uint32_t h1 = static_cast<uint32_t>(p1 >> 32), l1 = static_cast<uint32_t>(p1);
        c = {h1 ^ c[1] ^ k0, l1, h0 ^ c[3] ^ k1, l0};
    }

    void refill() {
        std::array<uint32_t, 4> c{static_cast<uint32_t>(block_ & 0xffffffffu),
                                  static_cast<uint32_t>(block_ >> 32), label_, replicate_};
        uint32_t k0 = key_[0], k1 = key_[1];
        for (int r = 0; r < 10; ++r) {
            round(c, k0, k1);
            k0 += kW32A;
            k1 += kW32B;
        }
        buf_[0] = (static_cast<uint64_t>(c[0]) << 32) | c[1];
        buf_[1] = (static_cast<uint64_t>(c[2]) << 32) | c[3];
        have_ = 2;
        ++block_;
    }

    std::array<uint32_t, 2> key_;
    uint32_t label_;
    uint32_t replicate_;
    uint64_t block_;
    std::array<uint64_t, 2> buf_{};
    int have_;
};

// Standard normals via Box-Muller on Philox uniforms.
class NormalStream {
  public:
    NormalStream(uint64_t seed, int64_t label, uint64_t replicate)
        : gen_(seed, label, replicate), have_cached_(false), cached_(0.0) {}

    double next() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = gen_.uniform();
        double u2 = gen_.uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

  private:
    Philox gen_;
    bool have_cached_;
    double cached_;
};

}  // namespace oscbm::rng
