#pragma once

#include <array>
#include <cstdint>

namespace vqrd::rng {

// Philox-4x32-10 counter-based generator (Salmon et al., SC'11).
// Stateless: every block of four 32-bit words is a pure function of
// (key, counter), so draws indexed by (shot, slot) are reproducible
// independent of thread scheduling.

struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key);
};

// One logical random stream, split by a 32-bit stream id. The 64-bit seed
// forms the key; (shot, slot, stream) form the 128-bit counter.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint32_t stream_id)
        : key_{static_cast<std::uint32_t>(seed & 0xffffffffu),
               static_cast<std::uint32_t>(seed >> 32)},
          stream_id_(stream_id) {}

    // Uniform double in [0, 1) for draw slot `slot` of shot `shot`.
    double uniform(std::uint64_t shot, std::uint32_t slot) const {
        const auto r = Philox4x32::block(
            {static_cast<std::uint32_t>(shot & 0xffffffffu),
             static_cast<std::uint32_t>(shot >> 32), slot, stream_id_},
            key_);
        const std::uint64_t w =
            (static_cast<std::uint64_t>(r[0]) << 32) | static_cast<std::uint64_t>(r[1]);
        return static_cast<double>(w >> 11) * 0x1.0p-53;
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_id_;
};

}  // namespace vqrd::rng
