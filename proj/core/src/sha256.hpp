#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace bellctx::io::detail {

// Minimal FIPS 180-4 SHA-256, enough for manifest digests. Verified against
// the standard test vectors in the io test suite.
class Sha256 {
public:
    Sha256();
    void update(const void* data, std::size_t len);
    std::array<std::uint8_t, 32> finish();

private:
    void process_block(const std::uint8_t* block);

    std::array<std::uint32_t, 8> state_;
    std::array<std::uint8_t, 64> buffer_;
    std::uint64_t total_bytes_;
    std::size_t buffered_;
};

}  // namespace bellctx::io::detail
