#pragma once
// Minimal SHA-256 (FIPS 180-4) for manifest digests.

#include <cstdint>
#include <cstddef>
#include <string>

namespace fluxdiag {

class Sha256 {
  public:
    Sha256();
    void update(const void* data, std::size_t len);
    std::string hex_digest();  // finalizes; object must not be reused

    static std::string of(const void* data, std::size_t len);
    static std::string of_file(const std::string& path);

  private:
    void process_block(const std::uint8_t* p);
    std::uint32_t h_[8];
    std::uint8_t buf_[64];
    std::size_t buflen_ = 0;
    std::uint64_t total_ = 0;
};

}  // namespace fluxdiag
