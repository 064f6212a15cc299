#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace powbench {

// Incremental BLAKE2b (unkeyed), digest length 1..64 bytes. This is the
// single hash primitive behind all three PoW kernels.
class Blake2b {
 public:
  static constexpr std::size_t kMaxDigestLen = 64;
  static constexpr std::size_t kBlockBytes = 128;

  explicit Blake2b(std::size_t digest_len);

  void update(std::span<const std::uint8_t> data);
  void update_u32le(std::uint32_t v);

  // Writes digest_len bytes; the object must not be reused afterwards.
  void finish(std::uint8_t* out);

  std::size_t digest_len() const { return digest_len_; }

 private:
  void compress(const std::uint8_t* block, bool last);

  std::array<std::uint64_t, 8> h_{};
  std::array<std::uint8_t, kBlockBytes> buf_{};
  std::size_t buf_len_ = 0;
  std::uint64_t bytes_fed_ = 0;
  std::size_t digest_len_;
};

// One-shot convenience: hash the concatenation of `parts`.
std::vector<std::uint8_t> blake2b(
    std::size_t digest_len,
    std::initializer_list<std::span<const std::uint8_t>> parts);

std::vector<std::uint8_t> blake2b(std::size_t digest_len,
                                  std::span<const std::uint8_t> data);

}  // namespace powbench
