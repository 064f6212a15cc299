#include "powbench/blake2b.hpp"

#include <bit>
#include <cassert>
#include <cstring>

namespace powbench {
namespace {

constexpr std::array<std::uint64_t, 8> kIv = {
    0x6a09e667f3bcc908ULL, 0xbb67ae8584caa73bULL, 0x3c6ef372fe94f82bULL,
    0xa54ff53a5f1d36f1ULL, 0x510e527fade682d1ULL, 0x9b05688c2b3e6c1fULL,
    0x1f83d9abfb41bd6bULL, 0x5be0cd19137e2179ULL};

constexpr std::uint8_t kSigma[12][16] = {
    {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15},
    {14, 10, 4, 8, 9, 15, 13, 6, 1, 12, 0, 2, 11, 7, 5, 3},
    {11, 8, 12, 0, 5, 2, 15, 13, 10, 14, 3, 6, 7, 1, 9, 4},
    {7, 9, 3, 1, 13, 12, 11, 14, 2, 6, 5, 10, 4, 0, 15, 8},
    {9, 0, 5, 7, 2, 4, 10, 15, 14, 1, 11, 12, 6, 8, 3, 13},
    {2, 12, 6, 10, 0, 11, 8, 3, 4, 13, 7, 5, 15, 14, 1, 9},
    {12, 5, 1, 15, 14, 13, 4, 10, 0, 7, 6, 3, 9, 2, 8, 11},
    {13, 11, 7, 14, 12, 1, 3, 9, 5, 0, 15, 4, 8, 6, 2, 10},
    {6, 15, 14, 9, 11, 3, 0, 8, 12, 2, 13, 7, 1, 4, 10, 5},
    {10, 2, 8, 4, 7, 6, 1, 5, 15, 11, 9, 14, 3, 12, 13, 0},
    {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15},
    {14, 10, 4, 8, 9, 15, 13, 6, 1, 12, 0, 2, 11, 7, 5, 3}};

inline std::uint64_t load64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) {
    v = (v << 8) | p[i];
  }
  return v;
}

inline void store64(std::uint8_t* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    p[i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
}

inline void g(std::uint64_t& a, std::uint64_t& b, std::uint64_t& c,
              std::uint64_t& d, std::uint64_t x, std::uint64_t y) {
  a = a + b + x;
  d = std::rotr(d ^ a, 32);
  c = c + d;
  b = std::rotr(b ^ c, 24);
  a = a + b + y;
  d = std::rotr(d ^ a, 16);
  c = c + d;
  b = std::rotr(b ^ c, 63);
}

}  // namespace

Blake2b::Blake2b(std::size_t digest_len) : digest_len_(digest_len) {
  assert(digest_len >= 1 && digest_len <= kMaxDigestLen);
  h_ = kIv;
  h_[0] ^= 0x01010000ULL ^ static_cast<std::uint64_t>(digest_len);
}

void Blake2b::compress(const std::uint8_t* block, bool last) {
  std::uint64_t m[16];
  for (int i = 0; i < 16; ++i) {
    m[i] = load64(block + 8 * i);
  }
  std::uint64_t v[16];
  for (int i = 0; i < 8; ++i) {
    v[i] = h_[i];
    v[i + 8] = kIv[i];
  }
  v[12] ^= bytes_fed_;  // only a 64-bit counter; inputs here never overflow it
  if (last) {
    v[14] = ~v[14];
  }
  for (int r = 0; r < 12; ++r) {
    const std::uint8_t* s = kSigma[r];
    g(v[0], v[4], v[8], v[12], m[s[0]], m[s[1]]);
    g(v[1], v[5], v[9], v[13], m[s[2]], m[s[3]]);
    g(v[2], v[6], v[10], v[14], m[s[4]], m[s[5]]);
    g(v[3], v[7], v[11], v[15], m[s[6]], m[s[7]]);
    g(v[0], v[5], v[10], v[15], m[s[8]], m[s[9]]);
    g(v[1], v[6], v[11], v[12], m[s[10]], m[s[11]]);
    g(v[2], v[7], v[8], v[13], m[s[12]], m[s[13]]);
    g(v[3], v[4], v[9], v[14], m[s[14]], m[s[15]]);
  }
  for (int i = 0; i < 8; ++i) {
    h_[i] ^= v[i] ^ v[i + 8];
  }
}

void Blake2b::update(std::span<const std::uint8_t> data) {
  const std::uint8_t* p = data.data();
  std::size_t n = data.size();
  while (n > 0) {
    if (buf_len_ == kBlockBytes) {
      // A buffered block is only compressed once more input arrives, so
      // the final block always takes the `last` path in finish().
      bytes_fed_ += kBlockBytes;
      compress(buf_.data(), false);
      buf_len_ = 0;
    }
    std::size_t take = std::min(n, kBlockBytes - buf_len_);
    std::memcpy(buf_.data() + buf_len_, p, take);
    buf_len_ += take;
    p += take;
    n -= take;
  }
}

void Blake2b::update_u32le(std::uint32_t v) {
  std::uint8_t b[4] = {static_cast<std::uint8_t>(v),
                       static_cast<std::uint8_t>(v >> 8),
                       static_cast<std::uint8_t>(v >> 16),
                       static_cast<std::uint8_t>(v >> 24)};
  update(std::span<const std::uint8_t>(b, 4));
}

void Blake2b::finish(std::uint8_t* out) {
  bytes_fed_ += buf_len_;
  std::memset(buf_.data() + buf_len_, 0, kBlockBytes - buf_len_);
  compress(buf_.data(), true);
  std::uint8_t full[64];
  for (int i = 0; i < 8; ++i) {
    store64(full + 8 * i, h_[i]);
  }
  std::memcpy(out, full, digest_len_);
}

std::vector<std::uint8_t> blake2b(
    std::size_t digest_len,
    std::initializer_list<std::span<const std::uint8_t>> parts) {
  Blake2b state(digest_len);
  for (const auto& part : parts) {
    state.update(part);
  }
  std::vector<std::uint8_t> out(digest_len);
  state.finish(out.data());
  return out;
}

std::vector<std::uint8_t> blake2b(std::size_t digest_len,
                                  std::span<const std::uint8_t> data) {
  return blake2b(digest_len, {data});
}

}  // namespace powbench
