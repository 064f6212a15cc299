#include <cstring>
#include <string_view>

#include "powbench/blake2b.hpp"
#include "powbench/errors.hpp"
#include "powbench/pow_kernels.hpp"

// Bit-reversal-graph kernel: one sequential fill of 2^garlic 64-byte words,
// then `lambda` passes replacing word i with H(word i || word bitrev(i)).
// The only tuning knob is the garlic exponent; cost is (1+lambda)*2^garlic
// hash evaluations over a 64*2^garlic byte working set.

namespace powbench {
namespace {

constexpr std::size_t kWordBytes = 64;
constexpr std::string_view kDomain = "powbench-catena-brg-v1";

inline std::uint32_t bit_reverse(std::uint32_t x, std::uint32_t bits) {
  std::uint32_t r = 0;
  for (std::uint32_t i = 0; i < bits; ++i) {
    r = (r << 1) | ((x >> i) & 1);
  }
  return r;
}

inline ByteView sv_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace

Bytes catena_brg_hash(const CatenaParams& params, ByteView message,
                      ByteView salt) {
  if (salt.size() < 8) {
    throw InvalidParam("salt", "must be at least 8 bytes");
  }
  const std::uint64_t words = 1ULL << params.garlic;

  Bytes seed;
  {
    Blake2b h(kWordBytes);
    h.update(sv_bytes(kDomain));
    h.update_u32le(params.garlic);
    h.update_u32le(params.lambda);
    h.update_u32le(static_cast<std::uint32_t>(message.size()));
    h.update(message);
    h.update_u32le(static_cast<std::uint32_t>(salt.size()));
    h.update(salt);
    seed.resize(kWordBytes);
    h.finish(seed.data());
  }

  std::vector<std::uint8_t> mem(words * kWordBytes);
  {
    Blake2b h(kWordBytes);
    h.update(seed);
    h.update_u32le(0);
    h.finish(mem.data());
  }
  for (std::uint64_t i = 1; i < words; ++i) {
    Blake2b h(kWordBytes);
    h.update(ByteView(mem.data() + (i - 1) * kWordBytes, kWordBytes));
    h.finish(mem.data() + i * kWordBytes);
  }

  for (std::uint32_t pass = 0; pass < params.lambda; ++pass) {
    for (std::uint64_t i = 0; i < words; ++i) {
      std::uint64_t j = bit_reverse(static_cast<std::uint32_t>(i),
                                    params.garlic);
      Blake2b h(kWordBytes);
      h.update(ByteView(mem.data() + i * kWordBytes, kWordBytes));
      h.update(ByteView(mem.data() + j * kWordBytes, kWordBytes));
      h.finish(mem.data() + i * kWordBytes);
    }
  }

  Bytes tag(kWordBytes);
  Blake2b h(kWordBytes);
  h.update(ByteView(mem.data() + (words - 1) * kWordBytes, kWordBytes));
  h.update(seed);
  h.finish(tag.data());
  return tag;
}

}  // namespace powbench
