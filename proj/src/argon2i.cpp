#include <bit>
#include <cstring>
#include <thread>
#include <vector>

#include "powbench/blake2b.hpp"
#include "powbench/errors.hpp"
#include "powbench/pow_kernels.hpp"

// Argon2i, version 0x13, per RFC 9106. Data-independent addressing only;
// the d and id variants are out of scope here.

namespace powbench {
namespace {

constexpr std::uint32_t kVersion = 0x13;
constexpr std::uint32_t kTypeArgon2i = 1;
constexpr std::uint32_t kSyncPoints = 4;
constexpr std::size_t kBlockWords = 128;  // 1024 bytes
constexpr std::size_t kAddressesPerBlock = 128;

struct Block {
  std::uint64_t v[kBlockWords];
};

inline void xor_into(Block& dst, const Block& src) {
  for (std::size_t i = 0; i < kBlockWords; ++i) {
    dst.v[i] ^= src.v[i];
  }
}

// x + y + 2 * lo32(x) * lo32(y), the BlaMka multiplication step.
inline std::uint64_t blamka(std::uint64_t x, std::uint64_t y) {
  std::uint64_t lo = (x & 0xFFFFFFFFULL) * (y & 0xFFFFFFFFULL);
  return x + y + 2 * lo;
}

inline void gb(std::uint64_t& a, std::uint64_t& b, std::uint64_t& c,
               std::uint64_t& d) {
  a = blamka(a, b);
  d = std::rotr(d ^ a, 32);
  c = blamka(c, d);
  b = std::rotr(b ^ c, 24);
  a = blamka(a, b);
  d = std::rotr(d ^ a, 16);
  c = blamka(c, d);
  b = std::rotr(b ^ c, 63);
}

inline void permute(std::uint64_t& v0, std::uint64_t& v1, std::uint64_t& v2,
                    std::uint64_t& v3, std::uint64_t& v4, std::uint64_t& v5,
                    std::uint64_t& v6, std::uint64_t& v7, std::uint64_t& v8,
                    std::uint64_t& v9, std::uint64_t& v10, std::uint64_t& v11,
                    std::uint64_t& v12, std::uint64_t& v13, std::uint64_t& v14,
                    std::uint64_t& v15) {
  gb(v0, v4, v8, v12);
  gb(v1, v5, v9, v13);
  gb(v2, v6, v10, v14);
  gb(v3, v7, v11, v15);
  gb(v0, v5, v10, v15);
  gb(v1, v6, v11, v12);
  gb(v2, v7, v8, v13);
  gb(v3, v4, v9, v14);
}

// next = P-rounds(ref ^ prev) ^ (ref ^ prev) [^ next when with_xor].
void fill_block(const Block& prev, const Block& ref, Block& next,
                bool with_xor) {
  Block r;
  for (std::size_t i = 0; i < kBlockWords; ++i) {
    r.v[i] = ref.v[i] ^ prev.v[i];
  }
  Block tmp = r;
  if (with_xor) {
    xor_into(tmp, next);
  }
  for (std::size_t i = 0; i < 8; ++i) {
    std::uint64_t* p = r.v + 16 * i;
    permute(p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7], p[8], p[9], p[10],
            p[11], p[12], p[13], p[14], p[15]);
  }
  for (std::size_t i = 0; i < 8; ++i) {
    std::uint64_t* p = r.v + 2 * i;
    permute(p[0], p[1], p[16], p[17], p[32], p[33], p[48], p[49], p[64], p[65],
            p[80], p[81], p[96], p[97], p[112], p[113]);
  }
  next = tmp;
  xor_into(next, r);
}

// Variable-length hash H' from RFC 9106 section 3.3.
void hash_prime(std::uint8_t* out, std::uint32_t out_len, ByteView input) {
  Bytes le(4);
  le[0] = static_cast<std::uint8_t>(out_len);
  le[1] = static_cast<std::uint8_t>(out_len >> 8);
  le[2] = static_cast<std::uint8_t>(out_len >> 16);
  le[3] = static_cast<std::uint8_t>(out_len >> 24);
  if (out_len <= 64) {
    Blake2b h(out_len);
    h.update(le);
    h.update(input);
    h.finish(out);
    return;
  }
  std::uint32_t r = (out_len + 31) / 32 - 2;
  std::uint8_t v[64];
  {
    Blake2b h(64);
    h.update(le);
    h.update(input);
    h.finish(v);
  }
  std::memcpy(out, v, 32);
  for (std::uint32_t i = 1; i < r; ++i) {
    Blake2b h(64);
    h.update(std::span<const std::uint8_t>(v, 64));
    h.finish(v);
    std::memcpy(out + 32 * i, v, 32);
  }
  std::uint32_t tail = out_len - 32 * r;
  Blake2b h(tail);
  h.update(std::span<const std::uint8_t>(v, 64));
  h.finish(out + 32 * r);
}

struct Instance {
  std::vector<Block> memory;
  std::uint32_t passes;
  std::uint32_t lanes;
  std::uint32_t lane_length;
  std::uint32_t segment_length;
};

std::uint32_t index_alpha(const Instance& inst, std::uint32_t pass,
                          std::uint32_t slice, std::uint32_t index,
                          std::uint32_t j1, bool same_lane) {
  std::uint32_t reference_area;
  if (pass == 0) {
    if (slice == 0) {
      reference_area = index - 1;
    } else if (same_lane) {
      reference_area = slice * inst.segment_length + index - 1;
    } else {
      reference_area =
          slice * inst.segment_length - (index == 0 ? 1 : 0);
    }
  } else {
    if (same_lane) {
      reference_area =
          inst.lane_length - inst.segment_length + index - 1;
    } else {
      reference_area =
          inst.lane_length - inst.segment_length - (index == 0 ? 1 : 0);
    }
  }
  // Non-uniform mapping: squaring skews references toward recent blocks.
  std::uint64_t rel = j1;
  rel = (rel * rel) >> 32;
  rel = reference_area - 1 -
        ((static_cast<std::uint64_t>(reference_area) * rel) >> 32);
  std::uint32_t start = 0;
  if (pass != 0) {
    start = (slice == kSyncPoints - 1) ? 0
                                       : (slice + 1) * inst.segment_length;
  }
  return static_cast<std::uint32_t>((start + rel) % inst.lane_length);
}

void next_addresses(Block& address, Block& input, const Block& zero) {
  input.v[6]++;
  fill_block(zero, input, address, false);
  fill_block(zero, address, address, false);
}

void fill_segment(Instance& inst, std::uint32_t pass, std::uint32_t lane,
                  std::uint32_t slice) {
  Block address_block{}, input_block{}, zero_block{};
  input_block.v[0] = pass;
  input_block.v[1] = lane;
  input_block.v[2] = slice;
  input_block.v[3] = inst.memory.size();
  input_block.v[4] = inst.passes;
  input_block.v[5] = kTypeArgon2i;

  std::uint32_t starting_index = 0;
  if (pass == 0 && slice == 0) {
    starting_index = 2;  // blocks 0 and 1 come straight from H0
    next_addresses(address_block, input_block, zero_block);
  }
  std::uint32_t curr_offset =
      lane * inst.lane_length + slice * inst.segment_length + starting_index;
  std::uint32_t prev_offset = (curr_offset % inst.lane_length == 0)
                                  ? curr_offset + inst.lane_length - 1
                                  : curr_offset - 1;

  for (std::uint32_t i = starting_index; i < inst.segment_length;
       ++i, ++curr_offset, ++prev_offset) {
    if (curr_offset % inst.lane_length == 1) {
      prev_offset = curr_offset - 1;
    }
    if (i % kAddressesPerBlock == 0) {
      next_addresses(address_block, input_block, zero_block);
    }
    std::uint64_t pseudo_rand = address_block.v[i % kAddressesPerBlock];
    std::uint32_t ref_lane =
        static_cast<std::uint32_t>((pseudo_rand >> 32) % inst.lanes);
    if (pass == 0 && slice == 0) {
      ref_lane = lane;  // other lanes have nothing referenceable yet
    }
    std::uint32_t ref_index = index_alpha(
        inst, pass, slice, i, static_cast<std::uint32_t>(pseudo_rand),
        ref_lane == lane);
    const Block& ref = inst.memory[inst.lane_length * ref_lane + ref_index];
    // Version 0x13 XORs over the stale block on later passes.
    fill_block(inst.memory[prev_offset], ref, inst.memory[curr_offset],
               pass > 0);
  }
}

void store_block(std::uint8_t* out, const Block& b) {
  for (std::size_t i = 0; i < kBlockWords; ++i) {
    for (int j = 0; j < 8; ++j) {
      out[8 * i + j] = static_cast<std::uint8_t>(b.v[i] >> (8 * j));
    }
  }
}

void load_block(Block& b, const std::uint8_t* in) {
  for (std::size_t i = 0; i < kBlockWords; ++i) {
    std::uint64_t v = 0;
    for (int j = 7; j >= 0; --j) {
      v = (v << 8) | in[8 * i + j];
    }
    b.v[i] = v;
  }
}

}  // namespace

Bytes argon2i_hash(const Argon2iParams& params, ByteView message,
                   ByteView salt, ByteView secret, ByteView assoc_data) {
  if (salt.size() < 8) {
    throw InvalidParam("salt", "must be at least 8 bytes");
  }
  const std::uint32_t p = params.parallelism;
  const std::uint32_t m_prime =
      4 * p * (params.memory_kib / (4 * p));  // >= 8p after validation
  const std::uint32_t lane_length = m_prime / p;
  const std::uint32_t segment_length = lane_length / kSyncPoints;

  // H0 binds every parameter and input.
  std::uint8_t h0[64];
  {
    Blake2b h(64);
    h.update_u32le(p);
    h.update_u32le(params.tag_len);
    h.update_u32le(params.memory_kib);
    h.update_u32le(params.iterations);
    h.update_u32le(kVersion);
    h.update_u32le(kTypeArgon2i);
    h.update_u32le(static_cast<std::uint32_t>(message.size()));
    h.update(message);
    h.update_u32le(static_cast<std::uint32_t>(salt.size()));
    h.update(salt);
    h.update_u32le(static_cast<std::uint32_t>(secret.size()));
    h.update(secret);
    h.update_u32le(static_cast<std::uint32_t>(assoc_data.size()));
    h.update(assoc_data);
    h.finish(h0);
  }

  Instance inst;
  inst.memory.resize(m_prime);
  inst.passes = params.iterations;
  inst.lanes = p;
  inst.lane_length = lane_length;
  inst.segment_length = segment_length;

  std::uint8_t seed[72];
  std::memcpy(seed, h0, 64);
  std::uint8_t block_bytes[1024];
  for (std::uint32_t lane = 0; lane < p; ++lane) {
    for (std::uint32_t idx = 0; idx < 2; ++idx) {
      seed[64] = static_cast<std::uint8_t>(idx);
      seed[65] = seed[66] = seed[67] = 0;
      seed[68] = static_cast<std::uint8_t>(lane);
      seed[69] = static_cast<std::uint8_t>(lane >> 8);
      seed[70] = static_cast<std::uint8_t>(lane >> 16);
      seed[71] = 0;
      hash_prime(block_bytes, 1024, std::span<const std::uint8_t>(seed, 72));
      load_block(inst.memory[lane * lane_length + idx], block_bytes);
    }
  }

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  for (std::uint32_t pass = 0; pass < inst.passes; ++pass) {
    for (std::uint32_t slice = 0; slice < kSyncPoints; ++slice) {
      if (p == 1 || hw == 1) {
        for (std::uint32_t lane = 0; lane < p; ++lane) {
          fill_segment(inst, pass, lane, slice);
        }
      } else {
        // Lanes within one slice only read earlier slices or their own
        // segment, so they can run concurrently.
        unsigned workers = std::min<unsigned>(p, hw);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
          pool.emplace_back([&inst, pass, slice, p, w, workers] {
            for (std::uint32_t lane = w; lane < p; lane += workers) {
              fill_segment(inst, pass, lane, slice);
            }
          });
        }
        for (auto& t : pool) {
          t.join();
        }
      }
    }
  }

  Block final_block = inst.memory[lane_length - 1];
  for (std::uint32_t lane = 1; lane < p; ++lane) {
    xor_into(final_block, inst.memory[lane * lane_length + lane_length - 1]);
  }
  store_block(block_bytes, final_block);

  Bytes tag(params.tag_len);
  hash_prime(tag.data(), params.tag_len,
             std::span<const std::uint8_t>(block_bytes, 1024));
  return tag;
}

}  // namespace powbench
