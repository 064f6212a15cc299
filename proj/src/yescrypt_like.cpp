#include <cstring>
#include <string_view>
#include <thread>

#include "powbench/blake2b.hpp"
#include "powbench/errors.hpp"
#include "powbench/pow_kernels.hpp"

// ROMix-style stand-in exposing the three tuning knobs (threads, blocks,
// block size): per lane, a sequential fill of `blocks` blocks followed by
// one pass of data-dependent reads. Cost is threads*blocks*2 block
// evaluations over threads*blocks*block_size bytes.

namespace powbench {
namespace {

constexpr std::string_view kDomain = "powbench-yescrypt-like-v1";

inline ByteView sv_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// One block evaluation: digest the whole input block, then expand the
// digest back to block_size bytes in counter mode.
void block_eval(const std::uint8_t* in, std::uint8_t* out,
                std::uint32_t block_size) {
  std::uint8_t digest[64];
  {
    Blake2b h(64);
    h.update(ByteView(in, block_size));
    h.finish(digest);
  }
  for (std::uint32_t off = 0, ctr = 0; off < block_size; off += 64, ++ctr) {
    Blake2b h(64);
    h.update(ByteView(digest, 64));
    h.update_u32le(ctr);
    h.finish(out + off);
  }
}

inline std::uint64_t integerify(const std::uint8_t* block) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) {
    v = (v << 8) | block[i];
  }
  return v;
}

void run_lane(std::uint32_t lane, const Bytes& seed,
              const YescryptParams& params, std::uint8_t* lane_out) {
  const std::uint32_t bs = params.block_size;
  const std::uint32_t n = params.blocks;
  std::vector<std::uint8_t> mem(static_cast<std::size_t>(n) * bs);
  std::vector<std::uint8_t> x(bs), scratch(bs);

  // Seed block: expand H(seed || lane) to block_size bytes.
  {
    std::uint8_t digest[64];
    Blake2b h(64);
    h.update(seed);
    h.update_u32le(lane);
    h.finish(digest);
    for (std::uint32_t off = 0, ctr = 0; off < bs; off += 64, ++ctr) {
      Blake2b e(64);
      e.update(ByteView(digest, 64));
      e.update_u32le(ctr);
      e.finish(x.data() + off);
    }
  }

  block_eval(x.data(), mem.data(), bs);
  for (std::uint32_t i = 1; i < n; ++i) {
    block_eval(mem.data() + (i - 1) * static_cast<std::size_t>(bs),
               mem.data() + i * static_cast<std::size_t>(bs), bs);
  }

  std::memcpy(x.data(), mem.data() + (n - 1) * static_cast<std::size_t>(bs),
              bs);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint64_t j = integerify(x.data()) % n;
    const std::uint8_t* vj = mem.data() + j * static_cast<std::size_t>(bs);
    for (std::uint32_t b = 0; b < bs; ++b) {
      scratch[b] = static_cast<std::uint8_t>(x[b] ^ vj[b]);
    }
    block_eval(scratch.data(), x.data(), bs);
  }

  Blake2b h(64);
  h.update(x);
  h.finish(lane_out);
}

}  // namespace

Bytes yescrypt_like_hash(const YescryptParams& params, ByteView message,
                         ByteView salt) {
  if (salt.size() < 8) {
    throw InvalidParam("salt", "must be at least 8 bytes");
  }

  Bytes seed(64);
  {
    Blake2b h(64);
    h.update(sv_bytes(kDomain));
    h.update_u32le(params.threads);
    h.update_u32le(params.blocks);
    h.update_u32le(params.block_size);
    h.update_u32le(static_cast<std::uint32_t>(message.size()));
    h.update(message);
    h.update_u32le(static_cast<std::uint32_t>(salt.size()));
    h.update(salt);
    h.finish(seed.data());
  }

  std::vector<std::uint8_t> lane_outs(
      static_cast<std::size_t>(params.threads) * 64);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (params.threads == 1 || hw == 1) {
    for (std::uint32_t lane = 0; lane < params.threads; ++lane) {
      run_lane(lane, seed, params, lane_outs.data() + lane * 64);
    }
  } else {
    unsigned workers = std::min<unsigned>(params.threads, hw);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint32_t lane = w; lane < params.threads; lane += workers) {
          run_lane(lane, seed, params, lane_outs.data() + lane * 64);
        }
      });
    }
    for (auto& t : pool) {
      t.join();
    }
  }

  Bytes tag(64);
  Blake2b h(64);
  h.update(lane_outs);
  h.finish(tag.data());
  return tag;
}

}  // namespace powbench
