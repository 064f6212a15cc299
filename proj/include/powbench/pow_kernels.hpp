#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "powbench/errors.hpp"

namespace powbench {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

enum class Algorithm { Argon2i, CatenaBrg, YescryptLike };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct Argon2iParams {
  std::uint32_t parallelism = 1;   // lanes, 1 .. 2^24-1
  std::uint32_t iterations = 1;    // passes over memory
  std::uint32_t memory_kib = 8;    // >= 8 * parallelism
  std::uint32_t tag_len = 32;      // output bytes, 4 .. 64 here
  Bytes salt = Bytes(16, 0x00);    // default profiling salt: 16 zero bytes
};

struct CatenaParams {
  std::uint32_t garlic = 15;  // memory array holds 2^garlic 64-byte words
  std::uint32_t lambda = 1;   // bit-reversal mixing passes
};

struct YescryptParams {
  std::uint32_t threads = 1;
  std::uint32_t blocks = 2;
  std::uint32_t block_size = 64;  // bytes, positive multiple of 64
};

struct PowConfig {
  Algorithm algorithm = Algorithm::Argon2i;
  std::variant<Argon2iParams, CatenaParams, YescryptParams> params =
      Argon2iParams{};
  std::string label = "default";

  const Argon2iParams& argon2i() const {
    return std::get<Argon2iParams>(params);
  }
  const CatenaParams& catena() const { return std::get<CatenaParams>(params); }
  const YescryptParams& yescrypt() const {
    return std::get<YescryptParams>(params);
  }
};

struct PowOutput {
  Bytes tag;
  std::uint64_t cost_blocks = 0;  // closed-form block count, see cost_model()
};

struct KernelOptions {
  // Refuses any config whose working set would exceed this cap.
  std::uint64_t memory_cap_bytes = 256ULL * 1024 * 1024;
};

// Checks every per-variant parameter bound and the label rules; throws
// InvalidParam naming the first violated field, or MemoryCapExceeded when
// the working set cannot fit options.memory_cap_bytes.
const PowConfig& validate_config(const PowConfig& config,
                                 const KernelOptions& options = {});

// Bytes the kernel will hold live at once.
std::uint64_t working_set_bytes(const PowConfig& config);

// Closed-form count of memory-block primitive evaluations:
//   Argon2i      -> t * m
//   CatenaBrg    -> (1 + lambda) * 2^garlic
//   YescryptLike -> threads * blocks * 2
std::uint64_t cost_model(const PowConfig& config);

// Runs the configured kernel. Deterministic: identical (config, message,
// salt) always produce an identical tag. salt must be >= 8 bytes.
PowOutput compute_pow(const PowConfig& config, ByteView message, ByteView salt,
                      const KernelOptions& options = {});

// Argon2i with the full RFC 9106 input set (optional secret key and
// associated data). compute_pow() calls this with both empty.
Bytes argon2i_hash(const Argon2iParams& params, ByteView message,
                   ByteView salt, ByteView secret, ByteView assoc_data);

Bytes catena_brg_hash(const CatenaParams& params, ByteView message,
                      ByteView salt);

Bytes yescrypt_like_hash(const YescryptParams& params, ByteView message,
                         ByteView salt);

// ---- known-answer vectors -------------------------------------------------

struct KatVector {
  std::string id;  // "<algorithm>@line<N>" within the store
  PowConfig config;
  Bytes secret;  // argon2i only; empty otherwise
  Bytes assoc_data;
  Bytes message;
  Bytes salt;
  Bytes expected_tag;
};

struct KatReport {
  std::size_t passed = 0;
  std::vector<std::string> failed;  // ids of mismatching vectors
  bool no_vectors = false;          // store held no vectors at all
};

// Store format, one vector per line:
//   algorithm, params, message_hex, salt_hex, tag_hex
// params is ';'-separated key=value pairs; '#' starts a comment line.
std::vector<KatVector> parse_kat_store(std::istream& in);
std::vector<KatVector> load_kat_store(const std::string& path);

KatReport run_known_answers(const std::vector<KatVector>& vectors);
KatReport run_known_answers(const std::string& store_path);

}  // namespace powbench
