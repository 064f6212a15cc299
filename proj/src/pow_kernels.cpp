#include "powbench/pow_kernels.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "powbench/hex.hpp"

namespace powbench {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Argon2i:
      return "argon2i";
    case Algorithm::CatenaBrg:
      return "catena";
    case Algorithm::YescryptLike:
      return "yescrypt";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "argon2i") return Algorithm::Argon2i;
  if (name == "catena") return Algorithm::CatenaBrg;
  if (name == "yescrypt") return Algorithm::YescryptLike;
  throw InvalidParam("algorithm", "unknown algorithm '" + name + "'");
}

std::uint64_t working_set_bytes(const PowConfig& config) {
  switch (config.algorithm) {
    case Algorithm::Argon2i:
      return std::uint64_t{config.argon2i().memory_kib} * 1024;
    case Algorithm::CatenaBrg:
      return (1ULL << config.catena().garlic) * 64;
    case Algorithm::YescryptLike: {
      const auto& p = config.yescrypt();
      // Lanes may run concurrently, so all of them count.
      return std::uint64_t{p.threads} * p.blocks * p.block_size;
    }
  }
  return 0;
}

const PowConfig& validate_config(const PowConfig& config,
                                 const KernelOptions& options) {
  if (config.label.empty()) {
    throw InvalidParam("label", "must be non-empty");
  }
  if (config.label.find('\n') != std::string::npos) {
    throw InvalidParam("label", "must not contain newlines");
  }
  switch (config.algorithm) {
    case Algorithm::Argon2i: {
      if (!std::holds_alternative<Argon2iParams>(config.params)) {
        throw InvalidParam("params", "variant does not match algorithm tag");
      }
      const auto& p = config.argon2i();
      if (p.parallelism < 1 || p.parallelism >= (1u << 24)) {
        throw InvalidParam("p", "parallelism must be in [1, 2^24)");
      }
      if (p.iterations < 1) {
        throw InvalidParam("t", "minimum is 1");
      }
      if (p.memory_kib < 8 * p.parallelism) {
        throw InvalidParam("m", "m < 8*p");
      }
      if (p.tag_len < 4 || p.tag_len > 64) {
        throw InvalidParam("tag_len", "must be in [4, 64]");
      }
      if (p.salt.size() < 8) {
        throw InvalidParam("salt", "must be at least 8 bytes");
      }
      break;
    }
    case Algorithm::CatenaBrg: {
      if (!std::holds_alternative<CatenaParams>(config.params)) {
        throw InvalidParam("params", "variant does not match algorithm tag");
      }
      const auto& p = config.catena();
      if (p.garlic < 10 || p.garlic > 24) {
        throw InvalidParam("garlic", "must be in [10, 24]");
      }
      if (p.lambda < 1) {
        throw InvalidParam("lambda", "minimum is 1");
      }
      break;
    }
    case Algorithm::YescryptLike: {
      if (!std::holds_alternative<YescryptParams>(config.params)) {
        throw InvalidParam("params", "variant does not match algorithm tag");
      }
      const auto& p = config.yescrypt();
      if (p.threads < 1) {
        throw InvalidParam("threads", "minimum is 1");
      }
      if (p.blocks < 2) {
        throw InvalidParam("blocks", "minimum is 2");
      }
      if (p.block_size == 0 || p.block_size % 64 != 0) {
        throw InvalidParam("block_size", "must be a positive multiple of 64");
      }
      break;
    }
  }
  std::uint64_t ws = working_set_bytes(config);
  if (ws > options.memory_cap_bytes) {
    throw MemoryCapExceeded(ws, options.memory_cap_bytes);
  }
  return config;
}

std::uint64_t cost_model(const PowConfig& config) {
  switch (config.algorithm) {
    case Algorithm::Argon2i:
      return std::uint64_t{config.argon2i().iterations} *
             config.argon2i().memory_kib;
    case Algorithm::CatenaBrg:
      return (1ULL + config.catena().lambda) << config.catena().garlic;
    case Algorithm::YescryptLike:
      return std::uint64_t{config.yescrypt().threads} *
             config.yescrypt().blocks * 2;
  }
  return 0;
}

PowOutput compute_pow(const PowConfig& config, ByteView message, ByteView salt,
                      const KernelOptions& options) {
  validate_config(config, options);
  if (message.size() >= (1ULL << 32)) {
    throw InvalidParam("message", "length must be < 2^32");
  }
  PowOutput out;
  switch (config.algorithm) {
    case Algorithm::Argon2i:
      out.tag = argon2i_hash(config.argon2i(), message, salt, {}, {});
      break;
    case Algorithm::CatenaBrg:
      out.tag = catena_brg_hash(config.catena(), message, salt);
      break;
    case Algorithm::YescryptLike:
      out.tag = yescrypt_like_hash(config.yescrypt(), message, salt);
      break;
  }
  out.cost_blocks = cost_model(config);
  return out;
}

// ---- known-answer store ----------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    out.push_back(trim(item));
  }
  return out;
}

std::map<std::string, std::string> parse_params(const std::string& s,
                                                std::size_t line_no) {
  std::map<std::string, std::string> out;
  for (const auto& pair : split(s, ';')) {
    if (pair.empty()) continue;
    auto eq = pair.find('=');
    if (eq == std::string::npos) {
      throw InvalidParam("kat store",
                         "line " + std::to_string(line_no) +
                             ": malformed param '" + pair + "'");
    }
    out[trim(pair.substr(0, eq))] = trim(pair.substr(eq + 1));
  }
  return out;
}

std::uint32_t get_u32(const std::map<std::string, std::string>& params,
                      const std::string& key, std::size_t line_no) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw InvalidParam("kat store", "line " + std::to_string(line_no) +
                                        ": missing param '" + key + "'");
  }
  return static_cast<std::uint32_t>(std::stoul(it->second));
}

}  // namespace

std::vector<KatVector> parse_kat_store(std::istream& in) {
  std::vector<KatVector> vectors;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    auto fields = split(stripped, ',');
    if (fields.size() != 5) {
      throw InvalidParam("kat store",
                         "line " + std::to_string(line_no) +
                             ": expected 5 comma-separated fields");
    }
    KatVector v;
    v.config.algorithm = algorithm_from_string(fields[0]);
    v.id = fields[0] + "@line" + std::to_string(line_no);
    v.config.label = v.id;
    auto params = parse_params(fields[1], line_no);
    switch (v.config.algorithm) {
      case Algorithm::Argon2i: {
        Argon2iParams p;
        p.parallelism = get_u32(params, "p", line_no);
        p.iterations = get_u32(params, "t", line_no);
        p.memory_kib = get_u32(params, "m", line_no);
        if (params.count("tag_len")) {
          p.tag_len = get_u32(params, "tag_len", line_no);
        }
        if (params.count("secret")) {
          v.secret = from_hex(params.at("secret"));
        }
        if (params.count("ad")) {
          v.assoc_data = from_hex(params.at("ad"));
        }
        v.config.params = p;
        break;
      }
      case Algorithm::CatenaBrg: {
        CatenaParams p;
        p.garlic = get_u32(params, "g", line_no);
        p.lambda = get_u32(params, "lambda", line_no);
        v.config.params = p;
        break;
      }
      case Algorithm::YescryptLike: {
        YescryptParams p;
        p.threads = get_u32(params, "threads", line_no);
        p.blocks = get_u32(params, "blocks", line_no);
        p.block_size = get_u32(params, "block_size", line_no);
        v.config.params = p;
        break;
      }
    }
    v.message = from_hex(fields[2]);
    v.salt = from_hex(fields[3]);
    v.expected_tag = from_hex(fields[4]);
    vectors.push_back(std::move(v));
  }
  return vectors;
}

std::vector<KatVector> load_kat_store(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError(path, "cannot open known-answer store");
  }
  return parse_kat_store(in);
}

KatReport run_known_answers(const std::vector<KatVector>& vectors) {
  KatReport report;
  if (vectors.empty()) {
    report.no_vectors = true;
    return report;
  }
  for (const auto& v : vectors) {
    try {
      Bytes tag;
      if (v.config.algorithm == Algorithm::Argon2i &&
          (!v.secret.empty() || !v.assoc_data.empty())) {
        tag = argon2i_hash(v.config.argon2i(), v.message, v.salt, v.secret,
                           v.assoc_data);
      } else {
        tag = compute_pow(v.config, v.message, v.salt).tag;
      }
      if (tag == v.expected_tag) {
        ++report.passed;
      } else {
        report.failed.push_back(v.id);
      }
    } catch (const Error&) {
      report.failed.push_back(v.id);
    }
  }
  return report;
}

KatReport run_known_answers(const std::string& store_path) {
  return run_known_answers(load_kat_store(store_path));
}

}  // namespace powbench
