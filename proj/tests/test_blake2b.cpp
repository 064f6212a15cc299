#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>

#include "powbench/blake2b.hpp"
#include "powbench/hex.hpp"
#include "powbench/pow_kernels.hpp"

using namespace powbench;

namespace {

Bytes bytes_of(const std::string& s) {
  return Bytes(s.begin(), s.end());
}

// Fixtures generated with an independent implementation
// (python3 hashlib.blake2b) and frozen here.
struct Fixture {
  Bytes input;
  std::size_t digest_len;
  const char* hex_digest;
};

}  // namespace

TEST_CASE("known digests at various lengths") {
  const Fixture fixtures[] = {
      {bytes_of(""), 64,
       "786a02f742015903c6c6fd852552d272912f4740e15847618a86e217f71f5419"
       "d25e1031afee585313896444934eb04b903a685b1448b755d56f701afe9be2ce"},
      {bytes_of("abc"), 64,
       "ba80a53f981c4d0d6a2797b69f12f6e94c212f14685ac4b74b12bb6fdbffa2d1"
       "7d87c5392aab792dc252d5de4533cc9518d38aa8dbf1925ab92386edd4009923"},
      {bytes_of("abc"), 32,
       "bddd813c634239723171ef3fee98579b94964e3bb1cb3e427262c8c068d52319"},
      {bytes_of("abc"), 4, "63906248"},
      {bytes_of("The quick brown fox jumps over the lazy dog"), 64,
       "a8add4bdddfd93e4877d2746e62817b116364a1fa7bc148d95090bc7333b3673"
       "f82401cf7aa2e4cb1ecd90296e3f14cb5413f8ed77be73045b13914cdcd6a918"},
      {Bytes(128, 'a'), 64,
       "fc6c71f688f43ea7d60817478808f3cac753e61571865c95adbc2d9122c943a7"
       "6b92c2cb1047ef3fe7bf6e436ec1d0a99a9e5b216780bf7fed9d7ca91d3a8f3b"},
      {Bytes(129, 'b'), 64,
       "a9cf50fa8f7a98caf1048e5457727dd5077c043f8e23401be838d56e86b685f5"
       "c7bf6b3c9b545b7c36e08d7242d830152fe676b6d2ec6ec7a4eb5f5b26749784"},
      {Bytes(1024, 'c'), 17, "832dcbfb309bee0ae608d54727a53b3dd6"},
  };
  for (const auto& f : fixtures) {
    CAPTURE(f.digest_len);
    CHECK(to_hex(blake2b(f.digest_len, f.input)) == f.hex_digest);
  }
}

TEST_CASE("byte-range input") {
  Bytes input(256);
  for (int i = 0; i < 256; ++i) input[i] = static_cast<std::uint8_t>(i);
  CHECK(to_hex(blake2b(64, input)) ==
        "1ecc896f34d3f9cac484c73f75f6a5fb58ee6784be41b35f46067b9c65c63a67"
        "94d3d744112c653f73dd7deb6666204c5a9bfa5b46081fc10fdbe7884fa5cbf8");
  CHECK(to_hex(blake2b(48, input)) ==
        "9bd2b1bf7a89613fdcc76a3e02dabe81772a97bd5e6274fd9fe72e219bffe88c"
        "5e6f681a31481485dcb85dfa34bdc657");
}

TEST_CASE("streaming equals one-shot regardless of chunking") {
  std::mt19937 rng(42);
  Bytes data(4099);
  for (auto& b : data) b = static_cast<std::uint8_t>(rng());
  Bytes whole = blake2b(64, data);
  for (std::size_t chunk : {1u, 7u, 64u, 127u, 128u, 129u, 1000u}) {
    Blake2b h(64);
    for (std::size_t off = 0; off < data.size(); off += chunk) {
      std::size_t n = std::min(chunk, data.size() - off);
      h.update(ByteView(data.data() + off, n));
    }
    Bytes out(64);
    h.finish(out.data());
    CHECK(out == whole);
  }
}

TEST_CASE("multi-part convenience concatenates") {
  Bytes a = bytes_of("ab"), b = bytes_of("c");
  CHECK(blake2b(64, {a, b}) == blake2b(64, bytes_of("abc")));
}
