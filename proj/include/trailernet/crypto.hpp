#ifndef TRAILERNET_CRYPTO_HPP
#define TRAILERNET_CRYPTO_HPP

// Thin wrappers over libcrypto. Everything that needs a digest, a MAC or
// unpredictable bytes goes through here so the backend can be swapped.

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tnet::crypto {

inline constexpr std::size_t kDigestSize = 32;
using Digest = std::array<std::uint8_t, kDigestSize>;

inline Digest sha256(std::span<const std::uint8_t> data)
{
  Digest out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

/// Incremental SHA-256, used for running payload-stream digests.
class Sha256Stream
{
public:
  Sha256Stream()
    : ctx_(EVP_MD_CTX_new())
  {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("sha256 init failed");
    }
  }
  ~Sha256Stream() { EVP_MD_CTX_free(ctx_); }
  Sha256Stream(const Sha256Stream&) = delete;
  Sha256Stream& operator=(const Sha256Stream&) = delete;

  void update(std::span<const std::uint8_t> data)
  {
    EVP_DigestUpdate(ctx_, data.data(), data.size());
  }

  /// Digest of everything fed so far; the stream stays usable.
  Digest peek() const
  {
    EVP_MD_CTX* copy = EVP_MD_CTX_new();
    EVP_MD_CTX_copy_ex(copy, ctx_);
    Digest out{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(copy, out.data(), &len);
    EVP_MD_CTX_free(copy);
    return out;
  }

private:
  EVP_MD_CTX* ctx_;
};

inline Digest hmac_sha256(std::span<const std::uint8_t> key,
                          std::span<const std::uint8_t> data)
{
  Digest out{};
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(),
       data.size(), out.data(), &len);
  return out;
}

inline bool equal_constant_time(std::span<const std::uint8_t> a,
                                std::span<const std::uint8_t> b)
{
  return a.size() == b.size() && CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

inline std::vector<std::uint8_t> random_bytes(std::size_t n)
{
  std::vector<std::uint8_t> out(n);
  if (n > 0 && RAND_bytes(out.data(), static_cast<int>(n)) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
  return out;
}

inline std::uint32_t random_u32()
{
  auto b = random_bytes(4);
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

inline std::string to_hex(std::span<const std::uint8_t> bytes)
{
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0x0F]);
  }
  return s;
}

} // namespace tnet::crypto

#endif // TRAILERNET_CRYPTO_HPP
