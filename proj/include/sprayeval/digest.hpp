#pragma once

#include <string>
#include <string_view>

#include <openssl/evp.h>

#include "sprayeval/errors.hpp"

namespace sprayeval {

// Lowercase hex SHA-256 of the given bytes; used to fingerprint report
// inputs so a report can be traced back to the exact data it was built from.
inline std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int md_len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &md_len, EVP_sha256(),
                 nullptr) != 1)
    throw Error("sha256: digest computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * md_len);
  for (unsigned int i = 0; i < md_len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0x0F]);
  }
  return out;
}

}  // namespace sprayeval
