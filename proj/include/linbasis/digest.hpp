#pragma once

#include <string>
#include <string_view>

namespace linbasis {

// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view data);

// Incremental form for large payloads.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::string_view data);
  std::string hex_digest();

 private:
  void* ctx_;
};

}  // namespace linbasis
