#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eventformer/tensor.hpp"

namespace eventformer {

// Self-describing container of named f64 tensors with a JSON metadata
// header. Binary layout (little-endian):
//   magic "EVFT", u32 version,
//   u64 header length + header bytes (UTF-8 JSON),
//   u64 tensor count, then per tensor:
//     u64 name length + name bytes, u32 ndim, i32 dims..., f64 data...
// Round-trips byte-exactly.
struct Checkpoint {
  static constexpr uint32_t kVersion = 1;

  std::string header_json = "{}";
  std::vector<std::pair<std::string, Tensor>> tensors;  // ordered

  const Tensor& find(const std::string& name) const;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace eventformer
