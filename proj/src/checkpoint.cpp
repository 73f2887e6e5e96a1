#include "eventformer/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace eventformer {

namespace {

constexpr char kMagic[4] = {'E', 'V', 'F', 'T'};

template <typename T>
void write_pod(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

void write_string(std::ofstream& out, const std::string& s) {
  write_pod<uint64_t>(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::ifstream& in) {
  uint64_t n = read_pod<uint64_t>(in);
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  if (!in) throw std::runtime_error("checkpoint: truncated string");
  return s;
}

}  // namespace

const Tensor& Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : tensors)
    if (n == name) return t;
  throw std::runtime_error("checkpoint: missing tensor '" + name + "'");
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kMagic, 4);
  write_pod<uint32_t>(out, Checkpoint::kVersion);
  write_string(out, ckpt.header_json);
  write_pod<uint64_t>(out, ckpt.tensors.size());
  for (const auto& [name, t] : ckpt.tensors) {
    write_string(out, name);
    write_pod<uint32_t>(out, static_cast<uint32_t>(t.shape.size()));
    for (int d : t.shape) write_pod<int32_t>(out, d);
    out.write(reinterpret_cast<const char*>(t.data.data()),
              static_cast<std::streamsize>(t.data.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path + ": not a checkpoint file");
  uint32_t version = read_pod<uint32_t>(in);
  if (version != Checkpoint::kVersion)
    throw std::runtime_error(path + ": unsupported checkpoint version " +
                             std::to_string(version));
  Checkpoint ckpt;
  ckpt.header_json = read_string(in);
  uint64_t count = read_pod<uint64_t>(in);
  for (uint64_t i = 0; i < count; ++i) {
    std::string name = read_string(in);
    uint32_t ndim = read_pod<uint32_t>(in);
    std::vector<int> shape(ndim);
    int64_t total = 1;
    for (uint32_t d = 0; d < ndim; ++d) {
      shape[d] = read_pod<int32_t>(in);
      if (shape[d] < 0) throw std::runtime_error(path + ": negative dimension");
      total *= shape[d];
    }
    std::vector<double> data(static_cast<size_t>(total));
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!in) throw std::runtime_error(path + ": truncated tensor data");
    ckpt.tensors.emplace_back(std::move(name),
                              Tensor(std::move(shape), std::move(data)));
  }
  return ckpt;
}

}  // namespace eventformer
