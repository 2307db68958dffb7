#include "oaht/nn/parameter_store.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>

#include "oaht/errors.hpp"

namespace oaht::nn {

static_assert(std::endian::native == std::endian::little, "checkpoint format assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'O', 'A', 'H', 'T', 'P', 'S', '0', '1'};

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw DomainError("truncated parameter checkpoint");
  return v;
}

}  // namespace

void ParameterStore::add(const std::string& name, std::vector<std::size_t> shape) {
  if (contains(name)) throw DomainError("duplicate parameter name: " + name);
  const std::size_t n = std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  Entry e;
  e.value.shape = std::move(shape);
  e.value.data.assign(n, 0.0);
  e.grad.assign(n, 0.0);
  entries_.emplace(name, std::move(e));
}

ParameterStore::Entry& ParameterStore::entry(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw DomainError("unknown parameter: " + name);
  return it->second;
}

const ParameterStore::Entry& ParameterStore::entry(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw DomainError("unknown parameter: " + name);
  return it->second;
}

const Tensor& ParameterStore::tensor(const std::string& name) const { return entry(name).value; }
std::span<double> ParameterStore::values(const std::string& name) { return entry(name).value.data; }
std::span<const double> ParameterStore::values(const std::string& name) const { return entry(name).value.data; }
std::span<double> ParameterStore::grads(const std::string& name) { return entry(name).grad; }
std::span<const double> ParameterStore::grads(const std::string& name) const { return entry(name).grad; }

std::vector<std::string> ParameterStore::names() const {
  std::vector<std::string> out;
  for (const auto& [name, e] : entries_) out.push_back(name);
  return out;
}

std::size_t ParameterStore::size() const {
  std::size_t n = 0;
  for (const auto& [name, e] : entries_) n += e.value.data.size();
  return n;
}

void ParameterStore::zero_grad() {
  for (auto& [name, e] : entries_) std::fill(e.grad.begin(), e.grad.end(), 0.0);
}

bool ParameterStore::all_finite() const {
  for (const auto& [name, e] : entries_) {
    for (double v : e.value.data) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

bool ParameterStore::grads_finite() const {
  for (const auto& [name, e] : entries_) {
    for (double v : e.grad) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

bool ParameterStore::same_layout(const ParameterStore& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  for (; a != entries_.end(); ++a, ++b) {
    if (a->first != b->first || a->second.value.shape != b->second.value.shape) return false;
  }
  return true;
}

std::vector<double> ParameterStore::flat_values() const {
  std::vector<double> out;
  out.reserve(size());
  for (const auto& [name, e] : entries_) out.insert(out.end(), e.value.data.begin(), e.value.data.end());
  return out;
}

void ParameterStore::set_flat_values(std::span<const double> flat) {
  if (flat.size() != size()) throw DomainError("flat parameter vector has the wrong length");
  std::size_t offset = 0;
  for (auto& [name, e] : entries_) {
    std::copy(flat.begin() + offset, flat.begin() + offset + e.value.data.size(), e.value.data.begin());
    offset += e.value.data.size();
  }
}

std::vector<double> ParameterStore::flat_grads() const {
  std::vector<double> out;
  out.reserve(size());
  for (const auto& [name, e] : entries_) out.insert(out.end(), e.grad.begin(), e.grad.end());
  return out;
}

void ParameterStore::merge(const ParameterStore& other, const std::string& prefix) {
  for (const auto& [name, e] : other.entries_) {
    add(prefix + name, e.value.shape);
    auto dst = values(prefix + name);
    std::copy(e.value.data.begin(), e.value.data.end(), dst.begin());
  }
}

ParameterStore ParameterStore::extract(const std::string& prefix) const {
  ParameterStore out;
  for (const auto& [name, e] : entries_) {
    if (name.compare(0, prefix.size(), prefix) != 0) continue;
    const std::string stripped = name.substr(prefix.size());
    out.add(stripped, e.value.shape);
    auto dst = out.values(stripped);
    std::copy(e.value.data.begin(), e.value.data.end(), dst.begin());
  }
  return out;
}

void ParameterStore::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  write_pod<std::uint64_t>(out, entries_.size());
  for (const auto& [name, e] : entries_) {
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(e.value.shape.size()));
    for (auto d : e.value.shape) write_pod<std::uint64_t>(out, d);
    out.write(reinterpret_cast<const char*>(e.value.data.data()),
              static_cast<std::streamsize>(e.value.data.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("failed writing parameter checkpoint");
}

ParameterStore ParameterStore::load(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw DomainError("not a parameter checkpoint");
  ParameterStore store;
  const auto count = read_pod<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto len = read_pod<std::uint32_t>(in);
    std::string name(len, '\0');
    in.read(name.data(), len);
    const auto rank = read_pod<std::uint32_t>(in);
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) d = read_pod<std::uint64_t>(in);
    store.add(name, shape);
    auto data = store.values(name);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!in) throw DomainError("truncated parameter checkpoint");
  }
  return store;
}

void ParameterStore::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  save(out);
}

ParameterStore ParameterStore::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  return load(in);
}

bool operator==(const ParameterStore& a, const ParameterStore& b) {
  if (!a.same_layout(b)) return false;
  auto x = a.entries_.begin();
  auto y = b.entries_.begin();
  for (; x != a.entries_.end(); ++x, ++y) {
    if (std::memcmp(x->second.value.data.data(), y->second.value.data.data(),
                    x->second.value.data.size() * sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

void soft_update(ParameterStore& target, const ParameterStore& online, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("tau must lie in [0, 1]");
  if (!target.same_layout(online)) throw DomainError("soft_update: parameter layouts differ");
  for (const auto& name : online.names()) {
    auto dst = target.values(name);
    auto src = online.values(name);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = (1.0 - tau) * dst[i] + tau * src[i];
  }
}

}  // namespace oaht::nn
