#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace oaht::nn {

using Vec = std::vector<double>;

struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;
};

// Named real arrays with paired gradient accumulators. Iteration order is the
// lexicographic order of names, which fixes the layout of flat views and of
// the checkpoint file.
class ParameterStore {
 public:
  void add(const std::string& name, std::vector<std::size_t> shape);
  bool contains(const std::string& name) const { return entries_.count(name) > 0; }

  const Tensor& tensor(const std::string& name) const;
  std::span<double> values(const std::string& name);
  std::span<const double> values(const std::string& name) const;
  std::span<double> grads(const std::string& name);
  std::span<const double> grads(const std::string& name) const;

  std::vector<std::string> names() const;
  std::size_t size() const;  // total number of scalars
  bool empty() const { return entries_.empty(); }

  void zero_grad();
  bool all_finite() const;
  bool grads_finite() const;
  bool same_layout(const ParameterStore& other) const;

  std::vector<double> flat_values() const;
  void set_flat_values(std::span<const double> flat);
  std::vector<double> flat_grads() const;

  // Copies every entry of `other` (values only) into this store under
  // `prefix + name`.
  void merge(const ParameterStore& other, const std::string& prefix = "");
  // Entries whose names start with `prefix`, with the prefix stripped.
  ParameterStore extract(const std::string& prefix) const;

  // Little-endian binary container: magic "OAHTPS01", u64 entry count, then per
  // entry u32 name length, name bytes, u32 rank, u64 dims, raw f64 values.
  void save(std::ostream& out) const;
  static ParameterStore load(std::istream& in);
  void save_file(const std::string& path) const;
  static ParameterStore load_file(const std::string& path);

  friend bool operator==(const ParameterStore& a, const ParameterStore& b);

 private:
  struct Entry {
    Tensor value;
    std::vector<double> grad;
  };
  Entry& entry(const std::string& name);
  const Entry& entry(const std::string& name) const;
  std::map<std::string, Entry> entries_;
};

// target <- (1 - tau) * target + tau * online, elementwise.
void soft_update(ParameterStore& target, const ParameterStore& online, double tau);

}  // namespace oaht::nn
