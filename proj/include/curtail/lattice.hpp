#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace curtail {

/// Dense storage over the triangle 0 <= s <= m <= n, laid out column-major by
/// participant count. Entries with s > m exist but are never meaningful.
template <class T>
class LatticeArray {
 public:
  LatticeArray() = default;
  LatticeArray(int n, T fill) : n_(n), data_(static_cast<std::size_t>(n + 1) * (n + 1), fill) {}

  [[nodiscard]] int n() const { return n_; }

  T& operator()(int s, int m) { return data_[index(s, m)]; }
  const T& operator()(int s, int m) const { return data_[index(s, m)]; }

  T& at(int s, int m) {
    check(s, m);
    return data_[index(s, m)];
  }
  const T& at(int s, int m) const {
    check(s, m);
    return data_[index(s, m)];
  }

 private:
  [[nodiscard]] std::size_t index(int s, int m) const {
    return static_cast<std::size_t>(m) * (n_ + 1) + s;
  }
  void check(int s, int m) const {
    if (s < 0 || m < 0 || s > m || m > n_) throw std::out_of_range("lattice point outside 0 <= s <= m <= N");
  }

  int n_ = 0;
  std::vector<T> data_;
};

}  // namespace curtail
