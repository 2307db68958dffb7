#pragma once

#include <span>

#include <Eigen/Core>

namespace oaht::nn::linalg {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatMap = Eigen::Map<const RowMat>;
using MatMap = Eigen::Map<RowMat>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using VecMap = Eigen::Map<Eigen::VectorXd>;

inline ConstMatMap mat(std::span<const double> s, std::size_t rows, std::size_t cols) {
  return ConstMatMap(s.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}
inline MatMap mat(std::span<double> s, std::size_t rows, std::size_t cols) {
  return MatMap(s.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}
inline ConstVecMap vec(std::span<const double> s) {
  return ConstVecMap(s.data(), static_cast<Eigen::Index>(s.size()));
}
inline VecMap vec(std::span<double> s) { return VecMap(s.data(), static_cast<Eigen::Index>(s.size())); }

}  // namespace oaht::nn::linalg
