#include "tensor_ops.hpp"

#include <Eigen/Dense>

namespace ssflow::detail {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;

std::size_t volume(const std::array<int, 3>& dims, int ndim) {
  std::size_t v = 1;
  for (int a = 0; a < ndim; ++a) v *= static_cast<std::size_t>(dims[a]);
  return v;
}

}  // namespace

void apply_axis(const double* in, double* out, const std::array<int, 3>& dims, int ndim, int axis,
                const DenseMatrix& mat) {
  std::size_t pre = 1;
  std::size_t post = 1;
  for (int a = 0; a < axis; ++a) pre *= static_cast<std::size_t>(dims[a]);
  for (int a = axis + 1; a < ndim; ++a) post *= static_cast<std::size_t>(dims[a]);
  const Eigen::Index in_len = dims[axis];
  const Eigen::Index out_len = mat.rows;
  ConstMap m(mat.data.data(), mat.rows, mat.cols);
  if (post == 1) {
    ConstMap src(in, static_cast<Eigen::Index>(pre), in_len);
    MutMap dst(out, static_cast<Eigen::Index>(pre), out_len);
    dst.noalias() = src * m.transpose();
    return;
  }
  for (std::size_t p = 0; p < pre; ++p) {
    ConstMap src(in + p * in_len * post, in_len, static_cast<Eigen::Index>(post));
    MutMap dst(out + p * out_len * post, out_len, static_cast<Eigen::Index>(post));
    dst.noalias() = m * src;
  }
}

void apply_tensor(const double* in, double* out, int ndim, const DenseMatrix& mat,
                  std::vector<double>& scratch) {
  std::array<int, 3> dims{mat.cols, mat.cols, mat.cols};
  if (ndim == 1) {
    apply_axis(in, out, dims, 1, 0, mat);
    return;
  }
  std::array<int, 3> d1 = dims;
  d1[0] = mat.rows;
  const std::size_t mid_size = volume(d1, ndim);
  if (ndim == 2) {
    scratch.resize(mid_size);
    apply_axis(in, scratch.data(), dims, 2, 0, mat);
    apply_axis(scratch.data(), out, d1, 2, 1, mat);
    return;
  }
  std::array<int, 3> d2 = d1;
  d2[1] = mat.rows;
  const std::size_t mid2 = volume(d2, ndim);
  scratch.resize(mid_size + mid2);
  apply_axis(in, scratch.data(), dims, 3, 0, mat);
  apply_axis(scratch.data(), scratch.data() + mid_size, d1, 3, 1, mat);
  apply_axis(scratch.data() + mid_size, out, d2, 3, 2, mat);
}

void accumulate_tensor(const double* in, double* out, int ndim, const DenseMatrix& mat,
                       double weight, std::vector<double>& scratch) {
  std::size_t out_size = 1;
  for (int a = 0; a < ndim; ++a) out_size *= static_cast<std::size_t>(mat.rows);
  std::vector<double> tmp(out_size);
  apply_tensor(in, tmp.data(), ndim, mat, scratch);
  for (std::size_t i = 0; i < out_size; ++i) out[i] += weight * tmp[i];
}

}  // namespace ssflow::detail
