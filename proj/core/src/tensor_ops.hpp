#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace ssflow::detail {

/// Row-major dense matrix.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

/// Applies `mat` along `axis` of a row-major n-d array with extents `dims`
/// (dims[axis] == mat.cols); the output has dims[axis] replaced by mat.rows.
void apply_axis(const double* in, double* out, const std::array<int, 3>& dims, int ndim, int axis,
                const DenseMatrix& mat);

/// out = (mat x ... x mat) in for a cube of side mat.cols in `ndim`
/// dimensions; the result has side mat.rows. `scratch` is reused between calls.
void apply_tensor(const double* in, double* out, int ndim, const DenseMatrix& mat,
                  std::vector<double>& scratch);

/// out += weight * (mat x ... x mat) in.
void accumulate_tensor(const double* in, double* out, int ndim, const DenseMatrix& mat,
                       double weight, std::vector<double>& scratch);

}  // namespace ssflow::detail
