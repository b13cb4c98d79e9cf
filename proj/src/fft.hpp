#pragma once

#include "spiky/core.hpp"

namespace spiky::detail {

enum class FftSign : int { forward = -1, backward = +1 };

/// In-place unnormalized 1-D DFTs along one axis of a row-major matrix.
/// axis 0 transforms each column, axis 1 each row.
void fft_axis(ComplexMatrix& m, int axis, FftSign sign);

/// Periodic sinc weights for evaluating a band-limited sequence of n samples
/// at fractional index r. Returns a unit vector when r is (within 1e-9) a node.
Eigen::VectorXd sinc_weights(double r, int n);

}  // namespace spiky::detail
