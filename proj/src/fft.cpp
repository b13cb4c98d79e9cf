#include "fft.hpp"

#include <fftw3.h>

#include <cmath>

namespace spiky::detail {

void fft_axis(ComplexMatrix& m, int axis, FftSign sign) {
    const int rows = static_cast<int>(m.rows());
    const int cols = static_cast<int>(m.cols());
    if (rows == 0 || cols == 0) return;

    int n = 0, howmany = 0, stride = 0, dist = 0;
    if (axis == 0) {
        n = rows;
        howmany = cols;
        stride = cols;
        dist = 1;
    } else {
        n = cols;
        howmany = rows;
        stride = 1;
        dist = cols;
    }
    auto* data = reinterpret_cast<fftw_complex*>(m.data());
    fftw_plan plan = fftw_plan_many_dft(1, &n, howmany, data, nullptr, stride, dist, data,
                                        nullptr, stride, dist, static_cast<int>(sign),
                                        FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

Eigen::VectorXd sinc_weights(double r, int n) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    const double nearest = std::round(r);
    if (std::abs(r - nearest) < 1e-9) {
        int k = static_cast<int>(nearest) % n;
        if (k < 0) k += n;
        w(k) = 1.0;
        return w;
    }
    // Trigonometric interpolant of even length with the Nyquist term split:
    // D(u) = sin(pi u) cot(pi u / n) / n.
    for (int j = 0; j < n; ++j) {
        const double u = r - j;
        w(j) = std::sin(kPi * u) / (n * std::tan(kPi * u / n));
    }
    return w;
}

}  // namespace spiky::detail
