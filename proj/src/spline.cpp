#include "vlclab/spline.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace vlc {

CubicSpline::CubicSpline(rvec x, rvec y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 4 || y_.size() != n)
        throw std::invalid_argument("cubic spline needs at least 4 points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("spline knots must be increasing");

    // Thomas solve for interior second derivatives; natural ends are zero.
    m_.assign(n, 0.0);
    rvec diag(n, 0.0), off(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double h0 = x_[i] - x_[i - 1];
        double h1 = x_[i + 1] - x_[i];
        diag[i] = 2.0 * (h0 + h1);
        off[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    for (std::size_t i = 2; i + 1 < n; ++i) {
        double h0 = x_[i] - x_[i - 1];
        double w = h0 / diag[i - 1];
        diag[i] -= w * off[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - off[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

double CubicSpline::operator()(double t) const {
    const std::size_t n = x_.size();
    std::size_t i;
    if (t <= x_.front()) {
        i = 0;
    } else if (t >= x_.back()) {
        i = n - 2;
    } else {
        auto it = std::upper_bound(x_.begin(), x_.end(), t);
        i = static_cast<std::size_t>(it - x_.begin()) - 1;
    }
    double h = x_[i + 1] - x_[i];
    double a = x_[i + 1] - t;
    double b = t - x_[i];
    return m_[i] * a * a * a / (6.0 * h) + m_[i + 1] * b * b * b / (6.0 * h) +
           (y_[i] / h - m_[i] * h / 6.0) * a +
           (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b;
}

}  // namespace vlc
