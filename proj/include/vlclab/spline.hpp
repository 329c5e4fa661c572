#ifndef VLCLAB_SPLINE_HPP
#define VLCLAB_SPLINE_HPP

#include "vlclab/types.hpp"

namespace vlc {

// Natural cubic spline over strictly increasing knots. Evaluation outside the
// knot range continues the end cubics (extrapolation).
class CubicSpline {
public:
    CubicSpline(rvec x, rvec y);  // throws if fewer than 4 knots

    double operator()(double t) const;

private:
    rvec x_, y_, m_;  // knots, values, second derivatives
};

}  // namespace vlc

#endif
