#pragma once

#include <string>
#include <variant>
#include <vector>

namespace rsfem {

/// v(x) = sin(mode * pi * x) on (0,1).
struct SmoothSine {
    int mode = 2;
};

/// Characteristic function of (0, cut] on (0,1).
struct Step {
    double cut = 0.5;
};

/// Point mass at location in (0,1).
struct Dirac {
    double location = 0.5;
};

/// Characteristic function of (0, cut] x (0,1) on the unit square.
struct Step2D {
    double cut = 0.5;
};

/// Continuous piecewise-linear function on (0,1) given by nodal values at
/// increasing abscissae x[0] = 0 < ... < x[n-1] = 1.
struct CustomNodal {
    std::vector<double> x;
    std::vector<double> values;
};

using InitialDatum = std::variant<SmoothSine, Step, Dirac, Step2D, CustomNodal>;

/// Spatial dimension the datum lives in.
[[nodiscard]] int datum_dimension(const InitialDatum& v);
[[nodiscard]] std::string datum_name(const InitialDatum& v);
/// Throws InvalidArgument on out-of-range parameters or non-finite values.
void validate_datum(const InitialDatum& v);

} // namespace rsfem
