#include "rsfem/datum.hpp"

#include "rsfem/errors.hpp"

#include <cmath>

namespace rsfem {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

} // namespace

int datum_dimension(const InitialDatum& v)
{
    return std::holds_alternative<Step2D>(v) ? 2 : 1;
}

std::string datum_name(const InitialDatum& v)
{
    return std::visit(Overloaded{
                          [](const SmoothSine&) { return std::string("smooth_sine"); },
                          [](const Step&) { return std::string("step"); },
                          [](const Dirac&) { return std::string("dirac"); },
                          [](const Step2D&) { return std::string("step2d"); },
                          [](const CustomNodal&) { return std::string("custom_coefficients"); },
                      },
                      v);
}

void validate_datum(const InitialDatum& v)
{
    std::visit(Overloaded{
                   [](const SmoothSine& s) {
                       if (s.mode < 1) {
                           throw InvalidArgument("smooth_sine: mode must be >= 1");
                       }
                   },
                   [](const Step& s) {
                       if (!(s.cut > 0.0 && s.cut < 1.0)) {
                           throw InvalidArgument("step: cut must lie in (0,1)");
                       }
                   },
                   [](const Dirac& d) {
                       if (!(d.location > 0.0 && d.location < 1.0)) {
                           throw InvalidArgument("dirac: location must lie in the open interval (0,1)");
                       }
                   },
                   [](const Step2D& s) {
                       if (!(s.cut > 0.0 && s.cut < 1.0)) {
                           throw InvalidArgument("step2d: cut must lie in (0,1)");
                       }
                   },
                   [](const CustomNodal& c) {
                       if (c.x.size() != c.values.size() || c.x.size() < 2) {
                           throw InvalidArgument("custom_coefficients: need matching x/values of length >= 2");
                       }
                       if (c.x.front() != 0.0 || c.x.back() != 1.0) {
                           throw InvalidArgument("custom_coefficients: abscissae must span [0,1]");
                       }
                       for (std::size_t i = 0; i < c.x.size(); ++i) {
                           if (!std::isfinite(c.values[i]) || (i > 0 && !(c.x[i] > c.x[i - 1]))) {
                               throw InvalidArgument("custom_coefficients: values must be finite and x increasing");
                           }
                       }
                   },
               },
               v);
}

} // namespace rsfem
