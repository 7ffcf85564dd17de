#pragma once

#include <cmath>
#include <functional>

namespace sipf {

// Adaptive Simpson quadrature on [a, b] with relative tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

// Fixed composite Simpson rule with n subintervals (n made even internally).
// Used by tests as an independent oracle.
double simpson(const std::function<double(double)>& f, double a, double b, long n);

}  // namespace sipf
