#include "sipf/quadrature.hpp"

#include <stdexcept>

namespace sipf {

namespace {

double simpson3(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }

double adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson3(fa, flm, fm, m - a);
  const double right = simpson3(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0) return left + right + delta / 15.0;
  if (std::fabs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return adaptive(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = simpson3(fa, fm, fb, b - a);
  // Scale the absolute budget by a coarse magnitude estimate so tol acts relatively.
  double scale = std::fabs(whole);
  if (scale < 1e-300) scale = 1.0;
  return adaptive(f, a, b, fa, fm, fb, whole, tol * scale, 48);
}

double simpson(const std::function<double(double)>& f, double a, double b, long n) {
  if (n < 2) throw std::invalid_argument("simpson: need n >= 2");
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (long i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace sipf
