#ifndef OSCRAD_TYPES_HPP
#define OSCRAD_TYPES_HPP

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace oscrad {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;
inline constexpr cplx iu{0.0, 1.0};

using vec3 = std::array<double, 3>;
using cvec3 = std::array<cplx, 3>;

inline cplx cdot(const cvec3& a, const cvec3& b) {
  // antilinear in the first argument
  return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] + std::conj(a[2]) * b[2];
}

inline cvec3 ccross(const cvec3& a, const cvec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline cvec3 conj3(const cvec3& a) { return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])}; }

inline cvec3 to_cvec3(const vec3& a) { return {cplx(a[0]), cplx(a[1]), cplx(a[2])}; }

inline double norm3(const vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

// error carrying the location of the offending singularity
class pole_error : public std::runtime_error {
 public:
  pole_error(const std::string& what, cplx nearest) : std::runtime_error(what), nearest_(nearest) {}
  cplx nearest() const { return nearest_; }

 private:
  cplx nearest_;
};

class cut_error : public std::runtime_error {
 public:
  cut_error(const std::string& what, double distance) : std::runtime_error(what), distance_(distance) {}
  double distance() const { return distance_; }

 private:
  double distance_;
};

class accuracy_error : public std::runtime_error {
 public:
  accuracy_error(const std::string& what, cplx estimate, double achieved)
      : std::runtime_error(what), estimate_(estimate), achieved_(achieved) {}
  cplx estimate() const { return estimate_; }
  double achieved() const { return achieved_; }

 private:
  cplx estimate_;
  double achieved_;
};

}  // namespace oscrad

#endif
