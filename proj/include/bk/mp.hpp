#pragma once

// Thin RAII wrappers around MPFR for the extended-precision Gram/Cholesky
// path. Only the operations the orthogonalization pipeline needs.

#include <mpfr.h>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace bk::mp {

class Real {
 public:
  Real() { mpfr_init2(v_, 128); mpfr_set_zero(v_, 1); }
  explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(double x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, 64); mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  void set_prec_clear(mpfr_prec_t p) { mpfr_set_prec(v_, p); mpfr_set_zero(v_, 1); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  void set(double x) { mpfr_set_d(v_, x, MPFR_RNDN); }
  void set(const Real& x) { mpfr_set(v_, x.v_, MPFR_RNDN); }
  void set_zero() { mpfr_set_zero(v_, 1); }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(double x) { mpfr_mul_d(v_, v_, x, MPFR_RNDN); return *this; }

  friend Real operator+(const Real& a, const Real& b) { Real r(pmax(a, b)); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, const Real& b) { Real r(pmax(a, b)); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, const Real& b) { Real r(pmax(a, b)); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, const Real& b) { Real r(pmax(a, b)); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a) { Real r(a.prec()); mpfr_neg(r.v_, a.v_, MPFR_RNDN); return r; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

  friend Real sqrt(const Real& a) { Real r(a.prec()); mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Real abs(const Real& a) { Real r(a.prec()); mpfr_abs(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Real log(const Real& a) { Real r(a.prec()); mpfr_log(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Real exp(const Real& a) { Real r(a.prec()); mpfr_exp(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Real pow(const Real& a, double e) {
    Real r(a.prec());
    Real ee(e, a.prec());
    mpfr_pow(r.v_, a.v_, ee.v_, MPFR_RNDN);
    return r;
  }
  friend void sin_cos(Real& s, Real& c, const Real& theta) {
    mpfr_sin_cos(s.raw(), c.raw(), theta.raw(), MPFR_RNDN);
  }

 private:
  static mpfr_prec_t pmax(const Real& a, const Real& b) {
    mpfr_prec_t pa = a.prec(), pb = b.prec();
    return pa > pb ? pa : pb;
  }
  mpfr_t v_;
};

inline Real hypot(const Real& a, const Real& b) {
  Real r(a.prec() > b.prec() ? a.prec() : b.prec());
  mpfr_hypot(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}

// Complex value as a pair of Reals. The fused update routines avoid
// temporary churn in the Cholesky inner loops.
struct Complex {
  Real re, im;

  Complex() = default;
  explicit Complex(mpfr_prec_t prec) : re(prec), im(prec) {}
  Complex(double r, double i, mpfr_prec_t prec) : re(r, prec), im(i, prec) {}
  Complex(std::complex<double> z, mpfr_prec_t prec) : re(z.real(), prec), im(z.imag(), prec) {}

  mpfr_prec_t prec() const { return re.prec(); }
  std::complex<double> to_std() const { return {re.to_double(), im.to_double()}; }
  void set(std::complex<double> z) { re.set(z.real()); im.set(z.imag()); }
  void set(const Complex& z) { re.set(z.re); im.set(z.im); }
  void set_zero() { re.set_zero(); im.set_zero(); }

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }

  friend Complex operator+(const Complex& a, const Complex& b) { Complex r = a; r += b; return r; }
  friend Complex operator-(const Complex& a, const Complex& b) { Complex r = a; r -= b; return r; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    Complex r(a.prec() > b.prec() ? a.prec() : b.prec());
    r.set_zero();
    r.addmul(a, b);
    return r;
  }

  friend Complex conj(const Complex& a) {
    Complex r = a;
    mpfr_neg(r.im.raw(), r.im.raw(), MPFR_RNDN);
    return r;
  }

  Real norm() const {  // |z|^2
    Real r(prec()), t(prec());
    mpfr_sqr(r.raw(), re.raw(), MPFR_RNDN);
    mpfr_sqr(t.raw(), im.raw(), MPFR_RNDN);
    r += t;
    return r;
  }
  Real abs() const { return hypot(re, im); }

  // this += a * b
  void addmul(const Complex& a, const Complex& b) {
    Real t(prec());
    mpfr_mul(t.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
    mpfr_add(re.raw(), re.raw(), t.raw(), MPFR_RNDN);
    mpfr_mul(t.raw(), a.im.raw(), b.im.raw(), MPFR_RNDN);
    mpfr_sub(re.raw(), re.raw(), t.raw(), MPFR_RNDN);
    mpfr_mul(t.raw(), a.re.raw(), b.im.raw(), MPFR_RNDN);
    mpfr_add(im.raw(), im.raw(), t.raw(), MPFR_RNDN);
    mpfr_mul(t.raw(), a.im.raw(), b.re.raw(), MPFR_RNDN);
    mpfr_add(im.raw(), im.raw(), t.raw(), MPFR_RNDN);
  }

  // this -= a * conj(b)
  void submul_conj(const Complex& a, const Complex& b) {
    Real t(prec());
    mpfr_mul(t.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
    mpfr_sub(re.raw(), re.raw(), t.raw(), MPFR_RNDN);
    mpfr_mul(t.raw(), a.im.raw(), b.im.raw(), MPFR_RNDN);
    mpfr_sub(re.raw(), re.raw(), t.raw(), MPFR_RNDN);
    mpfr_mul(t.raw(), a.im.raw(), b.re.raw(), MPFR_RNDN);
    mpfr_sub(im.raw(), im.raw(), t.raw(), MPFR_RNDN);
    mpfr_mul(t.raw(), a.re.raw(), b.im.raw(), MPFR_RNDN);
    mpfr_add(im.raw(), im.raw(), t.raw(), MPFR_RNDN);
  }

  // this *= real scalar
  void scale(const Real& s) { re *= s; im *= s; }
  void div_real(const Real& s) { re /= s; im /= s; }
};

}  // namespace bk::mp
