#include "cxkit/gaussian_rational.hpp"

#include <stdexcept>

namespace cxkit {

namespace {

std::string rational_str(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace

GaussianRational GaussianRational::rational(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: " + text);
  if (q.get_den() == 0) throw std::domain_error("zero denominator: " + text);
  q.canonicalize();
  return GaussianRational(q, 0);
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  mpq_class n = o.norm2();
  if (sgn(n) == 0) throw std::domain_error("division by zero");
  mpq_class r = (re_ * o.re_ + im_ * o.im_) / n;
  mpq_class m = (im_ * o.re_ - re_ * o.im_) / n;
  re_ = std::move(r);
  im_ = std::move(m);
  return *this;
}

std::string GaussianRational::str() const {
  if (sgn(im_) == 0) return rational_str(re_);
  std::string imag;
  if (im_ == 1) {
    imag = "i";
  } else if (im_ == -1) {
    imag = "-i";
  } else {
    imag = rational_str(im_) + "*i";
  }
  if (sgn(re_) == 0) return imag;
  std::string out = rational_str(re_);
  if (imag[0] != '-') out += "+";
  return out + imag;
}

std::size_t GaussianRational::hash() const {
  std::hash<std::string> h;
  return h(str());
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.str(); }

}  // namespace cxkit
