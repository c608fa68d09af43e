#include "sbethe/rational.hpp"

namespace sbethe {

Rat::Rat(const std::string& s) {
  mpq_init(v_);
  std::string t = s;
  auto dot = t.find('.');
  if (dot != std::string::npos) {
    // plain decimal: scale by a power of ten
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    size_t frac = t.size() - dot - 1;
    std::string den = "1" + std::string(frac, '0');
    t = digits + "/" + den;
  }
  if (mpq_set_str(v_, t.c_str(), 10) != 0) {
    mpq_clear(v_);
    mpq_init(v_);
    throw std::invalid_argument("Rat: cannot parse '" + s + "'");
  }
  mpq_canonicalize(v_);
}

std::string Rat::to_string() const {
  char* raw = mpq_get_str(nullptr, 10, v_);
  std::string s(raw);
  void (*freefn)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefn);
  freefn(raw, s.size() + 1);
  return s;
}

std::string QComplex::to_string() const {
  if (im.is_zero()) return re.to_string();
  return re.to_string() + (im.sign() >= 0 ? "+" : "") + im.to_string() + "i";
}

QComplex QPoly::eval(const QComplex& z) const {
  QComplex acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

QPoly QPoly::derivative() const {
  if (c_.size() <= 1) return QPoly();
  std::vector<QComplex> d;
  d.reserve(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k)
    d.push_back(c_[k] * QComplex(Rat(static_cast<long>(k))));
  return QPoly(std::move(d));
}

QPoly QPoly::antiderivative() const {
  if (c_.empty()) return QPoly();
  std::vector<QComplex> a;
  a.reserve(c_.size() + 1);
  a.emplace_back();
  for (size_t k = 0; k < c_.size(); ++k)
    a.push_back(c_[k] * QComplex(Rat(1, static_cast<long>(k + 1))));
  return QPoly(std::move(a));
}

QPoly QPoly::pow(int k) const {
  QPoly acc = QPoly::constant(QComplex(1));
  for (int i = 0; i < k; ++i) acc = acc * (*this);
  return acc;
}

Polynomial QPoly::to_polynomial(mpfr_prec_t bits) const {
  std::vector<Complex> v;
  v.reserve(c_.size());
  for (const auto& q : c_) v.push_back(q.to_complex(bits));
  return Polynomial(bits, std::move(v));
}

QPoly& QPoly::operator+=(const QPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

QPoly& QPoly::operator-=(const QPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return QPoly();
  std::vector<QComplex> r(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return QPoly(std::move(r));
}

QPoly operator*(const QPoly& a, const QComplex& s) {
  std::vector<QComplex> r = a.c_;
  for (auto& c : r) c *= s;
  return QPoly(std::move(r));
}

std::pair<QPoly, QPoly> qpoly_divmod(const QPoly& num, const QPoly& den) {
  if (den.is_zero()) throw std::domain_error("qpoly_divmod: division by zero polynomial");
  const int dn = num.degree(), dd = den.degree();
  if (dn < dd) return {QPoly(), num};
  std::vector<QComplex> work = num.coeffs();
  std::vector<QComplex> q(static_cast<size_t>(dn - dd) + 1);
  for (int i = dn; i >= dd; --i) {
    QComplex factor = work[static_cast<size_t>(i)] / den.leading();
    q[static_cast<size_t>(i - dd)] = factor;
    work[static_cast<size_t>(i)] = QComplex();
    for (int j = 0; j < dd; ++j)
      work[static_cast<size_t>(i - dd + j)] -= factor * den.coeff(j);
  }
  work.resize(static_cast<size_t>(dd > 0 ? dd : 0));
  return {QPoly(std::move(q)), QPoly(std::move(work))};
}

QPoly qpoly_gcd(QPoly a, QPoly b) {
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    QPoly r = qpoly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  // monic normalization
  QComplex inv_lead = QComplex(1) / a.leading();
  return a * inv_lead;
}

QRatFun::QRatFun(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("QRatFun: zero denominator");
  if (num_.is_zero()) {
    den_ = QPoly::constant(QComplex(1));
    return;
  }
  QPoly g = qpoly_gcd(num_, den_);
  if (g.degree() >= 1) {
    num_ = qpoly_divmod(num_, g).first;
    den_ = qpoly_divmod(den_, g).first;
  }
  // normalize so the denominator is monic
  QComplex inv_lead = QComplex(1) / den_.leading();
  num_ = num_ * inv_lead;
  den_ = den_ * inv_lead;
}

}  // namespace sbethe
