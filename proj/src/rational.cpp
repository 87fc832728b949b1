#include "tival/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace tival {

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

Rational Rational::parse(std::string_view text) {
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? "1" : body.substr(slash + 1);
  if (!digits(num) || !digits(den))
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  if (negative) n = -n;
  return Rational(mpq_class(n, d));
}

Rational Rational::pow2(long k) {
  mpz_class p = 1;
  const unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), e);
  return k >= 0 ? Rational(mpq_class(p)) : Rational(mpq_class(mpz_class(1), p));
}

std::string Rational::str() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

mpz_class floor(const Rational& r) {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), r.raw().get_num_mpz_t(), r.raw().get_den_mpz_t());
  return out;
}

Rational mod(const Rational& r, const Rational& p) {
  const Rational k(mpq_class(floor(r / p)));
  return r - k * p;
}

Rational lcm(const Rational& a, const Rational& b) {
  mpz_class n, d;
  const mpz_class an = a.num(), bn = b.num(), ad = a.den(), bd = b.den();
  mpz_lcm(n.get_mpz_t(), an.get_mpz_t(), bn.get_mpz_t());
  mpz_gcd(d.get_mpz_t(), ad.get_mpz_t(), bd.get_mpz_t());
  return Rational(mpq_class(n, d));
}

}  // namespace tival
