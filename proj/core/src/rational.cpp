#include "corxc/rational.hpp"

#include <cctype>

#include "corxc/error.hpp"

namespace corxc {

namespace {

bool is_integer_literal(std::string_view text) {
  if (text.empty()) return false;
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) return false;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' ||
      den.front() == '+') {
    throw ParseError("not a rational literal: '" + std::string(text) + "'");
  }
  std::string n(num);
  if (n.front() == '+') n.erase(0, 1);
  mpz_class p(n, 10);
  mpz_class q(std::string(den), 10);
  if (q == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

mpz_class common_denominator(const Rational* first, const Rational* last) {
  mpz_class l = 1;
  for (; first != last; ++first) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), first->get_den_mpz_t());
  }
  return l;
}

}  // namespace corxc
