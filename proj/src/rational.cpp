#include "composynth/rational.hpp"

#include <ostream>

namespace composynth {

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("Rational: empty string");
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      mpq_class v(text, 10);
      v.canonicalize();
      return Rational(v);
    }
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (num.empty() || den.empty()) throw std::invalid_argument("bad rational");
    mpq_class v(num + "/" + den, 10);
    if (v.get_den() == 0) throw std::invalid_argument("zero denominator");
    v.canonicalize();
    return Rational(v);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("Rational: cannot parse '" + text + "'");
  }
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace composynth
