#include <cctype>

#include "metab/laurent.hpp"

namespace metab {

namespace {

class PolyParser {
 public:
  PolyParser(const Ring& ring, std::string_view text) : ring_(ring), s_(text) {}

  LaurentPoly run() {
    skip();
    if (pos_ == s_.size()) throw ParseError("empty polynomial", pos_);
    LaurentPoly f = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return f;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  LaurentPoly expr() {
    LaurentPoly f = term();
    for (;;) {
      if (eat('+')) {
        f += term();
      } else if (eat('-')) {
        f -= term();
      } else {
        return f;
      }
    }
  }

  LaurentPoly term() {
    LaurentPoly f = unary();
    while (eat('*')) f = f * unary();
    return f;
  }

  LaurentPoly unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  LaurentPoly power() {
    LaurentPoly base = atom();
    if (!eat('^')) return base;
    std::size_t at = pos_;
    long k = signed_int();
    if (k >= 0) return pow(base, static_cast<unsigned>(k));
    auto t = base.single_term();
    if (!t || (t->coeff != 1 && t->coeff != -1))
      throw ParseError("negative power of a non-unit", at);
    LaurentPoly inv = ring_.monomial(-t->mono, t->coeff);
    return pow(inv, static_cast<unsigned>(-k));
  }

  long signed_int() {
    skip();
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      neg = s_[pos_] == '-';
      ++pos_;
    }
    if (pos_ == s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      throw ParseError("expected an integer exponent", pos_);
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_++] - '0');
      if (v > 1000000) throw ParseError("exponent too large", pos_);
    }
    return neg ? -v : v;
  }

  LaurentPoly atom() {
    skip();
    if (pos_ == s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      LaurentPoly f = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return ring_.constant(Integer(std::string(s_.substr(start, pos_ - start))));
    }
    if (c == 'x') {
      std::size_t start = pos_++;
      if (pos_ == s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        throw ParseError("expected a variable index after 'x'", pos_);
      int idx = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        idx = idx * 10 + (s_[pos_++] - '0');
        if (idx > kMaxVars) break;
      }
      if (idx < 1 || idx > ring_.n())
        throw ParseError("variable x" + std::to_string(idx) + " outside x1..x" +
                             std::to_string(ring_.n()),
                         start);
      return ring_.x(idx);
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  const Ring& ring_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

LaurentPoly Ring::parse(std::string_view text) const { return PolyParser(*this, text).run(); }

}  // namespace metab
