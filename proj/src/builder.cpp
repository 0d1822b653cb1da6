#include "metab/builder.hpp"

#include <cctype>
#include <string>

namespace metab {

namespace {

class Builder {
 public:
  Builder(std::string_view s, int n) : s_(s), n_(n), ring_(n) {}

  IAMatrix run() {
    IAMatrix r = product();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return r;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  IAMatrix product() {
    IAMatrix r = factor();
    while (accept('*')) r = r * factor();
    return r;
  }

  long integer() {
    skip();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    if (pos_ == s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      throw ParseError("expected an integer", pos_);
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ - start > 9) throw ParseError("integer too large", start);
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }

  int index() {
    std::size_t at = pos_;
    long i = integer();
    if (i < 1 || i > n_) throw ParseError("index " + std::to_string(i) + " outside 1.." + std::to_string(n_), at);
    return static_cast<int>(i);
  }

  // A polynomial argument runs to the next ',' or ')' at parenthesis depth 0.
  LaurentPoly polynomial() {
    skip();
    std::size_t start = pos_;
    int depth = 0;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (depth == 0 && (c == ',' || c == ')')) break;
      if (c == '(') ++depth;
      if (c == ')') --depth;
      ++pos_;
    }
    try {
      return ring_.parse(s_.substr(start, pos_ - start));
    } catch (const ParseError& e) {
      throw ParseError("in polynomial argument: " + e.reason(), start + e.position());
    }
  }

  std::string word() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  IAMatrix factor() {
    skip();
    if (accept('(')) {
      IAMatrix r = product();
      expect(')');
      return r;
    }
    std::size_t at = pos_;
    std::string name = word();
    if (name.empty()) throw ParseError("expected a matrix expression", pos_);
    if (name == "id") return IAMatrix::identity(n_);
    expect('(');
    IAMatrix r;
    if (name == "elem") {
      int i = index();
      expect(',');
      int j = index();
      if (i == j) throw ParseError("elem needs two distinct indices", at);
      r = dilation(n_, i, j);
    } else if (name == "pow") {
      IAMatrix base = product();
      expect(',');
      r = power(base, integer());
    } else if (name == "inv") {
      r = mat_inv(product());
    } else if (name == "comm" || name == "conj") {
      IAMatrix a = product();
      expect(',');
      IAMatrix b = product();
      r = name == "comm" ? commutator(a, b) : b * a * mat_inv(b);
    } else if (name == "row") {
      int u = index();
      std::vector<LaurentPoly> a;
      for (int v = 1; v <= n_; ++v) {
        expect(',');
        a.push_back(polynomial());
      }
      try {
        r = row_elem(u, a);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), at);
      }
    } else if (name == "koszul") {
      int u = index();
      expect(',');
      int i = index();
      expect(',');
      int j = index();
      expect(',');
      LaurentPoly f = polynomial();
      if (i == j || i == u || j == u) throw ParseError("koszul needs distinct indices u, i, j", at);
      r = row_elem(u, koszul_row(ring_, i, j, f));
    } else {
      throw ParseError("unknown function '" + name + "'", at);
    }
    expect(')');
    return r;
  }

  std::string_view s_;
  int n_;
  Ring ring_;
  std::size_t pos_ = 0;
};

}  // namespace

IAMatrix build_matrix(std::string_view text, int n) { return Builder(text, n).run(); }

}  // namespace metab
