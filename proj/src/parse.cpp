#include <cctype>
#include <string>

#include "lacunary/sparse_poly.hpp"

namespace lacunary {
namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : text_(text) {}

  SparsePoly parse() {
    SparsePoly::TermMap acc;
    skip_ws();
    if (at_end()) throw ParseError("empty polynomial", pos_);
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = peek() == '-';
      ++pos_;
    }
    add_term(acc, negate);
    for (;;) {
      skip_ws();
      if (at_end()) break;
      const char op = peek();
      if (op != '+' && op != '-') throw ParseError("expected '+' or '-'", pos_);
      ++pos_;
      add_term(acc, op == '-');
    }
    return SparsePoly(std::move(acc));
  }

 private:
  void add_term(SparsePoly::TermMap& acc, bool negate) {
    skip_ws();
    if (at_end()) throw ParseError("expected a term", pos_);
    Rat coef = 1;
    Exponent exponent = 0;
    if (peek() == 'x') {
      exponent = parse_mono();
    } else {
      coef = parse_coef();
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
        skip_ws();
        if (at_end() || peek() != 'x') throw ParseError("expected 'x' after '*'", pos_);
        exponent = parse_mono();
      }
    }
    acc[exponent] += negate ? Rat(-coef) : coef;
  }

  Exponent parse_mono() {
    ++pos_;  // 'x'
    skip_ws();
    if (at_end() || peek() != '^') return 1;
    ++pos_;
    skip_ws();
    if (!at_end() && peek() == '-') throw ParseError("negative exponent", pos_);
    const std::size_t start = pos_;
    const std::string digits = read_digits();
    if (digits.size() > 19) throw OverflowError("exponent overflow at position " + std::to_string(start));
    const BigInt value(digits);
    if (value > BigInt("9223372036854775807")) {
      throw OverflowError("exponent overflow at position " + std::to_string(start));
    }
    return static_cast<Exponent>(std::stoll(digits));
  }

  Rat parse_coef() {
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = peek() == '-';
      ++pos_;
      skip_ws();
    }
    BigInt num(read_digits());
    BigInt den = 1;
    skip_ws();
    if (!at_end() && peek() == '/') {
      ++pos_;
      skip_ws();
      const std::size_t where = pos_;
      den = BigInt(read_digits());
      if (den == 0) throw ParseError("zero denominator", where);
    }
    Rat out(negative ? BigInt(-num) : num, den);
    out.canonicalize();
    return out;
  }

  std::string read_digits() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ == start) throw ParseError("expected digits", start);
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

SparsePoly parse_poly(std::string_view text) { return PolyParser(text).parse(); }

}  // namespace lacunary
