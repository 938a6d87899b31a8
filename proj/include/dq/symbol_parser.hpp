#pragma once

// Surface syntax for PolySymbol (grammar version 1).
//
//   expr    = term , { ( "+" | "-" ) , term } ;
//   term    = unary , { "*" , unary } ;
//   unary   = "-" , unary | power ;
//   power   = primary , { "^" , uint } ;
//   primary = number | "i" | var | "(" , expr , ")" ;
//   number  = uint , [ "/" , uint ] , [ "i" ] ;
//             (whitespace may surround "/"; the "i" suffix must be adjacent)
//   var     = ( "a" | "ad" ) , uint ;        (* a<j> is a_j, ad<j> is a*_j *)
//
// Whitespace is ignored between tokens. Implicit multiplication is not
// accepted. Precedence is ^ over * over +, all left associative. Literals are
// exact rationals, so "1/2i" is the number i/2 and "(1+2i)" a complex constant.

#include <cctype>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dq/poly_symbol.hpp"

namespace dq {

inline constexpr int kGrammarVersion = 1;

/// Largest power accepted after '^'.
inline constexpr std::uint32_t kMaxExponent = 64;
/// Parsing fails rather than build symbols with more terms than this.
inline constexpr std::size_t kMaxParsedTerms = 200000;

/// Parsed syntax tree. Lowering to PolySymbol happens in lower().
struct SymbolExpr {
  struct Literal {
    CRational value;
  };
  struct Variable {
    std::size_t mode;
    bool star;
  };
  struct Sum {
    std::vector<SymbolExpr> terms;
    std::vector<bool> negated;
  };
  struct Product {
    std::vector<SymbolExpr> factors;
  };
  struct Power {
    std::unique_ptr<SymbolExpr> base;
    std::uint32_t exponent;
  };
  struct Negate {
    std::unique_ptr<SymbolExpr> operand;
  };
  struct Group {
    std::unique_ptr<SymbolExpr> inner;
  };

  std::variant<Literal, Variable, Sum, Product, Power, Negate, Group> node;
  std::size_t offset = 0;
};

namespace detail {

class SymbolParser {
 public:
  SymbolParser(std::string_view text, std::size_t mode_count)
      : text_(text), modes_(mode_count) {}

  SymbolExpr parse_all() {
    skip_ws();
    if (pos_ == text_.size())
      throw ParseError("empty expression", pos_, {"number", "variable", "(", "-"});
    SymbolExpr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'",
                       pos_, {"+", "-", "*", "^", "end of input"});
    return e;
  }

 private:
  static constexpr int kMaxDepth = 200;

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool is_digit(std::size_t at) const {
    return at < text_.size() && text_[at] >= '0' && text_[at] <= '9';
  }

  /// Consumes a digit run; leading zeros are dropped (cpp_int reads them as octal).
  std::string read_digits() {
    std::size_t start = pos_;
    while (is_digit(pos_)) ++pos_;
    while (start + 1 < pos_ && text_[start] == '0') ++start;
    return std::string(text_.substr(start, pos_ - start));
  }

  struct DepthGuard {
    explicit DepthGuard(SymbolParser& p) : p_(p) {
      if (++p_.depth_ > kMaxDepth)
        throw ParseError("expression nested too deeply", p_.pos_);
    }
    ~DepthGuard() { --p_.depth_; }
    SymbolParser& p_;
  };

  SymbolExpr parse_expr() {
    DepthGuard guard(*this);
    skip_ws();
    const std::size_t start = pos_;
    SymbolExpr::Sum sum;
    sum.terms.push_back(parse_term());
    sum.negated.push_back(false);
    while (true) {
      skip_ws();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        const bool neg = text_[pos_] == '-';
        ++pos_;
        sum.terms.push_back(parse_term());
        sum.negated.push_back(neg);
      } else {
        break;
      }
    }
    if (sum.terms.size() == 1) return std::move(sum.terms.front());
    return {std::move(sum), start};
  }

  SymbolExpr parse_term() {
    skip_ws();
    const std::size_t start = pos_;
    SymbolExpr::Product prod;
    prod.factors.push_back(parse_unary());
    while (peek('*')) {
      ++pos_;
      prod.factors.push_back(parse_unary());
    }
    if (prod.factors.size() == 1) return std::move(prod.factors.front());
    return {std::move(prod), start};
  }

  SymbolExpr parse_unary() {
    DepthGuard guard(*this);
    skip_ws();
    const std::size_t start = pos_;
    if (peek('-')) {
      ++pos_;
      return {SymbolExpr::Negate{std::make_unique<SymbolExpr>(parse_unary())}, start};
    }
    return parse_power();
  }

  SymbolExpr parse_power() {
    skip_ws();
    const std::size_t start = pos_;
    SymbolExpr base = parse_primary();
    while (peek('^')) {
      ++pos_;
      skip_ws();
      const std::size_t at = pos_;
      if (at < text_.size() && text_[at] == '-')
        throw ExponentError("negative exponent", at);
      if (!is_digit(at))
        throw ParseError("expected a non-negative integer exponent", at, {"integer"});
      std::string digits = read_digits();
      if (pos_ < text_.size() && (text_[pos_] == '/' || text_[pos_] == '.'))
        throw ExponentError("fractional exponent", at);
      if (pos_ < text_.size() && text_[pos_] == 'i')
        throw ExponentError("complex exponent", at);
      if (digits.size() > 3 || std::stoul(digits) > kMaxExponent)
        throw ExponentError("exponent exceeds " + std::to_string(kMaxExponent), at);
      base = {SymbolExpr::Power{std::make_unique<SymbolExpr>(std::move(base)),
                                static_cast<std::uint32_t>(std::stoul(digits))},
              start};
    }
    return base;
  }

  SymbolExpr parse_primary() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ == text_.size())
      throw ParseError("unexpected end of input", pos_,
                       {"number", "variable", "i", "(", "-"});
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      SymbolExpr inner = parse_expr();
      if (!peek(')')) throw ParseError("unbalanced parenthesis", pos_, {")"});
      ++pos_;
      return {SymbolExpr::Group{std::make_unique<SymbolExpr>(std::move(inner))}, start};
    }
    if (is_digit(pos_)) return parse_number();
    if (c == 'i') {
      ++pos_;
      return {SymbolExpr::Literal{CRational::i_unit()}, start};
    }
    if (c == 'a') return parse_variable();
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_,
                     {"number", "variable", "i", "(", "-"});
  }

  SymbolExpr parse_number() {
    const std::size_t start = pos_;
    using Int = boost::multiprecision::cpp_int;
    Rational value{Int(read_digits())};
    const std::size_t after = pos_;
    if (peek('/')) {
      ++pos_;
      skip_ws();
      if (!is_digit(pos_))
        throw ParseError("expected denominator digits", pos_, {"integer"});
      const std::size_t den_at = pos_;
      Int den(read_digits());
      if (den == 0) throw ParseError("zero denominator", den_at);
      value /= Rational(den);
    } else {
      pos_ = after;
    }
    if (pos_ < text_.size() && text_[pos_] == '.')
      throw ParseError("floating-point literals are not supported", pos_, {"/"});
    if (pos_ < text_.size() && text_[pos_] == 'i') {
      ++pos_;
      return {SymbolExpr::Literal{CRational(Rational(0), value)}, start};
    }
    return {SymbolExpr::Literal{CRational(value)}, start};
  }

  SymbolExpr parse_variable() {
    const std::size_t start = pos_;
    ++pos_;  // 'a'
    bool star = false;
    if (pos_ < text_.size() && text_[pos_] == 'd') {
      star = true;
      ++pos_;
    }
    if (!is_digit(pos_))
      throw ParseError("expected a mode index after '" +
                           std::string(text_.substr(start, pos_ - start)) + "'",
                       pos_, {"integer"});
    std::string digits = read_digits();
    const std::string name = (star ? "ad" : "a") + digits;
    if (digits.size() > 9 || std::stoul(digits) >= modes_)
      throw IndexError(name, start, modes_);
    if (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_])))
      throw ParseError("unexpected character '" + std::string(1, text_[pos_]) +
                           "' after variable",
                       pos_, {"*", "^", "+", "-", ")"});
    return {SymbolExpr::Variable{std::stoul(digits), star}, start};
  }

  std::string_view text_;
  std::size_t modes_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

inline void check_size(const PolySymbol& p, std::size_t offset) {
  if (p.terms().size() > kMaxParsedTerms)
    throw ParseError("expression expands to too many terms", offset);
}

}  // namespace detail

/// Parses text into its syntax tree without lowering.
inline SymbolExpr parse_expr(std::string_view text, std::size_t mode_count) {
  if (mode_count == 0) throw DimensionError("mode_count must be positive");
  return detail::SymbolParser(text, mode_count).parse_all();
}

/// Lowers a syntax tree to its canonical symbol.
inline PolySymbol lower(const SymbolExpr& e, std::size_t mode_count) {
  return std::visit(
      [&](const auto& n) -> PolySymbol {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SymbolExpr::Literal>) {
          return PolySymbol::constant(mode_count, n.value);
        } else if constexpr (std::is_same_v<T, SymbolExpr::Variable>) {
          return n.star ? PolySymbol::a_star(mode_count, n.mode)
                        : PolySymbol::a(mode_count, n.mode);
        } else if constexpr (std::is_same_v<T, SymbolExpr::Sum>) {
          PolySymbol out(mode_count);
          for (std::size_t k = 0; k < n.terms.size(); ++k) {
            PolySymbol t = lower(n.terms[k], mode_count);
            if (n.negated[k]) out -= t; else out += t;
            detail::check_size(out, e.offset);
          }
          return out;
        } else if constexpr (std::is_same_v<T, SymbolExpr::Product>) {
          PolySymbol out = lower(n.factors.front(), mode_count);
          for (std::size_t k = 1; k < n.factors.size(); ++k) {
            out = out * lower(n.factors[k], mode_count);
            detail::check_size(out, e.offset);
          }
          return out;
        } else if constexpr (std::is_same_v<T, SymbolExpr::Power>) {
          const PolySymbol base = lower(*n.base, mode_count);
          PolySymbol out = PolySymbol::constant(mode_count, CRational(1));
          for (std::uint32_t k = 0; k < n.exponent; ++k) {
            out = out * base;
            detail::check_size(out, e.offset);
          }
          return out;
        } else if constexpr (std::is_same_v<T, SymbolExpr::Negate>) {
          return -lower(*n.operand, mode_count);
        } else {
          return lower(*n.inner, mode_count);
        }
      },
      e.node);
}

/// Parses symbol text over `mode_count` modes.
inline PolySymbol parse(std::string_view text, std::size_t mode_count) {
  return lower(parse_expr(text, mode_count), mode_count);
}

namespace detail {

inline std::string format_imag(const Rational& im) {
  if (im == 1) return "i";
  if (im == -1) return "-i";
  return to_string(im) + "i";
}

/// A coefficient spelled so that it re-parses as a single factor.
inline std::string format_coefficient(const CRational& c) {
  if (c.is_real()) return to_string(c.re);
  if (c.re == 0) return format_imag(c.im);
  std::string im = format_imag(c.im);
  if (im.front() == '-') return "(" + to_string(c.re) + im + ")";
  return "(" + to_string(c.re) + "+" + im + ")";
}

inline std::string format_monomial(const PolySymbol::Exponents& e) {
  std::string out;
  for (std::size_t slot = 0; slot < e.size(); ++slot) {
    if (e[slot] == 0) continue;
    if (!out.empty()) out += "*";
    out += (slot % 2 == 0 ? "a" : "ad") + std::to_string(slot / 2);
    if (e[slot] > 1) out += "^" + std::to_string(e[slot]);
  }
  return out;
}

}  // namespace detail

/// Canonical text: terms in graded-lexicographic order joined by " + ",
/// with signs carried by the coefficients ("a0*ad0 + -1/2").
inline std::string format(const PolySymbol& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (const auto& [e, c] : f.terms()) {
    if (!out.empty()) out += " + ";
    const std::string mono = detail::format_monomial(e);
    if (mono.empty()) {
      out += detail::format_coefficient(c);
    } else if (c == CRational(1)) {
      out += mono;
    } else if (c == CRational(-1)) {
      out += "-" + mono;
    } else {
      out += detail::format_coefficient(c) + "*" + mono;
    }
  }
  return out;
}

}  // namespace dq
