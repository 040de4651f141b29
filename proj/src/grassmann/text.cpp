#include "common/error.hpp"
#include "grassmann/element.hpp"

#include <algorithm>
#include <cctype>

namespace sq::grassmann {

std::string to_string(const Rational& r) {
  return r.str();  // "p" or "p/q" in lowest terms
}

std::string to_string(const ComplexQ& c) {
  if (c.im == 0) return to_string(c.re);
  auto imag = [](const Rational& v) {
    if (v == 1) return std::string("i");
    if (v == -1) return std::string("-i");
    return to_string(v) + "*i";
  };
  if (c.re == 0) return imag(c.im);
  std::string im = imag(c.im);
  if (im.front() != '-') im = "+" + im;
  return "(" + to_string(c.re) + im + ")";
}

namespace {

std::string generator_name(int k, int slot, Naming naming) {
  const bool holo = slot <= k;
  const int r = holo ? slot : slot - k;
  if (naming == Naming::Zeta) return (holo ? "zeta" : "zbar") + std::to_string(r);
  return (holo ? "xi" : "eta") + std::to_string(r);
}

class ElementParser {
 public:
  ElementParser(const std::string& text, int k) : s_(text), k_(k) {}

  Element parse() {
    skip();
    if (pos_ >= s_.size()) fail("empty element");
    Element e = sum();
    skip();
    if (pos_ < s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, ErrorKind kind = ErrorKind::Syntax) const {
    throw SyntaxError(kind, pos_ + 1, msg);
  }

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

  Element sum() {
    Element acc(k_);
    bool negate = false;
    if (accept('-')) negate = true;
    else accept('+');
    Element t = product();
    acc = negate ? acc - t : acc + t;
    for (;;) {
      if (accept('+')) acc = acc + product();
      else if (accept('-')) acc = acc - product();
      else return acc;
    }
  }

  Element product() {
    Element acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = multiply(acc, unary());
      } else if (accept('/')) {
        std::size_t at = pos_;
        Element d = unary();
        if (d.terms().size() != 1 || d.terms().begin()->first != 0) {
          pos_ = at;
          fail("divisor must be a nonzero scalar");
        }
        ComplexQ inv = ComplexQ(1) / d.terms().begin()->second;
        acc = inv * acc;
      } else {
        return acc;
      }
    }
  }

  Element unary() {
    if (accept('-')) return ComplexQ(-1) * unary();
    return primary();
  }

  Element primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Element e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Element::scalar(k_, number());
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Rational number() {
    using cpp_int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
    cpp_int digits = 0, scale = 1;
    bool any = false, dot = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits = digits * 10 + (c - '0');
        if (dot) scale *= 10;
        any = true;
      } else if (c == '.' && !dot) {
        dot = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (!any) fail("malformed number");
    return Rational(digits, scale);
  }

  Element identifier() {
    const std::size_t start = pos_;
    std::string word;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) word += s_[pos_++];
    std::string num;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) num += s_[pos_++];
    auto unknown = [&]() {
      pos_ = start;
      fail("unknown identifier '" + word + num + "'", ErrorKind::UnknownIdentifier);
    };
    if (num.empty()) {
      if (word == "i") return Element::scalar(k_, ComplexQ::i());
      if (word == "ztop") return Element(Blade::top(k_));
      unknown();
    }
    bool holo;
    if (word == "zeta" || word == "xi") holo = true;
    else if (word == "zbar" || word == "eta") holo = false;
    else unknown();
    if (num.size() > 3) unknown();
    int r = std::stoi(num);
    if (r < 1 || r > k_) unknown();
    return Element(Blade::generator(k_, holo ? r : k_ + r));
  }

  const std::string& s_;
  int k_;
  std::size_t pos_ = 0;
};

}  // namespace

Element parse_element(const std::string& text, int k) { return ElementParser(text, k).parse(); }

std::string print_element(const Element& f, Naming naming) {
  if (f.is_zero()) return "0";
  std::vector<Blade> blades;
  for (const auto& [mask, c] : f.terms()) blades.emplace_back(f.k(), mask);
  std::sort(blades.begin(), blades.end(), [](const Blade& a, const Blade& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.indices() < b.indices();
  });
  std::string out;
  for (const Blade& b : blades) {
    const ComplexQ c = f.coefficient(b);
    std::string term;
    if (b.degree() == 0) {
      term = to_string(c);
    } else {
      if (c == ComplexQ(1)) term = "";
      else if (c == ComplexQ(-1)) term = "-";
      else term = to_string(c) + "*";
      bool first = true;
      for (int slot : b.indices()) {
        if (!first) term += "*";
        term += generator_name(f.k(), slot, naming);
        first = false;
      }
    }
    if (out.empty()) out = term;
    else if (term.front() == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  return out;
}

}  // namespace sq::grassmann
