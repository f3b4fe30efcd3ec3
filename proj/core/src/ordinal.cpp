#include "twb/ordinal.hpp"

#include <charconv>

#include "twb/error.hpp"

namespace twb {

Ordinal Ordinal::nat(std::uint64_t n) {
  Ordinal o;
  if (n > 0) o.terms_.push_back({0, n});
  return o;
}

Ordinal Ordinal::omega_power(std::uint32_t exponent, std::uint64_t coefficient) {
  Ordinal o;
  if (coefficient > 0) o.terms_.push_back({exponent, coefficient});
  return o;
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coefficient == 0) throw Error(ErrorKind::InputError, "zero coefficient in ordinal");
    if (i > 0 && terms[i].exponent >= terms[i - 1].exponent)
      throw Error(ErrorKind::InputError, "ordinal exponents must strictly decrease");
  }
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

std::optional<std::uint64_t> Ordinal::as_natural() const {
  if (terms_.empty()) return 0;
  if (terms_.size() == 1 && terms_[0].exponent == 0) return terms_[0].coefficient;
  return std::nullopt;
}

std::uint64_t Ordinal::mod_omega() const {
  if (!terms_.empty() && terms_.back().exponent == 0) return terms_.back().coefficient;
  return 0;
}

Ordinal Ordinal::successor() const { return plus_nat(1); }

Ordinal Ordinal::predecessor() const {
  if (is_limit()) throw Error(ErrorKind::NotASuccessor, str() + " is a limit ordinal");
  Ordinal o = *this;
  if (--o.terms_.back().coefficient == 0) o.terms_.pop_back();
  return o;
}

Ordinal Ordinal::limb_level() const {
  Ordinal o = *this;
  if (!o.terms_.empty() && o.terms_.back().exponent == 0) o.terms_.pop_back();
  return o;
}

Ordinal Ordinal::plus_nat(std::uint64_t n) const {
  if (n == 0) return *this;
  Ordinal o = *this;
  if (!o.terms_.empty() && o.terms_.back().exponent == 0)
    o.terms_.back().coefficient += n;
  else
    o.terms_.push_back({0, n});
  return o;
}

Ordinal Ordinal::operator+(const Ordinal& rhs) const {
  if (rhs.terms_.empty()) return *this;
  const std::uint32_t lead = rhs.terms_.front().exponent;
  Ordinal o;
  for (const Term& t : terms_) {
    if (t.exponent > lead) o.terms_.push_back(t);
  }
  std::size_t start = 0;
  for (const Term& t : terms_) {
    if (t.exponent == lead) {
      o.terms_.push_back({lead, t.coefficient + rhs.terms_.front().coefficient});
      start = 1;
    }
  }
  for (std::size_t i = start; i < rhs.terms_.size(); ++i) o.terms_.push_back(rhs.terms_[i]);
  return o;
}

std::optional<std::uint64_t> Ordinal::finite_gap(const Ordinal& lo, const Ordinal& hi) {
  if (hi < lo) return std::nullopt;
  if (lo.limb_level() != hi.limb_level()) return std::nullopt;
  return hi.mod_omega() - lo.mod_omega();
}

std::strong_ordering Ordinal::operator<=>(const Ordinal& rhs) const {
  const std::size_t n = std::min(terms_.size(), rhs.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Term& a = terms_[i];
    const Term& b = rhs.terms_[i];
    if (a.exponent != b.exponent) return a.exponent <=> b.exponent;
    if (a.coefficient != b.coefficient) return a.coefficient <=> b.coefficient;
  }
  return terms_.size() <=> rhs.terms_.size();
}

Cmp cmp(const Ordinal& a, const Ordinal& b) {
  const auto c = a <=> b;
  if (c < 0) return Cmp::less;
  if (c > 0) return Cmp::greater;
  return Cmp::equal;
}

std::string Ordinal::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0) out += '+';
    const Term& t = terms_[i];
    if (t.exponent == 0) {
      out += std::to_string(t.coefficient);
      continue;
    }
    out += 'w';
    if (t.exponent != 1) out += '^' + std::to_string(t.exponent);
    if (t.coefficient != 1) out += '*' + std::to_string(t.coefficient);
  }
  return out;
}

namespace {

class OrdinalParser {
 public:
  explicit OrdinalParser(std::string_view s) : s_(s) {}

  Ordinal run() {
    std::vector<Ordinal::Term> raw;
    do {
      raw.push_back(term());
    } while (accept('+'));
    if (pos_ != s_.size()) fail("unexpected character");
    // Sum the terms with ordinal addition so that e.g. "3+w" reads as w.
    Ordinal total;
    for (const auto& t : raw) total = total + Ordinal::omega_power(t.exponent, t.coefficient);
    return total;
  }

 private:
  Ordinal::Term term() {
    if (accept('w')) {
      Ordinal::Term t{1, 1};
      if (accept('^')) t.exponent = static_cast<std::uint32_t>(number());
      if (accept('*')) {
        t.coefficient = number();
        if (t.coefficient == 0) fail("coefficient must be positive");
      }
      return t;
    }
    return {0, number()};
  }

  std::uint64_t number() {
    std::uint64_t v = 0;
    const char* b = s_.data() + pos_;
    const char* e = s_.data() + s_.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p == b) fail("expected a natural number");
    pos_ += static_cast<std::size_t>(p - b);
    return v;
  }

  bool accept(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const char* msg) const {
    throw Error(ErrorKind::InputError, std::string("bad ordinal literal '") + std::string(s_) +
                                           "' at position " + std::to_string(pos_) + ": " + msg);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Ordinal Ordinal::parse(std::string_view text) { return OrdinalParser(text).run(); }

}  // namespace twb
