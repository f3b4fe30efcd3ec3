#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twb {

/// Ordinal below w^w in Cantor normal form.
///
/// Terms are kept with strictly decreasing exponents; the empty term list is 0,
/// which counts as a limit ordinal.
class Ordinal {
 public:
  struct Term {
    std::uint32_t exponent = 0;
    std::uint64_t coefficient = 1;
    bool operator==(const Term&) const = default;
  };

  Ordinal() = default;
  static Ordinal nat(std::uint64_t n);
  static Ordinal omega_power(std::uint32_t exponent, std::uint64_t coefficient = 1);
  /// Throws InputError when exponents are not strictly decreasing or a coefficient is 0.
  static Ordinal from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_limit() const { return mod_omega() == 0; }
  bool is_successor() const { return !is_limit(); }
  bool is_finite() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent == 0); }
  /// Value of a finite ordinal; nullopt for infinite ones.
  std::optional<std::uint64_t> as_natural() const;

  Ordinal successor() const;
  /// Throws NotASuccessor on limits (including 0).
  Ordinal predecessor() const;
  /// Largest limit ordinal <= *this.
  Ordinal limb_level() const;
  /// The n with *this = limb_level() + n.
  std::uint64_t mod_omega() const;
  Ordinal plus_nat(std::uint64_t n) const;
  /// Ordinal sum (left absorbs the smaller terms of the left operand).
  Ordinal operator+(const Ordinal& rhs) const;
  /// n with lo + n == hi when hi - lo is finite, nullopt otherwise (or if hi < lo).
  static std::optional<std::uint64_t> finite_gap(const Ordinal& lo, const Ordinal& hi);

  std::strong_ordering operator<=>(const Ordinal& rhs) const;
  bool operator==(const Ordinal& rhs) const = default;

  /// Literal syntax: "0", or terms joined by '+', each "n" or "w[^e][*c]".
  std::string str() const;
  static Ordinal parse(std::string_view text);

 private:
  std::vector<Term> terms_;
};

enum class Cmp { less, equal, greater };
Cmp cmp(const Ordinal& a, const Ordinal& b);

}  // namespace twb
