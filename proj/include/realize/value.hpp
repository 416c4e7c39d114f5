#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace realize {

// Exact rational with positive, reduced denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  static Rational from_int(std::int64_t n) { return Rational(n, 1); }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator-() const;

  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  // Decimal rendering, exact when den divides a power of ten.
  std::string to_string() const;
  bool is_decimal_representable() const;
};

using Value = std::variant<bool, std::int64_t, Rational>;

std::string value_to_string(const Value& v);
bool value_equal(const Value& a, const Value& b);

// Total assignment of concrete values to a set of variables.
struct Valuation {
  std::map<std::string, Value> values;

  bool has(const std::string& name) const { return values.count(name) != 0; }
  const Value& get(const std::string& name) const;
  void set(const std::string& name, Value v) { values[name] = std::move(v); }
  bool empty() const { return values.empty(); }

  bool operator==(const Valuation& o) const { return values == o.values; }
  bool operator<(const Valuation& o) const { return values < o.values; }

  std::string to_string() const;
};

// Evaluation failures: division by zero or a valuation that does not
// cover a referenced variable.
struct EvalError : std::runtime_error {
  enum class Kind { DivisionByZero, MissingValuation };
  Kind kind;
  EvalError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

}  // namespace realize
