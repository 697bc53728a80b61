#pragma once

// Exact rationals for the class parameters. Every threshold comparison in
// the library goes through the helpers below; nothing is decided in floating
// point.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace aog {

using Rational = boost::rational<std::int64_t>;

namespace detail {
__extension__ typedef __int128 WideInt;
}  // namespace detail

/// Parses "p/q" (or a bare positive integer "p") with p, q > 0.
inline Rational parse_rational(std::string_view text) {
  auto parse_positive = [&](std::string_view part) -> std::int64_t {
    if (part.empty() || part.size() > 18) {
      throw std::invalid_argument("malformed rational '" + std::string(text) +
                                  "'");
    }
    std::int64_t value = 0;
    for (char c : part) {
      if (c < '0' || c > '9') {
        throw std::invalid_argument("malformed rational '" +
                                    std::string(text) + "'");
      }
      value = value * 10 + (c - '0');
    }
    if (value == 0) {
      throw std::invalid_argument("rational '" + std::string(text) +
                                  "' must have positive numerator and "
                                  "denominator");
    }
    return value;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_positive(text));
  }
  return Rational(parse_positive(text.substr(0, slash)),
                  parse_positive(text.substr(slash + 1)));
}

inline std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// count <= factor * length, exactly.
inline bool at_most_times(std::int64_t count, const Rational& factor,
                          std::int64_t length) {
  return static_cast<detail::WideInt>(count) * factor.denominator() <=
         static_cast<detail::WideInt>(factor.numerator()) * length;
}

// count < factor * length, exactly.
inline bool less_than_times(std::int64_t count, const Rational& factor,
                            std::int64_t length) {
  return static_cast<detail::WideInt>(count) * factor.denominator() <
         static_cast<detail::WideInt>(factor.numerator()) * length;
}

// count > factor * length, exactly.
inline bool greater_than_times(std::int64_t count, const Rational& factor,
                               std::int64_t length) {
  return !at_most_times(count, factor, length);
}

}  // namespace aog
