#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace binarity {

using Point = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;

/// Malformed input: bad cycle text, out-of-range points, degree mismatches.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A search or enumeration hit its configured budget or cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Resource limits shared by every search in the library.
///
/// Defaults follow the practical bounds used for explicit computation:
/// coset actions up to 10^6 points, element enumeration up to 10^7
/// elements, and backtrack searches up to 10^8 nodes.
struct Limits {
  std::uint64_t search_nodes = 100'000'000;
  std::uint64_t degree_cap = 1'000'000;
  std::uint64_t closure_degree_cap = 10'000;
  std::uint64_t enumeration_cap = 10'000'000;
  std::uint64_t tuple_budget = 50'000'000;
};

/// Counts search nodes against a limit and throws once it is exhausted.
class NodeCounter {
 public:
  explicit NodeCounter(std::uint64_t limit, std::string what = "search")
      : limit_(limit), what_(std::move(what)) {}

  void tick(std::uint64_t n = 1) {
    used_ += n;
    if (used_ > limit_) {
      throw BudgetExceeded(what_ + ": node budget of " +
                           std::to_string(limit_) + " exceeded");
    }
  }

  std::uint64_t used() const { return used_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
  std::string what_;
};

inline BigInt parse_bigint(const std::string& text) {
  if (text.empty()) throw InvalidInput("empty integer");
  for (char c : text) {
    if (c < '0' || c > '9') throw InvalidInput("not a decimal integer: " + text);
  }
  return BigInt(text);
}

inline std::string to_string(const BigInt& v) { return v.str(); }

inline BigInt factorial(std::uint64_t n) {
  BigInt r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Largest power of `p` dividing `n` (n > 0).
inline BigInt p_part(BigInt n, std::uint64_t p) {
  BigInt r = 1;
  while (n != 0 && n % p == 0) {
    n /= p;
    r *= p;
  }
  return r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// If `n` is a prime power p^k (k >= 1) returns p, otherwise 0.
inline std::uint64_t prime_power_base(std::uint64_t n) {
  if (n < 2) return 0;
  std::uint64_t p = 2;
  while (n % p != 0) ++p;
  while (n % p == 0) n /= p;
  return n == 1 ? p : 0;
}

}  // namespace binarity
