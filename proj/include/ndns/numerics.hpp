#ifndef NDNS_NUMERICS_HPP
#define NDNS_NUMERICS_HPP

#include <span>
#include <vector>

namespace ndns {

/// Table of ln(n!) values, filled once at construction.
///
/// Entries up to 20 come from exact integer factorials; beyond that the
/// table is extended by accumulating ln(n), which keeps the increment
/// invariant values[n] - values[n-1] == ln(n) tight for all n.
class LogFactorialTable {
  public:
    explicit LogFactorialTable(int max_n);

    double operator()(int n) const;
    int max_n() const { return static_cast<int>(values_.size()) - 1; }

  private:
    std::vector<double> values_;
};

/// ln(n!) backed by a process-wide table (thread-safe, built once).
double log_factorial(int n);

/// Associated Laguerre polynomial L_k^l(x) for integer degree k >= 0,
/// integer superscript l >= 0 and x >= 0, evaluated by the three-term
/// recurrence in the degree. The alternating factorial series loses
/// precision once x grows past the degree; the recurrence does not.
double assoc_laguerre(int k, int l, double x);

/// A real number carried as (ln|value|, sign). sign == 0 marks an exact
/// zero; log_mag is meaningless in that case.
struct SignedLog {
    double log_mag = 0.0;
    int sign = 1;

    static SignedLog of(double value);
    static SignedLog zero() { return {0.0, 0}; }
    static SignedLog from_log(double log_mag, int sign = 1) { return {log_mag, sign}; }

    bool is_zero() const { return sign == 0; }
    double value() const;

    SignedLog& operator*=(const SignedLog& rhs);
};

/// Product of signed log-domain factors: returns (sum of logs, product of
/// signs). Any zero factor collapses the result to the exact-zero state
/// instead of producing -inf arithmetic.
SignedLog signed_log_product(std::span<const SignedLog> factors);

}  // namespace ndns

#endif
