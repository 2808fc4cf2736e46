#include "ndns/numerics.hpp"

#include <cmath>
#include <cstdint>
#include <mutex>
#include <stdexcept>

namespace ndns {

LogFactorialTable::LogFactorialTable(int max_n) {
    if (max_n < 0)
        throw std::invalid_argument("LogFactorialTable: max_n must be >= 0");
    values_.resize(static_cast<std::size_t>(max_n) + 1);
    std::uint64_t exact = 1;
    for (int n = 0; n <= max_n && n <= 20; ++n) {
        if (n > 0) exact *= static_cast<std::uint64_t>(n);
        values_[static_cast<std::size_t>(n)] = std::log(static_cast<double>(exact));
    }
    for (int n = 21; n <= max_n; ++n)
        values_[static_cast<std::size_t>(n)] =
            values_[static_cast<std::size_t>(n) - 1] + std::log(static_cast<double>(n));
}

double LogFactorialTable::operator()(int n) const {
    if (n < 0 || n > max_n())
        throw std::out_of_range("LogFactorialTable: index out of range");
    return values_[static_cast<std::size_t>(n)];
}

namespace {
// Large enough for every truncation this library supports (N <= 4096 plus
// Laguerre indices k+l of the same order).
constexpr int kSharedTableSize = 1 << 15;

const LogFactorialTable& shared_table() {
    static const LogFactorialTable table(kSharedTableSize);
    return table;
}
}  // namespace

double log_factorial(int n) {
    if (n < 0) throw std::domain_error("log_factorial: n must be >= 0");
    if (n <= kSharedTableSize) return shared_table()(n);
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double assoc_laguerre(int k, int l, double x) {
    if (k < 0) throw std::domain_error("assoc_laguerre: degree k must be >= 0");
    if (l < 0) throw std::domain_error("assoc_laguerre: superscript l must be >= 0");
    if (!(x >= 0.0)) throw std::domain_error("assoc_laguerre: argument x must be >= 0");

    if (k == 0) return 1.0;
    double prev = 1.0;                // L_0
    double curr = 1.0 + l - x;        // L_1
    for (int j = 1; j < k; ++j) {
        const double next = ((2.0 * j + l + 1.0 - x) * curr - (j + l) * prev) / (j + 1.0);
        prev = curr;
        curr = next;
    }
    return curr;
}

SignedLog SignedLog::of(double value) {
    if (value == 0.0) return zero();
    return {std::log(std::abs(value)), value > 0.0 ? 1 : -1};
}

double SignedLog::value() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(log_mag);
}

SignedLog& SignedLog::operator*=(const SignedLog& rhs) {
    if (sign == 0 || rhs.sign == 0) {
        *this = zero();
        return *this;
    }
    log_mag += rhs.log_mag;
    sign *= rhs.sign;
    return *this;
}

SignedLog signed_log_product(std::span<const SignedLog> factors) {
    SignedLog acc{0.0, 1};  // empty product
    for (const SignedLog& f : factors) acc *= f;
    return acc;
}

}  // namespace ndns
