#ifndef NDNS_DEFORMATION_HPP
#define NDNS_DEFORMATION_HPP

#include <optional>
#include <string>
#include <vector>

namespace ndns {

enum class NonlinearityKind { identity, rational_k, gilmore_perelomov, su2, custom };

/// ln([f(n)]!) together with an exact-zero flag ([f(n)]! = 0 as soon as any
/// factor f(1)..f(n) vanishes).
struct LogFFactorial {
    double log = 0.0;
    bool is_zero = false;
};

/// The deformation f(n) >= 0 of the ladder operators, with the f-factorial
/// [f(n)]! = f(n)f(n-1)...f(1), [f(0)]! = 1 cached up to a fixed level.
///
/// Instances are immutable; the cache is fully populated at construction,
/// so values can be shared freely across threads. Use with_max_level() to
/// obtain a copy covering a larger range.
class NonlinearityFunction {
  public:
    /// f(n) = 1.
    static NonlinearityFunction identity(int max_level);
    /// f(n) = 1/(1 + k n), k > 0.
    static NonlinearityFunction rational_k(double k, int max_level);
    /// f(n) = sqrt(n + 2*lambda - 1), lambda a half-integer >= 1/2.
    static NonlinearityFunction gilmore_perelomov(double lambda, int max_level);
    /// f(n) = sqrt(2s + 1 - n) for n <= 2s + 1, clamped to 0 beyond so the
    /// vanishing f-factorial annihilates out-of-range terms; s a
    /// half-integer >= 1/2.
    static NonlinearityFunction su2(double s, int max_level);
    /// Explicit table, table[n] = f(n). Entries must be nonnegative and a
    /// zero may only start a terminal zero tail.
    static NonlinearityFunction custom(std::vector<double> table);
    /// Table from a plain-text file: one nonnegative decimal per line,
    /// line index = n.
    static NonlinearityFunction custom_from_file(const std::string& path);

    /// f(n). Total for the closed-form kinds; a custom table rejects
    /// lookups beyond its length (no extrapolation).
    double operator()(int n) const;

    /// ln([f(n)]!) with exact-zero flag, from the cache.
    LogFFactorial log_f_factorial(int n) const;

    /// First level n0 >= 1 with f(n0) = 0, if any. [f(n)]! = 0 for all
    /// n >= n0.
    std::optional<int> cutoff() const { return cutoff_; }

    NonlinearityKind kind() const { return kind_; }
    /// k, lambda or s, depending on kind.
    double parameter() const { return param_; }
    int max_level() const { return max_level_; }

    /// Copy with the cache extended (or shrunk) to new_max. Custom tables
    /// cannot grow beyond their data.
    NonlinearityFunction with_max_level(int new_max) const;

    /// Human-readable form, e.g. "rational:k=0.1".
    std::string describe() const;

  private:
    NonlinearityFunction(NonlinearityKind kind, double param, int max_level,
                         std::vector<double> table);

    double raw_eval(int n) const;

    NonlinearityKind kind_;
    double param_ = 0.0;
    int max_level_ = 0;
    std::vector<double> table_;           // custom kind only
    std::vector<LogFFactorial> log_ffact_;
    std::optional<int> cutoff_;
};

}  // namespace ndns

#endif
