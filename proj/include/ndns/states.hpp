#ifndef NDNS_STATES_HPP
#define NDNS_STATES_HPP

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndns/deformation.hpp"

namespace ndns {

using Complex = std::complex<double>;

/// Raised when a state cannot be represented below the configured maximum
/// Fock level: the estimated probability mass beyond the truncation stays
/// above tolerance however far the level is pushed.
class TruncationError : public std::runtime_error {
  public:
    TruncationError(const std::string& what, int truncation, double tail_bound)
        : std::runtime_error(what), truncation_(truncation), tail_bound_(tail_bound) {}

    int truncation() const { return truncation_; }
    double tail_bound() const { return tail_bound_; }

  private:
    int truncation_;
    double tail_bound_;
};

enum class Family { dns, manual_ndns, ndns_prime, ndns_double_prime, gp, su2 };
enum class Construction { closed_form, oracle };

std::string family_name(Family f);
Family family_from_name(const std::string& name);
std::string construction_name(Construction c);

/// How far the Fock ladder is taken and how the neglected tail is policed.
/// Without `pinned`, the level starts at `initial` and doubles until the
/// estimated tail mass drops below `tail_tolerance` (TruncationError once
/// `max` is hit). With `pinned`, exactly that level is used and the tail
/// estimate is recorded without being enforced.
struct TruncationPolicy {
    int initial = 64;
    int max = 4096;
    double tail_tolerance = 1e-12;
    std::optional<int> pinned;
};

/// Smaller of policy.max and the NDNS_MAX_TRUNCATION environment variable.
int effective_max_truncation(const TruncationPolicy& policy);

/// Normalized amplitude vector over Fock levels 0..truncation.
struct FockVector {
    std::vector<Complex> amplitudes;
    int truncation = 0;
    double tail_bound = 0.0;
    double norm_before_normalization = 0.0;

    int levels() const { return truncation + 1; }
    double norm() const;
    double probability(int m) const { return std::norm(amplitudes[static_cast<std::size_t>(m)]); }
};

/// Which state to build: family, reference level n, displacement parameter
/// (alpha for the algebraic families, zeta for GP, gamma for SU(2)) and the
/// deformation. GP/SU2 take lambda/s instead of an explicit f.
struct StateSpec {
    Family family = Family::dns;
    int n = 0;
    Complex displacement{0.0, 0.0};
    std::optional<NonlinearityFunction> f;
    double lambda = 0.0;
    double s = 0.0;
    Construction construction = Construction::closed_form;
    TruncationPolicy truncation;

    void validate() const;
    /// The deformation in effect (f, or the one implied by lambda/s),
    /// cached up to max_level.
    NonlinearityFunction nonlinearity(int max_level) const;
    /// Name of the displacement parameter for this family.
    const char* displacement_symbol() const;
};

FockVector build_dns(int n, Complex alpha, const TruncationPolicy& policy = {});
FockVector build_manual_ndns(int n, Complex alpha, const NonlinearityFunction& f,
                             const TruncationPolicy& policy = {});
FockVector build_ndns_prime(int n, Complex alpha, const NonlinearityFunction& f,
                            const TruncationPolicy& policy = {});
FockVector build_ndns_double_prime(int n, Complex alpha, const NonlinearityFunction& f,
                                   const TruncationPolicy& policy = {});
FockVector build_gp(int n, Complex zeta, double lambda, const TruncationPolicy& policy = {});
FockVector build_su2(int n, Complex gamma, double s, const TruncationPolicy& policy = {});

/// Dispatch on spec.family / spec.construction (oracle construction is
/// routed through the operator-exponential module).
FockVector build_state(const StateSpec& spec);

}  // namespace ndns

#endif
