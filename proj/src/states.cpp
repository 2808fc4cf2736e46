#include "ndns/states.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>

#include "ndns/numerics.hpp"
#include "ndns/oracle.hpp"

namespace ndns {

std::string family_name(Family f) {
    switch (f) {
        case Family::dns: return "dns";
        case Family::manual_ndns: return "manual-ndns";
        case Family::ndns_prime: return "ndns-prime";
        case Family::ndns_double_prime: return "ndns-double-prime";
        case Family::gp: return "gp";
        case Family::su2: return "su2";
    }
    throw std::logic_error("family_name: unknown family");
}

Family family_from_name(const std::string& name) {
    if (name == "dns") return Family::dns;
    if (name == "manual-ndns") return Family::manual_ndns;
    if (name == "ndns-prime") return Family::ndns_prime;
    if (name == "ndns-double-prime") return Family::ndns_double_prime;
    if (name == "gp") return Family::gp;
    if (name == "su2") return Family::su2;
    throw std::invalid_argument("unknown family '" + name + "'");
}

std::string construction_name(Construction c) {
    return c == Construction::closed_form ? "closed-form" : "oracle";
}

int effective_max_truncation(const TruncationPolicy& policy) {
    int cap = policy.max;
    if (const char* env = std::getenv("NDNS_MAX_TRUNCATION")) {
        const int env_cap = std::atoi(env);
        if (env_cap > 0) cap = std::min(cap, env_cap);
    }
    return cap;
}

double FockVector::norm() const {
    double s = 0.0;
    for (const Complex& c : amplitudes) s += std::norm(c);
    return std::sqrt(s);
}

namespace {

// One unnormalized amplitude as magnitude-log plus phase. Signs are folded
// into the phase.
struct LogAmp {
    double log_mag = 0.0;
    double phase = 0.0;
    bool zero = true;
};

LogAmp make_log_amp(double log_mag, double phase, int sign) {
    if (sign == 0) return LogAmp{};
    return LogAmp{log_mag, sign < 0 ? phase + std::numbers::pi : phase, false};
}

struct Assembled {
    std::vector<Complex> amplitudes;      // normalized
    double norm_before = 0.0;             // overflows to +inf for runaway tails
    double tail_bound = 0.0;
};

// Normalizes against the largest log so runaway coefficient growth (which
// the double-prime and manual families exhibit for f = 1/(1+kn)) cannot
// overflow the normalized amplitudes.
Assembled finalize(const std::vector<LogAmp>& raw) {
    const int count = static_cast<int>(raw.size());
    const int max_level = count - 1;

    double max_log = -std::numeric_limits<double>::infinity();
    for (const LogAmp& a : raw)
        if (!a.zero) max_log = std::max(max_log, a.log_mag);
    if (!std::isfinite(max_log))
        throw std::logic_error("finalize: all amplitudes vanished");

    std::vector<double> p(raw.size(), 0.0);
    double sum = 0.0;
    for (int m = 0; m < count; ++m) {
        if (raw[static_cast<std::size_t>(m)].zero) continue;
        const double w =
            std::exp(2.0 * (raw[static_cast<std::size_t>(m)].log_mag - max_log));
        p[static_cast<std::size_t>(m)] = w;
        sum += w;
    }

    Assembled out;
    out.norm_before = std::exp(max_log + 0.5 * std::log(sum));
    const double scale = max_log + 0.5 * std::log(sum);
    out.amplitudes.resize(raw.size(), Complex{0.0, 0.0});
    for (int m = 0; m < count; ++m) {
        const LogAmp& a = raw[static_cast<std::size_t>(m)];
        if (a.zero) continue;
        out.amplitudes[static_cast<std::size_t>(m)] =
            std::polar(std::exp(a.log_mag - scale), a.phase);
    }

    // Tail estimate: summed probability of the top 5% of levels, continued
    // past the truncation with the decay ratio observed across that window.
    for (double& w : p) w /= sum;
    const int window = std::max(2, (max_level + 1) / 20);
    const int w0 = max_level + 1 - window;
    double top_mass = 0.0;
    for (int m = w0; m <= max_level; ++m) top_mass += p[static_cast<std::size_t>(m)];
    const double p_lo = p[static_cast<std::size_t>(w0)];
    const double p_hi = p[static_cast<std::size_t>(max_level)];
    if (top_mass == 0.0 || p_hi == 0.0) {
        out.tail_bound = 0.0;  // exact zero tail (finite support)
    } else if (p_lo == 0.0) {
        out.tail_bound = std::numeric_limits<double>::infinity();
    } else {
        const double r = std::pow(p_hi / p_lo, 1.0 / static_cast<double>(max_level - w0));
        if (r >= 1.0) {
            out.tail_bound = std::numeric_limits<double>::infinity();
        } else {
            const double window_ratio = std::pow(r, static_cast<double>(window));
            out.tail_bound = top_mass * window_ratio / (1.0 - window_ratio);
        }
    }
    return out;
}

using AssembleFn = std::function<std::vector<LogAmp>(int max_level)>;

FockVector build_with_policy(const AssembleFn& assemble, const TruncationPolicy& policy,
                             int min_level, const std::string& what) {
    const int cap = effective_max_truncation(policy);

    if (policy.pinned) {
        const int level = *policy.pinned;
        if (level < min_level) {
            std::ostringstream msg;
            msg << what << ": pinned truncation " << level << " below minimum level "
                << min_level;
            throw std::invalid_argument(msg.str());
        }
        Assembled a = finalize(assemble(level));
        return FockVector{std::move(a.amplitudes), level, a.tail_bound, a.norm_before};
    }

    int level = std::min(std::max(policy.initial, min_level), cap);
    if (level < min_level) {
        std::ostringstream msg;
        msg << what << ": truncation cap " << cap << " below minimum level " << min_level;
        throw TruncationError(msg.str(), cap, std::numeric_limits<double>::infinity());
    }
    for (;;) {
        Assembled a = finalize(assemble(level));
        if (a.tail_bound <= policy.tail_tolerance)
            return FockVector{std::move(a.amplitudes), level, a.tail_bound, a.norm_before};
        if (level >= cap) {
            std::ostringstream msg;
            msg << what << ": tail bound " << a.tail_bound << " above tolerance "
                << policy.tail_tolerance << " at maximum truncation " << cap;
            throw TruncationError(msg.str(), level, a.tail_bound);
        }
        level = std::min(2 * level, cap);
    }
}

enum class AlgebraicKind { dns, manual, prime, double_prime };

// Shared coefficient kernel of Eqs. (1)/(2)/(10)/(12)-type expansions. The
// m <= n branch covers m = n (both branch formulas coincide there).
std::vector<LogAmp> assemble_algebraic(AlgebraicKind kind, int n, Complex alpha,
                                       const NonlinearityFunction* f, int max_level) {
    const double x = std::norm(alpha);
    const double log_abs_alpha = x > 0.0 ? std::log(std::abs(alpha)) : 0.0;
    const double arg_alpha = std::arg(alpha);
    const double arg_neg_conj = std::arg(-std::conj(alpha));
    const bool zero_disp = (alpha == Complex{0.0, 0.0});

    NonlinearityFunction ff = f ? (f->max_level() >= max_level ? *f : f->with_max_level(max_level))
                                : NonlinearityFunction::identity(0);
    if (f) {
        if (auto cut = ff.cutoff(); cut && *cut <= max_level) {
            std::ostringstream msg;
            msg << "algebraic family requires f > 0 on 0.." << max_level << " but f("
                << *cut << ") = 0";
            throw std::invalid_argument(msg.str());
        }
    }
    const double lff_n = f ? ff.log_f_factorial(n).log : 0.0;

    std::vector<LogAmp> raw(static_cast<std::size_t>(max_level) + 1);
    for (int m = 0; m <= max_level; ++m) {
        if (zero_disp && m != n) continue;
        double lag;
        double log_kernel;
        double phase;
        if (m <= n) {
            lag = assoc_laguerre(m, n - m, x);
            log_kernel = 0.5 * (log_factorial(m) - log_factorial(n)) +
                         (zero_disp ? 0.0 : (n - m) * log_abs_alpha);
            phase = (n - m) * arg_neg_conj;
        } else {
            lag = assoc_laguerre(n, m - n, x);
            log_kernel = 0.5 * (log_factorial(n) - log_factorial(m)) + (m - n) * log_abs_alpha;
            phase = (m - n) * arg_alpha;
        }
        if (lag == 0.0) continue;

        double log_mag = log_kernel + std::log(std::abs(lag)) - x / 2.0;
        if (f) {
            const double lff_m = ff.log_f_factorial(m).log;
            switch (kind) {
                case AlgebraicKind::dns: break;
                case AlgebraicKind::manual: log_mag -= lff_m; break;
                case AlgebraicKind::prime: log_mag += lff_m - lff_n; break;
                case AlgebraicKind::double_prime: log_mag += lff_n - lff_m; break;
            }
        }
        raw[static_cast<std::size_t>(m)] = make_log_amp(log_mag, phase, lag > 0.0 ? 1 : -1);
    }
    return raw;
}

FockVector delta_state(int n, int max_level) {
    FockVector out;
    out.truncation = std::max(max_level, n);
    out.amplitudes.assign(static_cast<std::size_t>(out.truncation) + 1, Complex{0.0, 0.0});
    out.amplitudes[static_cast<std::size_t>(n)] = Complex{1.0, 0.0};
    out.tail_bound = 0.0;
    out.norm_before_normalization = 1.0;
    return out;
}

// Group-family p-sum: all p-terms of one amplitude share the phase
// theta*(n - m) and the (-1)^m sign, so the inner sum is real and
// alternating; it is accumulated in long double against its largest term.
struct GroupTermRule {
    double log_disp;       // ln|zeta| or ln|gamma|
    double log_unit_term;  // ln(1 - |z|^2) or ln(1 + |g|^2), the p-power base
};

std::vector<LogAmp> assemble_group(int n, Complex disp, const NonlinearityFunction& ff,
                                   double prefactor_log, const GroupTermRule& rule,
                                   int max_level) {
    const double theta = std::arg(disp);
    std::vector<LogAmp> raw(static_cast<std::size_t>(max_level) + 1);
    for (int m = 0; m <= max_level; ++m) {
        const LogFFactorial lff_m = ff.log_f_factorial(m);
        if (lff_m.is_zero) continue;  // finite SU(2)-type spectrum
        const int p_max = std::min(m, n);
        std::vector<double> term_logs(static_cast<std::size_t>(p_max) + 1);
        double max_term = -std::numeric_limits<double>::infinity();
        for (int p = 0; p <= p_max; ++p) {
            const double lff_p = ff.log_f_factorial(p).log;
            const double l = 0.5 * (log_factorial(m) + log_factorial(n)) - log_factorial(p) -
                             log_factorial(n - p) - log_factorial(m - p) +
                             static_cast<double>(m + n - 2 * p) * rule.log_disp +
                             static_cast<double>(p) * rule.log_unit_term +
                             ff.log_f_factorial(n).log + lff_m.log - 2.0 * lff_p;
            term_logs[static_cast<std::size_t>(p)] = l;
            max_term = std::max(max_term, l);
        }
        if (!std::isfinite(max_term)) continue;
        long double inner = 0.0L;
        for (int p = 0; p <= p_max; ++p) {
            const long double t =
                std::exp(static_cast<long double>(term_logs[static_cast<std::size_t>(p)] - max_term));
            inner += (p % 2 == 0) ? t : -t;
        }
        if (inner == 0.0L) continue;
        const int sign = ((m % 2 == 0) ? 1 : -1) * (inner > 0.0L ? 1 : -1);
        const double log_mag =
            prefactor_log + max_term + static_cast<double>(std::log(std::abs(inner)));
        raw[static_cast<std::size_t>(m)] = make_log_amp(log_mag, theta * (n - m), sign);
    }
    return raw;
}

}  // namespace

FockVector build_dns(int n, Complex alpha, const TruncationPolicy& policy) {
    if (n < 0) throw std::invalid_argument("build_dns: n must be >= 0");
    return build_with_policy(
        [&](int level) { return assemble_algebraic(AlgebraicKind::dns, n, alpha, nullptr, level); },
        policy, n + 1, "dns");
}

FockVector build_manual_ndns(int n, Complex alpha, const NonlinearityFunction& f,
                             const TruncationPolicy& policy) {
    if (n < 0) throw std::invalid_argument("build_manual_ndns: n must be >= 0");
    return build_with_policy(
        [&](int level) { return assemble_algebraic(AlgebraicKind::manual, n, alpha, &f, level); },
        policy, n + 1, "manual-ndns");
}

FockVector build_ndns_prime(int n, Complex alpha, const NonlinearityFunction& f,
                            const TruncationPolicy& policy) {
    if (n < 0) throw std::invalid_argument("build_ndns_prime: n must be >= 0");
    return build_with_policy(
        [&](int level) { return assemble_algebraic(AlgebraicKind::prime, n, alpha, &f, level); },
        policy, n + 1, "ndns-prime");
}

FockVector build_ndns_double_prime(int n, Complex alpha, const NonlinearityFunction& f,
                                   const TruncationPolicy& policy) {
    if (n < 0) throw std::invalid_argument("build_ndns_double_prime: n must be >= 0");
    return build_with_policy(
        [&](int level) {
            return assemble_algebraic(AlgebraicKind::double_prime, n, alpha, &f, level);
        },
        policy, n + 1, "ndns-double-prime");
}

FockVector build_gp(int n, Complex zeta, double lambda, const TruncationPolicy& policy) {
    if (n < 0) throw std::invalid_argument("build_gp: n must be >= 0");
    const double az = std::abs(zeta);
    if (az >= 1.0)
        throw std::invalid_argument("build_gp: |zeta| must be < 1 (unit-disk phase space)");
    if (az == 0.0) return delta_state(n, std::max(policy.initial, n + 1));
    return build_with_policy(
        [&](int level) {
            const NonlinearityFunction ff =
                NonlinearityFunction::gilmore_perelomov(lambda, level);
            const GroupTermRule rule{std::log(az), std::log1p(-az * az)};
            return assemble_group(n, zeta, ff, lambda * std::log1p(-az * az), rule, level);
        },
        policy, n + 1, "gp");
}

FockVector build_su2(int n, Complex gamma, double s, const TruncationPolicy& policy) {
    if (n < 0) throw std::invalid_argument("build_su2: n must be >= 0");
    // Validates s is a half-integer as a side effect.
    NonlinearityFunction::su2(s, 0);
    if (n > static_cast<int>(std::round(2.0 * s)))
        throw std::invalid_argument("build_su2: n exceeds 2s");
    const int support_end = static_cast<int>(std::round(2.0 * s)) + 1;
    if (std::abs(gamma) == 0.0)
        return delta_state(n, std::max(policy.initial, support_end));
    const double ag = std::abs(gamma);
    return build_with_policy(
        [&](int level) {
            const NonlinearityFunction ff = NonlinearityFunction::su2(s, level);
            const GroupTermRule rule{std::log(ag), std::log1p(ag * ag)};
            return assemble_group(n, gamma, ff, -s * std::log1p(ag * ag), rule, level);
        },
        policy, support_end, "su2");
}

void StateSpec::validate() const {
    if (n < 0) throw std::invalid_argument("state spec: n must be >= 0");
    switch (family) {
        case Family::dns:
            break;
        case Family::manual_ndns:
        case Family::ndns_prime:
        case Family::ndns_double_prime:
            if (!f)
                throw std::invalid_argument("state spec: family '" + family_name(family) +
                                            "' requires a nonlinearity function");
            break;
        case Family::gp:
            if (!(lambda >= 0.5))
                throw std::invalid_argument("state spec: gp requires lambda >= 1/2");
            if (std::abs(displacement) >= 1.0)
                throw std::invalid_argument("state spec: gp requires |zeta| < 1");
            break;
        case Family::su2:
            if (!(s >= 0.5)) throw std::invalid_argument("state spec: su2 requires s >= 1/2");
            if (n > static_cast<int>(std::round(2.0 * s)))
                throw std::invalid_argument("n exceeds 2s");
            break;
    }
    if (construction == Construction::oracle) {
        if (family == Family::manual_ndns)
            throw std::invalid_argument(
                "state spec: the manual family has no operator construction");
        if ((family == Family::gp || family == Family::su2) &&
            std::abs(displacement) >= 1.0)
            throw std::invalid_argument(
                "state spec: oracle construction needs |displacement| < 1 (artanh map)");
    }
}

NonlinearityFunction StateSpec::nonlinearity(int max_level) const {
    switch (family) {
        case Family::gp: return NonlinearityFunction::gilmore_perelomov(lambda, max_level);
        case Family::su2: return NonlinearityFunction::su2(s, max_level);
        case Family::dns:
            if (!f) return NonlinearityFunction::identity(max_level);
            [[fallthrough]];
        default:
            if (!f) throw std::invalid_argument("state spec: missing nonlinearity function");
            return f->max_level() >= max_level ? *f : f->with_max_level(max_level);
    }
}

const char* StateSpec::displacement_symbol() const {
    switch (family) {
        case Family::gp: return "zeta";
        case Family::su2: return "gamma";
        default: return "alpha";
    }
}

FockVector build_state(const StateSpec& spec) {
    spec.validate();
    if (spec.construction == Construction::oracle) return oracle_state(spec);
    switch (spec.family) {
        case Family::dns: return build_dns(spec.n, spec.displacement, spec.truncation);
        case Family::manual_ndns:
            return build_manual_ndns(spec.n, spec.displacement, *spec.f, spec.truncation);
        case Family::ndns_prime:
            return build_ndns_prime(spec.n, spec.displacement, *spec.f, spec.truncation);
        case Family::ndns_double_prime:
            return build_ndns_double_prime(spec.n, spec.displacement, *spec.f, spec.truncation);
        case Family::gp: return build_gp(spec.n, spec.displacement, spec.lambda, spec.truncation);
        case Family::su2: return build_su2(spec.n, spec.displacement, spec.s, spec.truncation);
    }
    throw std::logic_error("build_state: unknown family");
}

}  // namespace ndns
