#include "ndns/deformation.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ndns {

namespace {

bool is_half_integer(double v) {
    const double two = 2.0 * v;
    return std::abs(two - std::round(two)) < 1e-9;
}

void require_half_integer_geq_half(double v, const char* name) {
    if (!(v >= 0.5) || !is_half_integer(v)) {
        std::ostringstream msg;
        msg << name << " must be a half-integer >= 1/2, got " << v;
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

NonlinearityFunction::NonlinearityFunction(NonlinearityKind kind, double param,
                                           int max_level, std::vector<double> table)
    : kind_(kind), param_(param), max_level_(max_level), table_(std::move(table)) {
    if (max_level_ < 0)
        throw std::invalid_argument("NonlinearityFunction: max_level must be >= 0");

    log_ffact_.resize(static_cast<std::size_t>(max_level_) + 1);
    log_ffact_[0] = {0.0, false};  // [f(0)]! = 1
    double acc = 0.0;
    bool dead = false;
    for (int n = 1; n <= max_level_; ++n) {
        const double fn = raw_eval(n);
        if (fn < 0.0)
            throw std::invalid_argument("NonlinearityFunction: f(n) must be nonnegative");
        if (fn == 0.0) {
            if (!dead) cutoff_ = n;
            dead = true;
        } else if (dead) {
            // A revived spectrum after a zero has no physical reading.
            throw std::invalid_argument(
                "NonlinearityFunction: zero followed by a nonzero entry");
        }
        if (dead) {
            log_ffact_[static_cast<std::size_t>(n)] = {0.0, true};
        } else {
            acc += std::log(fn);
            log_ffact_[static_cast<std::size_t>(n)] = {acc, false};
        }
    }
}

double NonlinearityFunction::raw_eval(int n) const {
    switch (kind_) {
        case NonlinearityKind::identity:
            return 1.0;
        case NonlinearityKind::rational_k:
            return 1.0 / (1.0 + param_ * n);
        case NonlinearityKind::gilmore_perelomov:
            return std::sqrt(static_cast<double>(n) + 2.0 * param_ - 1.0);
        case NonlinearityKind::su2: {
            const double arg = 2.0 * param_ + 1.0 - n;
            return arg > 0.0 ? std::sqrt(arg) : 0.0;
        }
        case NonlinearityKind::custom:
            return table_[static_cast<std::size_t>(n)];
    }
    throw std::logic_error("NonlinearityFunction: unknown kind");
}

double NonlinearityFunction::operator()(int n) const {
    if (n < 0) throw std::domain_error("NonlinearityFunction: n must be >= 0");
    if (kind_ == NonlinearityKind::custom && n >= static_cast<int>(table_.size()))
        throw std::out_of_range("NonlinearityFunction: custom table has no entry for n");
    return raw_eval(n);
}

LogFFactorial NonlinearityFunction::log_f_factorial(int n) const {
    if (n < 0) throw std::domain_error("NonlinearityFunction: n must be >= 0");
    if (n > max_level_)
        throw std::out_of_range("NonlinearityFunction: n beyond cached max level");
    return log_ffact_[static_cast<std::size_t>(n)];
}

NonlinearityFunction NonlinearityFunction::identity(int max_level) {
    return NonlinearityFunction(NonlinearityKind::identity, 0.0, max_level, {});
}

NonlinearityFunction NonlinearityFunction::rational_k(double k, int max_level) {
    if (!(k > 0.0)) throw std::invalid_argument("rational_k: k must be positive");
    return NonlinearityFunction(NonlinearityKind::rational_k, k, max_level, {});
}

NonlinearityFunction NonlinearityFunction::gilmore_perelomov(double lambda, int max_level) {
    require_half_integer_geq_half(lambda, "lambda");
    return NonlinearityFunction(NonlinearityKind::gilmore_perelomov, lambda, max_level, {});
}

NonlinearityFunction NonlinearityFunction::su2(double s, int max_level) {
    require_half_integer_geq_half(s, "s");
    return NonlinearityFunction(NonlinearityKind::su2, s, max_level, {});
}

NonlinearityFunction NonlinearityFunction::custom(std::vector<double> table) {
    if (table.empty()) throw std::invalid_argument("custom: table must not be empty");
    const int max_level = static_cast<int>(table.size()) - 1;
    return NonlinearityFunction(NonlinearityKind::custom, 0.0, max_level, std::move(table));
}

NonlinearityFunction NonlinearityFunction::custom_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("custom_from_file: cannot open " + path);
    std::vector<double> table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        double v;
        if (!(ls >> v)) {
            std::ostringstream msg;
            msg << "custom_from_file: " << path << ":" << line_no << ": not a number";
            throw std::invalid_argument(msg.str());
        }
        table.push_back(v);
    }
    return custom(std::move(table));
}

NonlinearityFunction NonlinearityFunction::with_max_level(int new_max) const {
    if (kind_ == NonlinearityKind::custom) {
        if (new_max >= static_cast<int>(table_.size()))
            throw std::out_of_range(
                "NonlinearityFunction: custom table shorter than requested level");
        return NonlinearityFunction(kind_, param_, new_max, table_);
    }
    return NonlinearityFunction(kind_, param_, new_max, {});
}

std::string NonlinearityFunction::describe() const {
    std::ostringstream out;
    switch (kind_) {
        case NonlinearityKind::identity: return "identity";
        case NonlinearityKind::rational_k: out << "rational:k=" << param_; break;
        case NonlinearityKind::gilmore_perelomov: out << "gp:lambda=" << param_; break;
        case NonlinearityKind::su2: out << "su2:s=" << param_; break;
        case NonlinearityKind::custom: out << "custom[" << table_.size() << "]"; break;
    }
    return out.str();
}

}  // namespace ndns
