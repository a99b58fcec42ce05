#include "pwave/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pwave/errors.hpp"

namespace pwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// a / b with b -> 0+ reported as +inf.
double ratio_or_inf(double a, double b)
{
    return b > 0 ? a / b : kInf;
}

void check_alpha_p_gt_2(double p, double alpha)
{
    if (!(p > 2)) throw ArgumentError("m_min needs p > 2 (use m_min_p2 for p = 2)");
    if (!(alpha > 1.0 / p && alpha < 0.5 + 1.0 / p)) {
        std::ostringstream os;
        os << "alpha = " << alpha << " outside the open interval (" << 1.0 / p << ", " << 0.5 + 1.0 / p << ")";
        throw ArgumentError(os.str());
    }
}

void check_alpha_p2(double alpha)
{
    if (!(alpha > 0.5 && alpha < 1.0)) {
        std::ostringstream os;
        os << "alpha = " << alpha << " outside the open interval (0.5, 1)";
        throw ArgumentError(os.str());
    }
}

}  // namespace

void ParameterSet::validate() const
{
    if (!(p >= 2) || !std::isfinite(p)) throw ArgumentError("p must be >= 2");
    if (!(k > 0)) throw ArgumentError("k must be > 0");
    if (!(gamma > 0 && gamma < 1)) throw ArgumentError("gamma must lie in (0, 1)");
    if (!(m > 0) || !std::isfinite(m)) throw ArgumentError("m must be > 0");
    if (p == 2.0)
        check_alpha_p2(alpha);
    else
        check_alpha_p_gt_2(p, alpha);
}

std::vector<double> m_min_terms(double p, double alpha)
{
    check_alpha_p_gt_2(p, alpha);
    const double t2 = ratio_or_inf((1.0 - alpha) * p, alpha * p - 1.0);
    const double t3 = ratio_or_inf((0.5 + alpha) * p - 1.0, (0.5 - alpha) * p + 1.0);
    return {2.0, t2, t3};
}

double m_min(double p, double alpha)
{
    const auto terms = m_min_terms(p, alpha);
    return *std::max_element(terms.begin(), terms.end());
}

double m_min_p2(double alpha)
{
    check_alpha_p2(alpha);
    return std::max({2.0 * (1.0 - alpha) / (2.0 * alpha - 1.0), alpha / (1.0 - alpha), 2.0});
}

double beta_identity_check(double p)
{
    const double beta = (p - 2.0) / p;
    const double q = p / (p - 1.0);
    return std::abs(beta / (1.0 - 0.5 * q) - (beta + 1.0));
}

std::vector<double> certification_grid(double t_max, std::size_t n)
{
    return log1p_grid(t_max, n);
}

ConstraintReport phi_condition_sups(const ParameterSet& params, const DomainTrajectory& traj,
                                    const WeightFunction& phi, std::span<const double> t_grid)
{
    params.validate();
    if (t_grid.size() < 2) throw ArgumentError("certification grid needs at least two points");

    const double p = params.p;
    const double a = params.alpha;
    const bool p2 = p == 2.0;

    ConstraintReport report;
    if (p2) {
        report.term_values = {2.0 * (1.0 - a) / (2.0 * a - 1.0), a / (1.0 - a), 2.0};
        report.m_min = m_min_p2(a);
    } else {
        report.term_values = m_min_terms(p, a);
        report.m_min = m_min(p, a);
    }

    const std::vector<std::string> labels =
        p2 ? std::vector<std::string>{"c430", "c431", "c432", "c433"}
           : std::vector<std::string>{"c417", "c420", "c424", "c425", "c428"};
    const std::size_t nc = labels.size();
    const std::size_t nt = t_grid.size();
    std::vector<std::vector<double>> values(nc, std::vector<double>(nt, 0.0));
    std::vector<std::string> errors(nc);

    const double q = params.q_conj();
    const double inv_one_minus_half_q = p2 ? 0.0 : 1.0 / (1.0 - 0.5 * q);

    for (std::size_t j = 0; j < nt; ++j) {
        const double t = t_grid[j];
        const double L = traj.length(t);
        const double d1 = phi.d1(t);
        const double d2 = std::abs(phi.d2(t));
        if (!(d1 > 0)) {
            std::ostringstream os;
            os << "phi' = " << d1 << " at t = " << t;
            for (std::size_t c = 0; c < nc; ++c) {
                if (errors[c].empty()) errors[c] = os.str();
                values[c][j] = kInf;
            }
            continue;
        }
        if (p2) {
            values[0][j] = d1 * L * L;
            values[1][j] = d1 * d1 * L * L;
            values[2][j] = std::pow(d2, 2.0 * a) * L * L / d1;
            values[3][j] = std::pow(d2, 2.0 * (1.0 - a)) * L * L;
        } else {
            values[0][j] = d1 * L * L;
            values[1][j] = d1 * d1 * std::pow(L, 3.0 - 2.0 / p);
            values[2][j] = std::pow(d2, a * p) * std::pow(L, p) / d1;
            values[3][j] =
                std::pow(std::pow(d2, (1.0 - a) * q) * std::pow(L, 1.0 + 0.5 * q), inv_one_minus_half_q) / d1;
            values[4][j] = std::pow(d1, inv_one_minus_half_q) * L / d1;
        }
    }

    const double T = t_grid.back();
    const auto decade = static_cast<std::size_t>(
        std::lower_bound(t_grid.begin(), t_grid.end(), T / 10.0) - t_grid.begin());
    const auto half = static_cast<std::size_t>(
        std::lower_bound(t_grid.begin(), t_grid.end(), T / 2.0) - t_grid.begin());

    for (std::size_t c = 0; c < nc; ++c) {
        ConditionResult res;
        res.label = labels[c];
        res.error = errors[c];
        const auto& vals = values[c];
        res.sup = *std::max_element(vals.begin(), vals.end());
        res.finite = std::isfinite(res.sup) && res.error.empty();

        const double start = vals[std::min(decade, nt - 1)];
        const double end = vals.back();
        res.tail_growth = start > 0 ? end / start : (end > 0 ? kInf : 1.0);
        if (start > 0 && end > 0) {
            res.tail_slope = (std::log(end) - std::log(start)) /
                             (std::log1p(T) - std::log1p(t_grid[std::min(decade, nt - 1)]));
        }
        res.diverging = half + 1 < nt;
        for (std::size_t j = half + 1; j < nt && res.diverging; ++j)
            if (!(vals[j] > vals[j - 1])) res.diverging = false;

        res.satisfied = res.finite && res.tail_growth <= 1.0 + 1e-9;
        report.conditions.push_back(res);
    }
    return report;
}

bool ConstraintReport::all_satisfied() const
{
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.satisfied; });
}

std::string ConstraintReport::first_failure() const
{
    for (const auto& c : conditions)
        if (!c.satisfied) return c.label;
    return {};
}

Certification certify(const ParameterSet& params, double t_max, std::size_t n)
{
    params.validate();
    Certification out;
    out.params = params;
    out.threshold = params.p == 2.0 ? m_min_p2(params.alpha) : m_min(params.p, params.alpha);

    const auto grid = certification_grid(t_max, n);
    const double growth = (1.0 - params.gamma) / params.m;
    const auto theorem_traj = params.m >= 2 ? DomainTrajectory::power_law(params.k, params.gamma, params.m, t_max)
                                            : DomainTrajectory::growth(params.k, growth, t_max);
    const auto phi = WeightFunction::power_shift(params.k, params.gamma);
    out.theorem = phi_condition_sups(params, theorem_traj, phi, grid);

    const double kg = params.k * params.gamma;
    for (double t : grid) {
        const double L = theorem_traj.length(t);
        out.matching_defect = std::max(out.matching_defect, std::abs(phi.d1(t) * std::pow(L, params.m) - kg));
    }

    const auto linear = DomainTrajectory::tabulated({{0.0, 1.0}, {t_max, 1.0 + params.k * t_max}});
    out.ansatz = phi_condition_sups(params, linear, WeightFunction::domain_ansatz(linear, kg, params.m), grid);
    return out;
}

bool Certification::m_admissible() const
{
    return params.m >= threshold * (1.0 - 1e-12);
}

bool Certification::passed() const
{
    return m_admissible() && theorem.all_satisfied() && ansatz.all_satisfied();
}

std::string Certification::failure() const
{
    if (auto f = ansatz.first_failure(); !f.empty()) return f;
    if (auto f = theorem.first_failure(); !f.empty()) return f;
    if (!m_admissible()) return "m_min";
    return {};
}

nlohmann::json to_json(const ConstraintReport& r)
{
    nlohmann::json conds = nlohmann::json::array();
    for (const auto& c : r.conditions) {
        nlohmann::json j = {
            {"label", c.label},
            {"sup", std::isfinite(c.sup) ? nlohmann::json(c.sup) : nlohmann::json("inf")},
            {"tail_growth", std::isfinite(c.tail_growth) ? nlohmann::json(c.tail_growth) : nlohmann::json("inf")},
            {"tail_slope", c.tail_slope},
            {"finite", c.finite},
            {"diverging", c.diverging},
            {"satisfied", c.satisfied},
        };
        if (!c.error.empty()) j["error"] = c.error;
        conds.push_back(j);
    }
    nlohmann::json terms = nlohmann::json::array();
    for (double v : r.term_values) terms.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("inf"));
    return {{"m_min", r.m_min}, {"term_values", terms}, {"conditions", conds}, {"all_satisfied", r.all_satisfied()}};
}

nlohmann::json to_json(const Certification& c)
{
    return {
        {"schema_version", "1"},
        {"p", c.params.p},
        {"alpha", c.params.alpha},
        {"m", c.params.m},
        {"k", c.params.k},
        {"gamma", c.params.gamma},
        {"beta", c.params.beta()},
        {"q_conj", c.params.q_conj()},
        {"m_min", c.threshold},
        {"m_admissible", c.m_admissible()},
        {"matching_defect", c.matching_defect},
        {"theorem_pairing", to_json(c.theorem)},
        {"ansatz_pairing", to_json(c.ansatz)},
        {"passed", c.passed()},
        {"failure", c.failure()},
    };
}

}  // namespace pwave
