#include "elreg/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace elreg {

void ModelParams::validate() const {
    if (theta < 0.0) throw std::invalid_argument("ModelParams: theta must be >= 0");
    if (theta2 < 0.0) throw std::invalid_argument("ModelParams: theta2 must be >= 0");
    if (chi != 0 && chi != 1) throw std::invalid_argument("ModelParams: chi must be 0 or 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("ModelParams: alpha must be > 0");
    if (!(mu4 > 0.0)) throw std::invalid_argument("ModelParams: mu4 must be > 0 (mu14)");
}

double ModelParams::a0_symbol(double k2) const {
    if (nsv_a0) return mu4 * k2 / (1.0 + alpha * alpha * k2);
    if (k2 == 0.0) return theta == 0.0 ? mu4 : 0.0;
    return mu4 * std::pow(k2, theta);
}

double ModelParams::m_symbol(double k2) const {
    return std::pow(1.0 + alpha * alpha * k2, -theta1);
}

double ModelParams::q_symbol(double k2) const {
    return std::pow(1.0 + alpha * alpha * k2, -theta2);
}

std::pair<double, double> derive_lambdas(double mu2, double mu3, double mu5, double mu6) {
    return {mu2 - mu3, mu5 - mu6};
}

std::string ValidationReport::describe() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.ok() ? "  ok   " : "  FAIL ") << c.name << "  (slack " << c.slack << ")\n";
    }
    return os.str();
}

ValidationReport validate_constraints(const LeslieCoefficients& l) {
    ValidationReport r;
    const double l1 = l.lambda1();
    const double l2 = l.lambda2();

    r.checks.push_back({"lama1a: lambda1 = mu2 - mu3 < 0", -l1, true});
    r.checks.push_back({"mu14: mu1 >= 0", l.mu1, false});
    r.checks.push_back({"mu56: mu5 + mu6 >= 0", l.mu5 + l.mu6, false});

    if (l.case_selector == CaseSelector::case1) {
        double parodi = (l.mu2 + l.mu3) - (l.mu6 - l.mu5);
        double scale = std::max({1.0, std::abs(l.mu2), std::abs(l.mu3), std::abs(l.mu5),
                                 std::abs(l.mu6)});
        r.checks.push_back({"parodi: mu2 + mu3 = mu6 - mu5",
                            1e-12 * scale - std::abs(parodi), false});
        if (l1 < 0.0) {
            r.checks.push_back({"critical point of lambda 2: lambda2^2/(-lambda1) <= mu5 + mu6",
                                (l.mu5 + l.mu6) - l2 * l2 / (-l1), false});
        }
    } else {
        if (l1 < 0.0) {
            // strict inequality; equality reported as failure with zero slack
            double lhs = std::abs(l2 - l.mu2 - l.mu3);
            double rhs = 2.0 * std::sqrt(-l1) * std::sqrt(std::max(0.0, l.mu5 + l.mu6));
            r.checks.push_back({"noPa1: |lambda2 - mu2 - mu3| < 2 sqrt(-lambda1) sqrt(mu5 + mu6)",
                                rhs - lhs, true});
        }
    }
    r.passed = true;
    for (const auto& c : r.checks)
        if (!c.ok()) r.passed = false;
    return r;
}

namespace {
const std::vector<std::string> kPresetNames = {
    "NSE-EL", "Leray-EL-alpha", "ML-EL-alpha", "SBM-EL", "NSV-EL", "NS-EL-alpha"};
}

const std::vector<std::string>& preset_names() { return kPresetNames; }

ModelParams preset(const std::string& name) {
    ModelParams p;
    if (name == "NSE-EL") {
        p.theta = 1.0; p.theta1 = 0.0; p.theta2 = 0.0; p.chi = 0;
    } else if (name == "Leray-EL-alpha") {
        p.theta = 1.0; p.theta1 = 1.0; p.theta2 = 0.0; p.chi = 0;
    } else if (name == "ML-EL-alpha") {
        p.theta = 1.0; p.theta1 = 0.0; p.theta2 = 1.0; p.chi = 0;
    } else if (name == "SBM-EL") {
        p.theta = 1.0; p.theta1 = 1.0; p.theta2 = 1.0; p.chi = 0;
    } else if (name == "NSV-EL") {
        p.theta = 0.0; p.theta1 = 1.0; p.theta2 = 1.0; p.chi = 0;
        p.nsv_a0 = true;
    } else if (name == "NS-EL-alpha") {
        p.theta = 1.0; p.theta1 = 0.0; p.theta2 = 1.0; p.chi = 1;
    } else {
        std::ostringstream os;
        os << "unknown preset '" << name << "'; valid names:";
        for (const auto& s : kPresetNames) os << " " << s;
        throw std::invalid_argument(os.str());
    }
    return p;
}

CoercivityConstants coercivity_constants(const ModelParams& params, const Grid& grid) {
    CoercivityConstants out;
    const int lim = grid.dealias_limit();
    double min_a0 = 0.0, min_q = 0.0, min_a0q = 0.0;
    bool first = true;
    for (std::size_t m = 0; m < grid.total(); ++m) {
        auto k = grid.wavenumbers(m);
        bool retained = true;
        double k2i = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
            if (std::abs(k[a]) > lim) retained = false;
            k2i += double(k[a]) * double(k[a]);
        }
        if (!retained || k2i == 0.0) continue;
        double k2 = k2i * grid.k_scale() * grid.k_scale();
        double a0 = params.a0_symbol(k2);
        double q = params.q_symbol(k2);
        double ra0 = a0 / std::pow(k2, params.theta);
        double rq = q * std::pow(k2, params.theta2);
        double ra0q = a0 * q / std::pow(k2, params.theta - params.theta2);
        if (first) {
            min_a0 = ra0; min_q = rq; min_a0q = ra0q;
            first = false;
        } else {
            min_a0 = std::min(min_a0, ra0);
            min_q = std::min(min_q, rq);
            min_a0q = std::min(min_a0q, ra0q);
        }
    }
    out.c_a0 = min_a0;
    out.c_q = min_q;
    out.c_a0q = min_a0q;

    // numerical infimum over a dense |k| sweep from the smallest grid
    // wavenumber upward (the symbols are smooth in |k|)
    double kmin = grid.k_scale();
    double inf_a0 = 0.0, inf_q = 0.0, inf_a0q = 0.0;
    first = true;
    for (int i = 0; i <= 4000; ++i) {
        double kk = kmin * std::pow(10.0, 3.0 * i / 4000.0);
        double k2 = kk * kk;
        double a0 = params.a0_symbol(k2);
        double q = params.q_symbol(k2);
        double ra0 = a0 / std::pow(k2, params.theta);
        double rq = q * std::pow(k2, params.theta2);
        double ra0q = a0 * q / std::pow(k2, params.theta - params.theta2);
        if (first) {
            inf_a0 = ra0; inf_q = rq; inf_a0q = ra0q;
            first = false;
        } else {
            inf_a0 = std::min(inf_a0, ra0);
            inf_q = std::min(inf_q, rq);
            inf_a0q = std::min(inf_a0q, ra0q);
        }
    }
    out.c_a0_inf = inf_a0;
    out.c_q_inf = inf_q;
    out.c_a0q_inf = inf_a0q;
    return out;
}

double q_operator_norm(const ModelParams& params) {
    // sup_k |k|^{2 theta2} (1 + a^2 |k|^2)^{-theta2} = alpha^{-2 theta2}
    return std::pow(params.alpha, -2.0 * params.theta2);
}

}  // namespace elreg
