#pragma once

// Variable-exponent modulars and Luxemburg norms on discretized radial
// functions, the norm-modular equivalences, and the Holder-type inequality.

#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "radial_grid.hpp"

namespace varsob {

// ============================================================
// modular and norm
// ============================================================

/// rho(u) = sum_i w_i |u_i|^{p(r_i)}, the discrete modular.
inline double modular_rho(const DiscreteFunction& u, const ExponentField& p) {
    p.require_same_grid(u);
    const auto& w = u.grid()->weights;
    const auto& uv = u.values();
    const auto& pv = p.node_values();
    double s = 0.0;
    for (std::size_t i = 0; i < uv.size(); ++i) {
        if (w[i] == 0.0) continue;
        s += w[i] * std::pow(std::abs(uv[i]), pv[i]);
    }
    return s;
}

/// Bisection bracket [lo, hi] around the Luxemburg norm: rho(u/lo) >= 1 and
/// rho(u/hi) <= 1, with hi - lo <= rel_tol * hi.  Zero functions give {0,0}.
/// The endpoints provide one-sided norm bounds for rigorous inequalities.
struct NormBracket {
    double lo;
    double hi;
    double mid() const { return 0.5 * (lo + hi); }
};

inline NormBracket luxemburg_norm_bracket(const DiscreteFunction& u,
                                          const ExponentField& p,
                                          double rel_tol = 1e-12) {
    p.require_same_grid(u);
    const double scale = u.sup_on_support();
    if (scale == 0.0) return {0.0, 0.0};

    auto rho_at = [&](double lambda) { return modular_rho(u.scaled(1.0 / lambda), p); };

    // lambda -> rho(u/lambda) is strictly decreasing for nonzero u, so a
    // bracket found by doubling makes bisection unconditionally convergent.
    double lo = scale, hi = scale;
    if (rho_at(scale) >= 1.0) {
        while (rho_at(hi) > 1.0) {
            hi *= 2.0;
            if (!std::isfinite(hi))
                throw std::runtime_error("luxemburg_norm: bracket ran away upward");
        }
    } else {
        while (rho_at(lo) < 1.0) {
            lo *= 0.5;
            if (lo == 0.0) {
                // modular stays below 1 for every positive lambda: possible
                // only when the function's support carries zero measure,
                // which sup_on_support has already excluded
                throw std::runtime_error("luxemburg_norm: bracket collapsed to zero");
            }
        }
    }
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // double-precision granularity
        (rho_at(mid) >= 1.0 ? lo : hi) = mid;
    }
    return {lo, hi};
}

/// ||u|| = inf{lambda > 0 : rho(u/lambda) <= 1}; 0 for the zero function.
inline double luxemburg_norm(const DiscreteFunction& u, const ExponentField& p,
                             double rel_tol = 1e-12) {
    return luxemburg_norm_bracket(u, p, rel_tol).mid();
}

// ============================================================
// Holder-type inequality
// ============================================================

struct HolderReport {
    double product_norm;  // ||fg||_s with 1/s = 1/p + 1/q pointwise
    double bound;         // ((s/p)+ + (s/q)+) ||f||_p ||g||_q
    double slack;         // bound - product_norm; >= 0 when the inequality holds
    bool ok;
};

/// Checks ||fg||_s <= ((s/p)+ + (s/q)+) ||f||_p ||g||_q.  Norm brackets are
/// used one-sidedly (upper bounds on the right, lower bound on the left), so
/// a true inequality can only fail by float rounding in the final products.
inline HolderReport holder_check(const DiscreteFunction& f, const DiscreteFunction& g,
                                 const ExponentField& p, const ExponentField& q) {
    p.require_same_grid(f);
    q.require_same_grid(g);
    f.require_same_grid(g);
    if (p.grid() != q.grid())
        throw std::invalid_argument("holder_check: exponent grids do not match");

    const auto& grid = f.grid();
    const auto& pv = p.node_values();
    const auto& qv = q.node_values();
    std::vector<double> sv(pv.size());
    double sp_plus = 0.0, sq_plus = 0.0;
    for (std::size_t i = 0; i < pv.size(); ++i) {
        const double s = 1.0 / (1.0 / pv[i] + 1.0 / qv[i]);
        if (!(s >= 1.0 - 1e-12))
            throw std::domain_error(
                "holder_check: conjugate exponent s falls below 1 on the grid");
        sv[i] = s;
        sp_plus = std::max(sp_plus, s / pv[i]);
        sq_plus = std::max(sq_plus, s / qv[i]);
    }
    const ExponentField s_field(grid, std::move(sv));

    const NormBracket nf = luxemburg_norm_bracket(f, p);
    const NormBracket ng = luxemburg_norm_bracket(g, q);
    const NormBracket nfg = luxemburg_norm_bracket(f.pointwise_product(g), s_field);

    HolderReport rep;
    rep.product_norm = nfg.mid();
    rep.bound = (sp_plus + sq_plus) * nf.mid() * ng.mid();
    rep.slack = (sp_plus + sq_plus) * nf.hi * ng.hi - nfg.lo;
    rep.ok = rep.slack >= -1e-12;
    return rep;
}

// ============================================================
// norm-modular equivalences
// ============================================================

/// One verdict per relation between the Luxemburg norm and the modular:
/// unit normalization, the <1/=1/>1 trichotomy, the two power brackets, and
/// the shrinking/growing sequence characterizations.
struct NormModularReport {
    bool unit_modular_at_norm;  // rho(u/||u||) = 1
    bool trichotomy;            // ||u|| vs 1 agrees with rho(u) vs 1
    bool bracket_above;         // ||u||>1: ||u||^{p-} <= rho(u) <= ||u||^{p+}
    bool bracket_below;         // ||u||<1: ||u||^{p+} <= rho(u) <= ||u||^{p-}
    bool shrinking_sequence;    // rho(u/k) decreases to 0
    bool growing_sequence;      // rho(k u) increases without bound
    double max_violation;       // largest signed defect observed (0 if clean)

    bool all() const {
        return unit_modular_at_norm && trichotomy && bracket_above && bracket_below &&
               shrinking_sequence && growing_sequence;
    }
};

inline NormModularReport norm_modular_properties(const DiscreteFunction& u,
                                                 const ExponentField& p,
                                                 double tol = 1e-10) {
    p.require_same_grid(u);
    if (u.sup_on_support() == 0.0)
        throw std::invalid_argument("norm_modular_properties: needs a nonzero input");

    NormModularReport rep{true, true, true, true, true, true, 0.0};
    auto flag = [&rep](bool& item, double defect) {
        if (defect > rep.max_violation) rep.max_violation = defect;
        if (defect > 0.0) item = false;
    };

    const double norm = luxemburg_norm(u, p);
    const double rho = modular_rho(u, p);
    const double rho_at_norm = modular_rho(u.scaled(1.0 / norm), p);

    // (1) the norm is exactly the lambda that normalizes the modular
    flag(rep.unit_modular_at_norm, std::abs(rho_at_norm - 1.0) - tol);

    // (2) trichotomy: ||u|| and rho(u) sit on the same side of 1
    if (norm > 1.0 + tol) flag(rep.trichotomy, 1.0 - rho);
    if (norm < 1.0 - tol) flag(rep.trichotomy, rho - 1.0);
    if (std::abs(norm - 1.0) <= tol) flag(rep.trichotomy, std::abs(rho - 1.0) - 10 * tol);

    // (3)/(4) power brackets linking norm and modular through p-/p+
    const double pm = p.inf_exponent(), pp = p.sup_exponent();
    if (norm > 1.0 + tol) {
        flag(rep.bracket_above, std::pow(norm, pm) - rho - tol);
        flag(rep.bracket_above, rho - std::pow(norm, pp) - tol);
    }
    if (norm < 1.0 - tol && norm > 0.0) {
        flag(rep.bracket_below, std::pow(norm, pp) - rho - tol);
        flag(rep.bracket_below, rho - std::pow(norm, pm) - tol);
    }

    // (5) rho(u/k) must decrease monotonically to 0; even at p- = 1 the
    // decay is at least 1/k, so k = 2048 clears the 1e-3 gate
    double prev = rho;
    for (int k = 2; k <= 2048; k *= 2) {
        const double rk = modular_rho(u.scaled(1.0 / k), p);
        flag(rep.shrinking_sequence, rk - prev);
        prev = rk;
    }
    flag(rep.shrinking_sequence, prev - 1e-3 * rho);

    // (6) rho(k u) must increase monotonically and leave every bound behind
    prev = rho;
    for (int k = 2; k <= 2048; k *= 2) {
        const double rk = modular_rho(u.scaled(double(k)), p);
        flag(rep.growing_sequence, prev - rk);
        prev = rk;
    }
    flag(rep.growing_sequence, 1e3 * rho - prev);

    return rep;
}

// ============================================================
// CSV import/export (debugging aid)
// ============================================================

inline void write_csv(std::ostream& os, const DiscreteFunction& u) {
    os << "r,value\n";
    const auto& nodes = u.grid()->nodes;
    const auto& v = u.values();
    os.precision(17);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        os << nodes[i] << ',' << v[i] << '\n';
}

/// Reads back "r,value" rows (header optional); returns (r, value) pairs.
inline std::vector<std::pair<double, double>> read_csv_values(std::istream& is) {
    std::vector<std::pair<double, double>> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("csv: expected 'r,value' rows");
        try {
            const double r = std::stod(line.substr(0, comma));
            const double v = std::stod(line.substr(comma + 1));
            out.emplace_back(r, v);
        } catch (const std::invalid_argument&) {
            if (out.empty() && line.rfind("r,", 0) == 0) continue; // header
            throw std::runtime_error("csv: malformed row: " + line);
        }
    }
    return out;
}

} // namespace varsob
