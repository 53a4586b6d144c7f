// Copyright 2026 The edc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "edc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace edc {

namespace {

// base^n evaluated in log space; base >= 0.
double pow_n(double base, double n) {
    if (base <= 0) return 0;
    return std::exp2(n * std::log2(base));
}

// gamma = 2^{N-k} cos^{2N}(alpha/2), the single scale of the annealed forms.
double gamma_scale(const CodeParameters& p) {
    double c = std::cos(p.alpha / 2);
    if (c <= 0) return 0;
    return std::exp2(double(p.n_qubits - p.k_logical) + 2.0 * p.n_qubits * std::log2(c));
}

double logistic_arg(const CodeParameters& p) {
    double ac = critical_alpha(p.rate());
    return std::tan(ac / 2) * double(p.n_qubits) * (p.alpha - ac);
}

}  // namespace

double critical_alpha(double rate) {
    if (rate <= 0 || rate >= 1) throw std::domain_error("critical_alpha: 0 < r < 1");
    return 2.0 * std::acos(std::exp2((rate - 1) / 2));
}

AnnealedFidelity annealed_fidelity(const CodeParameters& p) {
    double n = double(p.n_qubits), k = double(p.k_logical);
    double c = std::cos(p.alpha / 2);
    double c2n = pow_n(c, 2 * n);
    double p2n = std::exp2(n), p2k = std::exp2(k);

    AnnealedFidelity out;
    out.mean_m = (p2n * c2n + 1) / (p2n + 1);
    out.mean_p = (p2n * (p2n - p2k) * c2n + p2n * p2k - 1) / (p2n * p2n - 1);
    out.value = out.mean_m / out.mean_p;
    out.logistic = 1.0 / (1.0 + std::exp(logistic_arg(p)));
    return out;
}

Fluctuations fidelity_fluctuations(const CodeParameters& p, Ensemble e) {
    double n = double(p.n_qubits), k = double(p.k_logical);
    double c = std::cos(p.alpha / 2);
    double c2n = pow_n(c, 2 * n);
    double g = std::exp2(n) * c2n;  // 2^N cos^{2N}
    double p2k = std::exp2(k);

    Fluctuations f;
    if (e == Ensemble::Haar) {
        f.dm2 = (1 + 2 * g) / ((1 + g) * (1 + g));
        f.dp2 = (p2k + 2 * g * (1 + c2n)) / ((p2k + g) * (p2k + g));
    } else {
        double b = pow_n(3 + std::cos(2 * p.alpha), n);
        f.dm2 = (3 + 2 * g + std::exp2(-n) * b) / ((1 + g) * (1 + g));
        f.dp2 = std::exp2(k - n) * (std::exp2(n) - g * g + b) / ((p2k + g) * (p2k + g));
    }
    return f;
}

double annealed_sre_haar(const CodeParameters& p, int q) {
    double g = gamma_scale(p);
    double x = g / (1 + g);
    double p2k = std::exp2(double(p.k_logical));
    if (q == 2) {
        double arg = std::pow(x, 4) + 4.0 / p2k * (1 - x) * (1 - x) * (1 + 2 * x + 3 * x * x);
        return -std::log2(arg);
    }
    if (q == 3) {
        double x2 = x * x;
        double arg = std::pow(x, 6) +
                     (1 - x2) * (1 + x2 + 16 * x2 * x2) / p2k;
        return -0.5 * std::log2(arg);
    }
    throw std::invalid_argument("annealed_sre_haar: q in {2,3}");
}

double sre_scaling_form(const CodeParameters& p, int q) {
    if (q != 2 && q != 3) throw std::invalid_argument("sre_scaling_form: q in {2,3}");
    double pre = q == 2 ? 4.0 : 3.0;
    return pre * std::log2(1.0 + std::exp(logistic_arg(p)));
}

double sre_density_haar(double rate, double alpha, int q) {
    if (q < 2) throw std::invalid_argument("sre_density_haar: q >= 2");
    double ac = critical_alpha(rate);
    if (alpha <= ac) return 0;
    double middle = 4.0 * q / (q - 1) * std::log2(std::cos(ac / 2) / std::cos(alpha / 2));
    return std::min(middle, rate / (q - 1));
}

double annealed_sre2_clifford(const CodeParameters& p) {
    double n = double(p.n_qubits), k = double(p.k_logical);
    double g = gamma_scale(p);
    double x = g / (1 + g);
    double t = std::cos(p.alpha / 2) * std::cos(p.alpha / 2);

    double b1 = 16 * t * t * t * t - 32 * t * t * t + 20 * t * t - 4 * t + 1;
    double b2 = 8 * t * t - 14 * t + 7;
    double b3 = 4 * t * t - 6 * t + 3;
    double b4 = 4 * t * t - 4 * t + 2;
    double qq = std::exp2(k + 3 - n) * pow_n(b2, n) + 16 * pow_n(b3, n) +
                7 * std::exp2(1 - k) * pow_n(b4, n);
    double arg = std::pow(x, 4) + x * x * (1 - x) * (1 - x) * qq +
                 std::pow(1 - x, 4) * pow_n(b1, n);
    return -std::log2(arg);
}

double sre2_density_clifford(double rate, double alpha) {
    double ac = critical_alpha(rate);
    if (alpha <= ac) return 0;
    double s2 = std::sin(2 * alpha);
    double lam = std::pow(1 - s2 * s2 / 4, 1.0 / 8.0);
    double ratio = std::cos(alpha / 2) / std::cos(ac / 2);
    if (ratio > lam) return 8.0 * std::log2(std::cos(ac / 2) / std::cos(alpha / 2));
    return -std::log2(1 - s2 * s2 / 4);
}

double annealed_pe(const CodeParameters& p, int q) {
    double n = double(p.n_qubits), k = double(p.k_logical);
    double g = gamma_scale(p);
    double x = g / (1 + g);
    double ca = std::cos(p.alpha);
    double a = 1 + 3 * ca * ca, b = 1 + ca * ca;
    if (q == 2) {
        double arg = x * x + (1 - x) * (1 - x) * (pow_n(b, n) + 2) / std::exp2(k);
        return -std::log2(arg);
    }
    if (q == 3) {
        double arg = std::pow(x, 3) +
                     std::pow(1 - x, 3) * (pow_n(a, n) + 9 * pow_n(b, n) + 12) / std::exp2(2 * k);
        return -0.5 * std::log2(arg);
    }
    throw std::invalid_argument("annealed_pe: q in {2,3}");
}

double NontrivialMoments::factorial_moment(int q) const {
    double f = 1;
    for (int i = 2; i <= q; ++i) f *= i;
    return f * mean_m;
}

NontrivialMoments haar_nontrivial_syndrome_moments(const CodeParameters& p) {
    double n = double(p.n_qubits), k = double(p.k_logical);
    double top = std::exp2(n) - pow_n(1 + std::cos(p.alpha), n);
    double den = std::exp2(2 * n) - 1;
    NontrivialMoments m;
    m.mean_m = top / den;
    m.mean_p = std::exp2(k) * top / den;
    return m;
}

// --- finite-size scaling ----------------------------------------------

namespace {

double interp(const Curve& c, double a) {
    auto it = std::upper_bound(c.alpha.begin(), c.alpha.end(), a);
    if (it == c.alpha.begin() || it == c.alpha.end())
        return std::numeric_limits<double>::quiet_NaN();
    size_t i = size_t(it - c.alpha.begin());
    double t = (a - c.alpha[i - 1]) / (c.alpha[i] - c.alpha[i - 1]);
    return c.value[i - 1] + t * (c.value[i] - c.value[i - 1]);
}

Crossing cross_pair(const Curve& a, const Curve& b) {
    Crossing cr{a.n, b.n, 0, false};
    double lo = std::max(a.alpha.front(), b.alpha.front());
    double hi = std::min(a.alpha.back(), b.alpha.back());
    if (lo >= hi) return cr;
    // Scan the union grid restricted to the overlap; among all sign changes
    // keep the steepest one (flat tails may produce noise crossings).
    std::vector<double> grid;
    for (double x : a.alpha)
        if (x >= lo && x <= hi) grid.push_back(x);
    for (double x : b.alpha)
        if (x >= lo && x <= hi) grid.push_back(x);
    std::sort(grid.begin(), grid.end());
    double best_score = -1;
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        double d0 = interp(a, grid[i]) - interp(b, grid[i]);
        double d1 = interp(a, grid[i + 1]) - interp(b, grid[i + 1]);
        if (std::isnan(d0) || std::isnan(d1)) continue;
        if ((d0 <= 0) == (d1 <= 0)) continue;
        double score = std::abs(d0) + std::abs(d1);
        if (score > best_score) {
            best_score = score;
            cr.alpha_x = grid[i] + (grid[i + 1] - grid[i]) * d0 / (d0 - d1);
            cr.found = true;
        }
    }
    return cr;
}

}  // namespace

double collapse_quality(const std::vector<Curve>& curves, double alpha_c, double nu) {
    struct Pt {
        double x, y, w;
    };
    std::vector<Pt> pts;
    for (auto& c : curves) {
        double scale = std::pow(double(c.n), 1.0 / nu);
        for (size_t i = 0; i < c.alpha.size(); ++i) {
            double w = 1.0;
            if (i < c.err.size() && c.err[i] > 0) w = 1.0 / (c.err[i] * c.err[i]);
            pts.push_back({(c.alpha[i] - alpha_c) * scale, c.value[i], w});
        }
    }
    if (pts.size() < 4) return std::numeric_limits<double>::infinity();
    double xmin = pts[0].x, xmax = pts[0].x;
    for (auto& p : pts) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
    }
    if (xmax <= xmin) return std::numeric_limits<double>::infinity();

    // Weighted residual variance per bin after removing the local linear
    // trend, so the master curve's own slope does not register as spread.
    const int nbins = 24;
    std::vector<std::vector<Pt>> bins(nbins);
    for (auto& p : pts) {
        int b = std::min(nbins - 1, int((p.x - xmin) / (xmax - xmin) * nbins));
        bins[b].push_back(p);
    }
    double total = 0;
    int used = 0;
    for (auto& bin : bins) {
        if (bin.size() < 3) continue;
        double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto& p : bin) {
            sw += p.w;
            sx += p.w * p.x;
            sy += p.w * p.y;
            sxx += p.w * p.x * p.x;
            sxy += p.w * p.x * p.y;
        }
        double det = sw * sxx - sx * sx;
        double slope = std::abs(det) > 1e-30 ? (sw * sxy - sx * sy) / det : 0;
        double icpt = (sy - slope * sx) / sw;
        double ss = 0;
        for (auto& p : bin) {
            double r = p.y - icpt - slope * p.x;
            ss += p.w * r * r;
        }
        total += ss / sw;
        ++used;
    }
    return used ? total / used : std::numeric_limits<double>::infinity();
}

CollapseReport crossing_and_collapse(const std::vector<Curve>& curves,
                                     const ScalingAnsatz& init) {
    if (curves.size() < 2)
        throw std::invalid_argument("crossing_and_collapse: need >= 2 system sizes");
    std::vector<Curve> sorted = curves;
    std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.n < b.n; });

    CollapseReport rep;
    for (size_t i = 0; i + 1 < sorted.size(); ++i)
        rep.crossings.push_back(cross_pair(sorted[i], sorted[i + 1]));

    // Coarse grid over (alpha_c, nu), then two refinement passes.
    double ac = init.alpha_c, dac = 0.25;
    double lnu = std::log(init.nu), dlnu = std::log(3.0);
    double best = std::numeric_limits<double>::infinity();
    double best_ac = ac, best_lnu = lnu;
    for (int pass = 0; pass < 3; ++pass) {
        const int steps = 25;
        for (int i = 0; i < steps; ++i) {
            double a = ac - dac + 2 * dac * i / (steps - 1);
            for (int j = 0; j < steps; ++j) {
                double ln = lnu - dlnu + 2 * dlnu * j / (steps - 1);
                double q = collapse_quality(sorted, a, std::exp(ln));
                if (q < best) {
                    best = q;
                    best_ac = a;
                    best_lnu = ln;
                }
            }
        }
        ac = best_ac;
        lnu = best_lnu;
        dac /= 5;
        dlnu /= 5;
    }
    rep.alpha_c = best_ac;
    rep.nu = std::exp(best_lnu);
    rep.quality = best;
    return rep;
}

}  // namespace edc
