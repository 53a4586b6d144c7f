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

#ifndef EDC_THEORY_HPP
#define EDC_THEORY_HPP

#include <cstddef>
#include <vector>

namespace edc {

struct CodeParameters {
    size_t n_qubits;
    size_t k_logical;
    double alpha;
    double rate() const { return double(k_logical) / double(n_qubits); }
};

enum class Ensemble { Haar, Clifford };

/// Critical error strength: cos(alpha_c / 2) = 2^{(r-1)/2}.
double critical_alpha(double rate);

struct AnnealedFidelity {
    double mean_m;    // ensemble-averaged numerator E[m_F(0)]
    double mean_p;    // ensemble-averaged denominator E[p(0)]
    double value;     // annealed fidelity mean_m / mean_p
    double logistic;  // large-N scaling form [1 + e^{tan(ac/2) N (a-ac)}]^{-1}
};

/// Exact finite-N annealed fidelity (identical for Haar and Clifford).
AnnealedFidelity annealed_fidelity(const CodeParameters& p);

struct Fluctuations {
    double dm2;  // relative variance of the numerator
    double dp2;  // relative variance of the denominator
};

/// Leading-order relative variances of numerator and denominator.
Fluctuations fidelity_fluctuations(const CodeParameters& p, Ensemble e);

/// Annealed stabilizer Renyi entropy, Haar encoders, q in {2,3}.
double annealed_sre_haar(const CodeParameters& p, int q);

/// Universal scaling form: (q==2 ? 4 : 3) * log2[1 + e^{tan(ac/2) N (a-ac)}].
double sre_scaling_form(const CodeParameters& p, int q);

/// Thermodynamic SRE density M_q/N for Haar encoders (three branches).
double sre_density_haar(double rate, double alpha, int q);

/// Annealed M_2 for Clifford encoders (compact leading form).
double annealed_sre2_clifford(const CodeParameters& p);

/// Thermodynamic M_2/N density for Clifford encoders.
double sre2_density_clifford(double rate, double alpha);

/// Annealed participation entropy, q in {2,3}.
double annealed_pe(const CodeParameters& p, int q);

struct NontrivialMoments {
    double mean_p;  // E[p(s != 0)]
    double mean_m;  // E[m_F(s != 0)]
    /// Porter-Thomas prediction for the q-th moment of the numerator.
    double factorial_moment(int q) const;
};

/// Haar statistics on any fixed nontrivial syndrome.
NontrivialMoments haar_nontrivial_syndrome_moments(const CodeParameters& p);

// --- finite-size scaling analysis -------------------------------------

struct ScalingAnsatz {
    double alpha_c;
    double nu;
};

struct Curve {
    size_t n;                   // system size
    std::vector<double> alpha;  // grid (ascending)
    std::vector<double> value;
    std::vector<double> err;    // standard errors (may be empty)
};

struct Crossing {
    size_t n_small, n_large;
    double alpha_x;
    bool found;
};

struct CollapseReport {
    std::vector<Crossing> crossings;  // adjacent-N pairs
    double alpha_c;                   // fitted
    double nu;                        // fitted
    double quality;                   // binned variance at the optimum (lower = better)
};

/// Inverse-error-weighted variance of the rescaled family after binning in
/// (alpha - alpha_c) * N^{1/nu}; the collapse objective.
double collapse_quality(const std::vector<Curve>& curves, double alpha_c, double nu);

/// Pairwise crossings plus a coarse-grid/refine fit of (alpha_c, nu).
CollapseReport crossing_and_collapse(const std::vector<Curve>& curves,
                                     const ScalingAnsatz& init);

}  // namespace edc

#endif
