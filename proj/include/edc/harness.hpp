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

#ifndef EDC_HARNESS_HPP
#define EDC_HARNESS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "edc/theory.hpp"

namespace edc {

/// Raised on invalid experiment configuration (CLI exit code 3); budget
/// violations raise ResourceError (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Protocol { Forced, Class, Born };

/// One realization sweep: ensembles x sizes x error strengths.
struct ExperimentConfig {
    Ensemble ensemble = Ensemble::Clifford;
    Protocol protocol = Protocol::Forced;

    uint64_t forced_syndrome = 0;  // forced protocol: ancilla bit pattern
    int syndrome_ell = 1;          // class protocol: class index (1 or 2)
    size_t born_draws = 0;         // born protocol: samples per circuit; 0 = exhaustive sum

    std::vector<size_t> n_list;
    double rate = 0.5;  // k = round(rate * N)
    std::vector<double> alpha_grid;
    size_t realizations = 100;
    uint64_t seed = 0;
    std::vector<std::string> metrics = {"fidelity"};
    std::string output_path;  // empty: no files written by run()
    size_t threads = 1;

    size_t k_of(size_t n) const;

    /// Field-level checks (throws ConfigError).
    void validate() const;

    /// Size/metric caps for every (N, k) in the sweep, checked before any
    /// work starts (throws ResourceError).
    void check_budget() const;
};

struct ResultRecord {
    std::string ensemble;
    std::string protocol;
    size_t n = 0, k = 0;
    double alpha = 0;
    std::string metric;
    double mean = 0;
    double sem = 0;  // sample std / sqrt(count)
    size_t count = 0;
    uint64_t seed = 0;  // master seed of the producing run
};

/// Counter-based per-(N, alpha index, realization) stream seed; parallel
/// schedules cannot perturb it.
uint64_t derived_seed(uint64_t master, uint64_t n, uint64_t alpha_index, uint64_t realization);

/// Fixed-order pairwise reduction, independent of threading.
double pairwise_sum(const double* v, size_t n);

/// Executes the sweep. Output record order is deterministic:
/// (N, alpha, metric) in configured order.
std::vector<ResultRecord> run(const ExperimentConfig& cfg);

/// CSV with header ensemble,protocol,N,k,alpha,metric,mean,stderr,count,seed.
std::string to_csv(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> parse_csv(const std::string& text);

/// Writes output_path (CSV) plus a JSON sidecar (output_path + ".json")
/// holding the full configuration.
void write_outputs(const ExperimentConfig& cfg, const std::vector<ResultRecord>& records);

/// Groups one metric's records into per-N curves (alpha ascending).
std::vector<Curve> records_to_curves(const std::vector<ResultRecord>& records,
                                     const std::string& metric);

/// Crossing table + (alpha_c, nu) fit for one metric; needs >= 2 sizes.
CollapseReport analyze(const std::vector<ResultRecord>& records, const std::string& metric,
                       const ScalingAnsatz& init);

}  // namespace edc

#endif
