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

#include "edc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "edc/decoder.hpp"
#include "edc/haar.hpp"
#include "edc/metrics.hpp"
#include "edc/tableau.hpp"

namespace edc {

namespace {

const char* ensemble_name(Ensemble e) { return e == Ensemble::Haar ? "haar" : "clifford"; }

const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::Forced: return "forced";
        case Protocol::Class: return "class";
        case Protocol::Born: return "born";
    }
    return "?";
}

// Which per-state quantities a sweep computes, and the expanded list of
// output metric names in canonical order.
struct MetricPlan {
    bool fid = false, born_prob = false, sre2 = false, sre3 = false;
    bool pe2 = false, pe3 = false, class_stats = false, bound = false;
    std::vector<std::string> names;
};

MetricPlan build_plan(const ExperimentConfig& cfg) {
    MetricPlan p;
    for (const std::string& m : cfg.metrics) {
        if (m == "fidelity")
            p.fid = true;
        else if (m == "born_prob")
            p.born_prob = true;
        else if (m == "sre_2")
            p.sre2 = true;
        else if (m == "sre_3")
            p.sre3 = true;
        else if (m == "pe_2")
            p.pe2 = true;
        else if (m == "pe_3")
            p.pe3 = true;
        else if (m == "class_stats")
            p.class_stats = true;
        else
            throw ConfigError("unknown metric: " + m);
    }
    if (p.class_stats && cfg.protocol != Protocol::Class)
        throw ConfigError("class_stats requires the class protocol");
    p.bound = p.fid && p.sre2;  // bound check is free once both are computed
    if (p.fid) p.names.push_back("fidelity");
    if (p.born_prob) p.names.push_back("born_prob");
    if (p.sre2) p.names.push_back("sre_2");
    if (p.sre3) p.names.push_back("sre_3");
    if (p.pe2) p.names.push_back("pe_2");
    if (p.pe3) p.names.push_back("pe_3");
    if (p.class_stats) {
        p.names.push_back("class_count");
        p.names.push_back("class_ambiguous");
    }
    if (p.bound) p.names.push_back("magic_bound_viol");
    return p;
}

uint64_t dominating_index(const DecodedState& st) {
    uint64_t best = 0;
    double mx = -1;
    for (uint64_t x = 0; x < st.amplitudes.size(); ++x) {
        double m = std::norm(st.amplitudes[x]);
        if (m > mx) {
            mx = m;
            best = x;
        }
    }
    return best;
}

// Weighted averages of the per-state quantities over the syndromes seen in
// one realization.
struct Accum {
    double w = 0, fid = 0, sre2 = 0, sre3 = 0, pe2 = 0, pe3 = 0;
    double bound_checked = 0, bound_viol = 0;

    void add(const DecodedState& st, uint64_t target, double weight, size_t k,
             const MetricPlan& plan) {
        if (weight <= 0 || st.born_prob <= 0) return;
        LogicalStateView view{&st.amplitudes, k};
        w += weight;
        double f = 0, m2 = 0;
        if (plan.fid || plan.bound) {
            f = fidelity(view, target);
            fid += weight * f;
        }
        if (plan.sre2 || plan.bound) {
            m2 = sre(view, 2);
            sre2 += weight * m2;
        }
        if (plan.sre3) sre3 += weight * sre(view, 3);
        if (plan.pe2) pe2 += weight * participation_entropy(view, 2);
        if (plan.pe3) pe3 += weight * participation_entropy(view, 3);
        if (plan.bound && f > 0.5) {
            bound_checked += weight;
            if (m2 > -4 * std::log2(2 * f - 1) + 1e-9) bound_viol += weight;
        }
    }
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One circuit realization; returns values aligned with plan.names, NaN for
// a realization that produced no valid trajectory.
std::vector<double> run_one(const ExperimentConfig& cfg, size_t n, size_t k,
                            const ErrorModel& em, uint64_t seed, const MetricPlan& plan) {
    std::mt19937_64 rng(seed);
    size_t na = n - k;

    Accum acc;
    double total_prob = 0;  // born weight reached by the protocol
    double class_count = 0, class_ambiguous = 0;

    auto add_dist = [&](const BornDistribution& dist) {
        for (auto& p : dist.probabilities) total_prob += p;
        if (cfg.born_draws == 0) {
            for (uint64_t s = 0; s < dist.probabilities.size(); ++s) {
                double p = dist.probabilities[s];
                if (p <= 0) continue;
                DecodedState st = conditional_state(dist, s, n);
                uint64_t target = (s == 0) ? 0 : dominating_index(st);
                acc.add(st, target, p, k, plan);
            }
        } else {
            std::vector<uint64_t> draws = sample_born(dist.probabilities, cfg.born_draws, rng);
            for (uint64_t s : draws) {
                DecodedState st = conditional_state(dist, s, n);
                uint64_t target = (s == 0) ? 0 : dominating_index(st);
                acc.add(st, target, 1.0, k, plan);
            }
        }
    };

    if (cfg.ensemble == Ensemble::Clifford) {
        CliffordTableau t = random_clifford(n, rng);
        const std::vector<PauliString>& gens = conjugated_error_generators(t);
        switch (cfg.protocol) {
            case Protocol::Forced: {
                BitVec syn(na);
                for (size_t i = 0; i < na; ++i) syn.set(i, (cfg.forced_syndrome >> i) & 1);
                DecodedState st = decode_fast(gens, em, syn, k);
                if (!st.consistent || st.born_prob <= 0) return {};
                total_prob = st.born_prob;
                uint64_t target = (cfg.forced_syndrome == 0) ? 0 : dominating_index(st);
                acc.add(st, target, 1.0, k, plan);
                break;
            }
            case Protocol::Class: {
                std::vector<ClassSyndrome> list =
                    class_syndromes(gens, cfg.syndrome_ell, em, k);
                if (list.empty()) return {};
                for (const ClassSyndrome& cs : list) {
                    DecodedState st = decode_fast(gens, em, cs.syndrome, k);
                    total_prob += st.born_prob;
                    acc.add(st, cs.target_logical, st.born_prob, k, plan);
                    class_ambiguous += cs.ambiguous ? 1.0 : 0.0;
                }
                class_count = double(list.size());
                class_ambiguous /= double(list.size());
                break;
            }
            case Protocol::Born:
                add_dist(born_distribution(gens, em, k));
                break;
        }
    } else {
        DenseEncoder enc = random_haar_dense(n, rng);
        if (cfg.protocol == Protocol::Forced) {
            BitVec syn(na);
            for (size_t i = 0; i < na; ++i) syn.set(i, (cfg.forced_syndrome >> i) & 1);
            DecodedState st = simulate_haar(enc, em, syn, k);
            if (st.born_prob <= 0) return {};
            total_prob = st.born_prob;
            uint64_t target = (cfg.forced_syndrome == 0) ? 0 : dominating_index(st);
            acc.add(st, target, 1.0, k, plan);
        } else {  // Born (class is rejected in validate())
            Eigen::VectorXcd v = haar_error_state(enc, em);
            BornDistribution dist;
            dist.k = k;
            dist.amplitudes.assign(v.data(), v.data() + v.size());
            dist.probabilities.assign(uint64_t(1) << na, 0.0);
            for (uint64_t idx = 0; idx < uint64_t(v.size()); ++idx)
                dist.probabilities[idx >> k] += std::norm(v(idx));
            add_dist(dist);
        }
    }

    if (acc.w <= 0) return {};
    std::vector<double> out;
    out.reserve(plan.names.size());
    double inv = 1.0 / acc.w;
    if (plan.fid) out.push_back(acc.fid * inv);
    if (plan.born_prob) out.push_back(total_prob);
    if (plan.sre2) out.push_back(acc.sre2 * inv);
    if (plan.sre3) out.push_back(acc.sre3 * inv);
    if (plan.pe2) out.push_back(acc.pe2 * inv);
    if (plan.pe3) out.push_back(acc.pe3 * inv);
    if (plan.class_stats) {
        out.push_back(class_count);
        out.push_back(class_ambiguous);
    }
    if (plan.bound)
        out.push_back(acc.bound_checked > 0 ? acc.bound_viol / acc.bound_checked : 0.0);
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

size_t ExperimentConfig::k_of(size_t n) const { return size_t(std::lround(rate * double(n))); }

void ExperimentConfig::validate() const {
    if (n_list.empty()) throw ConfigError("n_list is empty");
    if (alpha_grid.empty()) throw ConfigError("alpha_grid is empty");
    for (double a : alpha_grid)
        if (!(a >= 0 && a <= M_PI + 1e-12)) throw ConfigError("alpha outside [0, pi]");
    for (size_t n : n_list) {
        size_t k = k_of(n);
        if (k == 0 || k >= n)
            throw ConfigError("rate " + std::to_string(rate) + " gives k outside (0, N) at N=" +
                              std::to_string(n));
        if (protocol == Protocol::Forced && n - k < 64 &&
            (forced_syndrome >> (n - k)) != 0)
            throw ConfigError("forced syndrome has bits beyond the ancilla register");
    }
    if (realizations == 0) throw ConfigError("realizations must be positive");
    if (threads == 0) throw ConfigError("threads must be positive");
    if (protocol == Protocol::Class) {
        if (ensemble != Ensemble::Clifford)
            throw ConfigError("class protocol requires Clifford encoders");
        if (syndrome_ell != 1 && syndrome_ell != 2)
            throw ConfigError("syndrome class must be 1 or 2");
    }
    MetricPlan plan = build_plan(*this);  // validates metric names
    (void)plan;
}

void ExperimentConfig::check_budget() const {
    MetricPlan plan = build_plan(*this);
    bool wants_sre = plan.sre2 || plan.sre3 || plan.bound;
    for (size_t n : n_list) {
        size_t k = k_of(n);
        if (ensemble == Ensemble::Haar && n > 12)
            throw ResourceError("haar encoders capped at N = 12 (dense state vector)");
        if (ensemble == Ensemble::Clifford) {
            if (protocol == Protocol::Born && n > 24)
                throw ResourceError("born protocol capped at N = 24 (dense 2^N table)");
            if (protocol != Protocol::Born && k > 28)
                throw ResourceError("forced/class decode capped at k = 28 (2^k enumeration)");
        }
        if (wants_sre && k > 13)
            throw ResourceError("stabilizer entropy capped at k = 13 (4^k spectrum)");
        if (protocol == Protocol::Born && born_draws == 0 && wants_sre && k > 10)
            throw ResourceError(
                "exhaustive born SRE capped at k = 10 (2^{N-k} spectra per circuit); "
                "use sampled draws");
    }
}

uint64_t derived_seed(uint64_t master, uint64_t n, uint64_t alpha_index, uint64_t realization) {
    auto mix = [](uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(master + n) + alpha_index) + realization);
}

double pairwise_sum(const double* v, size_t n) {
    if (n <= 8) {
        double s = 0;
        for (size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

std::vector<ResultRecord> run(const ExperimentConfig& cfg) {
    cfg.validate();
    cfg.check_budget();
    MetricPlan plan = build_plan(cfg);
    size_t n_metrics = plan.names.size();

    std::vector<ResultRecord> records;
    for (size_t n : cfg.n_list) {
        size_t k = cfg.k_of(n);
        for (size_t ai = 0; ai < cfg.alpha_grid.size(); ++ai) {
            double alpha = cfg.alpha_grid[ai];
            ErrorModel em(alpha);

            // values[m][r]; written by realization index, so scheduling
            // cannot change the reduction order.
            std::vector<std::vector<double>> values(
                n_metrics, std::vector<double>(cfg.realizations, kNaN));
            std::atomic<size_t> next{0};
            auto worker = [&] {
                for (;;) {
                    size_t r = next.fetch_add(1);
                    if (r >= cfg.realizations) break;
                    uint64_t s = derived_seed(cfg.seed, n, ai, r);
                    std::vector<double> v = run_one(cfg, n, k, em, s, plan);
                    if (v.empty()) continue;
                    for (size_t m = 0; m < n_metrics; ++m) values[m][r] = v[m];
                }
            };
            size_t nt = std::min(cfg.threads, cfg.realizations);
            if (nt <= 1) {
                worker();
            } else {
                std::vector<std::thread> pool;
                for (size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
                for (auto& t : pool) t.join();
            }

            for (size_t m = 0; m < n_metrics; ++m) {
                std::vector<double> good;
                good.reserve(cfg.realizations);
                for (double v : values[m])
                    if (!std::isnan(v)) good.push_back(v);
                ResultRecord rec;
                rec.ensemble = ensemble_name(cfg.ensemble);
                rec.protocol = protocol_name(cfg.protocol);
                rec.n = n;
                rec.k = k;
                rec.alpha = alpha;
                rec.metric = plan.names[m];
                rec.count = good.size();
                rec.seed = cfg.seed;
                if (!good.empty()) {
                    double mean = pairwise_sum(good.data(), good.size()) / double(good.size());
                    double var = 0;
                    if (good.size() > 1) {
                        std::vector<double> sq(good.size());
                        for (size_t i = 0; i < good.size(); ++i)
                            sq[i] = (good[i] - mean) * (good[i] - mean);
                        var = pairwise_sum(sq.data(), sq.size()) / double(good.size() - 1);
                    }
                    rec.mean = mean;
                    rec.sem = std::sqrt(var / double(good.size()));
                }
                records.push_back(std::move(rec));
            }
        }
    }
    if (!cfg.output_path.empty()) write_outputs(cfg, records);
    return records;
}

std::string to_csv(const std::vector<ResultRecord>& records) {
    std::string out = "ensemble,protocol,N,k,alpha,metric,mean,stderr,count,seed\n";
    for (const ResultRecord& r : records) {
        out += r.ensemble;
        out += ',';
        out += r.protocol;
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += std::to_string(r.k);
        out += ',';
        out += format_double(r.alpha);
        out += ',';
        out += r.metric;
        out += ',';
        out += format_double(r.mean);
        out += ',';
        out += format_double(r.sem);
        out += ',';
        out += std::to_string(r.count);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

std::vector<ResultRecord> parse_csv(const std::string& text) {
    std::vector<ResultRecord> out;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("ensemble,", 0) == 0) continue;
        }
        std::istringstream ls(line);
        std::string f[10];
        for (int i = 0; i < 10; ++i)
            if (!std::getline(ls, f[i], ',')) throw ConfigError("malformed CSV row: " + line);
        ResultRecord r;
        r.ensemble = f[0];
        r.protocol = f[1];
        r.n = std::stoull(f[2]);
        r.k = std::stoull(f[3]);
        r.alpha = std::stod(f[4]);
        r.metric = f[5];
        r.mean = std::stod(f[6]);
        r.sem = std::stod(f[7]);
        r.count = std::stoull(f[8]);
        r.seed = std::stoull(f[9]);
        out.push_back(std::move(r));
    }
    return out;
}

void write_outputs(const ExperimentConfig& cfg, const std::vector<ResultRecord>& records) {
    {
        std::ofstream f(cfg.output_path, std::ios::binary);
        if (!f) throw ConfigError("cannot open output file: " + cfg.output_path);
        f << to_csv(records);
    }
    nlohmann::json j;
    j["ensemble"] = ensemble_name(cfg.ensemble);
    j["protocol"] = protocol_name(cfg.protocol);
    j["forced_syndrome"] = cfg.forced_syndrome;
    j["syndrome_ell"] = cfg.syndrome_ell;
    j["born_draws"] = cfg.born_draws;
    j["n_list"] = cfg.n_list;
    j["rate"] = cfg.rate;
    j["alpha_grid"] = cfg.alpha_grid;
    j["realizations"] = cfg.realizations;
    j["seed"] = cfg.seed;
    j["metrics"] = cfg.metrics;
    j["records"] = records.size();
    j["provenance"] = "edc-1.0.0";
    std::ofstream f(cfg.output_path + ".json", std::ios::binary);
    if (!f) throw ConfigError("cannot open sidecar file: " + cfg.output_path + ".json");
    f << j.dump(2) << "\n";
}

std::vector<Curve> records_to_curves(const std::vector<ResultRecord>& records,
                                     const std::string& metric) {
    std::vector<Curve> curves;
    for (const ResultRecord& r : records) {
        if (r.metric != metric) continue;
        Curve* c = nullptr;
        for (Curve& x : curves)
            if (x.n == r.n) c = &x;
        if (!c) {
            curves.push_back(Curve{r.n, {}, {}, {}});
            c = &curves.back();
        }
        c->alpha.push_back(r.alpha);
        c->value.push_back(r.mean);
        c->err.push_back(r.sem);
    }
    for (Curve& c : curves) {
        std::vector<size_t> idx(c.alpha.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](size_t a, size_t b) { return c.alpha[a] < c.alpha[b]; });
        Curve s;
        s.n = c.n;
        for (size_t i : idx) {
            s.alpha.push_back(c.alpha[i]);
            s.value.push_back(c.value[i]);
            s.err.push_back(c.err[i]);
        }
        c = std::move(s);
    }
    std::sort(curves.begin(), curves.end(), [](const Curve& a, const Curve& b) { return a.n < b.n; });
    return curves;
}

CollapseReport analyze(const std::vector<ResultRecord>& records, const std::string& metric,
                       const ScalingAnsatz& init) {
    std::vector<Curve> curves = records_to_curves(records, metric);
    if (curves.size() < 2)
        throw ConfigError("analyze needs curves for at least two system sizes (metric '" +
                          metric + "' has " + std::to_string(curves.size()) + ")");
    return crossing_and_collapse(curves, init);
}

}  // namespace edc
