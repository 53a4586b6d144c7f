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

// Command-line driver: realization sweeps over encoding-decoding circuits,
// closed-form curve evaluation, commutant-basis generation, and finite-size
// scaling analysis.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "edc/commutant.hpp"
#include "edc/decoder.hpp"
#include "edc/harness.hpp"
#include "edc/theory.hpp"

namespace {

using edc::ExperimentConfig;

struct SweepFlags {
    ExperimentConfig cfg;
    std::string ensemble = "clifford";
    std::string alpha_range;  // "start:stop:count", inclusive endpoints
    std::string metrics = "fidelity";
};

// Replaces "--config FILE" with flags derived from the file's key=value
// lines ('#' comments allowed). Keys already given on the command line are
// skipped, so explicit flags override the file.
void expand_config(std::vector<std::string>& args) {
    for (size_t i = 0; i < args.size();) {
        std::string path;
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw edc::ConfigError("--config needs a file argument");
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
        } else {
            ++i;
            continue;
        }
        std::ifstream f(path);
        if (!f) throw edc::ConfigError("cannot open config file: " + path);
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string line;
        while (std::getline(f, line)) {
            if (size_t h = line.find('#'); h != std::string::npos) line.resize(h);
            line = trim(line);
            if (line.empty()) continue;
            size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw edc::ConfigError("config line is not key=value: " + line);
            std::string flag = "--" + trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            bool given = false;
            for (const std::string& a : args)
                if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
            if (given) continue;
            args.push_back(flag);
            if (!value.empty()) args.push_back(value);
        }
    }
}

void add_sweep_options(CLI::App* sub, SweepFlags& f, bool fixed_ensemble) {
    static std::string config_doc;  // handled by expand_config before parsing
    sub->add_option("--config", config_doc, "flat key=value file; flags override");
    sub->add_option("--seed", f.cfg.seed, "master RNG seed")->required();
    sub->add_option("--n", f.cfg.n_list, "system sizes N")->delimiter(',')->required();
    sub->add_option("--rate", f.cfg.rate, "code rate k/N")->capture_default_str();
    sub->add_option("--alpha", f.cfg.alpha_grid, "error strengths")->delimiter(',');
    sub->add_option("--alpha-range", f.alpha_range, "grid start:stop:count");
    sub->add_option("--realizations", f.cfg.realizations, "circuits per (N, alpha)")
        ->capture_default_str();
    sub->add_option("--metrics", f.metrics,
                    "comma list from fidelity,born_prob,sre_2,sre_3,pe_2,pe_3,class_stats")
        ->capture_default_str();
    sub->add_option("--output", f.cfg.output_path, "CSV path (JSON sidecar alongside)");
    sub->add_option("--threads", f.cfg.threads, "worker threads")->capture_default_str();
    if (!fixed_ensemble)
        sub->add_option("--ensemble", f.ensemble, "clifford or haar")->capture_default_str();
}

void finish_sweep(SweepFlags& f) {
    if (f.ensemble == "clifford")
        f.cfg.ensemble = edc::Ensemble::Clifford;
    else if (f.ensemble == "haar")
        f.cfg.ensemble = edc::Ensemble::Haar;
    else
        throw edc::ConfigError("unknown ensemble: " + f.ensemble);
    if (!f.alpha_range.empty()) {
        double a0, a1;
        int count;
        if (std::sscanf(f.alpha_range.c_str(), "%lf:%lf:%d", &a0, &a1, &count) != 3 || count < 1)
            throw edc::ConfigError("--alpha-range expects start:stop:count");
        for (int i = 0; i < count; ++i)
            f.cfg.alpha_grid.push_back(count == 1 ? a0 : a0 + (a1 - a0) * i / (count - 1));
    }
    f.cfg.metrics.clear();
    std::istringstream ms(f.metrics);
    std::string tok;
    while (std::getline(ms, tok, ','))
        if (!tok.empty()) f.cfg.metrics.push_back(tok);

    std::vector<edc::ResultRecord> records = edc::run(f.cfg);
    if (f.cfg.output_path.empty()) std::cout << edc::to_csv(records);
}

void run_theory_eval(const std::string& quantity, size_t n, double rate,
                     const std::vector<double>& alphas) {
    size_t k = size_t(std::lround(rate * double(n)));
    std::cout << "quantity,N,k,alpha,value\n";
    for (double a : alphas) {
        edc::CodeParameters p{n, k, a};
        double v;
        if (quantity == "annealed-fidelity")
            v = edc::annealed_fidelity(p).value;
        else if (quantity == "sre2-haar")
            v = edc::annealed_sre_haar(p, 2);
        else if (quantity == "sre3-haar")
            v = edc::annealed_sre_haar(p, 3);
        else if (quantity == "sre2-clifford")
            v = edc::annealed_sre2_clifford(p);
        else if (quantity == "pe2")
            v = edc::annealed_pe(p, 2);
        else if (quantity == "pe3")
            v = edc::annealed_pe(p, 3);
        else if (quantity == "critical-alpha")
            v = edc::critical_alpha(rate);
        else if (quantity == "fluct-haar")
            v = edc::fidelity_fluctuations(p, edc::Ensemble::Haar).dm2;
        else if (quantity == "fluct-clifford")
            v = edc::fidelity_fluctuations(p, edc::Ensemble::Clifford).dm2;
        else
            throw edc::ConfigError("unknown quantity: " + quantity);
        std::printf("%s,%zu,%zu,%.17g,%.17g\n", quantity.c_str(), n, k, a, v);
    }
}

void run_commutant_gen(int replicas, bool materialize, bool permutations) {
    edc::CommutantBasis basis = permutations ? edc::generate_permutation_basis(replicas)
                                             : edc::generate_commutant(replicas, materialize);
    std::cout << "class,count\n";
    for (const edc::CommutantClass& c : basis.classes)
        std::cout << c.name << "," << c.count << "\n";
    std::cout << "total," << basis.total << "\n";
    if (!permutations)
        std::cout << "formula," << edc::cardinality_formula(replicas) << "\n";
    if (materialize) std::cout << "materialized," << basis.ops.size() << "\n";
}

void run_analyze(const std::string& input, const std::string& metric, double alpha_c0,
                 double nu0, const std::string& output) {
    std::ifstream f(input, std::ios::binary);
    if (!f) throw edc::ConfigError("cannot open input file: " + input);
    std::stringstream buf;
    buf << f.rdbuf();
    std::vector<edc::ResultRecord> records = edc::parse_csv(buf.str());
    edc::CollapseReport rep = edc::analyze(records, metric, {alpha_c0, nu0});

    nlohmann::json j;
    j["metric"] = metric;
    j["alpha_c"] = rep.alpha_c;
    j["nu"] = rep.nu;
    j["quality"] = rep.quality;
    j["crossings"] = nlohmann::json::array();
    for (const edc::Crossing& c : rep.crossings)
        j["crossings"].push_back({{"n_small", c.n_small},
                                  {"n_large", c.n_large},
                                  {"alpha_x", c.alpha_x},
                                  {"found", c.found}});
    if (output.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw edc::ConfigError("cannot open output file: " + output);
        out << j.dump(2) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"encoding-decoding circuit simulator and analysis toolkit"};
    app.require_subcommand(1);

    SweepFlags forced, cls, born, haar;

    CLI::App* sub = app.add_subcommand("run-forced", "post-selected syndrome sweep");
    add_sweep_options(sub, forced, false);
    sub->add_option("--syndrome", forced.cfg.forced_syndrome, "forced ancilla bit pattern");
    sub->callback([&] { finish_sweep(forced); });

    sub = app.add_subcommand("run-class", "fixed syndrome-class sweep (Clifford)");
    add_sweep_options(sub, cls, true);
    sub->add_option("--ell", cls.cfg.syndrome_ell, "syndrome class (1 or 2)")
        ->capture_default_str();
    cls.cfg.protocol = edc::Protocol::Class;
    sub->callback([&] { finish_sweep(cls); });

    sub = app.add_subcommand("run-born", "Born-rule weighted sweep");
    add_sweep_options(sub, born, false);
    sub->add_option("--draws", born.cfg.born_draws,
                    "syndrome samples per circuit (0: exhaustive weighting)")
        ->capture_default_str();
    born.cfg.protocol = edc::Protocol::Born;
    sub->callback([&] { finish_sweep(born); });

    sub = app.add_subcommand("run-haar", "post-selected sweep with Haar encoders");
    add_sweep_options(sub, haar, true);
    sub->add_option("--syndrome", haar.cfg.forced_syndrome, "forced ancilla bit pattern");
    haar.ensemble = "haar";
    sub->callback([&] { finish_sweep(haar); });

    std::string quantity = "annealed-fidelity";
    size_t theory_n = 16;
    double theory_rate = 0.5;
    std::vector<double> theory_alphas;
    sub = app.add_subcommand("theory-eval", "closed-form curve evaluation");
    sub->add_option("--quantity", quantity,
                    "annealed-fidelity | sre2-haar | sre3-haar | sre2-clifford | pe2 | pe3 | "
                    "critical-alpha | fluct-haar | fluct-clifford")
        ->capture_default_str();
    sub->add_option("--n", theory_n, "system size")->capture_default_str();
    sub->add_option("--rate", theory_rate, "code rate")->capture_default_str();
    sub->add_option("--alpha", theory_alphas, "error strengths")->delimiter(',')->required();
    sub->callback([&] { run_theory_eval(quantity, theory_n, theory_rate, theory_alphas); });

    int replicas = 4;
    bool materialize = false, permutations = false;
    sub = app.add_subcommand("commutant-gen", "replica commutant basis census");
    sub->add_option("--replicas", replicas, "replica count (4, 6, or 8)")->capture_default_str();
    sub->add_flag("--materialize", materialize, "store all elements (n = 8: several GB-scale)");
    sub->add_flag("--permutations", permutations, "permutation (unitary-group) basis instead");
    sub->callback([&] { run_commutant_gen(replicas, materialize, permutations); });

    std::string in_path, metric = "fidelity", report_path;
    double alpha_c0 = 1.14, nu0 = 1.0;
    sub = app.add_subcommand("analyze", "crossing and collapse fit over a result CSV");
    sub->add_option("--input", in_path, "CSV produced by a run-* subcommand")->required();
    sub->add_option("--metric", metric, "metric column to fit")->capture_default_str();
    sub->add_option("--alpha-c0", alpha_c0, "initial critical point")->capture_default_str();
    sub->add_option("--nu0", nu0, "initial exponent")->capture_default_str();
    sub->add_option("--output", report_path, "JSON report path (default: stdout)");
    sub->callback([&] { run_analyze(in_path, metric, alpha_c0, nu0, report_path); });

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        expand_config(args);
        std::reverse(args.begin(), args.end());  // CLI11's vector overload wants reversed args
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    } catch (const edc::ResourceError& e) {
        std::cerr << "budget violation: " << e.what() << "\n";
        return 2;
    } catch (const edc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
