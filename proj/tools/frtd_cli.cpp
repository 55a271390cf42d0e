// frtd: FRTD node embeddings, roles, alignment, and Gibbs randomization.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "frtd/alignment.hpp"
#include "frtd/distance.hpp"
#include "frtd/frtd.hpp"
#include "frtd/graph.hpp"
#include "frtd/io.hpp"
#include "frtd/parallel.hpp"
#include "frtd/randomize.hpp"
#include "frtd/roles.hpp"
#include "frtd/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::vector<double> parse_betas(const std::string& spec) {
    std::vector<double> betas;
    if (spec.find(':') != std::string::npos) {
        double lo, hi;
        int count;
        char c1, c2;
        std::istringstream ss(spec);
        if (!(ss >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
            throw CLI::ValidationError("--betas", "expected lo:hi:count or a comma list");
        for (int i = 0; i < count; ++i)
            betas.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    } else {
        std::istringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) betas.push_back(std::stod(tok));
    }
    return betas;
}

std::map<std::string, std::string> load_metadata_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw frtd::DataError("cannot open metadata: " + path);
    std::map<std::string, std::string> meta;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw frtd::DataError("bad metadata line: " + line);
        meta[line.substr(0, comma)] = line.substr(comma + 1);
    }
    return meta;
}

// Writes the resolved invocation next to the run's outputs so any run can be
// replayed byte-identically.
void write_manifest(const fs::path& dir, const std::vector<std::string>& argv) {
    json manifest;
    manifest["artifact_version"] = kVersion;
    manifest["argv"] = argv;
    fs::create_directories(dir);
    frtd::atomic_write(dir / "run-manifest.json", manifest.dump(2) + "\n");
}

struct CommonOpts {
    int threads = 0;
    std::string output_dir = ".";
};

}  // namespace

int run(const std::vector<std::string>& raw_args) {
    CLI::App app{"first-return-time-distribution graph toolkit"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config");
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--threads", common.threads, "worker threads (default: logical cores)");
    app.add_option("--output-dir", common.output_dir, "directory for outputs and manifest");

    // compute
    auto* compute = app.add_subcommand("compute", "compute FRTD embeddings");
    compute->fallthrough();
    std::string in_path, out_path = "frtd.csv";
    int max_steps = 50;
    bool directed = false;
    double alpha = 0.15;
    compute->add_option("--input", in_path, "edge list")->required();
    compute->add_option("--max-steps", max_steps, "truncation K");
    compute->add_flag("--directed", directed, "directed mode with teleportation");
    compute->add_option("--alpha", alpha, "teleportation probability");
    compute->add_option("--output", out_path, "output CSV");

    // verify
    auto* verify = app.add_subcommand("verify", "iterative vs spectral FRTD discrepancy");
    verify->fallthrough();
    std::string v_in;
    int v_steps = 50;
    verify->add_option("--input", v_in, "edge list")->required();
    verify->add_option("--max-steps", v_steps, "truncation K");

    // equiv
    auto* equiv = app.add_subcommand("equiv", "FRTD-equivalence verdict for a node pair");
    equiv->fallthrough();
    std::string eq_a, eq_b;
    int node_a = 0, node_b = 0;
    double eq_tol = 1e-8;
    equiv->add_option("--input-a", eq_a, "edge list A")->required();
    equiv->add_option("--input-b", eq_b, "edge list B")->required();
    equiv->add_option("--node-a", node_a, "node index in A")->required();
    equiv->add_option("--node-b", node_b, "node index in B")->required();
    equiv->add_option("--tol", eq_tol, "matching tolerance");

    // dist
    auto* dist = app.add_subcommand("dist", "FRTD distances between two graphs");
    dist->fallthrough();
    std::string d_a, d_b, d_pairwise;
    int d_steps = 50;
    bool d_graph = false;
    dist->add_option("--input-a", d_a, "edge list A")->required();
    dist->add_option("--input-b", d_b, "edge list B")->required();
    dist->add_option("--max-steps", d_steps, "truncation K");
    dist->add_option("--pairwise", d_pairwise, "write the pairwise TV matrix to this CSV");
    dist->add_flag("--graph-distance", d_graph, "print the identity-pairing graph distance");

    // roles
    auto* roles = app.add_subcommand("roles", "spectral clustering of FRTDs into roles");
    roles->fallthrough();
    std::string r_in, r_meta, r_out = "roles.csv";
    int r_k = 3, r_steps = 50;
    std::uint64_t r_seed = 0;
    roles->add_option("--input", r_in, "edge list")->required();
    roles->add_option("--k", r_k, "cluster count");
    roles->add_option("--max-steps", r_steps, "truncation K");
    roles->add_option("--seed", r_seed, "clustering seed");
    roles->add_option("--metadata", r_meta, "two-column label,category CSV");
    roles->add_option("--output", r_out, "output CSV");

    // align
    auto* align = app.add_subcommand("align", "align two graphs");
    align->fallthrough();
    std::string a_a, a_b, a_method = "fugal-frt", a_truth, a_out;
    double a_mu = 1.0;
    int a_steps = 50, a_iters = 15;
    align->add_option("--input-a", a_a, "edge list A")->required();
    align->add_option("--input-b", a_b, "edge list B")->required();
    align->add_option("--method", a_method, "lap | fugal-frt | fugal-lite");
    align->add_option("--mu", a_mu, "linear guidance weight");
    align->add_option("--max-steps", a_steps, "truncation K");
    align->add_option("--iterations", a_iters, "Frank-Wolfe iteration cap");
    align->add_option("--ground-truth", a_truth, "node_a,node_b CSV of true matches");
    align->add_option("--output", a_out, "write the matching as node_a,node_b CSV");

    // bench-align
    auto* bench = app.add_subcommand("bench-align", "corruption benchmark");
    bench->fallthrough();
    std::string b_in, b_methods = "lap,fugal-frt", b_out = "results.csv";
    double b_noise = 0.05, b_mu = 1.0;
    int b_trials = 5, b_steps = 50, b_iters = 15;
    std::uint64_t b_seed = 0;
    bench->add_option("--input", b_in, "edge list")->required();
    bench->add_option("--noise", b_noise, "edge removal fraction");
    bench->add_option("--trials", b_trials, "trial count");
    bench->add_option("--methods", b_methods, "comma list of methods");
    bench->add_option("--seed", b_seed, "master seed");
    bench->add_option("--max-steps", b_steps, "truncation K");
    bench->add_option("--mu", b_mu, "guidance weight");
    bench->add_option("--iterations", b_iters, "Frank-Wolfe iteration cap");
    bench->add_option("--output", b_out, "output CSV");

    // randomize
    auto* randomize = app.add_subcommand("randomize", "Gibbs-ensemble graph randomization");
    randomize->fallthrough();
    std::string z_in, z_betas = "0:70:50";
    long long z_burn = 200000;
    int z_samples = 500, z_interval = 10, z_swap = 100, z_trunc = 14;
    double z_edge_prob = 0.4, z_alpha = 0.15;
    bool z_directed = false, z_degree = false, z_emit = false;
    std::uint64_t z_seed = 0;
    randomize->add_option("--input", z_in, "edge list")->required();
    randomize->add_option("--betas", z_betas, "lo:hi:count or comma list");
    randomize->add_option("--burn-in", z_burn, "burn-in proposal steps per chain");
    randomize->add_option("--samples", z_samples, "samples per chain");
    randomize->add_option("--sample-interval", z_interval, "steps between samples");
    randomize->add_option("--swap-interval", z_swap, "steps between swap rounds");
    randomize->add_option("--truncate", z_trunc, "FRTD truncation for d(G,G')");
    randomize->add_option("--edge-move-prob", z_edge_prob, "edge-move proposal probability");
    randomize->add_flag("--directed", z_directed, "directed mode");
    randomize->add_flag("--degree-preserving", z_degree, "degree-preserving proposals only");
    randomize->add_flag("--emit-graphs", z_emit, "write sampled graphs as edge lists");
    randomize->add_option("--alpha", z_alpha, "teleportation probability");
    randomize->add_option("--seed", z_seed, "master seed");

    std::vector<std::string> cli_args(raw_args.begin() + 1, raw_args.end());
    try {
        std::vector<const char*> argv_c;
        argv_c.push_back("frtd");
        for (const auto& s : cli_args) argv_c.push_back(s.c_str());
        app.parse(static_cast<int>(argv_c.size()), argv_c.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (common.threads > 0) frtd::thread_count() = common.threads;
    const fs::path out_dir(common.output_dir);

    try {
        write_manifest(out_dir, raw_args);

        if (*compute) {
            frtd::Graph g = frtd::load_edge_list(in_path, directed);
            if (directed) {
                auto [fwd, rev] = frtd::compute_frtd_directed(g, max_steps, {alpha});
                fs::path base = out_dir / out_path;
                std::string stem = base.string();
                if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv")
                    stem = stem.substr(0, stem.size() - 4);
                frtd::atomic_write(stem + ".fwd.csv", frtd::frtd_csv(fwd));
                frtd::atomic_write(stem + ".rev.csv", frtd::frtd_csv(rev));
            } else {
                frtd::FrtdMatrix f = frtd::compute_frtd(g, max_steps);
                frtd::atomic_write(out_dir / out_path, frtd::frtd_csv(f));
            }
            frtd::atomic_write(out_dir / "labels.csv", frtd::label_map_csv(g));
        } else if (*verify) {
            frtd::Graph g = frtd::load_edge_list(v_in, false);
            frtd::FrtdMatrix iterative = frtd::compute_frtd(g, v_steps);
            auto sd = frtd::decompose(g);
            double gap = 0.0;
            for (int i = 0; i < g.n; ++i) {
                Eigen::VectorXd spectral = frtd::frtd_from_spectrum(sd, i, v_steps);
                gap = std::max(gap,
                               (iterative.values.row(i).transpose() - spectral).cwiseAbs().maxCoeff());
            }
            std::cout << "max |iterative - spectral| = " << frtd::format_double(gap) << "\n";
        } else if (*equiv) {
            frtd::Graph ga = frtd::load_edge_list(eq_a, false);
            frtd::Graph gb = frtd::load_edge_list(eq_b, false);
            auto sa = frtd::decompose(ga);
            auto sb = frtd::decompose(gb);
            auto v = frtd::nodes_frtd_equivalent(sa, node_a, sb, node_b, eq_tol);
            json out = {{"cospectral", v.cospectral},
                        {"mass_matched", v.mass_matched},
                        {"equivalent", v.equivalent},
                        {"max_eigenvalue_gap", v.max_eigenvalue_gap},
                        {"max_mass_gap", v.max_mass_gap}};
            std::cout << out.dump(2) << "\n";
        } else if (*dist) {
            frtd::Graph ga = frtd::load_edge_list(d_a, false);
            frtd::Graph gb = frtd::load_edge_list(d_b, false);
            frtd::FrtdMatrix fa = frtd::compute_frtd(ga, d_steps);
            frtd::FrtdMatrix fb = frtd::compute_frtd(gb, d_steps);
            if (!d_pairwise.empty()) {
                auto dm = frtd::pairwise_distances(fa, fb);
                frtd::atomic_write(out_dir / d_pairwise, frtd::distance_csv(dm));
            }
            if (d_graph)
                std::cout << "graph_distance = "
                          << frtd::format_double(frtd::graph_distance(fa, fb)) << "\n";
        } else if (*roles) {
            frtd::Graph g = frtd::load_edge_list(r_in, false);
            frtd::FrtdMatrix f = frtd::compute_frtd(g, r_steps);
            auto dm = frtd::pairwise_distances(f, f);
            auto ra = frtd::spectral_cluster(dm, r_k, r_seed);
            std::string csv = "index,label,cluster\n";
            for (int i = 0; i < g.n; ++i)
                csv += std::to_string(i) + "," + g.node_labels[i] + "," +
                       std::to_string(ra.labels[i]) + "\n";
            frtd::atomic_write(out_dir / r_out, csv);
            if (!r_meta.empty()) {
                auto meta = load_metadata_csv(r_meta);
                auto report = frtd::cluster_report(ra, g.node_labels, meta);
                std::cout << "category";
                for (int c = 0; c < ra.k; ++c) std::cout << ",cluster" << c;
                std::cout << "\n";
                for (const auto& [cat, counts] : report.category_counts) {
                    std::cout << cat;
                    for (int v : counts) std::cout << "," << v;
                    std::cout << "\n";
                }
            }
        } else if (*align) {
            frtd::Graph ga = frtd::load_edge_list(a_a, false);
            frtd::Graph gb = frtd::load_edge_list(a_b, false);
            frtd::AlignmentResult res;
            frtd::DistanceMatrix cost;
            if (a_method == "lap" || a_method == "fugal-frt") {
                auto fa = frtd::embedding_for_alignment(ga, a_steps);
                auto fb = frtd::embedding_for_alignment(gb, a_steps);
                cost = frtd::pairwise_distances(fa, fb);
            } else if (a_method == "fugal-lite") {
                cost = frtd::fugal_lite_cost(ga, gb);
            } else {
                std::cerr << "unknown method: " << a_method << "\n";
                return 1;
            }
            if (a_method == "lap") {
                res = frtd::solve_lap(cost);
            } else {
                frtd::AlignmentProblem problem{&ga, &gb, cost, a_mu};
                res = frtd::solve_fugal_frt(problem, a_iters);
            }
            if (!a_truth.empty()) {
                std::ifstream tin(a_truth);
                if (!tin) throw frtd::DataError("cannot open ground truth: " + a_truth);
                std::map<std::string, int> idx_a, idx_b;
                for (int i = 0; i < ga.n; ++i) idx_a[ga.node_labels[i]] = i;
                for (int i = 0; i < gb.n; ++i) idx_b[gb.node_labels[i]] = i;
                std::vector<int> truth(ga.n, -1);
                std::string line;
                while (std::getline(tin, line)) {
                    if (line.empty() || line == "node_a,node_b" || line[0] == '#') continue;
                    auto comma = line.find(',');
                    if (comma == std::string::npos)
                        throw frtd::DataError("bad ground-truth line: " + line);
                    truth.at(idx_a.at(line.substr(0, comma))) = idx_b.at(line.substr(comma + 1));
                }
                res.accuracy = frtd::alignment_accuracy(res.permutation, truth);
            }
            std::cout << "objective = " << frtd::format_double(res.objective) << "\n";
            if (res.accuracy >= 0.0)
                std::cout << "accuracy = " << frtd::format_double(res.accuracy) << "\n";
            std::cout << "runtime_seconds = " << frtd::format_double(res.runtime_seconds) << "\n";
            if (!a_out.empty()) {
                std::string csv = "node_a,node_b\n";
                for (int i = 0; i < ga.n; ++i)
                    csv += ga.node_labels[i] + "," + gb.node_labels[res.permutation[i]] + "\n";
                frtd::atomic_write(out_dir / a_out, csv);
            }
        } else if (*bench) {
            frtd::Graph g = frtd::load_edge_list(b_in, false);
            std::vector<std::string> methods;
            std::istringstream ms(b_methods);
            std::string tok;
            while (std::getline(ms, tok, ',')) methods.push_back(tok);
            auto rows = frtd::benchmark(g, b_noise, b_trials, methods, b_seed, b_steps, b_mu,
                                        b_iters);
            // the CSV artifact must replay byte-identically, so wall-clock
            // runtimes go to stdout only
            std::string csv = "method,mean_accuracy,std_accuracy\n";
            for (const auto& row : rows) {
                csv += row.method + "," + frtd::format_double(row.mean_accuracy) + "," +
                       frtd::format_double(row.std_accuracy) + "\n";
                std::cout << row.method << ": accuracy " << frtd::format_double(row.mean_accuracy)
                          << " +/- " << frtd::format_double(row.std_accuracy) << ", runtime "
                          << frtd::format_double(row.mean_runtime) << " +/- "
                          << frtd::format_double(row.std_runtime) << " s\n";
            }
            frtd::atomic_write(out_dir / b_out, csv);
        } else if (*randomize) {
            frtd::Graph g = frtd::load_edge_list(z_in, z_directed);
            frtd::GibbsConfig cfg;
            cfg.betas = parse_betas(z_betas);
            cfg.burn_in = z_burn;
            cfg.samples_per_chain = z_samples;
            cfg.sample_interval = z_interval;
            cfg.swap_interval = z_swap;
            cfg.truncation = z_trunc;
            cfg.edge_move_probability = z_edge_prob;
            cfg.degree_preserving_only = z_degree;
            cfg.directed = z_directed;
            cfg.alpha = z_alpha;
            cfg.seed = z_seed;
            auto run = frtd::run_ensemble(g, cfg);

            std::string thermo = "beta,mean_distance,var_distance,specific_heat,entropy\n";
            std::string statistics = "beta,kind,name,value\n";
            for (const auto& bs : run.statistics.per_beta) {
                thermo += frtd::format_double(bs.beta) + "," +
                          frtd::format_double(bs.mean_distance) + "," +
                          frtd::format_double(bs.var_distance) + "," +
                          frtd::format_double(bs.specific_heat) + "," +
                          frtd::format_double(bs.entropy) + "\n";
                for (const auto& [name, value] : bs.node_correlation_medians)
                    statistics += frtd::format_double(bs.beta) + ",node_correlation," + name +
                                  "," + frtd::format_double(value) + "\n";
                for (const auto& [name, value] : bs.global_ratios)
                    statistics += frtd::format_double(bs.beta) + ",global_ratio," + name + "," +
                                  frtd::format_double(value) + "\n";
            }
            frtd::atomic_write(out_dir / "thermo.csv", thermo);
            frtd::atomic_write(out_dir / "statistics.csv", statistics);
            if (z_emit) {
                for (std::size_t b = 0; b < run.samples.size(); ++b) {
                    fs::path dir = out_dir / ("beta-" + std::to_string(b));
                    fs::create_directories(dir);
                    for (std::size_t s = 0; s < run.samples[b].size(); ++s) {
                        std::string text;
                        for (auto [u, v] : run.samples[b][s].edges)
                            text += std::to_string(u) + " " + std::to_string(v) + "\n";
                        char name[32];
                        std::snprintf(name, sizeof(name), "sample-%05zu.edges", s);
                        frtd::atomic_write(dir / name, text);
                    }
                }
            }
        }
    } catch (const frtd::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args);
}
