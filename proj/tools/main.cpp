// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0
//
// qharness CLI: marginal and transition kernels, path sampling, and the
// verification battery, with CSV or JSON output.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qharness/kernels.hpp"
#include "qharness/markov.hpp"
#include "qharness/verify.hpp"
#include "qharness/version.hpp"

namespace {

using json = nlohmann::json;

struct OutputTarget {
    std::string path;  // empty -> stdout

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream file(path, std::ios::binary);
        if (!file) {
            throw std::runtime_error("cannot open output file: " + path);
        }
        file << text;
    }
};

std::string full_precision(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string short_precision(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

/// A table plus the resolved configuration; renders to CSV (with `#`
/// metadata lines) or to JSON.
struct TableOutput {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string to_csv() const {
        std::ostringstream os;
        os << "# qharness " << qharness::kVersion << " schema "
           << qharness::kSchemaVersion << "\n";
        os << "# subcommand: " << subcommand << "\n";
        os << "#";
        for (const auto& [key, value] : config) {
            os << ' ' << key << '=' << value;
        }
        os << "\n";
        for (std::size_t c = 0; c < columns.size(); ++c) {
            os << (c ? "," : "") << columns[c];
        }
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                os << (c ? "," : "") << full_precision(row[c]);
            }
            os << "\n";
        }
        return os.str();
    }

    std::string to_json() const {
        json out;
        out["schema_version"] = qharness::kSchemaVersion;
        out["artifact"] = std::string("qharness ") + qharness::kVersion;
        out["subcommand"] = subcommand;
        json cfg = json::object();
        for (const auto& [key, value] : config) {
            cfg[key] = value;
        }
        out["config"] = cfg;
        out["columns"] = columns;
        out["rows"] = rows;
        return out.dump(2) + "\n";
    }

    std::string render(const std::string& format) const {
        return format == "json" ? to_json() : to_csv();
    }
};

int sampling_threads() {
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
    if (const char* env = std::getenv("QHARNESS_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) threads = std::min(threads, cap);
        } catch (const std::exception&) {
            throw std::domain_error(
                "QHARNESS_THREADS must be a positive integer");
        }
    }
    return threads;
}

struct CommonFlags {
    double theta = 0.0;
    double tau = 0.0;
    double q = 0.0;
    int nodes = 80;
    std::string format = "csv";
    std::string output;

    void attach(CLI::App* cmd, bool with_params = true) {
        if (with_params) {
            cmd->add_option("--theta", theta, "drift-asymmetry parameter");
            cmd->add_option("--tau", tau, "dispersion parameter (>= 0)");
            cmd->add_option("--q", q, "q parameter in [-1, 1]");
        }
        cmd->add_option("--nodes", nodes, "quadrature node count")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("-o,--output", output, "output file (default stdout)");
    }

    std::vector<std::pair<std::string, std::string>> echo() const {
        return {{"theta", full_precision(theta)},
                {"tau", full_precision(tau)},
                {"q", full_precision(q)},
                {"nodes", std::to_string(nodes)}};
    }
};

int run_marginal(const CommonFlags& flags, double t) {
    const qharness::ProcessParams params(flags.theta, flags.tau, flags.q);
    const auto kernel = qharness::transition_kernel(
        params, qharness::KernelCoordinates(0.0, 0.0, t), flags.nodes);
    const auto& measure = qharness::kernel_measure(kernel);

    TableOutput table;
    table.subcommand = "marginal";
    table.config = flags.echo();
    table.config.emplace_back("t", full_precision(t));
    table.columns = {"y", "weight"};
    const bool with_density =
        std::abs(flags.q) < 1.0 && flags.theta == 0.0 && flags.tau == 0.0;
    if (with_density) {
        table.columns.push_back("closed_form_density");
    }
    for (int i = 0; i < measure.size(); ++i) {
        std::vector<double> row = {measure.nodes[static_cast<std::size_t>(i)],
                                   measure.weights[static_cast<std::size_t>(i)]};
        if (with_density) {
            row.push_back(qharness::qbrownian_marginal_density(
                flags.q, t, measure.nodes[static_cast<std::size_t>(i)]));
        }
        table.rows.push_back(std::move(row));
    }
    OutputTarget{flags.output}.write(table.render(flags.format));
    return 0;
}

int run_kernel(const CommonFlags& flags, double x, double s, double t,
               bool free_density_column) {
    const qharness::ProcessParams params(flags.theta, flags.tau, flags.q);
    if (free_density_column && flags.q != 0.0) {
        throw std::domain_error("--free-density requires q = 0");
    }
    const auto kernel = qharness::transition_kernel(
        params, qharness::KernelCoordinates(x, s, t), flags.nodes);
    const auto& measure = qharness::kernel_measure(kernel);

    TableOutput table;
    table.subcommand = "kernel";
    table.config = flags.echo();
    table.config.emplace_back("x", full_precision(x));
    table.config.emplace_back("s", full_precision(s));
    table.config.emplace_back("t", full_precision(t));
    table.columns = {"y", "weight"};
    if (free_density_column) {
        table.columns.push_back("free_density");
        table.columns.push_back("atom");
    }
    for (int i = 0; i < measure.size(); ++i) {
        std::vector<double> row = {measure.nodes[static_cast<std::size_t>(i)],
                                   measure.weights[static_cast<std::size_t>(i)]};
        if (free_density_column) {
            row.push_back(qharness::free_density(
                flags.theta, flags.tau, x, s, t,
                measure.nodes[static_cast<std::size_t>(i)]));
            row.push_back(0.0);
        }
        table.rows.push_back(std::move(row));
    }
    if (free_density_column) {
        for (const auto& atom :
             qharness::free_atoms(flags.theta, flags.tau, x, s, t)) {
            table.rows.push_back({atom.location, atom.mass, 0.0, 1.0});
        }
    }
    OutputTarget{flags.output}.write(table.render(flags.format));
    return 0;
}

int run_sample(const CommonFlags& flags, const std::string& grid_spec,
               int paths, std::uint64_t seed) {
    std::vector<double> times;
    std::stringstream ss(grid_spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        times.push_back(std::stod(item));
    }
    const qharness::TimeGrid grid(times);
    const qharness::ProcessParams params(flags.theta, flags.tau, flags.q);
    const auto ensemble = qharness::sample_ensemble(
        params, grid, seed, paths, flags.nodes, sampling_threads());

    TableOutput table;
    table.subcommand = "sample";
    table.config = flags.echo();
    {
        std::string grid_echo;
        for (std::size_t i = 0; i < times.size(); ++i) {
            grid_echo += (i ? "," : "") + full_precision(times[i]);
        }
        table.config.emplace_back("grid", grid_echo);
        table.config.emplace_back("paths", std::to_string(paths));
        table.config.emplace_back("seed", std::to_string(seed));
    }
    table.columns = {"path"};
    for (double t : times) {
        table.columns.push_back("t=" + short_precision(t));
    }
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        std::vector<double> row = {static_cast<double>(i)};
        row.insert(row.end(), ensemble[i].values.begin(),
                   ensemble[i].values.end());
        table.rows.push_back(std::move(row));
    }
    OutputTarget{flags.output}.write(table.render(flags.format));
    return 0;
}

int run_verify(const std::string& suite, int sweep, std::uint64_t seed,
               int nodes, const std::string& output) {
    qharness::verify::SweepConfig config;
    config.sweep = sweep;
    config.seed = seed;
    config.nodes = nodes;

    std::vector<std::string> selected;
    if (suite == "all") {
        selected = qharness::verify::suite_names();
    } else {
        selected = {suite};
    }

    json report;
    report["schema_version"] = qharness::kSchemaVersion;
    report["artifact"] = std::string("qharness ") + qharness::kVersion;
    report["config"] = {{"suite", suite},
                        {"sweep", sweep},
                        {"seed", seed},
                        {"nodes", nodes}};
    bool all_pass = true;
    report["suites"] = json::array();
    for (const std::string& name : selected) {
        const auto result = qharness::verify::run_suite(name, config);
        json suite_json;
        suite_json["name"] = result.name;
        suite_json["pass"] = result.passed();
        suite_json["checks"] = json::array();
        for (const auto& check : result.checks) {
            suite_json["checks"].push_back({{"name", check.name},
                                            {"max_residual", check.max_residual},
                                            {"tolerance", check.tolerance},
                                            {"pass", check.pass}});
        }
        all_pass = all_pass && result.passed();
        report["suites"].push_back(std::move(suite_json));
    }
    report["pass"] = all_pass;
    OutputTarget{output}.write(report.dump(2) + "\n");
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-Meixner Markov processes: kernels, sampling and "
                 "verification"};
    app.require_subcommand(1);

    CommonFlags marginal_flags;
    double marginal_t = 1.0;
    auto* marginal = app.add_subcommand(
        "marginal", "marginal law at time t as (node, weight) rows");
    marginal_flags.attach(marginal);
    marginal->add_option("--t", marginal_t, "time t > 0")->required();

    CommonFlags kernel_flags;
    double kernel_x = 0.0, kernel_s = 0.0, kernel_t = 1.0;
    bool kernel_free_density = false;
    auto* kernel = app.add_subcommand(
        "kernel", "transition kernel from (x, s) to t");
    kernel_flags.attach(kernel);
    kernel->add_option("--x", kernel_x, "conditioning value X_s = x");
    kernel->add_option("--s", kernel_s, "conditioning time s >= 0");
    kernel->add_option("--t", kernel_t, "target time t > s")->required();
    kernel->add_flag("--free-density", kernel_free_density,
                     "emit the q = 0 closed-form density column and atom rows");

    CommonFlags sample_flags;
    std::string sample_grid;
    int sample_paths = 1;
    std::uint64_t sample_seed = 0;
    auto* sample = app.add_subcommand(
        "sample", "sample Markov paths on a time grid (one row per path)");
    sample_flags.attach(sample);
    sample->add_option("--grid", sample_grid,
                       "comma-separated strictly increasing times")
        ->required();
    sample->add_option("--paths", sample_paths, "number of paths")
        ->check(CLI::PositiveNumber);
    sample->add_option("--seed", sample_seed, "master seed");

    std::string verify_suite = "all";
    int verify_sweep = 50;
    std::uint64_t verify_seed = 0x51ab5eedULL;
    int verify_nodes = 80;
    std::string verify_output;
    auto* verify = app.add_subcommand(
        "verify", "run the verification battery and emit a JSON report");
    verify->add_option("--suite", verify_suite, "suite to run")
        ->check(CLI::IsMember(
            {"all", "ck", "martingale", "harness", "qvar", "identities",
             "binomial"}));
    verify->add_option("--sweep", verify_sweep,
                       "random parameter draws per suite")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", verify_seed, "sweep seed");
    verify->add_option("--nodes", verify_nodes, "quadrature node count")
        ->check(CLI::PositiveNumber);
    verify->add_option("-o,--output", verify_output,
                       "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (marginal->parsed()) {
            return run_marginal(marginal_flags, marginal_t);
        }
        if (kernel->parsed()) {
            return run_kernel(kernel_flags, kernel_x, kernel_s, kernel_t,
                              kernel_free_density);
        }
        if (sample->parsed()) {
            return run_sample(sample_flags, sample_grid, sample_paths,
                              sample_seed);
        }
        if (verify->parsed()) {
            return run_verify(verify_suite, verify_sweep, verify_seed,
                              verify_nodes, verify_output);
        }
    } catch (const std::domain_error& e) {
        std::cerr << "qharness: invalid arguments: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "qharness: invalid arguments: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qharness: numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
