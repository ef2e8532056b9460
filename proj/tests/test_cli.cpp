// End-to-end checks of the command-line surface: formats, determinism and
// exit codes. Invoked by ctest with the binary path as argv[1].

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& command) {
    const std::string path = "/tmp/qharness_cli_test_out.txt";
    const int status =
        std::system((command + " > " + path + " 2>/dev/null").c_str());
    std::ifstream file(path, std::ios::binary);
    std::stringstream buffer;
    buffer << file.rdbuf();
    int code = -1;
    if (WIFEXITED(status)) code = WEXITSTATUS(status);
    return {code, buffer.str()};
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        out.push_back(line);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <path-to-qharness>\n";
        return 1;
    }
    const std::string cli = argv[1];

    // q = -1 marginal: exactly two rows at +-sqrt(t) with mass 1/2.
    {
        const auto result = run(cli + " marginal --q -1 --t 4");
        check(result.exit_code == 0, "marginal exit code");
        const auto rows = data_lines(result.output);
        check(rows.size() == 3, "marginal q=-1 emits header + two rows");
        check(rows[0] == "y,weight", "marginal header");
        for (int r : {1, 2}) {
            std::stringstream ss(rows[static_cast<std::size_t>(r)]);
            std::string node, weight;
            std::getline(ss, node, ',');
            std::getline(ss, weight, ',');
            check(std::abs(std::stod(node) - (r == 1 ? -2.0 : 2.0)) < 1e-12,
                  "atom at +-2");
            check(std::abs(std::stod(weight) - 0.5) < 1e-12, "atom mass 1/2");
        }
    }

    // JSON output round-trips through the documented schema.
    {
        const auto result =
            run(cli + " marginal --q 0.5 --t 1 --nodes 12 --format json");
        check(result.exit_code == 0, "json marginal exit code");
        const auto parsed = nlohmann::json::parse(result.output);
        check(parsed["schema_version"].get<int>() == 1, "schema version");
        check(parsed["columns"].size() == 3,
              "closed-form density column present for theta=tau=0, |q|<1");
        check(parsed["rows"].size() == 12, "one row per node");
        double total = 0.0;
        for (const auto& row : parsed["rows"]) {
            total += row[1].get<double>();
        }
        check(std::abs(total - 1.0) < 1e-10, "weights sum to 1");
    }

    // Gaussian marginal at q = 1: emitted nodes/weights carry moments
    // (0, 1, 0, 3) for k = 1..4.
    {
        const auto result =
            run(cli + " marginal --theta 0 --tau 0 --q 1 --t 1 --format json");
        check(result.exit_code == 0, "gaussian marginal exit code");
        const auto parsed = nlohmann::json::parse(result.output);
        double m[5] = {};
        for (const auto& row : parsed["rows"]) {
            const double y = row[0].get<double>();
            const double w = row[1].get<double>();
            double p = 1.0;
            for (int k = 0; k <= 4; ++k) {
                m[k] += w * p;
                p *= y;
            }
        }
        check(std::abs(m[0] - 1.0) < 1e-10, "gaussian m0");
        check(std::abs(m[1]) < 1e-10, "gaussian m1");
        check(std::abs(m[2] - 1.0) < 1e-10, "gaussian m2");
        check(std::abs(m[3]) < 1e-9, "gaussian m3");
        check(std::abs(m[4] - 3.0) < 1e-9, "gaussian m4");
    }

    // Kernel: mass column sums to 1; q=0 free-density column and atom rows.
    {
        const auto result = run(cli +
                                " kernel --q 0 --theta 2 --x 0 --s 0 --t 1 "
                                "--free-density --format json");
        check(result.exit_code == 0, "kernel exit code");
        const auto parsed = nlohmann::json::parse(result.output);
        double total = 0.0;
        bool saw_atom = false;
        for (const auto& row : parsed["rows"]) {
            total += row[1].get<double>();
            if (row[3].get<double>() == 1.0) {
                saw_atom = true;
                check(std::abs(row[0].get<double>() + 0.5) < 1e-9,
                      "atom location -t/theta");
                check(std::abs(row[1].get<double>() - 0.75) < 1e-9,
                      "atom mass 0.75");
            }
        }
        check(saw_atom, "atom row flagged");
        check(std::abs(total - 1.0 - 0.75) < 1e-8,
              "node weights sum to 1 plus the flagged atom mass");
    }

    // Determinism: identical bytes across runs and thread counts.
    {
        const std::string cmd =
            cli + " sample --grid 0.5,1,2 --paths 6 --seed 7 --nodes 40";
        const auto a = run(cmd);
        const auto b = run(cmd);
        const auto c = run("QHARNESS_THREADS=1 " + cmd);
        const auto d = run("QHARNESS_THREADS=4 " + cmd);
        check(a.exit_code == 0, "sample exit code");
        check(a.output == b.output, "sample determinism across runs");
        check(c.output == d.output, "sample determinism across thread caps");
        check(a.output == c.output, "sample determinism vs default threads");
        const auto other =
            run(cli + " sample --grid 0.5,1,2 --paths 6 --seed 8 --nodes 40");
        check(a.output != other.output, "seed changes the draw");
    }

    // q = -1 sample values sit on +-sqrt(column time).
    {
        const auto result =
            run(cli + " sample --q -1 --grid 1,4 --paths 4 --seed 3");
        const auto rows = data_lines(result.output);
        check(rows.size() == 5, "sample emits header + one row per path");
        for (std::size_t i = 1; i < rows.size(); ++i) {
            std::stringstream ss(rows[i]);
            std::string cell;
            std::getline(ss, cell, ',');
            std::getline(ss, cell, ',');
            check(std::abs(std::abs(std::stod(cell)) - 1.0) < 1e-12,
                  "|X_1| = 1 at q=-1");
            std::getline(ss, cell, ',');
            check(std::abs(std::abs(std::stod(cell)) - 2.0) < 1e-12,
                  "|X_4| = 2 at q=-1");
        }
    }

    // Verify subcommand: report schema and exit codes.
    {
        const auto result = run(cli + " verify --suite binomial");
        check(result.exit_code == 0, "verify binomial passes");
        const auto parsed = nlohmann::json::parse(result.output);
        check(parsed["pass"].get<bool>(), "report pass flag");
        check(parsed["schema_version"].get<int>() == 1,
              "report schema version");
        check(!parsed["suites"].empty(), "report lists suites");
        for (const auto& suite : parsed["suites"]) {
            for (const auto& item : suite["checks"]) {
                check(item.contains("max_residual") &&
                          item.contains("tolerance") && item.contains("pass"),
                      "check entries carry residual, tolerance, pass");
            }
        }
    }

    // The whole battery wires up and passes on a reduced sweep.
    {
        const auto result = run(cli + " verify --suite all --sweep 10");
        check(result.exit_code == 0, "verify all passes");
        const auto parsed = nlohmann::json::parse(result.output);
        check(parsed["suites"].size() == 6, "all six suites present");
        check(parsed["pass"].get<bool>(), "battery pass flag");
    }

    // Invalid flags exit 2; numerical domain violations exit 2.
    {
        check(run(cli + " marginal --t 1 --format yaml").exit_code == 2,
              "bad format rejected");
        check(run(cli + " marginal").exit_code == 2, "missing --t rejected");
        check(run(cli + " marginal --t -1").exit_code == 2,
              "negative t rejected");
        check(run(cli + " sample --grid 2,1 --paths 1").exit_code == 2,
              "non-increasing grid rejected");
        check(run(cli + " nonsense").exit_code == 2, "unknown subcommand");
        check(run(cli + " --help").exit_code == 0, "--help exits 0");
    }

    if (failures == 0) {
        std::cout << "test_cli: all checks passed\n";
        return 0;
    }
    std::cout << "test_cli: " << failures << " checks failed\n";
    return 1;
}
