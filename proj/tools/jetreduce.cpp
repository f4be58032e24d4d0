#include "jetreduce/family.hpp"
#include "jetreduce/fixture.hpp"
#include "jetreduce/parse.hpp"
#include "jetreduce/pipeline.hpp"
#include "jetreduce/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace jetreduce;

namespace {

enum Exit { kFound = 0, kReducedOnly = 1, kNotReducible = 2, kError = 3 };

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// "@path" -> the file's first non-comment line; anything else verbatim.
std::string pde_argument(const std::string& arg) {
    if (arg.empty() || arg[0] != '@') return arg;
    std::istringstream lines(read_file(arg.substr(1)));
    for (std::string line; std::getline(lines, line);) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        return line.substr(first);
    }
    throw std::runtime_error(arg.substr(1) + " holds no equation");
}

void emit(bool json, const nlohmann::ordered_json& j, const std::string& text) {
    if (json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

int fail(bool json, const Fixture& input, const std::string& message) {
    if (json)
        std::cout << error_json(input, message).dump(2) << "\n";
    else
        std::cerr << "jetreduce: " << message << "\n";
    return kError;
}

int run_generate(const std::string& arg, const std::string& output_dir, bool json) {
    unsigned seed = 0;
    std::size_t count = 0;
    char comma = 0;
    std::istringstream in(arg);
    if (!(in >> seed >> comma >> count) || comma != ',' || !in.eof())
        throw CLI::ValidationError("--generate", "expected <seed>,<count>");
    SampleConfig cfg;
    cfg.count = count;
    auto corpus = sample(seed, cfg);
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    std::ostringstream text;
    if (!output_dir.empty()) std::filesystem::create_directories(output_dir);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        Fixture f = to_fixture(corpus[i]);
        char name[32];
        std::snprintf(name, sizeof name, "gen_%03zu.fix", i);
        std::string body = "# seed " + std::to_string(seed) + ", problem " + std::to_string(i) + "\n" + write_fixture(f);
        if (!output_dir.empty()) {
            std::ofstream(std::filesystem::path(output_dir) / name) << body;
            text << std::filesystem::path(output_dir) / name << "\n";
        } else {
            text << body << "\n";
        }
        list.push_back({{"pde", f.pde}, {"unknown", f.unknown}, {"invariants", f.invariants}});
    }
    emit(json, {{"status", "generated"}, {"seed", seed}, {"problems", list}}, text.str());
    return kFound;
}

int run_verify(const std::string& arg, bool json) {
    std::string path = !arg.empty() && arg[0] == '@' ? arg.substr(1) : arg;
    Fixture f = load_fixture(path);
    PDEProblem p = fixture_problem(f);
    Verdict v = verify_claim(p, fixture_invariants(f, p), f.subset);
    emit(json, verdict_json(f, p, v), verdict_text(f, p, v));
    switch (v.status) {
        case VerdictStatus::Verified: return 0;
        case VerdictStatus::Inconclusive: return 1;
        case VerdictStatus::Refuted: return 2;
    }
    return kError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"First integrals of nonlinear PDEs by order reduction"};
    std::string pde, unknown, verify_only, generate, output_dir;
    std::vector<std::string> params;
    bool json = false, no_timing = false;
    std::size_t max_candidates = 64;
    double timeout = 30;
    unsigned jobs = 1;

    app.add_option("--pde", pde, "Equation in derivative notation, or @file");
    app.add_option("--unknown", unknown, "Unknown function, e.g. w(t,x)");
    app.add_option("--param", params, "Parameter or radical relation, e.g. a or \"s: s^2 = 4*a*k - b^2\"");
    app.add_flag("--json", json, "Machine-readable report");
    app.add_option("--max-candidates", max_candidates, "Candidate subsets to try")->check(CLI::PositiveNumber);
    app.add_option("--timeout-per-candidate", timeout, "Seconds per candidate, 0 for none")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--verify-only", verify_only, "Verify the claim in @fixture");
    app.add_option("--generate", generate, "Generate <seed>,<count> decomposable PDEs");
    app.add_option("--output-dir", output_dir, "Directory for --generate fixtures");
    app.add_option("--jobs", jobs, "Candidates processed in parallel")->check(CLI::PositiveNumber);
    app.add_flag("--no-timing", no_timing, "Report zero timings for reproducible output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kError;
    }

    Fixture input;
    input.pde = pde;
    input.unknown = unknown;
    input.params = params;
    try {
        int modes = !pde.empty() + !verify_only.empty() + !generate.empty();
        if (modes != 1) return fail(json, input, "give exactly one of --pde, --verify-only, --generate");
        if (!generate.empty()) return run_generate(generate, output_dir, json);
        if (!verify_only.empty()) return run_verify(verify_only, json);

        input.pde = pde_argument(pde);
        PDEProblem p = fixture_problem(input);
        PipelineOptions opts;
        opts.max_candidates = max_candidates;
        opts.jobs = jobs;
        if (timeout > 0)
            opts.timeout_per_candidate =
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(timeout));
        else
            opts.timeout_per_candidate.reset();
        PipelineResult r = run_pipeline(p, opts);
        ReportOptions ropts{!no_timing};
        emit(json, report_json(input, p, r, ropts), report_text(input, p, r, ropts));
        switch (r.status) {
            case RunStatus::FirstIntegralsFound: return kFound;
            case RunStatus::ReducedOnly: return kReducedOnly;
            case RunStatus::NotReducible: return kNotReducible;
            case RunStatus::Error: return kError;
        }
        return kError;
    } catch (const std::exception& e) {
        return fail(json, input, e.what());
    }
}
