#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vweb/json_io.hpp"
#include "vweb/pencil.hpp"

namespace vweb {

// One command invocation.  Every piece of randomness flows from `seed`,
// so identical configs produce byte-identical reports (timings live in a
// separate volatile section).
struct RunConfig {
    std::string command;              // check | theorem | complexify | gen
    std::filesystem::path curve_path; // input curve JSON
    std::uint64_t seed = 0;
    std::filesystem::path out_path;   // optional report copy

    // check
    std::string mode = "full";        // full | sparse | naive | random
    std::vector<ProjPoint> points;    // sparse/naive sample parameters
    unsigned samples = 16;            // random-mode sample budget

    // theorem
    unsigned trials = 50;

    // complexify
    std::vector<ProjPoint> anchors;
    std::vector<ProjPoint> sample_ts; // empty = default set

    // gen
    std::string family;               // flat | rescaled | pullback | moebius |
                                      // perturbed | corpus
    unsigned k = 1, n = 1;
    std::filesystem::path base_path;  // optional base curve, default flat
    std::string scale;                // rescaled: rows "p,p;p,p"
    std::string map;                  // pullback: "expr,expr,..."
    std::string matrix;               // moebius: "a,b,c,d"
    std::string beta;                 // perturbed: coefficient expression
    unsigned beta_on = 1;             // covector index carrying beta
    unsigned pencil = 0;              // perturbed target pencil
    std::vector<ProjPoint> gen_points; // perturbed vanishing points
    std::filesystem::path out_dir = "."; // gen output directory
};

struct RunResult {
    int exit_code = 2; // 0 success, 1 check failed, 2 invalid input
    Json report;
};

// Dispatches on cfg.command.  Never throws: malformed input and contract
// violations become exit-2 reports with an "error" field.
RunResult run_command(const RunConfig& cfg);

RunResult cmd_check(const RunConfig& cfg);
RunResult cmd_theorem(const RunConfig& cfg);
RunResult cmd_complexify(const RunConfig& cfg);
RunResult cmd_gen(const RunConfig& cfg);

// VWEB_WORKERS when set to a positive count, else the hardware
// concurrency, at least 1.
unsigned worker_count();

} // namespace vweb
