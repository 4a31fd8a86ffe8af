#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kesbn/experiment.hpp"
#include "kesbn/score.hpp"
#include "kesbn/search.hpp"

namespace kesbn {

// The individual commands behind the subcommands; each writes one output
// file. They throw library errors; exit-code mapping happens in run_cli.
void cmd_trapgen(int groups, int rows, std::uint64_t seed, const std::string& out);
void cmd_sample(const std::string& bn_path, int rows, std::uint64_t seed, const std::string& out);
void cmd_learn(const std::string& data_path, const SearchConfig& cfg, const std::string& out);
void cmd_experiment(const std::string& data_path, const std::vector<double>& ks, int runs,
                    const SearchConfig& base, const std::string& out);
void cmd_oracle(const std::string& mode, const std::string& data_path, ScoreKind kind,
                const std::string& out);

// Full argument parsing and dispatch. Returns the process exit code:
// 0 success, 2 usage error, 1 runtime or data error.
int run_cli(int argc, const char* const* argv);

}  // namespace kesbn
