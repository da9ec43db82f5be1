#pragma once

#include <string>
#include <vector>

namespace hbc::cli {

inline constexpr int schema_version = 1;

struct Outcome {
    int exit_code = 0;
    std::string output;
};

// args exclude the program name
Outcome run(const std::vector<std::string>& args);

} // namespace hbc::cli
