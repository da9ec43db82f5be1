#pragma once

#include <string>
#include <vector>

namespace hbc::repro {

struct CriterionResult {
    int id = 0;
    std::string suite;
    std::string name;
    bool checks_passed = false;
    std::string detail;
    double seconds = 0;
    double limit_seconds = 0;

    bool passed() const { return checks_passed && seconds < limit_seconds; }
};

// suite in {algebra, qsm, multivar, witt, mzv, braid, all}
std::vector<CriterionResult> run_suite(const std::string& suite);

const std::vector<std::string>& suite_names();

} // namespace hbc::repro
