#include <cstdio>
#include <string>

#include "repro.hpp"

int main(int argc, char** argv) {
    std::string suite = argc > 1 ? argv[1] : "all";
    bool all_ok = true;
    for (const auto& r : hbc::repro::run_suite(suite)) {
        std::printf("[%s] criterion %2d (%s): %s | %.2f s (limit %.0f s) | %s\n", r.passed() ? "PASS" : "FAIL", r.id, r.suite.c_str(),
                    r.name.c_str(), r.seconds, r.limit_seconds, r.detail.c_str());
        all_ok = all_ok && r.passed();
    }
    return all_ok ? 0 : 1;
}
