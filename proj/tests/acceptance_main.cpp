#include <cstdlib>
#include <iostream>
#include <string>

#include "plis/acceptance.hpp"

int main(int argc, char** argv) {
    plis::AcceptanceOptions options;
    if (const char* reps = std::getenv("PLIS_ACCEPT_REPS")) {
        options.reps = static_cast<std::size_t>(std::stoul(reps));
    }
    for (int i = 1; i < argc; ++i) {
        options.criteria.push_back(std::stoi(argv[i]));
    }
    const auto results = plis::run_acceptance(options, [](const plis::CriterionResult& r) {
        std::cout << plis::format_result_line(r) << std::endl;
    });
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
    }
    std::cout << (all ? "all acceptance criteria passed" : "some acceptance criteria failed") << std::endl;
    return all ? 0 : 1;
}
