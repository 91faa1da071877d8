// Acceptance suite: one pass/fail line per criterion; nonzero exit on any
// failure. The same checks back `spanmack report all`.

#include <cstdlib>
#include <iostream>
#include <string>

#include "spanmack/acceptance.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 0;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--seed") seed = std::strtoull(argv[i + 1], nullptr, 10);
    auto results = spanmack::run_acceptance(seed, &std::cout);
    bool ok = true;
    for (const auto& c : results) ok = ok && c.passed;
    std::cout << (ok ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << std::endl;
    return ok ? 0 : 1;
}
