// Acceptance harness: runs every criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit status is the gate.

#include <cstdio>
#include <cstdlib>

#include "widthforge/sweep.hpp"

int main(int argc, char **argv) {
    std::uint64_t seed = 20240601;
    if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
    widthforge::SuiteReport rep = widthforge::run_suite("all", seed);
    std::printf("widthforge acceptance sweep (seed %llu)\n", (unsigned long long)seed);
    std::fputs(rep.text().c_str(), stdout);
    if (!rep.all_pass()) {
        std::puts("acceptance: FAILED");
        return 1;
    }
    std::puts("acceptance: all criteria pass");
    return 0;
}
