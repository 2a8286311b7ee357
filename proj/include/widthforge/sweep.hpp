#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace widthforge {

struct CriterionRow {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::vector<CriterionRow> rows;
    bool all_pass() const;
    std::string text() const; // deterministic, byte-stable for a fixed seed
};

// Suites: examples, amo, cardinality, compiler, dnnftotw, forget, scw,
// cliquegood, cc, cutaudit, perm, determinism, all.
SuiteReport run_suite(const std::string &name, std::uint64_t seed);
std::string sweep_report(const std::string &name, std::uint64_t seed);
std::vector<std::string> suite_names();

} // namespace widthforge
