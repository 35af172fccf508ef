#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace parhodge {

struct SuiteResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string first_failure; // serialized reproduction of the first bad case
};

// the property suites behind `parhodge selftest`; deterministic per seed
std::vector<SuiteResult> run_selftest_suites(std::uint64_t seed, int cases);

// prints one line per suite plus a summary; returns true when everything passed
bool run_selftest(std::uint64_t seed, int cases, std::ostream& out);

} // namespace parhodge
