#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace opc::selftest {

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t violations = 0;
    double seconds = 0;
    double limit_seconds = 0;
    /// First violation, or a short summary.
    std::string detail;

    bool passed() const { return violations == 0 && cases > 0 && seconds <= limit_seconds; }
};

/// Suite names in execution order.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown name.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

/// OPC_SEED when set, otherwise a fixed default.
std::uint64_t seed_from_env();

/// `PASS name: detail (cases, seconds / limit)`.
std::string format_result(const SuiteResult& r);

} // namespace opc::selftest
