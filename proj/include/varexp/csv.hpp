#pragma once

#include <cstdint>
#include <string>

#include "varexp/grid_function.hpp"
#include "varexp/stability.hpp"

namespace varexp {

/// Lossless float formatting for CSV (17 significant digits).
std::string format_full(double x);
/// Rounded formatting for human-readable summaries (6 significant digits).
std::string format_short(double x);

/// Writes content to path atomically (temp file + rename).
void atomic_write(const std::string& path, const std::string& content);

std::uint64_t fnv1a64(const std::string& data);
std::string hex16(std::uint64_t v);

std::string grid_function_csv(const GridFunction& u);
std::string stability_csv(const StabilityReport& report);
std::string check_csv(const CheckReport& report);
std::string growth_csv(const GrowthTable& table);
std::string probe_csv(const std::vector<ProbeRow>& rows);

}  // namespace varexp
