#include "varexp/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace varexp {

std::string format_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_short(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("rename failed: " + path);
  }
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string grid_function_csv(const GridFunction& u) {
  std::ostringstream out;
  out << "node_index,value\n";
  for (size_t i = 0; i < u.values().size(); ++i) {
    out << i << "," << format_full(u.values()[i]) << "\n";
  }
  return out.str();
}

std::string stability_csv(const StabilityReport& r) {
  std::ostringstream out;
  out << "h,sup_distance,lambda,el_residual,iterations,converged\n";
  for (const auto& row : r.rows) {
    out << row.h << "," << format_full(row.sup_distance) << ","
        << format_full(row.lambda) << "," << format_full(row.residual) << ","
        << row.iterations << "," << (row.converged ? 1 : 0) << "\n";
  }
  out << "limit," << format_full(0.0) << "," << format_full(r.base_lambda) << ","
      << format_full(r.base_residual) << ",0,1\n";
  return out.str();
}

std::string check_csv(const CheckReport& r) {
  std::ostringstream out;
  const bool two = !r.observed2.empty();
  out << (two ? "h,observed,observed2\n" : "h,observed\n");
  for (size_t i = 0; i < r.h.size(); ++i) {
    out << r.h[i] << "," << format_full(r.observed[i]);
    if (two) out << "," << format_full(r.observed2[i]);
    out << "\n";
  }
  return out.str();
}

std::string growth_csv(const GrowthTable& t) {
  std::ostringstream out;
  out << "m,lambda_norm,lambda_modular\n";
  for (const auto& row : t.rows) {
    out << row.m << "," << format_full(row.lambda_norm) << ","
        << format_full(row.lambda_modular) << "\n";
  }
  return out.str();
}

std::string probe_csv(const std::vector<ProbeRow>& rows) {
  std::ostringstream out;
  out << "scale,amplitude,ratio\n";
  for (const auto& row : rows) {
    out << format_full(row.scale) << "," << format_full(row.amplitude) << ","
        << format_full(row.ratio) << "\n";
  }
  return out.str();
}

}  // namespace varexp
