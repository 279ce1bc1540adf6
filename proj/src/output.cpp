#include "leray/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

namespace leray {

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string energy_csv(std::span<const EnergyRecord> records) {
  std::string out = "t,e_kin,e_mag,grad_u,grad_b,inject,h_half,div_residual\n";
  for (const auto& r : records) {
    for (double v : {r.t, r.e_kin, r.e_mag, r.grad_u, r.grad_b, r.inject, r.h_half}) {
      out += format_double(v);
      out += ',';
    }
    out += format_double(r.div_residual);
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const SweepReport& report) {
  std::string out = "parameter,error\n";
  for (std::size_t i = 0; i < report.parameters.size(); ++i)
    out += format_double(report.parameters[i]) + "," + format_double(report.errors[i]) + "\n";
  out += "fit," + (report.exact ? std::string("exact") : format_double(report.fitted)) + "\n";
  out += std::string("pass,") + (report.pass ? "1" : "0") + "\n";
  return out;
}

std::string multiplier_table_csv(const WaveGrid& grid, const FilterParams& p) {
  std::vector<double> k2;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.retained(i) && grid.k2(i) > 0.0) k2.push_back(grid.k2(i));
  std::sort(k2.begin(), k2.end());
  k2.erase(std::unique(k2.begin(), k2.end()), k2.end());
  std::string out = "k,G,H_N\n";
  for (double v : k2) {
    const double k = std::sqrt(v);
    out += format_double(k) + "," + format_double(helmholtz_multiplier(k, p)) + "," +
           format_double(deconvolution_multiplier(k, p)) + "\n";
  }
  return out;
}

}  // namespace leray
