#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavneat/oracle/grid_search.hpp"
#include "uavneat/sim/sweep.hpp"
#include "uavneat/sim/train.hpp"

namespace uavneat::io {

// Floating-point columns use 9 significant digits.
inline std::string fmt9(double v) {
  std::ostringstream os;
  os << std::setprecision(9) << v;
  return os.str();
}

inline void write_generations(std::ostream& os, const std::vector<sim::GenerationRecord>& records) {
  os << "generation,best_fitness,mean_fitness,species_count,best_mean_sum_se,min_rate_satisfaction\n";
  for (const auto& r : records)
    os << r.generation << ',' << fmt9(r.best_fitness) << ',' << fmt9(r.mean_fitness) << ',' << r.species_count << ','
       << fmt9(r.best_mean_sum_se) << ',' << fmt9(r.min_rate_satisfaction) << '\n';
}

inline void write_trace(std::ostream& os, const sim::EpisodeTrace& trace, std::size_t users) {
  os << "step,x,y,h";
  for (std::size_t i = 1; i <= users; ++i) os << ",alpha_" << i;
  for (std::size_t i = 1; i <= users; ++i) os << ",se_" << i;
  os << ",reward\n";
  for (const auto& row : trace) {
    os << row.step << ',' << fmt9(row.uav.x) << ',' << fmt9(row.uav.y) << ',' << fmt9(row.uav.h);
    for (double a : row.alpha) os << ',' << fmt9(a);
    for (double s : row.se) os << ',' << fmt9(s);
    os << ',' << fmt9(row.reward) << '\n';
  }
}

inline void write_ee_curve(std::ostream& os, const std::vector<sim::SweepPoint>& curve) {
  os << "pt_dbm,mean_se,ee\n";
  for (const auto& p : curve) os << fmt9(p.pt_dbm) << ',' << fmt9(p.mean_se) << ',' << fmt9(p.ee) << '\n';
}

inline void write_ci(std::ostream& os, const std::vector<sim::CiRow>& rows, std::size_t runs) {
  os << "generation,runs,best_fitness_mean,best_fitness_std,mean_fitness_mean,mean_fitness_std\n";
  for (const auto& r : rows)
    os << r.generation << ',' << runs << ',' << fmt9(r.best_mean) << ',' << fmt9(r.best_std) << ','
       << fmt9(r.mean_mean) << ',' << fmt9(r.mean_std) << '\n';
}

inline nlohmann::ordered_json oracle_to_json(const oracle::GridResult& r) {
  nlohmann::ordered_json doc;
  doc["feasible"] = r.feasible;
  doc["position"] = {{"x", r.position.x}, {"y", r.position.y}, {"h", r.position.h}};
  doc["alpha"] = r.alpha;
  doc["user_se"] = r.user_se;
  doc["sum_se"] = r.sum_se;
  doc["positions_scanned"] = r.positions_scanned;
  doc["grid"] = {{"xy_spacing", r.grid.xy_spacing},
                 {"heights", r.grid.heights},
                 {"alpha_step", r.grid.alpha_step},
                 {"enforce_fairness", r.grid.enforce_fairness}};
  return doc;
}

// Writes `content` produced by `fill` to `dir/name`, creating `dir`.
template <typename Fill>
std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name, Fill&& fill) {
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  fill(out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
  return path;
}

}  // namespace uavneat::io
