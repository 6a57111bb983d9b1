#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "ecogame/analysis.hpp"
#include "ecogame/scenario.hpp"

namespace ecogame {

// Exit statuses. 0 means every requested file was completely written.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 3;
inline constexpr int kExitSimulation = 2;

/// "lo:hi:count" with 0 <= lo < hi <= 1 and count >= 1.
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  int count = 11;

  std::vector<double> values() const;
};

GridSpec parse_grid(std::string_view text);

struct SimulateOutputs {
  std::filesystem::path csv;
  std::optional<std::filesystem::path> json{};
  std::optional<std::filesystem::path> svg{};
};

struct SweepOutputs {
  std::filesystem::path csv;
  std::optional<std::filesystem::path> json{};
};

int run_simulate(const Scenario& scenario, const SimulateOutputs& outputs,
                 std::ostream& log);

int run_sweep(const Scenario& scenario, Axis axis, const GridSpec& grid,
              const SweepOutputs& outputs, std::ostream& log,
              unsigned threads = 0);

int run_fixed_points(const Scenario& scenario,
                     const std::filesystem::path& json, std::ostream& log);

int run_preset(std::string_view name, const std::filesystem::path& out,
               std::ostream& log);

}  // namespace ecogame
