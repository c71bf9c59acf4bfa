#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ganpred {

enum class Position { kLong, kShort, kNeutral };

const char* position_name(Position p);

// Absent threshold = prediction-only baseline strategy.
struct StrategySpec {
    std::optional<double> uncertainty_threshold;
};

// Positive prediction -> long, negative -> short, exactly zero -> neutral.
// With a threshold set, uncertainty above it forces neutral first.
Position signal_to_position(double prediction, std::optional<double> eta,
                            const StrategySpec& spec);

struct BacktestReport {
    std::optional<double> threshold;
    std::vector<Position> positions;
    std::vector<double> daily_returns;  // +r long, -r short, 0 neutral
    double cumulative_return = 0.0;     // prod(1 + daily) - 1
    double return_std = 0.0;            // population std of daily returns
    std::array<std::size_t, 3> counts{};  // long, short, neutral

    std::size_t count(Position p) const { return counts[static_cast<std::size_t>(p)]; }
};

// realized[i] must be the same-horizon return the i-th prediction targeted.
BacktestReport run_backtest(std::span<const Position> positions,
                            std::span<const double> realized_returns);

// Baseline first, then one report per threshold, all on identical inputs.
std::vector<BacktestReport> compare_strategies(std::span<const double> predictions,
                                               std::span<const double> etas,
                                               std::span<const double> realized_returns,
                                               std::span<const double> thresholds);

// Equity-curve CSV: one row per period (label, position, daily_return,
// cumulative). Labels default to the row index when empty.
std::string equity_curve_to_csv(const BacktestReport& report,
                                std::span<const std::string> labels = {});

std::string backtest_summary_to_csv(std::span<const BacktestReport> reports);

}  // namespace ganpred
