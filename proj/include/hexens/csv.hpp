#pragma once

#include <ostream>
#include <span>
#include <string>

#include "hexens/arena.hpp"

namespace hexens {

inline constexpr const char* kSweepHeader =
    "ensemble_size,per_tree_playouts,cp_ensemble,cp_plain,games,wins,win_rate,ci_low,ci_high";
inline constexpr const char* kVisitsHeader = "engine,cp,move_index,visits";

/// `value` with 6 significant digits in the shortest of fixed or scientific
/// notation, independent of the global locale.
std::string format_real(double value);

void write_sweep_header(std::ostream& out);
void write_sweep_row(std::ostream& out, const SweepRow& row);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

void write_visits_csv(std::ostream& out, std::span<const VisitSeries> series);

}  // namespace hexens
