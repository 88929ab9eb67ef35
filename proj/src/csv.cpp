#include "hexens/csv.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace hexens {

std::string format_real(double value) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                         std::chars_format::general, 6);
    if (ec != std::errc{}) throw std::runtime_error("cannot format number");
    return std::string(buf.data(), end);
}

void write_sweep_header(std::ostream& out) { out << kSweepHeader << '\n'; }

void write_sweep_row(std::ostream& out, const SweepRow& row) {
    out << row.ensemble_size << ',' << row.per_tree_playouts << ',' << format_real(row.cp_ensemble) << ','
        << format_real(row.cp_plain) << ',' << row.result.games << ',' << row.result.wins_a << ','
        << format_real(row.result.win_rate) << ',' << format_real(row.result.ci_low) << ','
        << format_real(row.result.ci_high) << '\n';
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    write_sweep_header(out);
    for (const auto& row : rows) write_sweep_row(out, row);
}

void write_visits_csv(std::ostream& out, std::span<const VisitSeries> series) {
    out << kVisitsHeader << '\n';
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.visits.size(); ++i) {
            out << s.engine << ',' << format_real(s.cp) << ',' << i << ',' << s.visits[i] << '\n';
        }
    }
}

}  // namespace hexens
