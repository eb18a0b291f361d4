#pragma once

#include <filesystem>

#include "ganloc/experiments.hpp"

namespace ganloc {

// Raw per-run records:
// experiment,variant,real_fraction,synthetic_count,interpretation,rep,
// run_seed,accuracy,log_loss,wall_ms
void write_runs_csv(const std::filesystem::path& path,
                    const std::vector<RunRecord>& records);

// Aggregated per-cell statistics. Deliberately free of timestamps and wall
// times: identical spec + seed must produce a byte-identical file.
void write_cells_csv(const std::filesystem::path& path,
                     const std::vector<CellStats>& cells);

// Markdown grid of the table-style experiment: one row per synthetic count,
// accuracy/log-loss column pair per real fraction.
void write_table_markdown(const std::filesystem::path& path,
                          const std::vector<CellStats>& cells);

// Two-series line chart of the sweep (mean accuracy over real fraction),
// emitted as a self-contained SVG.
void write_sweep_svg(const std::filesystem::path& path,
                     const std::vector<CellStats>& cells);

}  // namespace ganloc
