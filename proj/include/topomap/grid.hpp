#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "topomap/geometry.hpp"

namespace topomap {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};
struct TraceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CellState : uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

/// Tri-state occupancy raster. Cells outside the raster read as Unknown,
/// so structures touching the border terminate cleanly.
class OccupancyGrid {
public:
    OccupancyGrid() = default;
    OccupancyGrid(int rows, int cols, CellState fill = CellState::Unknown,
                  double cell_size = 0.1);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double cell_size() const { return cell_size_; }
    void set_cell_size(double m) { cell_size_ = m; }

    bool in_bounds(int i, int j) const {
        return i >= 0 && i < rows_ && j >= 0 && j < cols_;
    }
    bool in_bounds(CellPoint p) const { return in_bounds(p.i, p.j); }

    CellState at(int i, int j) const { return cells_[size_t(i) * cols_ + j]; }
    CellState at(CellPoint p) const { return at(p.i, p.j); }
    void set(int i, int j, CellState s) { cells_[size_t(i) * cols_ + j] = s; }
    void set(CellPoint p, CellState s) { set(p.i, p.j, s); }

    /// Border-tolerant read: out-of-bounds cells are Unknown.
    CellState state(int i, int j) const {
        return in_bounds(i, j) ? at(i, j) : CellState::Unknown;
    }
    CellState state(CellPoint p) const { return state(p.i, p.j); }

    bool is_free(int i, int j) const { return state(i, j) == CellState::Free; }
    bool is_free(CellPoint p) const { return is_free(p.i, p.j); }
    bool is_occupied(int i, int j) const { return state(i, j) == CellState::Occupied; }
    bool is_occupied(CellPoint p) const { return is_occupied(p.i, p.j); }

    bool wall_adjacent(CellPoint p) const {
        return is_occupied(p.i - 1, p.j) || is_occupied(p.i + 1, p.j) ||
               is_occupied(p.i, p.j - 1) || is_occupied(p.i, p.j + 1);
    }

    const uint8_t* data() const { return reinterpret_cast<const uint8_t*>(cells_.data()); }
    uint8_t* data() { return reinterpret_cast<uint8_t*>(cells_.data()); }

    size_t count(CellState s) const;

    friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    double cell_size_ = 0.1;
    std::vector<CellState> cells_;
};

/// Resampled rotated copy of a grid plus the transform back to the source
/// frame (continuous coordinates).
struct RotatedView {
    OccupancyGrid grid;
    double angle = 0.0;
    Affine to_original;
};

// --- file I/O -------------------------------------------------------------

/// '#' occupied, '.' free, '?' unknown; optional leading `cell_size=<m>`.
OccupancyGrid load_ascii(const std::string& text);
std::string save_ascii(const OccupancyGrid& grid);

OccupancyGrid load_ascii_file(const std::string& path);
void save_ascii_file(const OccupancyGrid& grid, const std::string& path);

/// PGM (P2/P5) raster with a YAML sidecar providing `resolution`,
/// `occupied_thresh`, `free_thresh` and `negate` (map_server convention).
OccupancyGrid load_pgm_yaml(const std::string& pgm_path, const std::string& yaml_path);
void save_pgm(const OccupancyGrid& grid, const std::string& pgm_path);

// --- geometry -------------------------------------------------------------

/// Resample the grid rotated by `angle` around its centre. The destination
/// box covers every source cell; sampling is conservative: of the four
/// nearest source cells, Occupied wins over Free wins over Unknown, so
/// resampling never opens a passage through a wall.
RotatedView rotate(const OccupancyGrid& grid, double angle);

/// Free cells with an in-bounds 4-neighbour that is Unknown.
std::vector<CellPoint> frontier_cells(const OccupancyGrid& grid);

/// Raster form of frontier_cells (1 = frontier).
std::vector<uint8_t> frontier_raster(const OccupancyGrid& grid);

}  // namespace topomap
