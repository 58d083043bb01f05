#include "topomap/grid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "topomap/kernels.hpp"

namespace topomap {

OccupancyGrid::OccupancyGrid(int rows, int cols, CellState fill, double cell_size)
    : rows_(rows), cols_(cols), cell_size_(cell_size),
      cells_(size_t(rows) * cols, fill) {
    if (rows < 1 || cols < 1) throw PreconditionError("grid dimensions must be >= 1");
    if (!(cell_size > 0.0)) throw PreconditionError("cell_size must be > 0");
}

size_t OccupancyGrid::count(CellState s) const {
    return size_t(std::count(cells_.begin(), cells_.end(), s));
}

// --- ASCII ------------------------------------------------------------------

OccupancyGrid load_ascii(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back(cur);

    double cell_size = 0.1;
    size_t first = 0;
    if (!lines.empty() && lines[0].rfind("cell_size=", 0) == 0) {
        try {
            cell_size = std::stod(lines[0].substr(10));
        } catch (const std::exception&) {
            throw FormatError("bad cell_size header: " + lines[0]);
        }
        if (!(cell_size > 0.0)) throw FormatError("cell_size must be > 0");
        first = 1;
    }
    while (lines.size() > first && lines.back().empty()) lines.pop_back();
    if (lines.size() <= first) throw FormatError("empty grid");

    size_t cols = lines[first].size();
    if (cols == 0) throw FormatError("empty grid row");
    OccupancyGrid g(int(lines.size() - first), int(cols), CellState::Unknown, cell_size);
    for (size_t r = first; r < lines.size(); ++r) {
        const std::string& line = lines[r];
        if (line.size() != cols)
            throw FormatError("ragged row " + std::to_string(r - first));
        for (size_t c = 0; c < cols; ++c) {
            CellState s;
            switch (line[c]) {
                case '#': s = CellState::Occupied; break;
                case '.': s = CellState::Free; break;
                case '?': s = CellState::Unknown; break;
                default:
                    throw FormatError(std::string("unknown character '") + line[c] + "'");
            }
            g.set(int(r - first), int(c), s);
        }
    }
    return g;
}

std::string save_ascii(const OccupancyGrid& grid) {
    char head[64];
    std::snprintf(head, sizeof head, "cell_size=%.17g\n", grid.cell_size());
    std::string out = head;
    out.reserve(out.size() + size_t(grid.rows()) * (grid.cols() + 1));
    for (int i = 0; i < grid.rows(); ++i) {
        for (int j = 0; j < grid.cols(); ++j) {
            switch (grid.at(i, j)) {
                case CellState::Occupied: out.push_back('#'); break;
                case CellState::Free: out.push_back('.'); break;
                case CellState::Unknown: out.push_back('?'); break;
            }
        }
        out.push_back('\n');
    }
    return out;
}

OccupancyGrid load_ascii_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return load_ascii(ss.str());
}

void save_ascii_file(const OccupancyGrid& grid, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    f << save_ascii(grid);
}

// --- PGM + YAML ---------------------------------------------------------------

namespace {

struct PgmImage {
    int width = 0, height = 0, maxval = 0;
    std::vector<uint8_t> pixels;
};

PgmImage load_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);

    auto next_token = [&f, &path]() -> std::string {
        std::string tok;
        int c;
        while ((c = f.get()) != EOF) {
            if (c == '#') {
                while ((c = f.get()) != EOF && c != '\n') {
                }
                continue;
            }
            if (std::isspace(c)) {
                if (!tok.empty()) return tok;
                continue;
            }
            tok.push_back(char(c));
        }
        if (tok.empty()) throw FormatError("truncated PGM header in " + path);
        return tok;
    };

    std::string magic = next_token();
    if (magic != "P2" && magic != "P5") throw FormatError("not a PGM file: " + path);
    PgmImage img;
    try {
        img.width = std::stoi(next_token());
        img.height = std::stoi(next_token());
        img.maxval = std::stoi(next_token());
    } catch (const std::exception&) {
        throw FormatError("bad PGM header in " + path);
    }
    if (img.width < 1 || img.height < 1 || img.maxval < 1 || img.maxval > 65535)
        throw FormatError("bad PGM dimensions in " + path);

    size_t n = size_t(img.width) * img.height;
    img.pixels.resize(n);
    if (magic == "P5") {
        if (img.maxval > 255) {
            std::vector<uint8_t> raw(n * 2);
            f.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
            if (size_t(f.gcount()) != raw.size()) throw FormatError("truncated PGM raster in " + path);
            for (size_t k = 0; k < n; ++k) {
                int v = (raw[2 * k] << 8) | raw[2 * k + 1];
                img.pixels[k] = uint8_t(v * 255 / img.maxval);
            }
        } else {
            f.read(reinterpret_cast<char*>(img.pixels.data()), std::streamsize(n));
            if (size_t(f.gcount()) != n) throw FormatError("truncated PGM raster in " + path);
            if (img.maxval != 255) {
                for (auto& p : img.pixels) p = uint8_t(p * 255 / img.maxval);
            }
        }
    } else {
        for (size_t k = 0; k < n; ++k) {
            int v;
            try {
                v = std::stoi(next_token());
            } catch (const std::exception&) {
                throw FormatError("bad P2 raster in " + path);
            }
            if (v < 0 || v > img.maxval) throw FormatError("P2 pixel out of range in " + path);
            img.pixels[k] = uint8_t(v * 255 / img.maxval);
        }
    }
    return img;
}

struct MapMeta {
    double resolution = 0.05;
    double occupied_thresh = 0.65;
    double free_thresh = 0.196;
    bool negate = false;
};

MapMeta load_yaml_meta(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    MapMeta meta;
    std::string line;
    while (std::getline(f, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string key = line.substr(0, colon);
        std::string val = line.substr(colon + 1);
        auto trim = [](std::string& s) {
            size_t b = s.find_first_not_of(" \t");
            size_t e = s.find_last_not_of(" \t");
            s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(val);
        if (val.empty()) continue;
        try {
            if (key == "resolution") meta.resolution = std::stod(val);
            else if (key == "occupied_thresh") meta.occupied_thresh = std::stod(val);
            else if (key == "free_thresh") meta.free_thresh = std::stod(val);
            else if (key == "negate") meta.negate = std::stoi(val) != 0;
        } catch (const std::exception&) {
            throw FormatError("bad value for key '" + key + "' in " + path);
        }
    }
    if (!(meta.resolution > 0.0)) throw FormatError("resolution must be > 0 in " + path);
    return meta;
}

}  // namespace

OccupancyGrid load_pgm_yaml(const std::string& pgm_path, const std::string& yaml_path) {
    PgmImage img = load_pgm(pgm_path);
    MapMeta meta = load_yaml_meta(yaml_path);

    std::vector<uint8_t> px = std::move(img.pixels);
    if (meta.negate) {
        for (auto& p : px) p = uint8_t(255 - p);
    }
    // map_server: occ = (255 - p) / 255; occ > occupied_thresh -> Occupied,
    // occ < free_thresh -> Free. Rearranged to pixel cutoffs.
    int free_above = int(std::floor(255.0 * (1.0 - meta.free_thresh)));
    int occupied_below = int(std::ceil(255.0 * (1.0 - meta.occupied_thresh)));

    OccupancyGrid g(img.height, img.width, CellState::Unknown, meta.resolution);
    kernels::classify_pixels(px.data(), g.data(), px.size(), free_above, occupied_below,
                             uint8_t(CellState::Free), uint8_t(CellState::Occupied),
                             uint8_t(CellState::Unknown));
    return g;
}

void save_pgm(const OccupancyGrid& grid, const std::string& pgm_path) {
    std::ofstream f(pgm_path, std::ios::binary);
    if (!f) throw IoError("cannot write " + pgm_path);
    f << "P5\n" << grid.cols() << " " << grid.rows() << "\n255\n";
    std::vector<uint8_t> row(size_t(grid.cols()));
    for (int i = 0; i < grid.rows(); ++i) {
        for (int j = 0; j < grid.cols(); ++j) {
            switch (grid.at(i, j)) {
                case CellState::Free: row[size_t(j)] = 254; break;
                case CellState::Occupied: row[size_t(j)] = 0; break;
                case CellState::Unknown: row[size_t(j)] = 205; break;
            }
        }
        f.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size()));
    }
}

// --- rotation ---------------------------------------------------------------

RotatedView rotate(const OccupancyGrid& grid, double angle) {
    RotatedView view;
    view.angle = angle;
    if (std::abs(std::remainder(angle, 2.0 * std::numbers::pi)) < 1e-12) {
        view.grid = grid;
        view.to_original = Affine{};
        return view;
    }

    double c = std::cos(angle), s = std::sin(angle);
    int si = grid.rows(), sj = grid.cols();
    // Extent of the rotated bounding box.
    double ext_i = std::abs(c) * (si - 1) + std::abs(s) * (sj - 1);
    double ext_j = std::abs(s) * (si - 1) + std::abs(c) * (sj - 1);
    int di = int(std::ceil(ext_i)) + 1;
    int dj = int(std::ceil(ext_j)) + 1;

    Vec2 center_src{(si - 1) / 2.0, (sj - 1) / 2.0};
    Vec2 center_dst{(di - 1) / 2.0, (dj - 1) / 2.0};
    Affine fwd = Affine::rotation(angle, center_src, center_dst);
    Affine back = fwd.inverse();

    OccupancyGrid out(di, dj, CellState::Unknown, grid.cell_size());
    for (int i = 0; i < di; ++i) {
        for (int j = 0; j < dj; ++j) {
            Vec2 src = back.apply({double(i), double(j)});
            int fi = int(std::floor(src.i)), fj = int(std::floor(src.j));
            // Conservative sampling over the surrounding source cells:
            // Occupied beats Free beats Unknown, so walls never leak.
            // Exact lattice hits degenerate to a single-cell lookup.
            bool any_free = false, any_occ = false;
            for (int ci = fi; ci <= fi + 1; ++ci) {
                if (std::abs(ci - src.i) >= 1.0 - 1e-9) continue;
                for (int cj = fj; cj <= fj + 1; ++cj) {
                    if (std::abs(cj - src.j) >= 1.0 - 1e-9) continue;
                    CellState st = grid.state(ci, cj);
                    any_free |= st == CellState::Free;
                    any_occ |= st == CellState::Occupied;
                }
            }
            if (any_occ) out.set(i, j, CellState::Occupied);
            else if (any_free) out.set(i, j, CellState::Free);
        }
    }
    view.grid = std::move(out);
    view.to_original = back;
    return view;
}

// --- frontier -----------------------------------------------------------------

std::vector<uint8_t> frontier_raster(const OccupancyGrid& grid) {
    std::vector<uint8_t> mask(size_t(grid.rows()) * grid.cols(), 0);
    kernels::frontier_mask(grid.data(), mask.data(), grid.rows(), grid.cols(),
                           grid.cols(), uint8_t(CellState::Free),
                           uint8_t(CellState::Unknown));
    return mask;
}

std::vector<CellPoint> frontier_cells(const OccupancyGrid& grid) {
    std::vector<uint8_t> mask = frontier_raster(grid);
    std::vector<CellPoint> out;
    for (int i = 0; i < grid.rows(); ++i)
        for (int j = 0; j < grid.cols(); ++j)
            if (mask[size_t(i) * grid.cols() + j]) out.push_back({i, j});
    return out;
}

}  // namespace topomap
