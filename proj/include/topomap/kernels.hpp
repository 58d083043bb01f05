#pragma once

#include <cstddef>
#include <cstdint>

// Raster kernels with scalar reference implementations and AVX2 variants.
// The active backend is picked once at startup from CPU features; tests pin
// both paths against each other on random rasters.

namespace topomap::kernels {

// One Zhang-Suen subiteration over a 0/1 byte raster. `img` must carry a
// 1-cell zero border inside [rows x cols]; `marker` is caller-provided
// scratch of the same size. Deletions are computed against the input state
// and applied at the end of the pass (parallel semantics). Cells with a
// nonzero `anchors` byte are never deleted; `anchors` may be null.
// `parity` selects the first (0) or second (1) subiteration. Returns the
// number of deleted cells.
size_t thin_pass(uint8_t* img, uint8_t* marker, const uint8_t* anchors,
                 int rows, int cols, std::ptrdiff_t stride, int parity);

// out[i,j] = 1 where states[i,j] == free_state and a 4-neighbour inside the
// raster equals unknown_state, else 0. Out-of-bounds neighbours do not count.
void frontier_mask(const uint8_t* states, uint8_t* out, int rows, int cols,
                   std::ptrdiff_t stride, uint8_t free_state, uint8_t unknown_state);

// Tri-state classification of 8-bit pixels: p > free_above -> free_state,
// p < occupied_below -> occupied_state, else unknown_state.
void classify_pixels(const uint8_t* pixels, uint8_t* states, size_t n,
                     int free_above, int occupied_below, uint8_t free_state,
                     uint8_t occupied_state, uint8_t unknown_state);

// Active backend name: "avx2" or "scalar".
const char* backend();

// Force a backend by name (tests only). Returns false if unavailable.
bool force_backend(const char* name);

namespace detail {
size_t thin_pass_scalar(uint8_t*, uint8_t*, const uint8_t*, int, int, std::ptrdiff_t, int);
void frontier_mask_scalar(const uint8_t*, uint8_t*, int, int, std::ptrdiff_t, uint8_t, uint8_t);
void classify_pixels_scalar(const uint8_t*, uint8_t*, size_t, int, int, uint8_t, uint8_t, uint8_t);
#if defined(__x86_64__) || defined(_M_X64)
size_t thin_pass_avx2(uint8_t*, uint8_t*, const uint8_t*, int, int, std::ptrdiff_t, int);
void frontier_mask_avx2(const uint8_t*, uint8_t*, int, int, std::ptrdiff_t, uint8_t, uint8_t);
void classify_pixels_avx2(const uint8_t*, uint8_t*, size_t, int, int, uint8_t, uint8_t, uint8_t);
#endif
}  // namespace detail

}  // namespace topomap::kernels
