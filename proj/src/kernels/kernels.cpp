#include "topomap/kernels.hpp"

#include <cstring>
#include <string>

namespace topomap::kernels {
namespace detail {

// Neighbour layout around p1:
//   p9 p2 p3
//   p8 p1 p4
//   p7 p6 p5
size_t thin_pass_scalar(uint8_t* img, uint8_t* marker, const uint8_t* anchors,
                        int rows, int cols, std::ptrdiff_t stride, int parity) {
    std::memset(marker, 0, size_t(stride) * rows);
    size_t deleted = 0;
    for (int i = 1; i < rows - 1; ++i) {
        const uint8_t* up = img + (i - 1) * stride;
        const uint8_t* mid = img + i * stride;
        const uint8_t* dn = img + (i + 1) * stride;
        const uint8_t* anc = anchors ? anchors + i * stride : nullptr;
        uint8_t* mk = marker + i * stride;
        for (int j = 1; j < cols - 1; ++j) {
            if (!mid[j]) continue;
            if (anc && anc[j]) continue;
            uint8_t p2 = up[j], p3 = up[j + 1], p4 = mid[j + 1], p5 = dn[j + 1];
            uint8_t p6 = dn[j], p7 = dn[j - 1], p8 = mid[j - 1], p9 = up[j - 1];
            int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
            if (b < 2 || b > 6) continue;
            int a = (!p2 && p3) + (!p3 && p4) + (!p4 && p5) + (!p5 && p6) +
                    (!p6 && p7) + (!p7 && p8) + (!p8 && p9) + (!p9 && p2);
            if (a != 1) continue;
            int m1 = parity == 0 ? (p2 & p4 & p6) : (p2 & p4 & p8);
            int m2 = parity == 0 ? (p4 & p6 & p8) : (p2 & p6 & p8);
            if (m1 || m2) continue;
            mk[j] = 1;
            ++deleted;
        }
    }
    if (deleted) {
        for (int i = 1; i < rows - 1; ++i) {
            uint8_t* mid = img + i * stride;
            const uint8_t* mk = marker + i * stride;
            for (int j = 1; j < cols - 1; ++j) mid[j] &= uint8_t(~(0 - mk[j]));
        }
    }
    return deleted;
}

void frontier_mask_scalar(const uint8_t* states, uint8_t* out, int rows, int cols,
                          std::ptrdiff_t stride, uint8_t free_state, uint8_t unknown_state) {
    for (int i = 0; i < rows; ++i) {
        const uint8_t* row = states + i * stride;
        uint8_t* o = out + i * stride;
        for (int j = 0; j < cols; ++j) {
            bool f = row[j] == free_state &&
                     ((i > 0 && states[(i - 1) * stride + j] == unknown_state) ||
                      (i + 1 < rows && states[(i + 1) * stride + j] == unknown_state) ||
                      (j > 0 && row[j - 1] == unknown_state) ||
                      (j + 1 < cols && row[j + 1] == unknown_state));
            o[j] = f ? 1 : 0;
        }
    }
}

void classify_pixels_scalar(const uint8_t* pixels, uint8_t* states, size_t n,
                            int free_above, int occupied_below, uint8_t free_state,
                            uint8_t occupied_state, uint8_t unknown_state) {
    for (size_t k = 0; k < n; ++k) {
        int p = pixels[k];
        states[k] = p > free_above ? free_state
                  : p < occupied_below ? occupied_state
                                       : unknown_state;
    }
}

}  // namespace detail

namespace {

struct Table {
    decltype(&detail::thin_pass_scalar) thin;
    decltype(&detail::frontier_mask_scalar) frontier;
    decltype(&detail::classify_pixels_scalar) classify;
    const char* name;
};

constexpr Table kScalar{&detail::thin_pass_scalar, &detail::frontier_mask_scalar,
                        &detail::classify_pixels_scalar, "scalar"};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Table kAvx2{&detail::thin_pass_avx2, &detail::frontier_mask_avx2,
                      &detail::classify_pixels_avx2, "avx2"};
bool avx2_available() {
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}
#endif

Table pick_backend() {
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_available()) return kAvx2;
#endif
    return kScalar;
}

Table g_active = pick_backend();

}  // namespace

size_t thin_pass(uint8_t* img, uint8_t* marker, const uint8_t* anchors,
                 int rows, int cols, std::ptrdiff_t stride, int parity) {
    return g_active.thin(img, marker, anchors, rows, cols, stride, parity);
}

void frontier_mask(const uint8_t* states, uint8_t* out, int rows, int cols,
                   std::ptrdiff_t stride, uint8_t free_state, uint8_t unknown_state) {
    g_active.frontier(states, out, rows, cols, stride, free_state, unknown_state);
}

void classify_pixels(const uint8_t* pixels, uint8_t* states, size_t n,
                     int free_above, int occupied_below, uint8_t free_state,
                     uint8_t occupied_state, uint8_t unknown_state) {
    g_active.classify(pixels, states, n, free_above, occupied_below, free_state,
                      occupied_state, unknown_state);
}

const char* backend() { return g_active.name; }

bool force_backend(const char* name) {
    std::string want = name;
    if (want == "scalar") {
        g_active = kScalar;
        return true;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (want == "avx2" && avx2_available()) {
        g_active = kAvx2;
        return true;
    }
#endif
    return false;
}

}  // namespace topomap::kernels
