#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstring>

#include "topomap/kernels.hpp"

namespace topomap::kernels::detail {

namespace {

inline int popcount32(uint32_t v) { return __builtin_popcount(v); }

// 0/1 byte complement.
inline __m256i not01(__m256i v, __m256i one) { return _mm256_xor_si256(v, one); }

}  // namespace

size_t thin_pass_avx2(uint8_t* img, uint8_t* marker, const uint8_t* anchors,
                      int rows, int cols, std::ptrdiff_t stride, int parity) {
    std::memset(marker, 0, size_t(stride) * rows);
    const __m256i one = _mm256_set1_epi8(1);
    const __m256i zero = _mm256_setzero_si256();
    size_t deleted = 0;

    for (int i = 1; i < rows - 1; ++i) {
        const uint8_t* up = img + (i - 1) * stride;
        const uint8_t* mid = img + i * stride;
        const uint8_t* dn = img + (i + 1) * stride;
        const uint8_t* anc = anchors ? anchors + i * stride : nullptr;
        uint8_t* mk = marker + i * stride;

        int j = 1;
        for (; j + 32 <= cols - 1; j += 32) {
            __m256i p1 = _mm256_loadu_si256((const __m256i*)(mid + j));
            uint32_t alive = _mm256_movemask_epi8(_mm256_cmpgt_epi8(p1, zero));
            if (!alive) continue;

            __m256i p2 = _mm256_loadu_si256((const __m256i*)(up + j));
            __m256i p3 = _mm256_loadu_si256((const __m256i*)(up + j + 1));
            __m256i p4 = _mm256_loadu_si256((const __m256i*)(mid + j + 1));
            __m256i p5 = _mm256_loadu_si256((const __m256i*)(dn + j + 1));
            __m256i p6 = _mm256_loadu_si256((const __m256i*)(dn + j));
            __m256i p7 = _mm256_loadu_si256((const __m256i*)(dn + j - 1));
            __m256i p8 = _mm256_loadu_si256((const __m256i*)(mid + j - 1));
            __m256i p9 = _mm256_loadu_si256((const __m256i*)(up + j - 1));

            __m256i b = _mm256_add_epi8(
                _mm256_add_epi8(_mm256_add_epi8(p2, p3), _mm256_add_epi8(p4, p5)),
                _mm256_add_epi8(_mm256_add_epi8(p6, p7), _mm256_add_epi8(p8, p9)));

            __m256i a = _mm256_add_epi8(
                _mm256_add_epi8(_mm256_add_epi8(_mm256_and_si256(not01(p2, one), p3),
                                                _mm256_and_si256(not01(p3, one), p4)),
                                _mm256_add_epi8(_mm256_and_si256(not01(p4, one), p5),
                                                _mm256_and_si256(not01(p5, one), p6))),
                _mm256_add_epi8(_mm256_add_epi8(_mm256_and_si256(not01(p6, one), p7),
                                                _mm256_and_si256(not01(p7, one), p8)),
                                _mm256_add_epi8(_mm256_and_si256(not01(p8, one), p9),
                                                _mm256_and_si256(not01(p9, one), p2))));

            __m256i m1 = parity == 0 ? _mm256_and_si256(_mm256_and_si256(p2, p4), p6)
                                     : _mm256_and_si256(_mm256_and_si256(p2, p4), p8);
            __m256i m2 = parity == 0 ? _mm256_and_si256(_mm256_and_si256(p4, p6), p8)
                                     : _mm256_and_si256(_mm256_and_si256(p2, p6), p8);

            __m256i del = _mm256_cmpgt_epi8(p1, zero);
            del = _mm256_and_si256(del, _mm256_cmpeq_epi8(a, one));
            del = _mm256_and_si256(del, _mm256_cmpgt_epi8(b, one));
            del = _mm256_and_si256(del, _mm256_cmpgt_epi8(_mm256_set1_epi8(7), b));
            del = _mm256_and_si256(del, _mm256_cmpeq_epi8(m1, zero));
            del = _mm256_and_si256(del, _mm256_cmpeq_epi8(m2, zero));
            if (anc) {
                __m256i av = _mm256_loadu_si256((const __m256i*)(anc + j));
                del = _mm256_and_si256(del, _mm256_cmpeq_epi8(av, zero));
            }

            uint32_t mask = _mm256_movemask_epi8(del);
            if (!mask) continue;
            deleted += popcount32(mask);
            _mm256_storeu_si256((__m256i*)(mk + j), _mm256_and_si256(del, one));
        }

        // scalar tail
        for (; j < cols - 1; ++j) {
            if (!mid[j]) continue;
            if (anc && anc[j]) continue;
            uint8_t p2 = up[j], p3 = up[j + 1], p4 = mid[j + 1], p5 = dn[j + 1];
            uint8_t p6 = dn[j], p7 = dn[j - 1], p8 = mid[j - 1], p9 = up[j - 1];
            int bsum = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
            if (bsum < 2 || bsum > 6) continue;
            int asum = (!p2 && p3) + (!p3 && p4) + (!p4 && p5) + (!p5 && p6) +
                       (!p6 && p7) + (!p7 && p8) + (!p8 && p9) + (!p9 && p2);
            if (asum != 1) continue;
            int c1 = parity == 0 ? (p2 & p4 & p6) : (p2 & p4 & p8);
            int c2 = parity == 0 ? (p4 & p6 & p8) : (p2 & p6 & p8);
            if (c1 || c2) continue;
            mk[j] = 1;
            ++deleted;
        }
    }

    if (deleted) {
        for (int i = 1; i < rows - 1; ++i) {
            uint8_t* mid = img + i * stride;
            const uint8_t* mk = marker + i * stride;
            int j = 1;
            for (; j + 32 <= cols - 1; j += 32) {
                __m256i v = _mm256_loadu_si256((const __m256i*)(mid + j));
                __m256i m = _mm256_loadu_si256((const __m256i*)(mk + j));
                __m256i keep = _mm256_cmpeq_epi8(m, _mm256_setzero_si256());
                _mm256_storeu_si256((__m256i*)(mid + j), _mm256_and_si256(v, keep));
            }
            for (; j < cols - 1; ++j) mid[j] &= uint8_t(~(0 - mk[j]));
        }
    }
    return deleted;
}

void frontier_mask_avx2(const uint8_t* states, uint8_t* out, int rows, int cols,
                        std::ptrdiff_t stride, uint8_t free_state, uint8_t unknown_state) {
    const __m256i vfree = _mm256_set1_epi8(char(free_state));
    const __m256i vunk = _mm256_set1_epi8(char(unknown_state));
    const __m256i one = _mm256_set1_epi8(1);

    auto scalar_cell = [&](int i, int j) {
        const uint8_t* row = states + i * stride;
        bool f = row[j] == free_state &&
                 ((i > 0 && states[(i - 1) * stride + j] == unknown_state) ||
                  (i + 1 < rows && states[(i + 1) * stride + j] == unknown_state) ||
                  (j > 0 && row[j - 1] == unknown_state) ||
                  (j + 1 < cols && row[j + 1] == unknown_state));
        out[i * stride + j] = f ? 1 : 0;
    };

    for (int i = 0; i < rows; ++i) {
        if (i == 0 || i == rows - 1 || cols < 34) {
            for (int j = 0; j < cols; ++j) scalar_cell(i, j);
            continue;
        }
        const uint8_t* up = states + (i - 1) * stride;
        const uint8_t* mid = states + i * stride;
        const uint8_t* dn = states + (i + 1) * stride;
        uint8_t* o = out + i * stride;
        scalar_cell(i, 0);
        int j = 1;
        for (; j + 32 <= cols - 1; j += 32) {
            __m256i c = _mm256_loadu_si256((const __m256i*)(mid + j));
            __m256i isfree = _mm256_cmpeq_epi8(c, vfree);
            __m256i n = _mm256_cmpeq_epi8(_mm256_loadu_si256((const __m256i*)(up + j)), vunk);
            n = _mm256_or_si256(n, _mm256_cmpeq_epi8(_mm256_loadu_si256((const __m256i*)(dn + j)), vunk));
            n = _mm256_or_si256(n, _mm256_cmpeq_epi8(_mm256_loadu_si256((const __m256i*)(mid + j - 1)), vunk));
            n = _mm256_or_si256(n, _mm256_cmpeq_epi8(_mm256_loadu_si256((const __m256i*)(mid + j + 1)), vunk));
            _mm256_storeu_si256((__m256i*)(o + j), _mm256_and_si256(_mm256_and_si256(isfree, n), one));
        }
        for (; j < cols; ++j) scalar_cell(i, j);
    }
}

void classify_pixels_avx2(const uint8_t* pixels, uint8_t* states, size_t n,
                          int free_above, int occupied_below, uint8_t free_state,
                          uint8_t occupied_state, uint8_t unknown_state) {
    const __m256i bias = _mm256_set1_epi8(char(0x80));
    const __m256i vfa = _mm256_set1_epi8(char((free_above & 0xff) ^ 0x80));
    const __m256i vob = _mm256_set1_epi8(char((occupied_below & 0xff) ^ 0x80));
    const __m256i vf = _mm256_set1_epi8(char(free_state));
    const __m256i vo = _mm256_set1_epi8(char(occupied_state));
    const __m256i vu = _mm256_set1_epi8(char(unknown_state));
    bool fa_possible = free_above < 255;
    bool ob_possible = occupied_below > 0;

    size_t k = 0;
    for (; k + 32 <= n; k += 32) {
        __m256i p = _mm256_loadu_si256((const __m256i*)(pixels + k));
        __m256i ps = _mm256_xor_si256(p, bias);
        __m256i isfree = fa_possible ? _mm256_cmpgt_epi8(ps, vfa) : _mm256_setzero_si256();
        __m256i isocc = ob_possible ? _mm256_cmpgt_epi8(vob, ps) : _mm256_setzero_si256();
        __m256i r = _mm256_blendv_epi8(vu, vo, isocc);
        r = _mm256_blendv_epi8(r, vf, isfree);
        _mm256_storeu_si256((__m256i*)(states + k), r);
    }
    for (; k < n; ++k) {
        int p = pixels[k];
        states[k] = p > free_above ? free_state
                  : p < occupied_below ? occupied_state
                                       : unknown_state;
    }
}

}  // namespace topomap::kernels::detail

#endif  // x86_64
