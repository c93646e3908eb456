# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled scan over the two-axis Pauli tuples of a GHZ-diagonal state.

Each equatorial (x/y-only) full correlation reduces to a signed sum of
antidiagonal sector coefficients; squaring and accumulating over all
even-y-count axis masks is the hot loop of the Hilbert-Schmidt bound.
``_bell_kernel_py`` is the interchangeable pure-Python fallback.
"""

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #  define GHZ_POPCOUNT(x) __builtin_popcountll(x)
    #else
    static int GHZ_POPCOUNT(unsigned long long x) {
        int c = 0;
        while (x) { x &= x - 1; ++c; }
        return c;
    }
    #endif
    """
    int GHZ_POPCOUNT(unsigned long long x) nogil


def planar_square_sum(int n, long long[::1] indices, double[::1] coeffs):
    """Sum over even-popcount masks Y of (sum_j coeffs[j] * (-1)^|Y & indices[j]|)^2.

    ``indices``/``coeffs`` hold the antidiagonal support (representative
    index, lambda^+ - lambda^-).  Masks are visited in ascending order and
    the squared terms are Kahan-compensated, so the result is deterministic.
    """
    cdef unsigned long long total = 1ULL << n
    cdef unsigned long long y
    cdef Py_ssize_t j, m = indices.shape[0]
    cdef double t, term, fresh, acc = 0.0, comp = 0.0
    with nogil:
        for y in range(total):
            if GHZ_POPCOUNT(y) & 1:
                continue
            t = 0.0
            for j in range(m):
                if GHZ_POPCOUNT(y & (<unsigned long long> indices[j])) & 1:
                    t -= coeffs[j]
                else:
                    t += coeffs[j]
            term = t * t - comp
            fresh = acc + term
            comp = (fresh - acc) - term
            acc = fresh
    return acc
