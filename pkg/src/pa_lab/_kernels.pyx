# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernels.

Reference semantics live in pa_lab._kernels_py; both backends consume one
double per elementary step from the supplied numpy bit generator and must
produce bit-identical results on the same stream.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.stdint cimport int64_t

from numpy.random cimport bitgen_t

__all__ = ["backend_name", "pa_extend", "chain_final", "chain_band", "urn_simulate"]


def backend_name():
    return "compiled"


cdef bitgen_t *_get_bitgen(bit_generator) except NULL:
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("expected a numpy BitGenerator")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


def pa_extend(int64_t[::1] slots, int64_t[::1] degrees, int64_t[::1] targets,
              Py_ssize_t t0, Py_ssize_t t1, bit_generator):
    """Advance the one-edge-per-step attachment process from step t0 to t1."""
    cdef bitgen_t *rng
    cdef Py_ssize_t t, j, top, target
    cdef double u
    if t1 <= t0:
        return
    if slots.shape[0] < 2 * t1 or degrees.shape[0] < t1 or targets.shape[0] < t1:
        raise ValueError("arrays too small for requested extension")
    rng = _get_bitgen(bit_generator)
    with bit_generator.lock, nogil:
        for t in range(t0 + 1, t1 + 1):
            u = rng.next_double(rng.state)
            top = 2 * t - 2
            j = <Py_ssize_t>(u * (top + 1))
            if j > top:
                j = top
            target = slots[j] if j < top else t - 1
            slots[top] = target
            slots[top + 1] = t - 1
            degrees[target] += 1
            degrees[t - 1] += 1
            targets[t - 1] = target


def chain_final(int64_t d0, int64_t t0, int64_t t1, bit_generator):
    """Final value at time t1 of the degree chain started at (t0, d0)."""
    cdef bitgen_t *rng
    cdef int64_t d = d0, t = t0, n_steps, i
    cdef double u
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    rng = _get_bitgen(bit_generator)
    n_steps = t1 - t0
    with bit_generator.lock, nogil:
        for i in range(n_steps):
            t += 1
            u = rng.next_double(rng.state)
            if u * (2 * t - 1) < d:
                d += 1
    return int(d)


def chain_band(int64_t d0, int64_t t0, int64_t horizon, double eps, bit_generator):
    """First time in (t0, horizon] the chain leaves (1 +- eps)*sqrt(n/t0)*d0, else 0."""
    cdef bitgen_t *rng
    cdef int64_t d = d0, t = t0, n_steps, i, violation = 0
    cdef double u, dd
    cdef double lo2 = (1.0 - eps) * (1.0 - eps) * d0 * d0 / t0
    cdef double hi2 = (1.0 + eps) * (1.0 + eps) * d0 * d0 / t0
    if horizon < t0:
        raise ValueError("horizon must be >= t0")
    rng = _get_bitgen(bit_generator)
    n_steps = horizon - t0
    with bit_generator.lock, nogil:
        for i in range(n_steps):
            t += 1
            u = rng.next_double(rng.state)
            if u * (2 * t - 1) < d:
                d += 1
            dd = (<double> d) * (<double> d)
            if dd <= lo2 * t or dd >= hi2 * t:
                violation = t
                break
    return int(violation)


def urn_simulate(int64_t a0, int64_t b0, int64_t alpha, int64_t beta,
                 int64_t gamma, int64_t delta, int64_t n, bit_generator):
    """(a, b) after n draws of the additive two-color urn."""
    cdef bitgen_t *rng
    cdef int64_t a = a0, b = b0, i
    cdef double u
    rng = _get_bitgen(bit_generator)
    with bit_generator.lock, nogil:
        for i in range(n):
            u = rng.next_double(rng.state)
            if u * (a + b) < a:
                a += alpha
                b += beta
            else:
                a += gamma
                b += delta
    return int(a), int(b)
