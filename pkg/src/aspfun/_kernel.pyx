# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled propositional kernels; same contract as ``_kernel_py``."""

from libc.stdlib cimport malloc, free

cdef enum:
    TRUE = 1
    FALSE = 2


cdef void _least(int n_atoms, const int[:] heads, const int[:] pos_ptr,
                 const int[:] occ_ptr, const int[:] occ_rules,
                 const unsigned char[:] enabled, unsigned char[:] model,
                 int* missing, int* stack) noexcept nogil:
    cdef int n_rules = heads.shape[0]
    cdef int r, a, h, k, top = 0
    for a in range(n_atoms):
        model[a] = 0
    for r in range(n_rules):
        missing[r] = pos_ptr[r + 1] - pos_ptr[r]
        if enabled[r] and missing[r] == 0:
            h = heads[r]
            if h >= 0 and not model[h]:
                model[h] = 1
                stack[top] = h
                top += 1
    while top > 0:
        top -= 1
        a = stack[top]
        for k in range(occ_ptr[a], occ_ptr[a + 1]):
            r = occ_rules[k]
            missing[r] -= 1
            if missing[r] == 0 and enabled[r]:
                h = heads[r]
                if h >= 0 and not model[h]:
                    model[h] = 1
                    stack[top] = h
                    top += 1


def least_model(int n_atoms, const int[:] heads, const int[:] pos_ptr, const int[:] pos_atoms,
                const int[:] occ_ptr, const int[:] occ_rules, const unsigned char[:] enabled):
    cdef int n_rules = heads.shape[0]
    model = bytearray(n_atoms)
    cdef unsigned char[:] mv = model
    cdef int* missing = <int*> malloc((n_rules + 1) * sizeof(int))
    cdef int* stack = <int*> malloc((n_atoms + 1) * sizeof(int))
    if missing == NULL or stack == NULL:
        free(missing)
        free(stack)
        raise MemoryError()
    try:
        if n_atoms:
            _least(n_atoms, heads, pos_ptr, occ_ptr, occ_rules, enabled, mv, missing, stack)
    finally:
        free(missing)
        free(stack)
    return model


def bounds(int n_atoms, const int[:] heads, const int[:] pos_ptr, const int[:] pos_atoms,
           const int[:] neg_ptr, const int[:] neg_atoms, const int[:] occ_ptr,
           const int[:] occ_rules, const unsigned char[:] assign):
    cdef int n_rules = heads.shape[0]
    cdef int r, k
    cdef unsigned char v, all_false, any_true
    lower_on = bytearray(n_rules)
    upper_on = bytearray(n_rules)
    cdef unsigned char[:] lo = lower_on
    cdef unsigned char[:] up = upper_on
    for r in range(n_rules):
        all_false = 1
        any_true = 0
        for k in range(neg_ptr[r], neg_ptr[r + 1]):
            v = assign[neg_atoms[k]]
            if v != FALSE:
                all_false = 0
            if v == TRUE:
                any_true = 1
                break
        lo[r] = all_false
        up[r] = 1 - any_true
    lower = least_model(n_atoms, heads, pos_ptr, pos_atoms, occ_ptr, occ_rules, lower_on)
    upper = least_model(n_atoms, heads, pos_ptr, pos_atoms, occ_ptr, occ_rules, upper_on)
    return lower, upper
