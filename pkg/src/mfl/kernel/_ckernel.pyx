# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled evaluation of monomial representations on integer-coded labels.

A representation tree is flattened into a node table (see ``mfl.kernel.compile``).
Every routine returns a status code: 1 for a non-zero term, 0 for zero and a
negative value for an error.  Labels are int64 codes chosen so that every
generator action is a few integer operations.
"""

cimport cython
from libc.stdint cimport int64_t, INT64_MAX
from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil

import numpy as np

# node kinds
cdef enum:
    K_STD = 0
    K_CYC = 1
    K_FREE = 2
    K_SUM = 3
    K_FNM = 4
    K_FINF = 5
    K_FEXT = 6
    K_ZERO = 7

# status codes
cdef enum:
    ERR_DIVERGE = -1
    ERR_OVERFLOW = -2
    ERR_CONSIST = -3
    ERR_INVALID = -4

# strip outcomes
cdef enum:
    S_IN = 1
    S_TAIL = 2
    S_NONE = 3

# batch opcodes
cdef enum:
    OP_ACT = 0
    OP_DECODE = 1
    OP_STRIP = 2
    OP_Q = 3
    OP_R = 4
    OP_U = 5
    OP_EMB = 6

KIND = {"std": K_STD, "cyc": K_CYC, "free": K_FREE, "sum": K_SUM, "fnm": K_FNM,
        "finf": K_FINF, "fext": K_FEXT, "zero": K_ZERO}
OPS = {"act": OP_ACT, "decode": OP_DECODE, "strip": OP_STRIP, "Q": OP_Q, "R": OP_R,
       "U": OP_U, "emb": OP_EMB}
ERRORS = {ERR_DIVERGE: "divergence", ERR_OVERFLOW: "overflow", ERR_CONSIST: "consistency",
          ERR_INVALID: "invalid"}


cdef struct Node:
    int kind
    long n          # arity, 0 for O_inf
    long a          # cycle letter / source node / offset into parts
    long b          # number of summands / source arity
    double complex lam
    double complex lamc


@cython.final
cdef class Kernel:
    cdef Node* nodes
    cdef long* parts
    cdef int nnodes
    cdef long bound

    def __cinit__(self, list nodes, list parts, long bound):
        cdef int k
        self.nnodes = len(nodes)
        self.nodes = <Node*>malloc(max(1, self.nnodes) * sizeof(Node))
        self.parts = <long*>malloc(max(1, len(parts)) * sizeof(long))
        if self.nodes == NULL or self.parts == NULL:
            raise MemoryError()
        for k, (kind, n, a, b, lam) in enumerate(nodes):
            self.nodes[k].kind = kind
            self.nodes[k].n = n
            self.nodes[k].a = a
            self.nodes[k].b = b
            self.nodes[k].lam = lam
            self.nodes[k].lamc = complex(lam).conjugate()
        for k in range(len(parts)):
            self.parts[k] = parts[k]
        self.bound = bound

    def __dealloc__(self):
        free(self.nodes)
        free(self.parts)

    # -- generator actions ---------------------------------------------------

    cdef int act(self, int nd, long i, int adj, int64_t x, double complex* ph, int64_t* out) noexcept nogil:
        cdef Node* N = &self.nodes[nd]
        cdef int64_t r, bb, K
        cdef long a
        cdef int st
        if i < 1 or (N.n > 0 and i > N.n):
            return ERR_INVALID
        if N.kind == K_STD:
            if adj:
                if x % N.n != i - 1:
                    return 0
                out[0] = x // N.n
            else:
                if x > (INT64_MAX - (i - 1)) // N.n:
                    return ERR_OVERFLOW
                out[0] = x * N.n + i - 1
            ph[0] = 1
            return 1
        if N.kind == K_CYC:
            if adj:
                if x == 0:
                    if i != N.a:
                        return 0
                    out[0] = 0
                    ph[0] = N.lamc
                    return 1
                if (x - 1) % N.n + 1 != i:
                    return 0
                out[0] = (x - 1) // N.n
                ph[0] = 1
                return 1
            if x == 0 and i == N.a:
                out[0] = 0
                ph[0] = N.lam
                return 1
            if x > (INT64_MAX - i) // N.n:
                return ERR_OVERFLOW
            out[0] = x * N.n + i
            ph[0] = 1
            return 1
        if N.kind == K_FREE:
            if adj:
                if x == 0:
                    return 0
                a = __builtin_ctzll(<unsigned long long>x) + 1
                if a != i:
                    return 0
                out[0] = x >> a
                ph[0] = 1
                return 1
            if i > 62 or x >= ((<int64_t>1) << (62 - i)):
                return ERR_OVERFLOW
            out[0] = (x << i) | ((<int64_t>1) << (i - 1))
            ph[0] = 1
            return 1
        if N.kind == K_SUM:
            K = N.b
            bb = x % K
            st = self.act(self.parts[N.a + bb], i, adj, x // K, ph, &r)
            if st != 1:
                return st
            if r > (INT64_MAX - bb) // K:
                return ERR_OVERFLOW
            out[0] = r * K + bb
            return 1
        if N.kind == K_FNM:
            return self.act_fnm(N, i, adj, x, ph, out)
        if N.kind == K_FINF:
            return self.embedded(N.a, i, adj, x, ph, out)
        if N.kind == K_FEXT:
            return self.act_fext(N, i, adj, x, ph, out)
        return 0

    cdef int act_fnm(self, Node* N, long i, int adj, int64_t x, double complex* ph, int64_t* out) noexcept nogil:
        cdef int src = N.a
        cdef long n = N.n, m = N.b, j = 0
        cdef double complex p = 1, q = 1
        cdef int64_t base = 0
        cdef int s, st1
        if i < n:
            return self.embedded(src, i, adj, x, ph, out)
        if not adj:
            s = self.strip(src, x, &j, &p, &base)
            if s < 0:
                return s
            if s == S_IN:
                st1 = self.embedded(src, j + n - 1, 0, base, &q, out)
                if st1 == 1:
                    ph[0] = p * q
                return st1
            return self.act(src, m, 0, x, ph, out)
        # (I - Q) r_m* + R_{n-1}*: x is in the range of s_n exactly when it decodes to n
        s = self.decode_fnm(N, x, &j, &p, &base)
        if s < 0:
            return s
        if s == 1 and j == n:
            ph[0] = p
            out[0] = base
            return 1
        return 0

    cdef int act_fext(self, Node* N, long i, int adj, int64_t x, double complex* ph, int64_t* out) noexcept nogil:
        cdef int src = N.a
        cdef long n = N.n, g = 0
        cdef double complex p = 1, q = 1
        cdef int64_t pre = 0
        cdef int st
        if i < n:
            return self.act(src, i, adj, x, ph, out)
        st = self.decode(src, x, &g, &p, &pre)
        if st < 0:
            return st
        if st == 0:
            ph[0] = 1
            out[0] = x
            return 1
        if adj:
            if g < n:
                return 0
            st = self.act(src, g - n + 1, 0, pre, &q, out)
        else:
            st = self.act(src, g + n - 1, 0, pre, &q, out)
        if st == 1:
            ph[0] = p * q
        return st

    cdef int embedded(self, int nd, long j, int adj, int64_t x, double complex* ph, int64_t* out) noexcept nogil:
        """f(t_j) or its adjoint; t_j itself when the node is an O_inf representation."""
        cdef long n = self.nodes[nd].n
        cdef long k, i, t
        cdef double complex p = 1, q = 1
        cdef int64_t cur = x
        cdef int st
        if j < 1:
            return ERR_INVALID
        if n == 0:
            return self.act(nd, j, adj, x, ph, out)
        k = (j - 1) // (n - 1)
        i = (j - 1) % (n - 1) + 1
        if not adj:
            st = self.act(nd, i, 0, cur, &q, &cur)
            if st != 1:
                return st
            p = q
            for t in range(k):
                st = self.act(nd, n, 0, cur, &q, &cur)
                if st != 1:
                    return st
                p = p * q
        else:
            for t in range(k):
                st = self.act(nd, n, 1, cur, &q, &cur)
                if st != 1:
                    return st
                p = p * q
            st = self.act(nd, i, 1, cur, &q, &cur)
            if st != 1:
                return st
            p = p * q
        ph[0] = p
        out[0] = cur
        return 1

    # -- range decoding and strip analysis -----------------------------------

    cdef int decode(self, int nd, int64_t x, long* g, double complex* ph, int64_t* pre) noexcept nogil:
        cdef Node* N = &self.nodes[nd]
        cdef int64_t K, bb, r
        cdef long j = 0
        cdef int st
        if N.kind == K_STD:
            g[0] = x % N.n + 1
            pre[0] = x // N.n
            ph[0] = 1
            return 1
        if N.kind == K_CYC:
            if x == 0:
                g[0] = N.a
                pre[0] = 0
                ph[0] = N.lamc
                return 1
            g[0] = (x - 1) % N.n + 1
            pre[0] = (x - 1) // N.n
            ph[0] = 1
            return 1
        if N.kind == K_FREE:
            if x == 0:
                return 0
            g[0] = __builtin_ctzll(<unsigned long long>x) + 1
            pre[0] = x >> g[0]
            ph[0] = 1
            return 1
        if N.kind == K_SUM:
            K = N.b
            bb = x % K
            st = self.decode(self.parts[N.a + bb], x // K, g, ph, &r)
            if st != 1:
                return st
            if r > (INT64_MAX - bb) // K:
                return ERR_OVERFLOW
            pre[0] = r * K + bb
            return 1
        if N.kind == K_FINF:
            st = self.strip(N.a, x, &j, ph, pre)
            if st < 0:
                return st
            if st == S_IN:
                g[0] = j
                return 1
            return 0
        if N.kind == K_FNM:
            return self.decode_fnm(N, x, g, ph, pre)
        if N.kind == K_FEXT:
            return self.decode_fext(N, x, g, ph, pre)
        return 0

    cdef int decode_fnm(self, Node* N, int64_t x, long* g, double complex* ph, int64_t* pre) noexcept nogil:
        # One strip of x in the source decides the range: f(t_j) for j < n, the
        # R_{n-1} part for j >= n, and r_m(I - Q) on an infinite tail.
        cdef long n = N.n, m = N.b, j = 0
        cdef double complex p = 1, q = 1
        cdef int64_t base = 0
        cdef int s = self.strip(N.a, x, &j, &p, &base)
        if s < 0:
            return s
        if s == S_IN:
            if j < n:
                g[0] = j
                ph[0] = p
                pre[0] = base
                return 1
            s = self.embedded(N.a, j - n + 1, 0, base, &q, pre)
            if s != 1:
                return ERR_CONSIST if s == 0 else s
            g[0] = n
            ph[0] = p * q
            return 1
        if s == S_TAIL:
            s = self.act(N.a, m, 1, x, ph, pre)
            if s != 1:
                return ERR_CONSIST if s == 0 else s
            g[0] = n
            return 1
        return 0

    cdef int decode_fext(self, Node* N, int64_t x, long* g, double complex* ph, int64_t* pre) noexcept nogil:
        cdef long n = N.n, h = 0
        cdef double complex p = 1, q = 1
        cdef int64_t r = 0
        cdef int st = self.decode(N.a, x, &h, &p, &r)
        if st < 0:
            return st
        if st == 0:
            g[0] = n
            ph[0] = 1
            pre[0] = x
            return 1
        if h < n:
            g[0] = h
            ph[0] = p
            pre[0] = r
            return 1
        st = self.act(N.a, h - n + 1, 0, r, &q, pre)
        if st != 1:
            return ERR_CONSIST if st == 0 else st
        g[0] = n
        ph[0] = p * q
        return 1

    cdef int strip_step(self, int nd, long n, int64_t x, int64_t* out) noexcept nogil:
        # one backward s_n step: 1 and the preimage if x lies in range(s_n), 0 otherwise
        cdef long g = 0
        cdef double complex q = 1
        cdef int st = self.decode(nd, x, &g, &q, out)
        if st < 0:
            return st
        if st == 0:
            return ERR_INVALID
        return 1 if g == n else 0

    cdef int strip(self, int nd, int64_t x, long* j, double complex* ph, int64_t* base) noexcept nogil:
        """Backward s_n-orbit of x.

        Matches the visited-set walk exactly: a repeat within ``bound`` steps is
        an infinite tail, no exit and no repeat by then is a divergence.  Cycles
        are found with Brent's method, then the tail length is measured so the
        cutoff agrees with the set-based walk.
        """
        cdef long n = self.nodes[nd].n
        cdef long g = 0, k = 0, power = 1, lam = 0, mu, t
        cdef double complex p = 1, q = 1
        cdef int64_t cur = x, tort = x, pre = 0, h, tt
        cdef int st
        if n == 0:
            st = self.decode(nd, x, &g, ph, base)
            if st < 0:
                return st
            if st == 0:
                return S_NONE
            j[0] = g
            return S_IN
        while True:
            st = self.decode(nd, cur, &g, &q, &pre)
            if st < 0:
                return st
            if st == 0:
                return ERR_INVALID
            p = p * q
            if g < n:
                if k >= self.bound:
                    return ERR_DIVERGE
                j[0] = (n - 1) * k + g
                ph[0] = p
                base[0] = pre
                return S_IN
            k += 1
            cur = pre
            lam += 1
            if cur == tort:
                break
            if lam == power:
                tort = cur
                power <<= 1
                lam = 0
            if k > 3 * self.bound + 3:
                return ERR_DIVERGE
        # cycle of length lam.  The checkpoint sits at or past the tail, so
        # mu + lam <= k and the bound cannot be exceeded when k is within it.
        if k <= self.bound:
            return S_TAIL
        # otherwise measure the tail mu exactly
        h = x
        for t in range(lam):
            st = self.strip_step(nd, n, h, &h)
            if st != 1:
                return ERR_CONSIST if st >= 0 else st
        tt = x
        mu = 0
        while tt != h:
            st = self.strip_step(nd, n, tt, &tt)
            if st != 1:
                return ERR_CONSIST if st >= 0 else st
            st = self.strip_step(nd, n, h, &h)
            if st != 1:
                return ERR_CONSIST if st >= 0 else st
            mu += 1
        if mu + lam <= self.bound:
            return S_TAIL
        return ERR_DIVERGE

    # -- series operators ----------------------------------------------------

    cdef int op_q(self, int nd, int64_t x, double complex* ph, int64_t* out) noexcept nogil:
        cdef long j = 0
        cdef double complex p = 1
        cdef int64_t base = 0
        cdef int s = self.strip(nd, x, &j, &p, &base)
        if s < 0:
            return s
        if s == S_IN:
            ph[0] = 1
            out[0] = x
            return 1
        return 0

    cdef int op_r(self, int nd, long a, int adj, int64_t x, double complex* ph, int64_t* out) noexcept nogil:
        cdef long j = 0
        cdef double complex p = 1, q = 1
        cdef int64_t base = 0
        cdef int st
        cdef int s = self.strip(nd, x, &j, &p, &base)
        if s < 0:
            return s
        if s != S_IN:
            return 0
        if adj:
            if j < a + 1:
                return 0
            st = self.embedded(nd, j - a, 0, base, &q, out)
        else:
            st = self.embedded(nd, j + a, 0, base, &q, out)
        if st == 1:
            ph[0] = p * q
        return st

    cdef int op_u(self, int nd, int adj, int64_t x, double complex* ph, int64_t* out) noexcept nogil:
        cdef long n = self.nodes[nd].n
        cdef double complex q = 1
        cdef int64_t tmp = 0
        cdef int st
        if n == 0:
            return ERR_INVALID
        if adj:
            st = self.act(nd, n, 1, x, ph, out)
            if st != 1:
                return st
            st = self.op_q(nd, out[0], &q, &tmp)
            if st < 0:
                return st
            return 0 if st == 1 else 1
        st = self.op_q(nd, x, &q, &tmp)
        if st < 0:
            return st
        if st == 1:
            return 0
        return self.act(nd, n, 0, x, ph, out)

    # -- batch entry point ---------------------------------------------------

    def run(self, int root, int op, long arg, bint adj, const int64_t[::1] xs):
        """Apply one opcode to every code in ``xs``.

        Returns ``(status, aux, phase, out)``.  ``aux`` carries the generator
        (decode) or the index j (strip); ``status`` is the strip outcome for the
        strip opcode.
        """
        cdef Py_ssize_t k, size = xs.shape[0]
        status_arr = np.empty(size, dtype=np.int8)
        aux_arr = np.empty(size, dtype=np.int64)
        phase_arr = np.empty(size, dtype=np.complex128)
        out_arr = np.empty(size, dtype=np.int64)
        cdef signed char[::1] status = status_arr
        cdef int64_t[::1] aux = aux_arr
        cdef double complex[::1] phase = phase_arr
        cdef int64_t[::1] out = out_arr
        cdef double complex p
        cdef int64_t y
        cdef long g
        cdef int st
        if root < 0 or root >= self.nnodes:
            raise IndexError(root)
        with nogil:
            for k in range(size):
                p = 0
                y = -1
                g = 0
                if op == OP_ACT:
                    st = self.act(root, arg, adj, xs[k], &p, &y)
                elif op == OP_DECODE:
                    st = self.decode(root, xs[k], &g, &p, &y)
                elif op == OP_STRIP:
                    st = self.strip(root, xs[k], &g, &p, &y)
                elif op == OP_Q:
                    st = self.op_q(root, xs[k], &p, &y)
                elif op == OP_R:
                    st = self.op_r(root, arg, adj, xs[k], &p, &y)
                elif op == OP_U:
                    st = self.op_u(root, adj, xs[k], &p, &y)
                elif op == OP_EMB:
                    st = self.embedded(root, arg, adj, xs[k], &p, &y)
                else:
                    st = ERR_INVALID
                status[k] = st
                if st > 0:
                    aux[k] = g
                    phase[k] = p
                    out[k] = y
                else:
                    aux[k] = 0
                    phase[k] = 0
                    out[k] = -1
        return status_arr, aux_arr, phase_arr, out_arr
