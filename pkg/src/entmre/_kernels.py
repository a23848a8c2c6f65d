"""Numerical kernels for the hot paths.

Everything here is compiled with numba's ``@njit`` when available.  Setting
``ENTMRE_DISABLE_NUMBA=1`` (or running without numba installed) selects the
pure-NumPy fallback: the very same functions, executed by the interpreter.
Results are identical between backends; only speed differs.  The script
``benchmarks/bench_kernels.py`` measures the gap.

The kernels intentionally avoid Python objects: states are ``complex128``
arrays, mixtures are ``(probs, states)`` array pairs, and the derivative-free
searches use a self-contained xorshift generator so runs are reproducible
bit-for-bit regardless of backend.
"""

import os

import numpy as np

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env-flag fallback
    numba = None
    _HAVE_NUMBA = False

NUMBA_ENABLED = _HAVE_NUMBA and os.environ.get(
    "ENTMRE_DISABLE_NUMBA", ""
).lower() not in ("1", "true", "yes")


def _kernel(fn):
    if NUMBA_ENABLED:
        return numba.njit(cache=True)(fn)
    return fn


# Numerical policy shared with the high-level modules.
ZERO_EIGENVALUE = 1e-12  # spectrum entries below this are exact zeros
SUPPORT_OVERLAP = 1e-9  # weight on a null eigenvector above this -> +inf
DEGENERATE_XI = 1e-9  # |xi| below this switches to the singular-axis rule
MEMBER_WEIGHT_FLOOR = 1e-12  # mixture members lighter than this are dropped

PAULI = np.array(
    [
        [[1.0, 0.0], [0.0, 1.0]],
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ],
    dtype=np.complex128,
)

_INV_2_53 = 1.0 / 9007199254740992.0
_TWO_PI = 6.283185307179586


@_kernel
def xi_vectors(psi):
    """Bloch vectors of the two reduced states of a pure two-qubit state."""
    a, b, c, d = psi[0], psi[1], psi[2], psi[3]
    ra = a * np.conj(c) + b * np.conj(d)
    rb = a * np.conj(b) + c * np.conj(d)
    aa = a.real * a.real + a.imag * a.imag
    bb = b.real * b.real + b.imag * b.imag
    cc = c.real * c.real + c.imag * c.imag
    dd = d.real * d.real + d.imag * d.imag
    xa = np.empty(3)
    xb = np.empty(3)
    xa[0] = 2.0 * ra.real
    xa[1] = -2.0 * ra.imag
    xa[2] = aa + bb - cc - dd
    xb[0] = 2.0 * rb.real
    xb[1] = -2.0 * rb.imag
    xb[2] = aa - bb + cc - dd
    return xa, xb


@_kernel
def correlation_block(psi):
    """3x3 expectation table of sigma_i (x) sigma_j on a pure state."""
    out = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            acc = 0.0
            for p in range(2):
                for q in range(2):
                    row = np.complex128(0.0)
                    for r in range(2):
                        for s in range(2):
                            row += PAULI[i + 1, p, r] * PAULI[j + 1, q, s] * psi[2 * r + s]
                    acc += (np.conj(psi[2 * p + q]) * row).real
            out[i, j] = acc
    return out


@_kernel
def _vec3_norm(v):
    return np.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])


@_kernel
def eta_axes(psi, xa, xb):
    """Unit reference axes for the separable reference state of a pure state.

    Away from maximal entanglement the axes follow the reduced-state Bloch
    vectors.  At (numerically) maximal entanglement any axis in the leading
    singular subspace of the correlation block is valid; the projection of
    z-hat onto that subspace is used so the four standard maximally entangled
    states get their conventional diagonal reference states.
    """
    na = _vec3_norm(xa)
    nb = _vec3_norm(xb)
    if na >= DEGENERATE_XI and nb >= DEGENERATE_XI:
        return xa / na, xb / nb
    corr = correlation_block(psi)
    u, s, vh = np.linalg.svd(corr)
    lead = s[0] - 1e-7
    ea = np.zeros(3)
    for k in range(3):
        if s[k] >= lead:
            ea += u[:, k] * u[2, k]
    n = _vec3_norm(ea)
    if n < 1e-8:
        ea = u[:, 0].copy()
    else:
        ea = ea / n
    eb = corr.T @ ea
    n = _vec3_norm(eb)
    if n < 1e-12:
        eb = ea.copy()
    else:
        eb = eb / n
    return ea, eb


@_kernel
def pure_reference_table(psi):
    """Pauli coefficient table of the separable reference state of a pure state."""
    xa, xb = xi_vectors(psi)
    ea, eb = eta_axes(psi, xa, xb)
    table = np.empty((4, 4))
    table[0, 0] = 1.0
    for i in range(3):
        table[0, i + 1] = xb[i]
        table[i + 1, 0] = xa[i]
        for j in range(3):
            table[i + 1, j + 1] = ea[i] * eb[j]
    return table


@_kernel
def table_to_matrix(table):
    """Assemble (1/4) sum_{mu,nu} a_{mu nu} sigma_mu (x) sigma_nu."""
    out = np.zeros((4, 4), np.complex128)
    for mu in range(4):
        for nu in range(4):
            t = table[mu, nu]
            if t != 0.0:
                for p in range(2):
                    for r in range(2):
                        ap = PAULI[mu, p, r]
                        if ap != 0.0:
                            for q in range(2):
                                for s in range(2):
                                    out[2 * p + q, 2 * r + s] += 0.25 * t * ap * PAULI[nu, q, s]
    return out


@_kernel
def pure_reference_matrix(psi):
    """Separable reference state of a pure two-qubit state, as a 4x4 matrix."""
    return table_to_matrix(pure_reference_table(psi))


@_kernel
def entropy_bits(evals):
    """Shannon entropy (base 2) of a spectrum; zero-cutoff entries dropped."""
    s = 0.0
    for k in range(evals.shape[0]):
        lam = evals[k]
        if lam > ZERO_EIGENVALUE:
            s -= lam * np.log2(lam)
    return s


@_kernel
def rel_entropy_eigs(rho, evals, evecs, s_rho):
    """Relative entropy (bits) of rho against a state given by its eigensystem.

    ``s_rho`` is the precomputed entropy of rho.  Returns inf when rho has
    weight above the support tolerance on a null eigenvector.
    """
    acc = 0.0
    n = evals.shape[0]
    d = rho.shape[0]
    for k in range(n):
        ov = 0.0
        for p in range(d):
            row = np.complex128(0.0)
            for q in range(d):
                row += rho[p, q] * evecs[q, k]
            ov += (np.conj(evecs[p, k]) * row).real
        if ov < 0.0:
            ov = 0.0
        lam = evals[k]
        if lam <= ZERO_EIGENVALUE:
            if ov > SUPPORT_OVERLAP:
                return np.inf
        elif ov > 1e-12:
            acc += np.log2(lam) * ov
    return -s_rho - acc


@_kernel
def rel_entropy_to(rho, sigma, s_rho):
    """Relative entropy (bits) of rho against sigma, eigendecomposing sigma."""
    w, v = np.linalg.eigh(sigma)
    return rel_entropy_eigs(rho, w, v, s_rho)


@_kernel
def hjw_members(scaled_vecs, u):
    """Mixture members generated by an isometry on scaled eigenvectors.

    ``scaled_vecs`` is (4, r): eigenvectors times sqrt(eigenvalues).  ``u`` is
    (m, r) with orthonormal columns.  Returns member weights and normalized
    member states; zero-weight members are left as zero vectors.
    """
    m = u.shape[0]
    r = u.shape[1]
    probs = np.empty(m)
    states = np.zeros((m, 4), np.complex128)
    for i in range(m):
        p = 0.0
        for x in range(4):
            acc = np.complex128(0.0)
            for k in range(r):
                acc += u[i, k] * scaled_vecs[x, k]
            states[i, x] = acc
            p += acc.real * acc.real + acc.imag * acc.imag
        probs[i] = p
        if p > 0.0:
            inv = 1.0 / np.sqrt(p)
            for x in range(4):
                states[i, x] *= inv
    return probs, states


@_kernel
def mixture_reference_table(probs, states):
    """Weight-averaged reference table over mixture members.

    Members below the weight floor are dropped and the table renormalized so
    the assembled matrix keeps unit trace.
    """
    table = np.zeros((4, 4))
    total = 0.0
    for i in range(probs.shape[0]):
        p = probs[i]
        if p <= MEMBER_WEIGHT_FLOOR:
            continue
        total += p
        psi = states[i]
        xa, xb = xi_vectors(psi)
        ea, eb = eta_axes(psi, xa, xb)
        table[0, 0] += p
        for a in range(3):
            table[0, a + 1] += p * xb[a]
            table[a + 1, 0] += p * xa[a]
            for b in range(3):
                table[a + 1, b + 1] += p * ea[a] * eb[b]
    if total > 0.0:
        inv = 1.0 / total
        for a in range(4):
            for b in range(4):
                table[a, b] *= inv
    return table


@_kernel
def mre_objective_u(rho, s_rho, scaled_vecs, u):
    """Relative entropy of rho against the reference built from isometry u."""
    probs, states = hjw_members(scaled_vecs, u)
    table = mixture_reference_table(probs, states)
    ref = table_to_matrix(table)
    return rel_entropy_to(rho, ref, s_rho)


@_kernel
def isometry_from_params(params, m, r):
    """The isometry the search parametrization maps a parameter vector to.

    QR with the gauge fixed by the phases of R's diagonal, so that a
    parameter vector holding an isometry's entries maps back to exactly that
    isometry (important for warm starts).
    """
    mr = m * r
    z = np.empty((m, r), np.complex128)
    for i in range(m):
        for k in range(r):
            idx = i * r + k
            z[i, k] = complex(params[idx], params[mr + idx])
    q, rr = np.linalg.qr(z)
    for k in range(r):
        d = rr[k, k]
        a = abs(d)
        if a > 0.0:
            phase = d / a
            for i in range(m):
                q[i, k] *= phase
    return q


@_kernel
def mre_objective_params(params, m, r, rho, s_rho, scaled_vecs):
    """Objective over the real parametrization: params -> isometry by QR."""
    q = isometry_from_params(params, m, r)
    return mre_objective_u(rho, s_rho, scaled_vecs, q)


# ---------------------------------------------------------------------------
# Self-contained PRNG (xorshift64*) so search trajectories are reproducible
# independently of the backend.
# ---------------------------------------------------------------------------


@_kernel
def _rng_u64(state):
    # state has two slots: the generator word and a scratch word.  The final
    # multiply wraps mod 2^64 by design; doing it as an in-place array op
    # keeps NumPy's scalar-overflow warning out of the fallback path.
    x = state[0]
    x ^= x >> np.uint64(12)
    x ^= x << np.uint64(25)
    x ^= x >> np.uint64(27)
    state[0] = x
    state[1] = x
    state[1:] *= np.uint64(0x2545F4914F6CDD1D)
    return state[1]


@_kernel
def _rng_uniform(state):
    return float(_rng_u64(state) >> np.uint64(11)) * _INV_2_53


@_kernel
def _rng_normal(state):
    u1 = 1.0 - _rng_uniform(state)
    u2 = _rng_uniform(state)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(_TWO_PI * u2)


@_kernel
def es_refine_mre(params, m, r, rho, s_rho, scaled_vecs, iters, sigma0, seed):
    """(1+1) evolution-strategy descent on the isometry parametrization.

    Mutates ``params`` in place and returns the best objective value reached.
    The step size grows on success and shrinks on failure; the loop stops
    early once steps become too small to matter.
    """
    state = np.empty(2, np.uint64)
    state[0] = np.uint64(seed) | np.uint64(1)
    n = params.shape[0]
    best = mre_objective_params(params, m, r, rho, s_rho, scaled_vecs)
    sigma = sigma0
    trial = np.empty(n)
    for _ in range(iters):
        for j in range(n):
            trial[j] = params[j] + sigma * _rng_normal(state)
        val = mre_objective_params(trial, m, r, rho, s_rho, scaled_vecs)
        if val < best:
            best = val
            for j in range(n):
                params[j] = trial[j]
            sigma *= 1.5
            if sigma > 2.0:
                sigma = 2.0
        else:
            sigma *= 0.97
            if sigma < 1e-8:
                break
    return best


# ---------------------------------------------------------------------------
# Separable-state search (upper estimate of the relative entropy of
# entanglement): convex mixtures of product projectors parametrized by
# weight logits and Bloch angles.
# ---------------------------------------------------------------------------


@_kernel
def separable_matrix_params(params, k_terms):
    """Mixture of product projectors from [logits | thA | phA | thB | phB]."""
    mx = params[0]
    for k in range(1, k_terms):
        if params[k] > mx:
            mx = params[k]
    w = np.empty(k_terms)
    wsum = 0.0
    for k in range(k_terms):
        w[k] = np.exp(params[k] - mx)
        wsum += w[k]
    sigma = np.zeros((4, 4), np.complex128)
    va = np.empty(2, np.complex128)
    vb = np.empty(2, np.complex128)
    prod = np.empty(4, np.complex128)
    for k in range(k_terms):
        ta = params[k_terms + k]
        pa = params[2 * k_terms + k]
        tb = params[3 * k_terms + k]
        pb = params[4 * k_terms + k]
        va[0] = np.cos(0.5 * ta)
        va[1] = np.sin(0.5 * ta) * np.exp(1j * pa)
        vb[0] = np.cos(0.5 * tb)
        vb[1] = np.sin(0.5 * tb) * np.exp(1j * pb)
        for p in range(2):
            for q in range(2):
                prod[2 * p + q] = va[p] * vb[q]
        wk = w[k] / wsum
        for x in range(4):
            for y in range(4):
                sigma[x, y] += wk * prod[x] * np.conj(prod[y])
    return sigma


@_kernel
def re_objective_params(params, k_terms, rho, s_rho):
    sigma = separable_matrix_params(params, k_terms)
    return rel_entropy_to(rho, sigma, s_rho)


@_kernel
def es_refine_re(params, k_terms, rho, s_rho, iters, sigma0, seed):
    """(1+1) evolution-strategy descent for the separable-state search."""
    state = np.empty(2, np.uint64)
    state[0] = np.uint64(seed) | np.uint64(1)
    n = params.shape[0]
    best = re_objective_params(params, k_terms, rho, s_rho)
    sigma = sigma0
    trial = np.empty(n)
    for _ in range(iters):
        for j in range(n):
            trial[j] = params[j] + sigma * _rng_normal(state)
        val = re_objective_params(trial, k_terms, rho, s_rho)
        if val < best:
            best = val
            for j in range(n):
                params[j] = trial[j]
            sigma *= 1.5
            if sigma > 2.0:
                sigma = 2.0
        else:
            sigma *= 0.97
            if sigma < 1e-8:
                break
    return best
