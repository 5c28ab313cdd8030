"""Independent dense exact-diagonalization oracle.

Builds Jordan-Wigner fermion operators on the full 4^n Fock space with numpy
and evaluates the quantities whose expected values are frozen into the C++
tests. Nothing here shares code with the library.

Mode ordering: orbital-major, spin-up before spin-down (mode p = 2*orb + spin).
"""
import itertools
import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

_cache = {}
def annihilators(nmodes):
    if nmodes in _cache:
        return _cache[nmodes]
    I = sp.identity(2, format="csr"); Z = sp.csr_matrix(np.diag([1.0, -1.0]))
    a = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    ops = []
    for p in range(nmodes):
        m = sp.identity(1, format="csr")
        for q in range(nmodes):
            # mode 0 is the leftmost tensor factor
            f = Z if q < p else (a if q == p else I)
            m = sp.kron(m, f, format="csr")
        ops.append(m)
    _cache[nmodes] = ops
    return ops

def hubbard(n, edges, U, eps, nmodes_ops):
    c = nmodes_ops
    dim = c[0].shape[0]
    H = sp.csr_matrix((dim, dim))
    for (i, j, t) in edges:
        for s in range(2):
            hop = c[2*i+s].T @ c[2*j+s]
            H -= t * (hop + hop.T)
    for i in range(n):
        nu = c[2*i].T @ c[2*i]; nd = c[2*i+1].T @ c[2*i+1]
        H += U[i] * nu @ nd + eps[i] * (nu + nd)
    return H

def number_ops(c):
    return [x.T @ x for x in c]

def sector_states(H, c, nup, ndn, k):
    nops = number_ops(c)
    Nu = sum(nops[0::2]).diagonal(); Nd = sum(nops[1::2]).diagonal()
    idx = [b for b in range(H.shape[0]) if round(Nu[b]) == nup and round(Nd[b]) == ndn]
    Hs = H.toarray()[np.ix_(idx, idx)] if H.shape[0] <= 256 else H[idx][:, idx].toarray()
    w, v = np.linalg.eigh(Hs)
    out = []
    for r in range(k):
        full = np.zeros(H.shape[0]); full[idx] = v[:, r]
        out.append((w[r], full))
    return out

def reduced(psi, n, subset):
    """Partial trace via the operator definition rho[a,a'] = <psi| C+_{a'} P_vac C_a |psi>."""
    c = annihilators(2*n)
    dim = 4 ** len(subset)
    modes = [2*o + s for o in subset for s in range(2)]
    Id = sp.identity(c[0].shape[0], format="csr")
    P = Id
    for p in modes:
        P = P @ (Id - c[p].T @ c[p])
    def creator(a):
        m = sp.identity(c[0].shape[0], format="csr")
        digits = []
        for pos in range(len(subset)):
            d = (a >> (2 * (len(subset) - 1 - pos))) & 3
            digits.append(d)
        for pos, d in enumerate(digits):
            o = subset[pos]
            if d & 1: m = m @ c[2*o].T
            if d & 2: m = m @ c[2*o+1].T
        return m
    C = [creator(a) for a in range(dim)]
    rho = np.zeros((dim, dim), dtype=complex)
    for a in range(dim):
        for b in range(dim):
            op = C[b] @ P @ C[a].conj().T
            rho[a, b] = psi.conj() @ (op @ psi)
    return rho

def entropy(rho):
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-14]
    return float(-(w * np.log(w)).sum())

def mixed_reduced(ens, n, subset):
    return sum(w * reduced(psi, n, subset) for w, psi in ens)

def mi(ens, n, i, j):
    return entropy(mixed_reduced(ens, n, [i])) + entropy(mixed_reduced(ens, n, [j])) - entropy(mixed_reduced(ens, n, [i, j]))

def ring_edges(n, ts):
    return [(i, (i+1) % n, ts[i]) for i in range(n)]

if __name__ == "__main__":
    import sys
    which = sys.argv[1] if len(sys.argv) > 1 else "all"
    if which in ("dimer", "all"):
        c = annihilators(4)
        for U in [0, 1, 2, 4, 8, 16, 32, 1000]:
            H = hubbard(2, [(0, 1, 1.0)], [U, U], [0, 0], c)
            E, psi = sector_states(H, c, 1, 1, 1)[0]
            print(f"dimer U={U} E0={E:.15f} S_site={entropy(reduced(psi, 2, [0])):.15f}")

def ground_relabeled(n, edges, U, eps, nup, ndn, order):
    """Ground state of the model with sites relabeled so that order[k] -> k."""
    pos = {s: k for k, s in enumerate(order)}
    e2 = [(pos[i], pos[j], t) for (i, j, t) in edges]
    U2 = [U[s] for s in order]; eps2 = [eps[s] for s in order]
    c = annihilators(2 * n)
    H = hubbard(n, e2, U2, eps2, c)
    return sector_states(H, c, nup, ndn, 1)[0]

def subset_entropy(n, edges, U, eps, nup, ndn, subset):
    order = list(subset) + [s for s in range(n) if s not in subset]
    E, psi = ground_relabeled(n, edges, U, eps, nup, ndn, order)
    M = psi.reshape(4 ** len(subset), 4 ** (n - len(subset)))
    return entropy(M @ M.conj().T)

def ring_report(n, ts, U, nup, ndn, eta=0.1):
    edges = ring_edges(n, ts)
    Us = [U] * n; eps = [0.0] * n
    S = {}
    for k in range(1, n // 2 + 1):
        for A in itertools.combinations(range(n), k):
            S[A] = subset_entropy(n, edges, Us, eps, nup, ndn, A)
    def ent(A):
        A = tuple(sorted(A))
        if len(A) <= n // 2:
            return S[A]
        return S[tuple(s for s in range(n) if s not in A)]
    Imax = 2 * np.log(4)
    mis = {}
    for i, j in itertools.combinations(range(n), 2):
        mis[(i, j)] = ent([i]) + ent([j]) - ent([i, j])
    edges_kept = [p for p, v in mis.items() if v >= eta * Imax]
    # gme over single-site parties of the full state
    best = None
    for mask in range(1, 2 ** (n - 1)):
        A = [s + 1 for s in range(n - 1) if mask >> s & 1]
        v = ent(A)
        best = v if best is None else min(best, v)
    return S, mis, edges_kept, best

if __name__ == "__main__" and which in ("ring", "all"):
    for label, ts in [("uniform", [1.0] * 6), ("dimerized", [1.0, 0.2] * 3)]:
        S, mis, kept, g = ring_report(6, ts, 2.0, 3, 3)
        print(label)
        for p, v in sorted(mis.items()):
            print(f"  I{p} = {v:.12f} norm {v / (2*np.log(4)):.12f}")
        print("  kept edges:", kept)
        print(f"  GME(full) = {g:.12f} norm {g / np.log(4):.12f}")

def ionic_dimer_params(R, t0=1.0, decay=2.0, delta_inf=1.0/3.0, U=1.0):
    t = t0 * np.exp(-R / decay)
    delta = delta_inf - 1.0 / R       # ionic (both electrons on site 1) minus covalent
    eps = [0.0, delta - U]
    return t, [U, U], eps

def thermal_mi(R, beta=1e3, nstates=4, **kw):
    t, Us, eps = ionic_dimer_params(R, **kw)
    c = annihilators(4)
    H = hubbard(2, [(0, 1, t)], Us, eps, c)
    pairs = []
    for nup, ndn in [(2, 0), (1, 1), (0, 2)]:
        dim = {(2, 0): 1, (1, 1): 4, (0, 2): 1}[(nup, ndn)]
        pairs += sector_states(H, c, nup, ndn, dim)
    pairs.sort(key=lambda p: p[0])
    pairs = pairs[:nstates]
    E0 = pairs[0][0]
    w = np.array([np.exp(-beta * (E - E0)) for E, _ in pairs]); w /= w.sum()
    ens = list(zip(w, [p[1] for p in pairs]))
    return mi(ens, 2, 0, 1)

if __name__ == "__main__" and which in ("ionic", "all"):
    Imax = 2 * np.log(4)
    grid = [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0, 15.0, 20.0, 25.0, 30.0]
    for R in grid:
        v = thermal_mi(R)
        print(f"R={R:5.1f} I={v:.12f} norm={v / Imax:.12f}")
