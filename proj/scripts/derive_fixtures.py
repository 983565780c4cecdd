#!/usr/bin/env python3
"""Derive the shipped quiver fixtures under data/.

Curve quivers (D_n, E_6, E_7, E_8) come from Knoerrer's description of the
AR quiver of a plane curve f(x,y)=0 as the quotient of the AR quiver of the
surface f(x,y)+z^2=0 (the McKay graph of the Kleinian group) by the
involution z -> -z. Surface quivers D_{5,3} and D_{7,5} are McKay quivers of
the metacyclic groups G = <a, b> computed from characters (D_{5,3} is checked
against the figure transcription).

Usage: scripts/derive_fixtures.py [outdir]
"""
import itertools
import json
import sys
from collections import defaultdict, deque
from pathlib import Path

import numpy as np


# ---------------------------------------------------------------- Kleinian graphs

def d_tilde(n):
    # 0 and 1 are leaves at c_2, chain c_2..c_{n-2}, leaves n-1, n at c_{n-2}
    edges = [(0, 2), (1, 2)] + [(j, j + 1) for j in range(2, n - 2)] + [(n - 2, n - 1), (n - 2, n)]
    omega = list(range(n + 1))
    if n % 2 == 1:
        omega[n - 1], omega[n] = n, n - 1
    dims = [1, 1] + [2] * (n - 3) + [1, 1]
    return n + 1, edges, omega, dims


def e_tilde(t):
    if t == 6:
        edges = [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)]
        return 7, edges, [0, 1, 2, 5, 6, 3, 4], [1, 2, 3, 2, 1, 2, 1]
    if t == 7:
        edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)]
        return 8, edges, list(range(8)), [1, 2, 3, 4, 3, 2, 1, 2]
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)]
    return 9, edges, list(range(9)), [1, 2, 3, 4, 5, 6, 4, 2, 3]


def fold(nv, edges, omega):
    """Curve quiver from a Kleinian graph and the involution omega.

    A pair orbit {v, omega v} gives one tau-fixed vertex; an omega-fixed v
    splits into v+ and v- swapped by tau. Vertex 0 is R.
    Returns (keys, arrows {(u,v): mult}, tau {u: v}) on string keys.
    """
    fixed = [v for v in range(1, nv) if omega[v] == v]
    pairs, seen = [], set()
    for v in range(1, nv):
        if omega[v] != v and v not in seen:
            pairs.append((v, omega[v]))
            seen |= {v, omega[v]}
    orbit = {}
    for a, b in pairs:
        orbit[a] = orbit[b] = f"[{a},{b}]"
    tau = {}
    for v in fixed:
        tau[f"{v}+"], tau[f"{v}-"] = f"{v}-", f"{v}+"
    for a, _ in pairs:
        tau[orbit[a]] = orbit[a]
    adj = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)

    def lifts(v):
        if v == 0:
            return ["R"]
        if v in orbit:
            return [orbit[v]]
        return [f"{v}+", f"{v}-"]

    arrows = defaultdict(int)
    for a, _ in pairs:
        for w in adj[a]:
            for x in lifts(w):
                arrows[(x, orbit[a])] += 1
    for v in fixed:
        per_orbit = defaultdict(int)
        for w in adj[v]:
            if w in orbit:
                per_orbit[orbit[w]] += 1
        for o, c in per_orbit.items():
            assert c % 2 == 0
            for s in "+-":
                arrows[(o, f"{v}{s}")] += c // 2
    used = defaultdict(int)
    for a, b in edges:
        if 0 in (a, b) and (a in fixed or b in fixed):
            v = b if a == 0 else a
            s, o = ("+", "-") if used[v] % 2 == 0 else ("-", "+")
            used[v] += 1
            arrows[("R", f"{v}{s}")] += 1
            arrows[(f"{v}{o}", "R")] += 1
        elif a in fixed and b in fixed:
            arrows[(f"{a}+", f"{b}+")] += 1
            arrows[(f"{b}+", f"{a}-")] += 1
            arrows[(f"{a}-", f"{b}-")] += 1
            arrows[(f"{b}-", f"{a}+")] += 1
    for a, _ in pairs:
        m = arrows.get(("R", orbit[a]), 0)
        if m:
            arrows[(orbit[a], "R")] += m
    keys = ["R"] + [f"{v}{s}" for v in fixed for s in "+-"] + [orbit[a] for a, _ in pairs]
    return keys, dict(arrows), tau


# ---------------------------------------------------------------- naming

def d_names(n):
    name = {"R": "R"}
    m_far = (n - 1) // 2
    for v in range(1, n + 1):
        for s in "+-":
            k = f"{v}{s}"
            if v == 1:
                name[k] = "A" if s == "+" else "B"
            elif v <= n - 2:
                i = v // 2
                if v % 2 == 0:
                    name[k] = f"X{i}" if s == "+" else f"Y{i}"
                else:
                    name[k] = f"N{i}" if s == "+" else f"M{i}"
            elif n % 2 == 0 and v == n - 1:
                name[k] = "C+" if s == "+" else "D-"
            elif n % 2 == 0:
                name[k] = "C-" if s == "+" else "D+"
    if n % 2 == 1:
        name[f"[{n - 1},{n}]"] = f"X{m_far}"
    return name


E6_NAMES = {"R": "R", "1+": "M1", "1-": "N1", "2+": "A", "2-": "B", "[3,5]": "X", "[4,6]": "M2"}

E7_NAMES = {"R": "R", "1+": "M1", "1-": "N1", "2+": "X1", "2-": "Y1", "3+": "X3", "3-": "Y3",
            "4+": "X2", "4-": "Y2", "5+": "M2", "5-": "N2", "6+": "B", "6-": "A",
            "7+": "C", "7-": "D"}

E8_NAMES = {"R": "R", "1+": "M1", "1-": "N1", "2+": "B1", "2-": "A1", "3+": "X1", "3-": "Y1",
            "4+": "C1", "4-": "D1", "5+": "C2", "5-": "D2", "6+": "X2", "6-": "Y2",
            "7+": "M2", "7-": "N2", "8+": "B2", "8-": "A2"}


def d_ranks(n):
    if n % 2 == 1:
        r = {"R": (1, 1), "A": (1, 0), "B": (0, 1)}
        for i in range(1, (n - 1) // 2 + 1):
            r[f"X{i}"] = (1, 1)
        for i in range(1, (n - 3) // 2 + 1):
            r[f"Y{i}"], r[f"M{i}"], r[f"N{i}"] = (1, 1), (0, 1), (2, 1)
        return r
    r = {"R": (1, 1, 1), "A": (1, 0, 0), "B": (0, 1, 1), "C+": (1, 0, 1), "C-": (1, 1, 0),
         "D+": (0, 0, 1), "D-": (0, 1, 0)}
    for i in range(1, (n - 2) // 2 + 1):
        r[f"X{i}"] = r[f"Y{i}"] = (1, 1, 1)
    for i in range(1, (n - 4) // 2 + 1):
        r[f"M{i}"], r[f"N{i}"] = (0, 1, 1), (2, 1, 1)
    return r


E6_RANKS = {"R": (1,), "M1": (1,), "N1": (1,), "A": (2,), "B": (1,), "X": (2,), "M2": (1,)}

E7_RANKS = {"R": (1, 1), "M1": (1, 1), "N1": (1, 1), "X1": (2, 2), "X2": (1, 2), "X3": (2, 2),
            "Y3": (2, 2), "C": (2, 1), "M2": (1, 1), "Y2": (2, 1), "N2": (1, 1), "Y1": (1, 1),
            "B": (0, 1), "D": (0, 1), "A": (1, 0)}




def check_ranks(labels, arrows, tau, ranks):
    zero = tuple(0 for _ in ranks["R"])
    preds = defaultdict(list)
    for (u, v), m in arrows.items():
        preds[v].append((u, m))
    for v in labels:
        lhs = ranks[v] if v == "R" else tuple(a + b for a, b in zip(ranks[v], ranks[tau[v]]))
        rhs = zero
        for u, m in preds[v]:
            rhs = tuple(a + m * b for a, b in zip(rhs, ranks[u]))
        assert lhs == rhs, (v, lhs, rhs)


def additive_ranks(labels, arrows, tau, dims_of):
    """Scalar ranks for an irreducible curve by exhausting the lift splittings."""
    fixed = sorted({k[:-1] for k in labels if k[-1] in "+-"}, key=int)
    for choice in itertools.product(*[range(dims_of[int(v)] + 1) for v in fixed]):
        r = {"R": (1,)}
        for v, a in zip(fixed, choice):
            r[f"{v}+"], r[f"{v}-"] = (a,), (dims_of[int(v)] - a,)
        for k in labels:
            if k.startswith("["):
                r[k] = (dims_of[int(k[1:].split(",")[0])],)
        try:
            check_ranks(labels, arrows, tau, r)
            return r
        except AssertionError:
            continue
    raise RuntimeError("no additive rank function")


# ---------------------------------------------------------------- McKay quivers

def metacyclic(m):
    """McKay quiver of <a, b> with b = [[0, z8], [z8, 0]] and a diagonal of order m.

    Irreducibles: chi_j (a -> 1, b -> z8^j), j = 0..7, then rho_{s,lam}
    (a -> diag(z^s, z^-s), b -> [[0, lam], [1, 0]]) for lam in 1, i, -1, -i.
    Arrow rho_i -> rho_j with multiplicity <chi_i chi_V, chi_j>; tau = (.) x det^-1.
    """
    z, z8 = np.exp(2j * np.pi / m), np.exp(2j * np.pi / 8)
    a_mat = np.diag([z ** 2, z]) if m == 3 else np.diag([z, z ** -1])
    b_mat = np.array([[0, z8], [z8, 0]])
    elems = [(s, t, np.linalg.matrix_power(a_mat, s) @ np.linalg.matrix_power(b_mat, t))
             for s in range(m) for t in range(8)]
    reps = [lambda s, t, j=j: np.array([[z8 ** (j * t)]]) for j in range(8)]
    for s0 in ([1] if m == 3 else [1, 2]):
        for lam in [1, 1j, -1, -1j]:
            reps.append(lambda s, t, s0=s0, lam=lam:
                        np.diag([z ** (s0 * s), z ** (-s0 * s)])
                        @ np.linalg.matrix_power(np.array([[0, lam], [1, 0]]), t))
    ch = np.array([[np.trace(r(s, t)) for (s, t, _) in elems] for r in reps])
    ch_v = np.array([np.trace(g) for (_, _, g) in elems])
    det = np.array([np.linalg.det(g) for (_, _, g) in elems])
    order = len(elems)
    assert np.allclose(ch @ ch.conj().T / order, np.eye(len(reps)))
    n = len(reps)
    arrows = {}
    for i in range(n):
        for j in range(n):
            x = np.vdot(ch[j], ch[i] * ch_v) / order
            k = int(round(x.real))
            assert abs(x - k) < 1e-9
            if k:
                arrows[(str(i), str(j))] = k
    tau = {}
    for i in range(n):
        for j in range(n):
            if np.allclose(ch[i] * det.conj(), ch[j]):
                tau[str(i)] = str(j)
    dims = [1] * 8 + [2] * (n - 8)
    return [str(i) for i in range(n)], arrows, tau, {str(i): (dims[i],) for i in range(n)}


D53_FIGURE_ARROWS = [(4, 8), (6, 11), (2, 9), (9, 3), (9, 10), (9, 4), (10, 8), (10, 7), (10, 6),
                     (1, 10), (3, 8), (8, 5), (8, 11), (8, 2), (11, 9), (11, 1), (11, 0), (7, 11),
                     (5, 9), (0, 10)]
D53_FIGURE_TAU = {4: 5, 6: 1, 2: 4, 9: 8, 8: 9, 10: 11, 11: 10, 1: 7, 3: 2, 7: 0, 5: 3, 0: 6}


def degree_profile(arrows, tau, labels):
    out = defaultdict(int)
    inn = defaultdict(int)
    for (u, v), m in arrows.items():
        out[u] += m
        inn[v] += m
    return sorted((out[v], inn[v], tau[v] == v) for v in labels)


# ---------------------------------------------------------------- output

def document(name, dim, order, arrows, tau, ranks, free="R"):
    idx = {lab: i for i, lab in enumerate(order)}
    verts = []
    for lab in order:
        entry = {"id": idx[lab], "label": lab, "kind": "free" if lab == free else "nonfree"}
        if ranks is not None:
            entry["rank"] = list(ranks[lab])
        verts.append(entry)
    arr = sorted((idx[u], idx[v], m) for (u, v), m in arrows.items())
    ta = sorted((idx[u], idx[v]) for u, v in tau.items() if u in idx and v in idx)
    return {
        "name": name,
        "dim": dim,
        "vertices": verts,
        "arrows": [{"from": u, "to": v, "mult": m} for u, v, m in arr],
        "tau": [{"from": u, "to": v} for u, v in ta],
    }


def rename(keys, arrows, tau, names):
    return ([names[k] for k in keys],
            {(names[u], names[v]): m for (u, v), m in arrows.items()},
            {names[u]: names[v] for u, v in tau.items()})


def d_order(n):
    o = ["R"] + [f"X{i}" for i in range(1, (n - 1) // 2 + 1)]
    if n % 2 == 1:
        m = (n - 3) // 2
        o += [f"Y{i}" for i in range(1, m + 1)] + [f"M{i}" for i in range(1, m + 1)]
        o += [f"N{i}" for i in range(1, m + 1)] + ["A", "B"]
    else:
        m = (n - 4) // 2
        o += [f"Y{i}" for i in range(1, (n - 2) // 2 + 1)] + [f"M{i}" for i in range(1, m + 1)]
        o += [f"N{i}" for i in range(1, m + 1)] + ["A", "B", "C+", "C-", "D+", "D-"]
    return o


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data")
    out.mkdir(parents=True, exist_ok=True)
    docs = {}
    for n in range(4, 14):
        nv, edges, omega, _ = d_tilde(n)
        labels, arrows, tau = rename(*fold(nv, edges, omega), d_names(n))
        ranks = d_ranks(n)
        check_ranks(labels, arrows, tau, ranks)
        order = d_order(n)
        assert sorted(order) == sorted(labels)
        docs[f"d_curve_{n}"] = document(f"D{n} curve", 1, order, arrows, tau, ranks)
    for t, names, ranks, order in [
        (6, E6_NAMES, E6_RANKS, ["R", "M1", "N1", "A", "B", "X", "M2"]),
        (7, E7_NAMES, E7_RANKS, list(E7_RANKS)),
        (8, E8_NAMES, None, ["R", "M1", "N1", "M2", "N2", "A1", "A2", "B1", "B2", "C1", "C2",
                             "D1", "D2", "X1", "X2", "Y1", "Y2"]),
    ]:
        nv, edges, omega, dims = e_tilde(t)
        keys, arrows, tau = fold(nv, edges, omega)
        if ranks is None:
            raw = additive_ranks(keys, arrows, tau, dims)
            ranks = {names[k]: r for k, r in raw.items()}
        labels, arrows, tau = rename(keys, arrows, tau, names)
        check_ranks(labels, arrows, tau, ranks)
        assert sorted(order) == sorted(labels)
        docs[f"e{t}_curve"] = document(f"E{t} curve", 1, order, arrows, tau, ranks)

    labels, arrows, tau, ranks = metacyclic(3)
    fig_arrows = {(str(u), str(v)): 1 for u, v in D53_FIGURE_ARROWS}
    fig_tau = {str(u): str(v) for u, v in D53_FIGURE_TAU.items()}
    assert degree_profile(arrows, tau, labels) == degree_profile(fig_arrows, fig_tau, labels)
    # a one-dimensional representation has a single arrow out (to a two-dimensional one)
    fig_ranks = {lab: (1,) if sum(m for (u, _), m in fig_arrows.items() if u == lab) == 1 else (2,)
                 for lab in labels}
    for lab in labels:
        assert sum(m * fig_ranks[v][0] for (u, v), m in fig_arrows.items() if u == lab) == 2 * fig_ranks[lab][0]
    docs["d53_surface"] = document("D_{5,3} surface", 2, [str(i) for i in range(12)],
                                   fig_arrows, fig_tau, fig_ranks, free="0")
    labels, arrows, tau, ranks = metacyclic(5)
    docs["d75_surface"] = document("D_{7,5} surface", 2, labels, arrows, tau, ranks, free="0")

    for key, doc in docs.items():
        (out / f"{key}.json").write_text(json.dumps(doc, indent=1) + "\n")
        print(key, len(doc["vertices"]), "vertices", len(doc["arrows"]), "arrows")


if __name__ == "__main__":
    main()
