"""Brute-force oracle: evaluates each semantics by its definition on all 2^n interpretations.

Interpretations are encoded as integers (bit i set iff atom i is true) and every
definition is evaluated for all of them at once with numpy.  Nothing here shares
code with the guided search in :mod:`mfdlog.solver`, apart from the
stratification used to rank atoms for perfect models.
"""

from __future__ import annotations

import numpy as np

from .grounder import GroundProgram, GroundRule
from .solver import ModelSet, NotStratifiedError, Semantics
from .syntax import stratify

ORACLE_CAP = 20


def _mask(ids) -> int:
    out = 0
    for a in ids:
        out |= 1 << a
    return out


def _rule_masks(rules: list[GroundRule]) -> list[tuple[int, int, int]]:
    return [(_mask(r.head), _mask(r.pos), _mask(r.neg)) for r in rules]


def _satisfied(masks, interps: np.ndarray) -> np.ndarray:
    ok = np.ones(interps.shape, dtype=bool)
    for h, p, q in masks:
        body = ((interps & p) == p) & ((interps & q) == 0)
        ok &= ~body | ((interps & h) != 0)
    return ok


def _has_proper_subset(flags: np.ndarray, n: int, interps: np.ndarray) -> np.ndarray:
    """For every S: does some flagged T with T a proper subset of S exist?"""
    below = flags.copy()  # below[S]: some flagged T <= S
    for b in range(n):
        view = below.reshape(-1, 2, 1 << b)
        view[:, 1, :] |= view[:, 0, :]
    proper = np.zeros_like(flags)
    for b in range(n):
        # S with bit b set, dropping b gives a subset T <= S - {b}
        below_view = below.reshape(-1, 2, 1 << b)
        proper.reshape(-1, 2, 1 << b)[:, 1, :] |= below_view[:, 0, :]
    return proper


def _founded(masks, interps: np.ndarray, n: int) -> np.ndarray:
    """Bitmask of the least fixpoint of S over the reduct by each interpretation."""
    kept = [((interps & q) == 0) for _, _, q in masks]
    derived = np.zeros_like(interps)
    for _ in range(n + 1):
        nxt = derived.copy()
        for (h, p, _), keep in zip(masks, kept):
            if h:
                fire = keep & ((derived & p) == p)
                nxt |= np.where(fire, h, 0)
        if np.array_equal(nxt, derived):
            break
        derived = nxt
    return derived


def _submasks(m: int, n: int) -> np.ndarray:
    """All subsets of m, with m itself last."""
    bits = [b for b in range(n) if (m >> b) & 1]
    ar = np.arange(1 << len(bits), dtype=np.int64)
    out = np.zeros_like(ar)
    for j, b in enumerate(bits):
        out |= ((ar >> j) & 1) << b
    return out


def _stable(masks, interps: np.ndarray, models: np.ndarray, n: int) -> np.ndarray:
    # a model M of P is stable iff no proper subset of M is a model of P/M
    out = np.zeros_like(models)
    for idx in np.nonzero(models)[0]:
        m = int(interps[idx])
        reduct = [(h, p, 0) for h, p, q in masks if not q & m]
        out[idx] = not _satisfied(reduct, _submasks(m, n))[:-1].any()
    return out


def _perfect(g: GroundProgram, interps: np.ndarray, n: int) -> np.ndarray:
    s = stratify(g)
    if s is None:
        raise NotStratifiedError("perfect models need a locally stratified program")
    head_masks = _rule_masks([r for r in g.rules if r.head])
    denial_masks = _rule_masks([r for r in g.rules if not r.head])
    models = _satisfied(head_masks, interps)
    big = np.iinfo(np.int64).max
    lowest = np.full(interps.shape, big, dtype=np.int64)  # lowest stratum present in each set
    for b in range(n):
        view = lowest.reshape(-1, 2, 1 << b)
        np.minimum(view[:, 1, :], s[b], out=view[:, 1, :])
    cand = interps[models]
    perfect = np.zeros_like(models)
    for m in cand:
        n_only = cand & ~m  # N - M
        m_only = m & ~cand  # M - N
        # N precedes M iff N != M and every atom of N - M sits above the lowest atom of M - N
        precedes = (cand != m) & ((n_only == 0) | ((m_only != 0) & (lowest[m_only] < lowest[n_only])))
        perfect[m] = not precedes.any()
    return perfect & _satisfied(denial_masks, interps)


def oracle_enumerate(g: GroundProgram, kind: Semantics | str, cap: int = ORACLE_CAP) -> ModelSet:
    kind = Semantics(kind)
    n = len(g.atoms)
    if n > cap:
        raise ValueError(f"oracle limited to {cap} atoms, program has {n}")
    interps = np.arange(1 << n, dtype=np.int64)
    masks = _rule_masks(list(g.rules))
    models = _satisfied(masks, interps)
    if kind is Semantics.MODELS:
        sel = models
    elif kind is Semantics.PM:
        sel = _perfect(g, interps, n)
    elif kind is Semantics.SM:
        sel = _stable(masks, interps, models, n)
    else:
        sel = models.copy()
        if kind in (Semantics.MM, Semantics.MF):
            sel &= ~_has_proper_subset(models, n, interps)
        if kind in (Semantics.F, Semantics.MF):
            cand = interps[sel]
            sel[cand] = (cand & ~_founded(masks, cand, n)) == 0
    picked = [frozenset(b for b in range(n) if (int(v) >> b) & 1) for v in interps[sel]]
    return ModelSet.of(kind, picked)
