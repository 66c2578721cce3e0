"""Sparse exact row reduction with replayable membership certificates.

Vectors are dicts mapping column keys (monomials) to Cyc scalars.  A
SpanReducer keeps an incremental reduced echelon basis of a generator
family; insertion order and a fixed column order make every certificate
deterministic.  Pivoting always picks the lowest column index under the
caller-supplied order.

Membership here is sound and complete with respect to the generators
actually inserted; the callers own the question of whether those
generators are enough (they retry with larger caps when not).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass


def vec_is_zero(v):
    return not v


def vec_add_scaled(target, coeff, source):
    """target += coeff * source, in place; drops cancelled entries."""
    if not coeff:
        return target
    for k, c in source.items():
        s = target.get(k)
        s = coeff * c if s is None else s + coeff * c
        if s:
            target[k] = s
        else:
            target.pop(k, None)
    return target


def vec_scale(v, coeff):
    if not coeff:
        return {}
    return {k: coeff * c for k, c in v.items()}


def vec_equal(u, v):
    return u == v


@dataclass
class CertificateTerm:
    generator: object  # opaque generator id / descriptor
    coefficient: object  # Cyc


@dataclass
class MembershipCertificate:
    """Witness that target == sum(coefficient * generator) over the span."""
    target: object
    terms: list


class SpanReducer:
    """Incremental echelon basis over a fixed deterministic column order."""

    def __init__(self, field, col_key, track=True):
        self.field = field
        self.col_key = col_key
        self.track = track
        self.rows = {}  # pivot column -> (vector, combination dict or None)
        self.ngens = 0
        self._keys = {}  # column -> col_key(column), computed once

    def _k(self, c):
        r = self._keys.get(c)
        if r is None:
            r = self.col_key(c)
            self._keys[c] = r
        return r

    def _eliminate(self, vec, record):
        """Row arithmetic of the normal form; combo expansion is deferred.

        Row pivots are the minimal column of their row, so eliminating at a
        column only introduces larger columns; a lazy heap therefore visits
        columns in ascending order exactly once each time they are live.
        Returns (residual, elimination events); each event is the (coeff,
        row combination) pair of one pivot hit, recorded only when asked.
        """
        vec = dict(vec)
        events = [] if record else None
        out = {}
        k_of = self._k
        heap = [(k_of(c), c) for c in vec]
        heapq.heapify(heap)
        rows = self.rows
        while heap:
            _, c = heapq.heappop(heap)
            coeff = vec.pop(c, None)
            if coeff is None:
                continue  # cancelled earlier, or duplicate heap entry
            row = rows.get(c)
            if row is None:
                out[c] = coeff
                continue
            rvec, rcombo = row
            # pivot entry of rvec is 1; skip it (already popped from vec)
            for k, x in rvec.items():
                if k == c:
                    continue
                s = vec.get(k)
                if s is None:
                    s = -coeff * x
                    if s:
                        vec[k] = s
                        heapq.heappush(heap, (k_of(k), k))
                else:
                    s = s - coeff * x
                    if s:
                        vec[k] = s
                    else:
                        del vec[k]
            if events is not None:
                events.append((coeff, rcombo))
        return out, events

    @staticmethod
    def _expand(events):
        combo = {}
        for coeff, rcombo in events:
            vec_add_scaled(combo, coeff, rcombo)
        return combo

    def _reduce(self, vec):
        """Full normal form; returns (residual, combination over generator ids)."""
        residual, events = self._eliminate(vec, self.track)
        return residual, (self._expand(events) if self.track else None)

    def insert(self, gen_id, vec):
        """Add a generator to the span; returns True if it enlarged the span."""
        self.ngens += 1
        residual, events = self._eliminate(vec, self.track)
        if not residual:
            return False
        c = min(residual, key=self._k)
        lead = residual[c]
        inv = lead.inverse()
        rvec = {k: inv * x for k, x in residual.items()}
        if self.track:
            # residual = vec - sum combo[g]*gen_g  =>  rvec expressed over gens
            rcombo = {gen_id: inv}
            vec_add_scaled(rcombo, -inv, self._expand(events))
        else:
            rcombo = None
        self.rows[c] = (rvec, rcombo)
        return True

    def membership(self, vec):
        """Certificate coefficients if vec lies in the span, else None."""
        residual, events = self._eliminate(vec, self.track)
        if residual:
            return None
        if not self.track:
            return {}
        return self._expand(events)

    def rank(self):
        return len(self.rows)

    def pivot_columns(self):
        return sorted(self.rows, key=self.col_key)

    def reduce_mod(self, vec):
        """Normal form of vec modulo the span (no certificate)."""
        residual, _ = self._reduce(vec)
        return residual


def span_membership(field, target, generators, col_key, target_id="target"):
    """One-shot membership of target in span(generators).

    generators: iterable of (gen_id, vector).  Returns a
    MembershipCertificate or None.  Deterministic in the given order.
    """
    red = SpanReducer(field, col_key, track=True)
    for gid, v in generators:
        red.insert(gid, v)
    combo = red.membership(target)
    if combo is None:
        return None
    terms = [CertificateTerm(g, c) for g, c in combo.items()]
    terms.sort(key=lambda t: str(t.generator))
    return MembershipCertificate(target_id, terms)


class QuotientBasis:
    """Ambient space modulo a relation span: representatives + reduction map."""

    def __init__(self, field, ambient_cols, relations, col_key):
        self.red = SpanReducer(field, col_key, track=False)
        for i, r in enumerate(relations):
            for k in r:
                if k not in ambient_cols:
                    raise ValueError(f"relation {i} leaves the ambient basis at {k!r}")
            self.red.insert(i, r)
        pivots = set(self.red.rows)
        self.representatives = sorted(
            (c for c in ambient_cols if c not in pivots), key=col_key)

    def reduce(self, vec):
        return self.red.reduce_mod(vec)

    def dim(self):
        return len(self.representatives)


def replay_certificate(target_vec, term_vectors, field):
    """Exact check that sum(coeff*vec) over terms equals the target vector.

    term_vectors: iterable of (coefficient, vector).  Returns the difference
    vector (empty dict means the certificate replays).
    """
    acc = {}
    for coeff, vec in term_vectors:
        vec_add_scaled(acc, coeff, vec)
    diff = dict(acc)
    vec_add_scaled(diff, -field.one, target_vec)
    return diff
