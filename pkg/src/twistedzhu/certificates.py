"""Replayable membership certificates.

A certificate witnesses one "target lies in the span of a generator
family" claim as an exact linear combination.  Every vector in it is
referenced by a symbolic descriptor (a nested tuple of strings) that a
fresh session can expand back into a state vector from the definitions
alone, so verification never trusts the emitting process: targets and
generators are regenerated from scratch, the combination is replayed in
exact arithmetic, and the difference must vanish identically.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import bimodule, zhu
from .linalg import vec_add_scaled
from .scalars import Cyc, parse_fraction
from .voa import VoaContext


def descriptor_to_json(desc):
    if isinstance(desc, tuple):
        return [descriptor_to_json(x) for x in desc]
    return desc


def descriptor_from_json(node):
    if isinstance(node, list):
        return tuple(descriptor_from_json(x) for x in node)
    if isinstance(node, str):
        return node
    raise ValueError(f"descriptor node must be a string or list: {node!r}")


def build_context(params):
    """Fresh VoaContext from a params mapping; fresh instance, fresh caches."""
    kwargs = {"T": int(params["T"]), "g1": params["g1"]}
    if params.get("central_charge") is not None:
        kwargs["central_charge"] = parse_fraction(params["central_charge"])
    return VoaContext(params["voa"], **kwargs)


def _frac(text):
    return parse_fraction(text)


def _mono(ctx, text):
    return ctx.lift({ctx.parse_monomial(text): Fraction(1)})


def _sub(ctx, x, y):
    out = dict(x)
    for mono, c in y.items():
        out[mono] = out.get(mono, ctx.field.zero) - c
        if not out[mono]:
            del out[mono]
    return out


def regenerate(ctx, desc):
    """Expand a generator/target descriptor into its state vector.

    Pure function of (context, descriptor); raises ValueError on unknown
    kinds or malformed parameter lists.
    """
    kind = desc[0]
    try:
        if kind == "circle-zhu":
            _, n, a, b = desc
            return zhu.circle_zhu(ctx, _mono(ctx, a), _mono(ctx, b), _frac(n))
        if kind == "shift":
            _, a = desc
            return zhu.weight_shift(ctx, _mono(ctx, a))
        if kind == "assoc-defect":
            _, n, a, b, c = desc
            n = _frac(n)
            av, bv, cv = (_mono(ctx, x) for x in (a, b, c))
            lhs = zhu.star_zhu(ctx, zhu.star_zhu(ctx, av, bv, n), cv, n)
            rhs = zhu.star_zhu(ctx, av, zhu.star_zhu(ctx, bv, cv, n), n)
            return _sub(ctx, lhs, rhs)
        if kind == "center-defect":
            _, n, a = desc
            n = _frac(n)
            av = _mono(ctx, a)
            om = ctx.lift(ctx.conformal_vector())
            return _sub(ctx, zhu.star_zhu(ctx, om, av, n),
                        zhu.star_zhu(ctx, av, om, n))
        if kind == "theta-defect":
            _, n, a, b = desc
            n = _frac(n)
            av, bv = _mono(ctx, a), _mono(ctx, b)
            lhs = ctx.theta(zhu.star_zhu(ctx, av, bv, n))
            rhs = zhu.star_zhu(ctx, ctx.theta(bv), ctx.theta(av), n)
            return _sub(ctx, lhs, rhs)
        if kind == "ideal-star":
            _, n, side, inner, a = desc
            n = _frac(n)
            o = regenerate(ctx, inner)
            av = _mono(ctx, a)
            if side == "left":
                return zhu.star_zhu(ctx, av, o, n)
            return zhu.star_zhu(ctx, o, av, n)
        if kind == "circle-bimod":
            _, n, m, a, v = desc
            return bimodule.circle_bimod(ctx, _mono(ctx, a), _mono(ctx, v),
                                         _frac(m), _frac(n))
        if kind == "shift-bimod":
            _, n, m, u = desc
            return bimodule.shift_bimod(ctx, _mono(ctx, u), _frac(m), _frac(n))
        if kind == "gen-circle":
            _, n, m, k, s, a, v = desc
            return bimodule.generalized_circle(ctx, _mono(ctx, a),
                                               _mono(ctx, v), _frac(m),
                                               _frac(n), int(k), int(s))
        if kind == "opp2":
            _, n, m, p1, p2, p3, a, b, c, d = desc
            n, m, p1, p2, p3 = (_frac(x) for x in (n, m, p1, p2, p3))
            av, bv, cv, dv = (_mono(ctx, x) for x in (a, b, c, d))
            x1 = bimodule.left_action(ctx, av, bv, p1, p2, p3)
            lhs = bimodule.left_action(ctx, x1, cv, m, p1, p3)
            x2 = bimodule.left_action(ctx, bv, cv, m, p1, p2)
            rhs = bimodule.left_action(ctx, av, x2, m, p2, p3)
            return bimodule.left_action(ctx, dv, _sub(ctx, lhs, rhs), m, p3, n)
        if kind == "opp3":
            _, n, m, p1, p2, a, c, inner = desc
            n, m, p1, p2 = (_frac(x) for x in (n, m, p1, p2))
            o = regenerate(ctx, inner)
            x = bimodule.left_action(ctx, _mono(ctx, a), o, p1, p2, n)
            return bimodule.left_action(ctx, x, _mono(ctx, c), m, p1, n)
        if kind == "two-right-diff":
            _, n, m, a, b = desc
            n, m = _frac(n), _frac(m)
            av, bv = _mono(ctx, a), _mono(ctx, b)
            return _sub(ctx, bimodule.dj_star(ctx, av, bv, m, n),
                        bimodule.right_action(ctx, av, bv, m, n))
        if kind == "commute-diff":
            _, n, m, p, b, v, a = desc
            n, m, p = _frac(n), _frac(m), _frac(p)
            bv, vv, av = _mono(ctx, b), _mono(ctx, v), _mono(ctx, a)
            va = bimodule.right_action(ctx, vv, av, m, p)
            lhs = bimodule.left_action(ctx, bv, va, m, p, n)
            rhs = bimodule.right_action(
                ctx, bimodule.left_action(ctx, bv, vv, m, p, n), av, m, n)
            return _sub(ctx, lhs, rhs)
        if kind == "assoc3-diff":
            _, m, p1, p2, p3, a, b, c = desc
            m, p1, p2, p3 = (_frac(x) for x in (m, p1, p2, p3))
            av, bv, cv = (_mono(ctx, x) for x in (a, b, c))
            x1 = bimodule.left_action(ctx, av, bv, p1, p2, p3)
            lhs = bimodule.left_action(ctx, x1, cv, m, p1, p3)
            x2 = bimodule.left_action(ctx, bv, cv, m, p1, p2)
            rhs = bimodule.left_action(ctx, av, x2, m, p2, p3)
            return _sub(ctx, lhs, rhs)
        if kind == "right-assoc-diff":
            _, n, m, u, b, a = desc
            n, m = _frac(n), _frac(m)
            uv, bv, av = _mono(ctx, u), _mono(ctx, b), _mono(ctx, a)
            ub = bimodule.right_action(ctx, uv, bv, m, n)
            lhs = bimodule.right_action(ctx, ub, av, m, n)
            rhs = bimodule.right_action(ctx, uv,
                                        zhu.star_zhu(ctx, bv, av, m), m, n)
            return _sub(ctx, lhs, rhs)
        if kind == "left-assoc-diff":
            _, n, m, a, b, u = desc
            n, m = _frac(n), _frac(m)
            av, bv, uv = _mono(ctx, a), _mono(ctx, b), _mono(ctx, u)
            lhs = bimodule.left_action(ctx, zhu.star_zhu(ctx, av, bv, n),
                                       uv, m, n, n)
            bu = bimodule.left_action(ctx, bv, uv, m, n, n)
            rhs = bimodule.left_action(ctx, av, bu, m, n, n)
            return _sub(ctx, lhs, rhs)
        if kind == "compat-diff":
            _, n, m, a, u, b = desc
            n, m = _frac(n), _frac(m)
            av, uv, bv = _mono(ctx, a), _mono(ctx, u), _mono(ctx, b)
            au = bimodule.left_action(ctx, av, uv, m, n, n)
            lhs = bimodule.right_action(ctx, au, bv, m, n)
            ub = bimodule.right_action(ctx, uv, bv, m, n)
            rhs = bimodule.left_action(ctx, av, ub, m, n, n)
            return _sub(ctx, lhs, rhs)
        if kind == "ustar-gen":
            _, n, m, inner, u = desc
            n, m = _frac(n), _frac(m)
            return bimodule.right_action(ctx, _mono(ctx, u),
                                         regenerate(ctx, inner), m, n)
        if kind == "gen-star-u":
            _, n, m, inner, u = desc
            n, m = _frac(n), _frac(m)
            return bimodule.left_action(ctx, regenerate(ctx, inner),
                                        _mono(ctx, u), m, n, n)
        if kind == "dag-right":
            _, n, m, inner, a = desc
            n, m = _frac(n), _frac(m)
            return bimodule.right_action(ctx, regenerate(ctx, inner),
                                         _mono(ctx, a), m, n)
        if kind == "left-dag":
            _, n, m, a, inner = desc
            n, m = _frac(n), _frac(m)
            return bimodule.left_action(ctx, _mono(ctx, a),
                                        regenerate(ctx, inner), m, n, n)
        if kind == "left-absorb":
            _, n, m, p, a, inner = desc
            n, m, p = _frac(n), _frac(m), _frac(p)
            return bimodule.left_action(ctx, _mono(ctx, a),
                                        regenerate(ctx, inner), m, p, n)
        if kind == "o-star-b":
            _, n, m, p, inner, b = desc
            n, m, p = _frac(n), _frac(m), _frac(p)
            return bimodule.left_action(ctx, regenerate(ctx, inner),
                                        _mono(ctx, b), m, p, n)
        if kind == "congruence-coeff":
            _, n, m, k, a, b = desc
            return bimodule.congruence_coefficient(
                ctx, _mono(ctx, a), _mono(ctx, b), _frac(m), _frac(n), int(k))
    except ValueError:
        raise
    except Exception as exc:
        raise ValueError(f"malformed descriptor {desc!r}: {exc}") from exc
    raise ValueError(f"unknown descriptor kind {kind!r}")


def certificate_entry(target_descs, combo):
    """JSON object for one membership combination.

    target_descs lists every descriptor whose vector this combination
    witnesses (descriptors with identical target vectors share one entry);
    terms are sorted by descriptor text for deterministic output.
    """
    terms = [{"generator": descriptor_to_json(g), "coefficient": c.to_json()}
             for g, c in sorted(combo.items(), key=lambda kv: str(kv[0]))]
    return {"targets": [descriptor_to_json(t) for t in target_descs],
            "terms": terms}


def write_certificate_file(path, envelope):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(envelope, fh, separators=(",", ":"))
        fh.write("\n")


def load_certificate_file(path):
    with open(path, encoding="utf-8") as fh:
        env = json.load(fh)
    for key in ("check", "params", "certificates"):
        if key not in env:
            raise ValueError(f"certificate file missing {key!r}")
    return env


def verify_certificate_file(path):
    """Independent re-verification: fresh context, every descriptor expanded
    from definitions, every combination replayed exactly.

    Returns (report dict, exit code): 0 when every certificate replays, 1
    otherwise; the report carries a per-certificate verdict and, for
    failures, the index of the first offending certificate and term.
    """
    env = load_certificate_file(path)
    ctx = build_context(env["params"])
    memo = {}

    def regen(desc):
        if desc not in memo:
            memo[desc] = regenerate(ctx, desc)
        return memo[desc]

    verdicts = []
    failures = []
    targets_total = 0
    for idx, cert in enumerate(env["certificates"]):
        if not isinstance(cert, dict) or "targets" not in cert \
                or "terms" not in cert:
            entry = {"index": idx, "status": "malformed", "targets": 0,
                     "terms": 0}
            verdicts.append(entry)
            failures.append(entry)
            continue
        entry = {"index": idx, "status": "ok",
                 "targets": len(cert["targets"]),
                 "terms": len(cert["terms"])}
        targets_total += len(cert["targets"])
        try:
            acc = {}
            for tidx, term in enumerate(cert["terms"]):
                try:
                    gen_desc = descriptor_from_json(term["generator"])
                    coeff = Cyc.from_json(ctx.field, term["coefficient"])
                    gvec = regen(gen_desc)
                except (ValueError, KeyError, TypeError) as exc:
                    raise _TermError(tidx, str(exc))
                vec_add_scaled(acc, coeff, gvec)
            for widx, tnode in enumerate(cert["targets"]):
                target = regen(descriptor_from_json(tnode))
                diff = dict(acc)
                vec_add_scaled(diff, -ctx.field.one, target)
                if diff:
                    entry["status"] = "mismatch"
                    entry["target_index"] = widx
                    entry["residual_monomials"] = len(diff)
                    break
        except _TermError as exc:
            entry["status"] = "bad-term"
            entry["term_index"] = exc.index
            entry["error"] = exc.message
        except ValueError as exc:
            entry["status"] = "bad-target"
            entry["error"] = str(exc)
        verdicts.append(entry)
        if entry["status"] != "ok":
            failures.append(entry)
    report = {
        "file": str(path),
        "check": env["check"],
        "params": env["params"],
        "entries": len(verdicts),
        "targets": targets_total,
        "failed": len(failures),
        "verdicts": verdicts,
    }
    if failures:
        first = failures[0]
        report["first_failure"] = {
            "certificate_index": first["index"],
            "term_index": first.get("term_index"),
            "target_index": first.get("target_index"),
        }
    return report, (1 if failures else 0)


class _TermError(Exception):
    def __init__(self, index, message):
        super().__init__(message)
        self.index = index
        self.message = message
