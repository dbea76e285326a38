"""JSON file formats for models, sections, and pencils.

Rationals are serialized as "p/q" strings (or "p" for integers), so a
save/load round trip is bit-exact.  Pencil files reference model files by
path (relative to the pencil file) and carry the restriction matrices per
degree.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction

from .frobenius import GradedOperator, PoincareModel
from .models import PencilDatum
from .rational_linalg import Matrix
from .report import fmt_rational


def parse_rational(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(s)


def _vec_out(v):
    return [fmt_rational(c) for c in v]


def _vec_in(v):
    return [parse_rational(c) for c in v]


def model_to_dict(m: PoincareModel) -> dict:
    return {
        "name": m.name,
        "n": m.n,
        "dims": list(m.dims),
        "labels": [list(ls) for ls in m.labels],
        "mult": [
            {"i": i, "a": a, "j": j, "b": b, "result": _vec_out(v)}
            for (i, a, j, b), v in sorted(m.mult.items())
        ],
        "trace": _vec_out(m.trace_vec),
        "xi": _vec_out(m.xi),
    }


def model_from_dict(d: dict) -> PoincareModel:
    mult = {
        (e["i"], e["a"], e["j"], e["b"]): _vec_in(e["result"])
        for e in d["mult"]
    }
    return PoincareModel(d["name"], d["n"], d["dims"], d["labels"],
                         mult, _vec_in(d["trace"]), _vec_in(d["xi"]))


def _dump(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def save_model(m: PoincareModel, path):
    _dump(model_to_dict(m), path)


def load_model(path) -> PoincareModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))


def _blocks_out(op: GradedOperator) -> dict:
    out = {}
    for i in range(op.source.top + 1):
        blk = op.block(i)
        if blk.rows and blk.cols and not blk.is_zero():
            out[str(i)] = [_vec_out(row) for row in blk.entries]
    return out


def _blocks_in(d: dict, source, target, degree) -> GradedOperator:
    blocks = {}
    for key, rows in d.items():
        i = int(key)
        grid = [_vec_in(row) for row in rows]
        blocks[i] = Matrix(grid, len(grid), len(grid[0]) if grid else 0)
    return GradedOperator(source, target, degree, blocks)


def pencil_to_dict(p: PencilDatum, x_path, y_path, delta_path) -> dict:
    return {
        "name": p.name,
        "m": p.m,
        "x": x_path,
        "y": y_path,
        "delta": delta_path,
        "iota_restrict": _blocks_out(p.iota_restrict),
        "h_restrict": _blocks_out(p.h_restrict),
    }


def save_pencil(p: PencilDatum, path):
    """Write the pencil and its three models next to each other."""
    base = os.path.splitext(path)[0]
    names = {}
    for tag, model in (("x", p.x), ("y", p.y), ("delta", p.delta)):
        mpath = f"{base}.{tag}.json"
        save_model(model, mpath)
        names[tag] = os.path.basename(mpath)
    _dump(pencil_to_dict(p, names["x"], names["y"], names["delta"]), path)


def load_pencil(path) -> PencilDatum:
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    folder = os.path.dirname(os.path.abspath(path))
    x = load_model(os.path.join(folder, d["x"]))
    y = load_model(os.path.join(folder, d["y"]))
    delta = load_model(os.path.join(folder, d["delta"]))
    return PencilDatum(
        d["name"], x, y, delta,
        _blocks_in(d["iota_restrict"], x, y, 0),
        _blocks_in(d["h_restrict"], y, delta, 0),
        d.get("m", 1))
