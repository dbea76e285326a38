"""Command-line entry point: load fixtures, run suites, emit reports.

Exit status: 0 when every identity passes, 1 on any identity failure or
construction-invariant failure, 2 on input errors (bad files, unknown
names, missing arguments).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bootstrap, chern, core, leray, modelio, models
from .frobenius import (
    GradedOperator,
    projective_space,
    validate_model,
)
from .report import VerificationReport, fmt_rational

SUITES = ("validate", "sl2", "decompose", "theta", "prinduccion",
          "leray", "relative", "structural", "mainthm", "chern", "all")


class InputError(Exception):
    pass


class ConstructionError(Exception):
    def __init__(self, message):
        super().__init__(message)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lefschetz",
        description="Exact verification suites for polarized "
                    "cohomology models and pencil fixtures.")
    ap.add_argument("--suite", default="all", help="suite to run: "
                    + " | ".join(SUITES))
    ap.add_argument("--model", help="model file path or builtin:<name> "
                    "(builtin models: p1..p6, point)")
    ap.add_argument("--pencil", help="pencil file path or builtin:<name> "
                    "(" + ", ".join(models.BUILTIN_BUILDERS) + ")")
    ap.add_argument("--m", type=int, default=None,
                    help="override the pencil polarization multiple")
    ap.add_argument("--j-max", type=int, default=None,
                    help="upper summation bound for the restriction-"
                    "commutation identities (default 2n)")
    ap.add_argument("--r-max", type=int, default=None,
                    help="highest power checked in the power-formula "
                    "suite (default n)")
    ap.add_argument("--d-range", default=None,
                    help="degree range a:b for the Euler-characteristic "
                    "value table")
    ap.add_argument("--out", default=None, help="report output path "
                    "(default: stdout)")
    ap.add_argument("--emit", default=None, metavar="OPERATOR",
                    help="print the named operator's exact blocks "
                    "instead of running suites")
    return ap


def resolve_model(spec):
    if spec.startswith("builtin:"):
        name = spec[len("builtin:"):]
        if name == "point":
            from .frobenius import point_model

            return point_model()
        if name.startswith("p") and name[1:].isdigit():
            k = int(name[1:])
            if 1 <= k <= 6:
                return projective_space(k)
        raise InputError(f"unknown builtin model {name!r}")
    try:
        model = modelio.load_model(spec)
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"cannot load model {spec!r}: {exc}")
    rep = validate_model(model)
    if not rep.ok:
        bad = ", ".join(c.name for c in rep.failures())
        raise InputError(f"model {spec!r} fails validation: {bad}")
    return model


def resolve_pencil(spec, m):
    if spec.startswith("builtin:"):
        name = spec[len("builtin:"):]
        build = models.BUILTIN_BUILDERS.get(name)
        if build is None:
            raise InputError(f"unknown builtin pencil {name!r}")
        return build() if m is None else build(m)
    try:
        p = modelio.load_pencil(spec)
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"cannot load pencil {spec!r}: {exc}")
    if m is not None:
        p = models.PencilDatum(p.name, p.x, p.y, p.delta,
                               p.iota_restrict, p.h_restrict, m)
    rep = models.validate_pencil(p)
    if not rep.ok:
        bad = ", ".join(c.name for c in rep.failures())
        raise InputError(f"pencil {spec!r} fails validation: {bad}")
    return p


def parse_d_range(spec):
    if spec is None:
        return (1, 2, 3)
    try:
        lo, hi = spec.split(":")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise InputError(f"bad --d-range {spec!r}; expected a:b")
    if hi < lo:
        raise InputError("empty --d-range")
    return tuple(range(lo, hi + 1))


def _wrap(label, rep):
    return (label, rep)


class Runner:
    """Builds the shared objects lazily and collects labeled reports."""

    def __init__(self, args):
        self.args = args
        self.model = None
        self.pencil = None
        if args.model:
            self.model = resolve_model(args.model)
        if args.pencil:
            self.pencil = resolve_pencil(args.pencil, args.m)
        self._blowup = None
        self._structure = None

    def need_pencil(self, suite):
        if self.pencil is None:
            raise InputError(f"suite {suite!r} needs --pencil")
        return self.pencil

    def blowup(self):
        if self._blowup is None:
            try:
                self._blowup = models.blowup_model(self.pencil)
            except ValueError as exc:
                raise ConstructionError(f"blow-up construction: {exc}")
        return self._blowup

    def structure(self):
        if self._structure is None:
            try:
                self._structure = leray.LerayStructure(self.blowup())
            except ValueError as exc:
                raise ConstructionError(f"filtration construction: {exc}")
        return self._structure

    def contexts(self):
        p = self.pencil
        s = self.structure()
        return s.ctx_x, s.ctx_y

    # -- suite runners ----------------------------------------------------

    def run_suite(self, suite):
        out = []
        if suite == "validate":
            if self.model is not None:
                out.append(_wrap("validate", validate_model(self.model)))
            if self.pencil is not None:
                out.append(_wrap("pencil",
                                 models.validate_pencil(self.pencil)))
                out.append(_wrap("blowup",
                                 models.validate_blowup(self.blowup())))
            if not out:
                raise InputError("suite 'validate' needs --model "
                                 "or --pencil")
        elif suite == "sl2":
            for label, ctx in self._sl2_targets():
                out.append(_wrap(f"sl2[{label}]", core.sl2_verify(ctx)))
        elif suite == "decompose":
            for label, ctx in self._sl2_targets():
                out.append(_wrap(f"decompose[{label}]",
                                 core.decompose_suite(ctx)))
                out.append(_wrap(f"closure[{label}]",
                                 core.closure_suite(ctx)))
        elif suite == "theta":
            p = self.need_pencil(suite)
            cx, cy = self.contexts()
            cd = core.LefschetzContext(p.delta)
            out.append(_wrap("theta[x/y]", core.theta_suite(p.xy, cx, cy)))
            out.append(_wrap("theta[y/delta]",
                             core.theta_suite(p.ydelta, cy, cd)))
        elif suite == "prinduccion":
            p = self.need_pencil(suite)
            cx, cy = self.contexts()
            out.append(_wrap("prinduccion", core.prinduccion_residual(
                p.xy, cx, cy, self.args.j_max)))
            out.append(_wrap("lemabc", core.lemabc_suite(p.xy, cx, cy)))
        elif suite == "leray":
            self.need_pencil(suite)
            s = self.structure()
            out.append(_wrap("leray", leray.leray_suite(s)))
            out.append(_wrap("splitting", leray.splitting_suite(s)))
            out.append(_wrap("psi", leray.psi_suite(s)))
        elif suite == "relative":
            self.need_pencil(suite)
            s = self.structure()
            out.append(_wrap("relative-kunneth",
                             leray.relative_kunneth_suite(s)))
            out.append(_wrap("relative", leray.relative_suite(s)))
            out.append(_wrap("tilde-power",
                             leray.tilde_power_suite(s, self.args.r_max)))
        elif suite == "structural":
            self.need_pencil(suite)
            out.append(_wrap("structural",
                             leray.structural_suite(self.structure())))
        elif suite == "mainthm":
            self.need_pencil(suite)
            s = self.structure()
            for rep in bootstrap.bootstrap_reports(
                    s, j_max=self.args.j_max):
                out.append(_wrap(rep.suite, rep))
        elif suite == "chern":
            out.append(_wrap("chern", chern.chern_suite(
                parse_d_range(self.args.d_range))))
        elif suite == "all":
            order = ["validate", "sl2", "decompose"]
            if self.pencil is not None:
                order += ["theta", "prinduccion", "leray", "relative",
                          "structural", "mainthm"]
            order.append("chern")
            for sub in order:
                if sub == "validate" and self.model is None \
                        and self.pencil is None:
                    continue
                out.extend(self.run_suite(sub))
        else:
            raise InputError(f"unknown suite {suite!r}")
        return out

    def _sl2_targets(self):
        targets = []
        if self.model is not None:
            targets.append((self.model.name,
                            core.LefschetzContext(self.model)))
        if self.pencil is not None:
            p = self.pencil
            s = self.structure()
            targets.append((p.x.name, s.ctx_x))
            targets.append((p.y.name, s.ctx_y))
            targets.append((p.delta.name,
                            core.LefschetzContext(p.delta)))
            targets.append((self.blowup().model.name,
                            core.LefschetzContext(self.blowup().model)))
        if not targets:
            raise InputError("this suite needs --model or --pencil")
        return targets

    # -- operator emission ------------------------------------------------

    def emit(self, name):
        op = self._named_operator(name)
        doc = {
            "operator": name,
            "source": op.source.name,
            "target": op.target.name,
            "degree": op.degree,
            "blocks": {
                str(i): [[fmt_rational(c) for c in row]
                         for row in op.block(i).entries]
                for i in range(op.source.top + 1)
                if op.block(i).rows and op.block(i).cols
            },
        }
        return doc

    def _named_operator(self, name) -> GradedOperator:
        parts = name.split("-")
        if self.pencil is not None:
            ctx = self.structure().ctx_x
        elif self.model is not None:
            ctx = core.LefschetzContext(self.model)
        else:
            raise InputError("--emit needs --model or --pencil")
        n = ctx.model.n
        try:
            if name == "lambda":
                return ctx.lam
            if name == "clambda":
                return ctx.clam
            if name == "h":
                return ctx.h_op
            if name == "lambda-minus-p":
                return ctx.lam - ctx.p(n + 1)
            if parts[0] == "pi" and len(parts) == 2:
                return ctx.kunneth(int(parts[1]))
            if parts[0] == "p" and len(parts) == 2:
                return ctx.p(int(parts[1]))
            if parts[0] == "theta" and len(parts) == 2:
                return ctx.theta(int(parts[1]))
            if self.pencil is None:
                raise InputError(f"operator {name!r} needs --pencil")
            s = self.structure()
            rel = s.relative()
            if name == "h-rho":
                return rel.h_rho
            if name == "lambda-rho":
                return rel.lam_rho
            if name == "clambda-rho":
                return rel.clam_rho
            if parts[:2] == ["pi", "rho"] and len(parts) == 3:
                return s.pi_rho(int(parts[2]))
            if parts[:2] == ["p", "rho"] and len(parts) == 3:
                return rel.p_rho(int(parts[2]))
            if parts[0] == "pi" and len(parts) == 3:
                return s.pi_eps(int(parts[1]), int(parts[2]))
        except (ValueError, KeyError) as exc:
            raise InputError(f"cannot build operator {name!r}: {exc}")
        raise InputError(f"unknown operator {name!r}")


def merge_reports(name, labeled) -> dict:
    parameters = {}
    identities = []
    for label, rep in labeled:
        for key in sorted(rep.metadata):
            parameters[f"{label}.{key}"] = str(rep.metadata[key])
        for c in rep.checks:
            entry = {"name": f"{label}:{c.name}",
                     "status": "pass" if c.passed else "fail"}
            if c.witness is not None:
                entry["witness"] = c.witness
            identities.append(entry)
    return {"suite": name,
            "parameters": {k: parameters[k] for k in sorted(parameters)},
            "identities": identities}


def _write(doc, out_path):
    text = json.dumps(doc, sort_keys=True, separators=(",", ": "),
                      indent=1) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.suite not in SUITES:
        sys.stderr.write(f"unknown suite {args.suite!r}\n")
        return 2
    try:
        runner = Runner(args)
        if args.emit:
            _write(runner.emit(args.emit), args.out)
            return 0
        labeled = runner.run_suite(args.suite)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except ConstructionError as exc:
        doc = {"suite": args.suite, "parameters": {},
               "identities": [{"name": "construction", "status": "fail",
                               "witness": {"error": str(exc)}}]}
        _write(doc, args.out)
        return 1
    doc = merge_reports(args.suite, labeled)
    _write(doc, args.out)
    ok = all(e["status"] == "pass" for e in doc["identities"])
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
