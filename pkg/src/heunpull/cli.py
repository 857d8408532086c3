"""Command-line entry point: ``heunpull covering|verify|eval|pullback``.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error,
3 numeric-domain error (convergence policy, branch cut, pole).
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click
import mpmath

from . import coverings, identities
from .exact import PoleError, as_fraction
from .pullback import PullbackSpec, hpg_ode, match_heun, singular_points, transform_ode
from .series import (
    BranchError,
    ConvergenceError,
    HeunParams,
    HpgParams,
    TolerancePolicy,
    eval_truncated,
    heun_series,
    hpg_degenerate_closed,
    hpg_dihedral_closed,
    hpg_series,
)


class Rational(click.ParamType):
    """Exact ``p/q`` input; decimals are refused."""

    name = "rational"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return as_fraction(value)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            self.fail(f"{value!r}: {exc}", param, ctx)


class Number(click.ParamType):
    """``p/q`` stays exact; decimal strings are kept as text until the working precision is set."""

    name = "number"

    def convert(self, value, param, ctx):
        if not isinstance(value, str):
            return value
        try:
            return as_fraction(value)
        except TypeError:
            pass
        except (ValueError, ZeroDivisionError) as exc:
            self.fail(f"{value!r}: {exc}", param, ctx)
        try:
            mpmath.mpf(value)
        except (ValueError, TypeError):
            self.fail(f"{value!r} is not a number", param, ctx)
        return value


def _num(v):
    return mpmath.mpf(v) if isinstance(v, str) else v


RATIONAL = Rational()
NUMBER = Number()


def _emit(ctx, doc: dict):
    fmt = ctx.obj["output"]
    if fmt == "pretty":
        click.echo(json.dumps(doc, indent=2, sort_keys=True))
    elif fmt == "csv":
        for k in sorted(doc):
            click.echo(f"{k},{json.dumps(doc[k], sort_keys=True)}")
    else:
        click.echo(json.dumps(doc, sort_keys=True))


def _global_options(f):
    """Let the global flags also follow the subcommand (``verify CYC1 --seed 0``)."""

    def override(ctx, param, value):
        if value is not None:
            ctx.ensure_object(dict)[param.name] = value
        return value

    for name, kw in (
        ("--precision", {"type": click.IntRange(min=15)}),
        ("--seed", {"type": int}),
        ("--profile", {"type": click.Choice(["quick", "full"])}),
        ("--output", {"type": click.Choice(["json", "csv", "pretty"])}),
    ):
        f = click.option(name, default=None, expose_value=False, is_eager=False, callback=override,
                         help="Same as the global flag.", **kw)(f)
    return f


def _usage_error(msg: str):
    click.echo(f"error: {msg}", err=True)
    sys.exit(2)


@click.group()
@click.option("--precision", type=click.IntRange(min=15), default=50, show_default=True, help="Working digits.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--profile", type=click.Choice(["quick", "full"]), default="quick", show_default=True)
@click.option("--output", type=click.Choice(["json", "csv", "pretty"]), default="json", show_default=True)
@click.pass_context
def main(ctx, precision, seed, profile, output):
    """Pull-backs of hypergeometric equations to Heun equations, with verification."""
    ctx.obj = {"precision": precision, "seed": seed, "profile": profile, "output": output}


@main.command()
@click.argument("family", type=click.Choice(["cyclic", "dihedral", "nonbelyi"]))
@click.argument("params", nargs=-1, required=True)
@_global_options
@click.pass_context
def covering(ctx, family, params):
    """Build a covering: ``cyclic N M``, ``dihedral N M`` or ``nonbelyi s``."""
    try:
        if family == "nonbelyi":
            if len(params) != 1:
                raise ValueError("nonbelyi takes one parameter s")
            doc = coverings.nonbelyi_covering(as_fraction(params[0])).to_dict()
        else:
            if len(params) != 2:
                raise ValueError(f"{family} takes two parameters N M")
            N, M = (int(p) for p in params)
            if family == "cyclic":
                doc = coverings.cyclic_covering(N, M).to_dict()
            else:
                cov, pair = coverings.dihedral_covering(N, M)
                doc = cov.to_dict()
                doc.update(pair.to_dict())
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        _usage_error(str(exc))
    _emit(ctx, doc)


@main.command()
@click.argument("case_id")
@click.option("--timing", is_flag=True, help="Include runtimes (output is then not byte-stable).")
@_global_options
@click.pass_context
def verify(ctx, case_id, timing):
    """Run one identity case, or ``all``."""
    o = ctx.obj
    if case_id == "all":
        ids = None
    else:
        try:
            identities.get_case(case_id)
        except identities.UnknownIdentity:
            _usage_error(f"unknown identity {case_id!r}")
        ids = {case_id}
    reports = identities.run_all(o["profile"], o["seed"], o["precision"], ids)
    if o["output"] == "csv":
        click.echo(identities.summary_csv(reports), nl=False)
    else:
        click.echo(identities.reports_jsonl(reports, timing), nl=False)
        if case_id == "all":
            passed = sum(r.passed for r in reports)
            click.echo(json.dumps({"summary": {"cases": len(reports), "pass": passed,
                                               "fail": len(reports) - passed}}, sort_keys=True))
    failed = [r.id for r in reports if not r.passed]
    if failed:
        click.echo(f"first failure: {failed[0]}", err=True)
        sys.exit(1)


@main.command(name="eval")
@click.argument("function", type=click.Choice(["heun", "2f1", "closed"]))
@click.option("--t", type=NUMBER)
@click.option("--q", type=NUMBER)
@click.option("--a", type=NUMBER)
@click.option("--b", type=NUMBER)
@click.option("--c", type=NUMBER)
@click.option("--d", type=NUMBER)
@click.option("--A", "A_", type=NUMBER)
@click.option("--B", "B_", type=NUMBER)
@click.option("--C", "C_", type=NUMBER)
@click.option("--form", type=click.Choice(["degenerate", "upper", "half"]), default="degenerate",
              help="Closed form: 2F1(1-a,1;2;x), 2F1(a/2,(a+1)/2;a+1;x) or 2F1(a/2,(a+1)/2;1/2;x).")
@click.option("--x", "x", type=NUMBER, required=True)
@_global_options
@click.pass_context
def eval_cmd(ctx, function, t, q, a, b, c, d, A_, B_, C_, form, x):
    """Evaluate a local Heun or 2F1 series, or a closed form, at ``x``."""
    prec = ctx.obj["precision"]

    def need(**kw):
        missing = [k.rstrip("_") for k, v in kw.items() if v is None]
        if missing:
            _usage_error(f"missing parameters: {', '.join(missing)}")

    try:
        with mpmath.workdps(prec + 10):
            t, q, a, b, c, d, A_, B_, C_, x = (_num(v) for v in (t, q, a, b, c, d, A_, B_, C_, x))
            if function == "heun":
                need(t=t, q=q, a=a, b=b, c=c, d=d)
                s = heun_series(HeunParams(t, q, a, b, c, d), 0)
                res = eval_truncated(s, x, TolerancePolicy(precision=prec))
                value, err = res.value, res.error
            elif function == "2f1":
                need(A=A_, B=B_, C=C_)
                s = hpg_series(HpgParams(A_, B_, C_), 0)
                res = eval_truncated(s, x, TolerancePolicy(precision=prec))
                value, err = res.value, res.error
            else:
                need(a=a)
                if form == "degenerate":
                    value = hpg_degenerate_closed(a, x, prec)
                else:
                    value = hpg_dihedral_closed(form, a, x, prec)
                err = mpmath.mpf(0)
    except (ConvergenceError, BranchError, PoleError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        _usage_error(str(exc))
    digits = max(prec - 5, 15)
    _emit(ctx, {"function": function, "x": str(x), "value": mpmath.nstr(value, digits),
                "error": mpmath.nstr(err, 3)})


def _exponent_table(ode) -> list:
    return [{"point": p.label(), "exponents": [str(e) for e in p.exponents], "difference": str(p.difference)}
            for p in singular_points(ode)]


def _heun_json(p: HeunParams) -> dict:
    return dict(zip(("t", "q", "a", "b", "c", "d"), (str(v) for v in p.astuple())))


@main.command()
@click.argument("scenario", type=click.Choice(["P1", "TRIVPBF", "NONBELYI", "DIHEDRAL-DIFF"]))
@click.option("--A", "A_", type=RATIONAL, default="1/3", show_default=True)
@click.option("--B", "B_", type=RATIONAL, default="1/5", show_default=True)
@click.option("--C", "C_", type=RATIONAL, default="3/7", show_default=True)
@click.option("--N", "N", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--M", "M", type=click.IntRange(min=1), default=3, show_default=True)
@click.option("--alpha", type=RATIONAL, default="1/5", show_default=True)
@click.option("--s", type=RATIONAL, default="1/2", show_default=True)
@click.option("--e", type=RATIONAL, default="1/3", show_default=True)
@_global_options
@click.pass_context
def pullback(ctx, scenario, A_, B_, C_, N, M, alpha, s, e):
    """Transform an equation by a named pull-back and compare with the expected Heun equation."""
    try:
        if scenario == "P1":
            expected = identities.p1_params(A_, B_, C_)
            ode = transform_ode(PullbackSpec(hpg_ode(HpgParams(A_, B_, C_)), identities.X**2))
            params = {"A": str(A_), "B": str(B_), "C": str(C_)}
        elif scenario == "TRIVPBF":
            expected = identities.trivpbf_params(N, M, alpha)
            ode = identities.trivpbf_pullback(N, M, alpha)
            params = {"N": N, "M": M, "alpha": str(alpha)}
        elif scenario == "NONBELYI":
            expected = identities.nonbelyi_params(e)
            ode = identities.nonbelyi_pullback(s, e)
            params = {"s": str(s), "e": str(e)}
        else:
            ode, pair = identities.dihedral_pullback(N, M, alpha, theta_exponent=alpha)
            params = {"N": N, "M": M, "alpha": str(alpha)}
            witness = identities.check_dihedral_pullback(N, M, alpha)
            doc = {"scenario": scenario, "params": params, "ode": ode.to_dict(),
                   "singular_points": _exponent_table(ode), "t": str(Fraction(M * M, N * N)),
                   "match": witness is None, "witness": witness}
            _emit(ctx, doc)
            sys.exit(0 if witness is None else 1)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        _usage_error(str(exc))
    rep = match_heun(ode, expected)
    doc = {"scenario": scenario, "params": params, "ode": ode.to_dict(), "expected": _heun_json(expected),
           "match": rep.match, "witness": rep.witness or None, "singular_points": _exponent_table(ode)}
    _emit(ctx, doc)
    sys.exit(0 if rep.match else 1)


if __name__ == "__main__":  # pragma: no cover
    main()
