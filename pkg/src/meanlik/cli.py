"""Command-line interface.

Subcommands emit the exact or simulated comparison curves as CSV (one fixed
schema for every command) and evaluate the estimators on user data:

* ``binomial``     exact efficiency and closeness curves over p
* ``exponential``  exact efficiency and closeness curves over n
* ``ma1-exact2``   exact length-two MA(1) curves over theta
* ``ma1-sim``      seeded Monte Carlo MA(1) study with confidence intervals
* ``fit``          point estimates for a data file

Exit codes: 0 success, 1 usage error, 2 data or domain error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import binomial, exponential, ma1
from .compare import DEFAULT_SEED, SimConfig, sweep
from .exceptions import DataFormatError, MeanlikError
from .ma1 import bayes_n2_interp, mele_n2_interp, mle_n2, pmc_n2, risk_n2

CSV_HEADER = (
    "model,comparison,x,mse_mle,mse_alt,r,r_lo,r_hi,"
    "pmc,pmc_lo,pmc_hi,pileup_pos,pileup_neg,n,n_rep,seed"
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract wants 1
    def error(self, message):
        raise _UsageError(message)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.12g}"


@dataclass(frozen=True)
class OutputRow:
    """One CSV row; fields not applicable to a command stay empty."""

    model: str
    comparison: str
    x: float
    mse_mle: float | None = None
    mse_alt: float | None = None
    r: float | None = None
    r_lo: float | None = None
    r_hi: float | None = None
    pmc: float | None = None
    pmc_lo: float | None = None
    pmc_hi: float | None = None
    pileup_pos: float | None = None
    pileup_neg: float | None = None
    n: int | None = None
    n_rep: int | None = None
    seed: int | None = None

    def line(self) -> str:
        return ",".join(
            [
                self.model,
                self.comparison,
                _fmt(self.x),
                _fmt(self.mse_mle),
                _fmt(self.mse_alt),
                _fmt(self.r),
                _fmt(self.r_lo),
                _fmt(self.r_hi),
                _fmt(self.pmc),
                _fmt(self.pmc_lo),
                _fmt(self.pmc_hi),
                _fmt(self.pileup_pos),
                _fmt(self.pileup_neg),
                _fmt(self.n),
                _fmt(self.n_rep),
                _fmt(self.seed),
            ]
        )


def _emit(lines: list[str], out_path: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _grid(count: int, lo: float, hi: float) -> np.ndarray:
    # one rounding per point keeps grid values printing cleanly
    return (np.arange(count + 1) * (hi - lo) + count * lo) / count


def _step_to_count(step: float, span: float, max_step: float) -> int:
    if not 0.0 < step <= max_step:
        raise _UsageError(f"--grid-step must be in (0, {max_step}], got {step}")
    count = round(span / step)
    if count < 2 or abs(count * step - span) > 1e-9:
        raise _UsageError(f"--grid-step {step} does not evenly divide the range {span}")
    return count


def cmd_binomial(args) -> list[str]:
    ns = args.n or [10, 30]
    count = _step_to_count(args.grid_step, 1.0, 0.5)
    ps = _grid(count, 0.0, 1.0)
    lines = [CSV_HEADER]
    alts = (("mele_vs_mle", binomial.mele_p), ("bayes_vs_mle", binomial.bayes_p))
    for n in ns:
        if n < 1:
            raise _UsageError(f"--n must be >= 1, got {n}")
        for comparison, alt in alts:
            for p in ps:
                mse_mle = binomial.mse_exact(binomial.mle_p, n, p)
                mse_alt = binomial.mse_exact(alt, n, p)
                lines.append(
                    OutputRow(
                        model="binomial",
                        comparison=comparison,
                        x=p,
                        mse_mle=mse_mle,
                        mse_alt=mse_alt,
                        r=mse_mle / mse_alt,
                        pmc=binomial.pmc_exact(alt, binomial.mle_p, n, p),
                        n=n,
                    ).line()
                )
    for n in ns:
        lo, hi = binomial.efficiency_interval_mele(n)
        lines.append(f"# efficiency_interval,binomial,mele_vs_mle,n={n},lo={_fmt(lo)},hi={_fmt(hi)}")
        lo, hi = binomial.efficiency_interval_bayes(n)
        lines.append(f"# efficiency_interval,binomial,bayes_vs_mle,n={n},lo={_fmt(lo)},hi={_fmt(hi)}")
    return lines


def cmd_exponential(args) -> list[str]:
    ns = args.n or list(range(3, 101))
    lines = [CSV_HEADER]
    for n in ns:
        if n < 2:
            raise _UsageError(f"--n must be >= 2 for exponential rows, got {n}")
        mse_mle = exponential.mse_scaled_gamma(n, n, 1.0)
        if n >= 3:
            lines.append(
                OutputRow(
                    model="exponential",
                    comparison="mele_vs_mle",
                    x=n,
                    mse_mle=mse_mle,
                    mse_alt=exponential.mse_scaled_gamma(n - 2, n, 1.0),
                    r=exponential.rel_eff_mele(n),
                    pmc=exponential.pmc_vs_mle("mele", n),
                    n=n,
                ).line()
            )
        lines.append(
            OutputRow(
                model="exponential",
                comparison="bayes_vs_mle",
                x=n,
                mse_mle=mse_mle,
                mse_alt=exponential.mse_scaled_gamma(n - 1, n, 1.0),
                r=exponential.rel_eff_bayes(n),
                pmc=exponential.pmc_vs_mle("bayes", n),
                n=n,
            ).line()
        )
    return lines


def cmd_ma1_exact2(args) -> list[str]:
    count = _step_to_count(args.grid_step, 2.0, 0.5)
    thetas = _grid(count, -1.0, 1.0)
    mle_breaks = (-0.25, 0.0, 0.25)
    lines = [CSV_HEADER]
    alts = (("mele_vs_mle", mele_n2_interp), ("bayes_vs_mle", bayes_n2_interp))
    for comparison, alt in alts:
        for theta in thetas:
            mse_mle = risk_n2(mle_n2, theta, "mse", breakpoints=mle_breaks)
            mse_alt = risk_n2(alt, theta, "mse")
            lines.append(
                OutputRow(
                    model="ma1_exact2",
                    comparison=comparison,
                    x=theta,
                    mse_mle=mse_mle,
                    mse_alt=mse_alt,
                    r=mse_mle / mse_alt,
                    pmc=pmc_n2(alt, mle_n2, theta),
                    n=2,
                ).line()
            )
    return lines


def cmd_ma1_sim(args) -> list[str]:
    cfg = SimConfig(
        n=args.n_len,
        n_rep=args.n_rep,
        master_seed=args.seed,
        prior=args.prior,
        estimate_mean=args.estimate_mean,
        threads=args.threads,
    )
    points = sweep(cfg)
    lines = [CSV_HEADER]
    for pt in points:
        lines.append(
            OutputRow(
                model="ma1_sim",
                comparison=pt.comparison,
                x=pt.theta,
                mse_mle=pt.mse_a,
                mse_alt=pt.mse_b,
                r=pt.r,
                r_lo=pt.r_lo,
                r_hi=pt.r_hi,
                pmc=pt.pmc,
                pmc_lo=pt.pmc_lo,
                pmc_hi=pt.pmc_hi,
                pileup_pos=pt.pileup_pos,
                pileup_neg=pt.pileup_neg,
                n=pt.n,
                n_rep=pt.n_rep,
                seed=pt.seed,
            ).line()
        )
    return lines


def _read_numbers(path: str) -> list[float]:
    values = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                for token in raw.split():
                    try:
                        values.append(float(token))
                    except ValueError:
                        raise DataFormatError(
                            f"{path}: line {lineno}: could not parse {token!r} as a number"
                        ) from None
    except OSError as exc:
        raise DataFormatError(f"could not read {path}: {exc}") from None
    return values


def cmd_fit(args) -> list[str]:
    values = _read_numbers(args.data_file)
    lines = []
    if args.model == "binomial":
        if len(values) != 2:
            raise DataFormatError(
                f"binomial input needs exactly two numbers (x n), got {len(values)}"
            )
        d = binomial.BinomialData(x=int(values[0]), n=int(values[1]))
        lines.append(f"model: binomial (x={d.x}, n={d.n})")
        lines.append(f"  mle    {_fmt(binomial.mle_p(d))}")
        lines.append(f"  mele   {_fmt(binomial.mele_p(d))}")
        lines.append(f"  bayes  {_fmt(binomial.bayes_p(d))}")
    elif args.model == "exponential":
        if not values:
            raise DataFormatError("exponential input needs at least one lifetime")
        d = exponential.ExponentialData(t=sum(values), n=len(values))
        lines.append(f"model: exponential (n={d.n}, total={_fmt(d.t)})")
        lines.append(f"  mle    {_fmt(exponential.mle_mu(d))}")
        lines.append(
            f"  mele   {_fmt(exponential.mele_mu(d)) if d.n >= 3 else 'n/a (needs n >= 3)'}"
        )
        lines.append(
            f"  bayes  {_fmt(exponential.bayes_mu(d)) if d.n >= 2 else 'n/a (needs n >= 2)'}"
        )
    else:
        if len(values) < 2:
            raise DataFormatError("ma1 input needs a series of length >= 2")
        est = ma1.estimate_ma1(np.asarray(values))
        lines.append(f"model: ma1 (n={len(values)})")
        flag = "  (boundary)" if est.mle_on_boundary else ""
        lines.append(f"  mle    {_fmt(est.mle)}{flag}")
        lines.append(f"  mele   {_fmt(est.mele)}")
        lines.append(f"  bayes  {_fmt(est.bayes)}")
    if args.csv:
        lines = [
            "model,mle,mle_on_boundary,mele,bayes",
            _fit_csv_row(args.model, values),
        ]
    return lines


def _fit_csv_row(model: str, values: list[float]) -> str:
    if model == "binomial":
        d = binomial.BinomialData(x=int(values[0]), n=int(values[1]))
        return ",".join(
            ["binomial", _fmt(binomial.mle_p(d)), "", _fmt(binomial.mele_p(d)), _fmt(binomial.bayes_p(d))]
        )
    if model == "exponential":
        d = exponential.ExponentialData(t=sum(values), n=len(values))
        mele = _fmt(exponential.mele_mu(d)) if d.n >= 3 else ""
        bayes = _fmt(exponential.bayes_mu(d)) if d.n >= 2 else ""
        return ",".join(["exponential", _fmt(exponential.mle_mu(d)), "", mele, bayes])
    est = ma1.estimate_ma1(np.asarray(values))
    return ",".join(
        ["ma1", _fmt(est.mle), "1" if est.mle_on_boundary else "0", _fmt(est.mele), _fmt(est.bayes)]
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="meanlik", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("binomial", help="exact binomial comparison curves")
    p.add_argument("--n", type=int, action="append", help="trial count (repeatable; default 10 and 30)")
    p.add_argument("--grid-step", type=float, default=0.005, help="p grid step (default 0.005)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_binomial)

    p = sub.add_parser("exponential", help="exact exponential comparison curves")
    p.add_argument("--n", type=int, action="append", help="sample size (repeatable; default 3..100)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_exponential)

    p = sub.add_parser("ma1-exact2", help="exact length-two MA(1) comparison curves")
    p.add_argument("--grid-step", type=float, default=0.05, help="theta grid step (default 0.05)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_ma1_exact2)

    p = sub.add_parser("ma1-sim", help="seeded Monte Carlo MA(1) comparison")
    p.add_argument("--n", dest="n_len", type=int, default=50, help="series length (default 50)")
    p.add_argument("--n-rep", type=int, default=10_000, help="replications per grid point (default 10000)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"master seed (default {DEFAULT_SEED})")
    p.add_argument("--prior", choices=("uniform", "jeffreys"), default="jeffreys")
    p.add_argument("--estimate-mean", action="store_true", help="subtract the sample average")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_ma1_sim)

    p = sub.add_parser("fit", help="point estimates for a data file")
    p.add_argument("data_file")
    p.add_argument("--model", choices=("binomial", "exponential", "ma1"), required=True)
    p.add_argument("--csv", action="store_true", help="emit CSV instead of aligned text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fit)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        lines = args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except MeanlikError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(lines, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
