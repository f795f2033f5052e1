# -*- coding: utf-8 -*-
# Copyright (c) 2026  The cqrel developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

import functools
import json
import math
import sys
from logging import getLogger

import click

from cqrel import commuting, exponents, srm_oracle
from cqrel.channel import Prior, load_channel_file, load_prior_file
from cqrel.errors import NumericalError, ValidationError
from cqrel.metrics import write_metrics
from cqrel.schemas import (
    BinaryReportSchema,
    CapacityReportSchema,
    ClassicalReportSchema,
    CurveReportSchema,
    VerifyReportSchema,
    ZeroRateReportSchema,
    load_run_config,
)

log = getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFICATION = 2
EXIT_NUMERICAL = 3

NATS_PER_BIT = math.log(2.0)


class CqrelGroup(click.Group):
    """Group whose usage errors exit with the validation status."""

    def invoke(self, ctx):
        try:
            return super(CqrelGroup, self).invoke(ctx)
        except click.UsageError as e:
            e.exit_code = EXIT_VALIDATION
            raise


def json_error(status, error, message):
    click.echo(
        json.dumps(
            {"status": status, "error": error, "message": message}, sort_keys=True
        ),
        err=True,
    )
    sys.exit(status)


def handle_errors(f):
    """Maps exceptions raised by a command to the documented exit statuses."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except ValidationError as e:
            log.error("%s", e)
            json_error(EXIT_VALIDATION, "Validation Error", str(e))
        except OSError as e:
            log.error("%s", e)
            json_error(EXIT_VALIDATION, "Validation Error", str(e))
        except NumericalError as e:
            log.exception("Numerical error: %s", e)
            json_error(EXIT_NUMERICAL, "Numerical Error", str(e))
        except Exception as e:
            log.exception("Internal error: %s", e)
            json_error(EXIT_NUMERICAL, "Internal Error", str(e))

    return wrapper


def parse_grid(spec):
    """
    Parses "lo:hi:step" into the list lo, lo + step, ..., up to hi
    inclusive. Values are rounded to 12 decimals.
    """
    try:
        lo, hi, step = (float(part) for part in spec.split(":"))
    except ValueError:
        raise ValidationError("Grid must be given as lo:hi:step, got %r" % spec)
    if not step > 0 or not hi >= lo:
        raise ValidationError("Grid %r needs step > 0 and hi >= lo" % spec)
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 12) for i in range(count)]


def format_number(value):
    """17 significant digits; infinities as the "inf" token."""
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return "%.17g" % value


def _dump(data):
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as f:
            f.write(text)
        log.info("Output written to %s", out)
    else:
        click.echo(text, nl=False)


def _scale(bits):
    return (1.0 / NATS_PER_BIT if bits else 1.0), ("bits" if bits else "nats")


def _load_channel(cfg):
    if not cfg.channel_path:
        raise ValidationError("--channel is required")
    return load_channel_file(cfg.channel_path)


def _resolve_prior(cfg, a):
    """
    :return: a Prior, None for the channel's own prior, or the string
        "optimize".
    """
    if cfg.prior is None:
        return None
    if cfg.prior == "uniform":
        return Prior.uniform(a)
    if cfg.prior == "optimize":
        return "optimize"
    return load_prior_file(cfg.prior, a)


channel_option = click.option(
    "--channel", "channel_path", help="Channel file (states or Gram matrix)"
)
prior_option = click.option("--prior", help="uniform, optimize or a prior file")
out_option = click.option("--out", help="Output file, standard output if unset")
bits_option = click.option(
    "--bits", is_flag=True, default=False, help="Display rates and exponents in bits"
)
threads_option = click.option(
    "--threads", type=int, help="Worker threads; never changes the output"
)


@click.group(cls=CqrelGroup)
def cli():
    """Reliability-function bounds of pure-state cq channels"""


@cli.command()
@channel_option
@out_option
@bits_option
@threads_option
@handle_errors
def capacity(channel_path, out, bits, threads):
    """Capacity C = max over priors of the entropy of the averaged state"""
    cfg = load_run_config(
        command="capacity",
        channel_path=channel_path,
        out=out,
        bits=bits,
        threads=threads,
    )
    log.info("capacity: channel=%s", cfg.channel_path)
    ch = _load_channel(cfg)
    optimum = exponents.capacity(ch, threads=cfg.threads)
    factor, unit = _scale(cfg.bits)
    report = {
        "capacity": optimum.value * factor,
        "unit": unit,
        "prior": [float(w) for w in optimum.point],
        "optimizer": {
            "value": optimum.value * factor,
            "point": [float(w) for w in optimum.point],
            "grid_step": optimum.grid_step,
            "lattice_size": optimum.lattice_size,
            "refined": optimum.refined,
        },
    }
    _emit(_dump(CapacityReportSchema().dump(report)), cfg.out)


def render_csv(curve, factor):
    lines = ["R,E_r,E_ex,region"]
    for point in curve.points:
        lines.append(
            ",".join(
                [
                    format_number(point.R * factor),
                    format_number(point.e_r * factor),
                    format_number(point.e_ex * factor),
                    point.region,
                ]
            )
        )
    return "\n".join(lines) + "\n"


@cli.command()
@channel_option
@prior_option
@click.option("--rmin", "r_min", type=float, default=0.0, show_default=True)
@click.option("--rmax", "r_max", type=float, default=1.0, show_default=True)
@click.option("--points", type=int, default=101, show_default=True)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["csv", "structured"]),
    default="csv",
    show_default=True,
)
@out_option
@bits_option
@threads_option
@handle_errors
def curve(channel_path, prior, r_min, r_max, points, fmt, out, bits, threads):
    """E_r and E_ex sampled on a uniform rate grid"""
    cfg = load_run_config(
        command="curve",
        channel_path=channel_path,
        prior=prior,
        r_min=r_min,
        r_max=r_max,
        points=points,
        format=fmt,
        out=out,
        bits=bits,
        threads=threads,
    )
    log.info(
        "curve: channel=%s, prior=%s, R in [%g, %g], %d points",
        cfg.channel_path,
        cfg.prior,
        cfg.r_min,
        cfg.r_max,
        cfg.points,
    )
    ch = _load_channel(cfg)
    prior = _resolve_prior(cfg, ch.alphabet_size)
    envelope = prior == "optimize"
    result = exponents.curve(
        ch,
        None if envelope else prior,
        cfg.r_min,
        cfg.r_max,
        cfg.points,
        envelope=envelope,
        threads=cfg.threads,
    )
    factor, unit = _scale(cfg.bits)
    if cfg.format == "csv":
        _emit(render_csv(result, factor), cfg.out)
        return
    report = {
        "unit": unit,
        "envelope": envelope,
        "prior": None if envelope else ch.prior_or_default(prior).tolist(),
        "points": [
            {
                "R": p.R * factor,
                "e_r": p.e_r * factor,
                "e_ex": p.e_ex * factor,
                "region": p.region,
                "e_ex_at_limit": p.e_ex_at_limit,
            }
            for p in result.points
        ],
    }
    _emit(_dump(CurveReportSchema().dump(report)), cfg.out)


@cli.command("zero-rate")
@channel_option
@out_option
@bits_option
@threads_option
@handle_errors
def zero_rate(channel_path, out, bits, threads):
    """Zero-rate exponent E(+0) and its extremal prior"""
    cfg = load_run_config(
        command="zero-rate",
        channel_path=channel_path,
        out=out,
        bits=bits,
        threads=threads,
    )
    log.info("zero-rate: channel=%s", cfg.channel_path)
    ch = _load_channel(cfg)
    result = exponents.zero_rate_exponent(ch, threads=cfg.threads)
    factor, unit = _scale(cfg.bits)
    report = {
        "zero_rate_exponent": result.value * factor,
        "unit": unit,
        "prior": None if result.prior is None else result.prior.tolist(),
        "witness": None if result.witness is None else list(result.witness),
    }
    _emit(_dump(ZeroRateReportSchema().dump(report)), cfg.out)


@cli.command()
@click.option("--epsilon", type=float, help="Overlap of the two states, in (0, 1)")
@out_option
@bits_option
@handle_errors
def binary(epsilon, out, bits):
    """Closed forms of the two-state channel with overlap epsilon"""
    cfg = load_run_config(command="binary", epsilon=epsilon, out=out, bits=bits)
    if cfg.epsilon is None:
        raise ValidationError("--epsilon is required")
    log.info("binary: epsilon=%g", cfg.epsilon)
    result = exponents.binary_report(cfg.epsilon)
    deviation = exponents.binary_cross_check(cfg.epsilon)
    monotonicity = exponents.binary_capacity_monotonicity(cfg.epsilon)
    log.info(
        "C(%g) = %.7f, C(%g) = %.7f",
        cfg.epsilon,
        monotonicity.capacity,
        monotonicity.reference,
        monotonicity.reference_capacity,
    )
    if not monotonicity.consistent:
        log.warning("Capacity is not monotone in the overlap")
    factor, unit = _scale(cfg.bits)
    report = {
        "epsilon": result.epsilon,
        "unit": unit,
        "scalars": {k: v * factor for k, v in result.scalars.items()},
        "prior_grid": result.prior_grid.tolist(),
        "lambda1": result.lambda1.tolist(),
        "lambda2": result.lambda2.tolist(),
        "s_grid": result.s_grid.tolist(),
        "mu": (result.mu * factor).tolist(),
        "st_grid": result.st_grid.tolist(),
        "mu_tilde": (result.mu_tilde * factor).tolist(),
        "cross_check_deviation": deviation,
        "monotonicity": {
            "reference_epsilon": monotonicity.reference,
            "reference_capacity": monotonicity.reference_capacity * factor,
            "consistent": monotonicity.consistent,
        },
    }
    _emit(_dump(BinaryReportSchema().dump(report)), cfg.out)


@cli.command()
@channel_option
@prior_option
@click.option("--M", "codewords", type=int, default=4, show_default=True)
@click.option("--n", "n", type=int, default=6, show_default=True)
@click.option("--samples", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, help="Master seed (required)")
@click.option("--s-grid", "s_grid", default="0.1:1.0:0.1", show_default=True)
@click.option("--r", "r", type=float, default=1.0, show_default=True)
@click.option(
    "--check",
    type=click.Choice(["random", "expurgation", "all"]),
    default="all",
    show_default=True,
)
@out_option
@threads_option
@handle_errors
def verify(
    channel_path, prior, codewords, n, samples, seed, s_grid, r, check, out, threads
):
    """Checks the bounds against SRM decoding of random codebooks"""
    cfg = load_run_config(
        command="verify",
        channel_path=channel_path,
        prior=prior,
        codewords=codewords,
        n=n,
        samples=samples,
        seed=seed,
        s_grid=s_grid,
        r=r,
        check=check,
        out=out,
        threads=threads,
    )
    if cfg.seed is None:
        raise ValidationError("--seed is required")
    grid = parse_grid(cfg.s_grid)
    log.info(
        "verify: channel=%s, check=%s, M=%d, n=%d, samples=%d, seed=%d",
        cfg.channel_path,
        cfg.check,
        cfg.codewords,
        cfg.n,
        cfg.samples,
        cfg.seed,
    )
    ch = _load_channel(cfg)
    prior = _resolve_prior(cfg, ch.alphabet_size)
    if prior == "optimize":
        prior = Prior.from_weights(
            exponents.capacity(ch, threads=cfg.threads).point, normalize=True
        )

    report = {"random": None, "expurgation": None}
    passed = True
    if cfg.check in ("random", "all"):
        result = srm_oracle.verify_random_coding(
            ch,
            prior,
            cfg.codewords,
            cfg.n,
            cfg.samples,
            cfg.seed,
            grid,
            threads=cfg.threads,
        )
        report["random"] = result
        passed = passed and result.passed
    if cfg.check in ("expurgation", "all"):
        result = srm_oracle.verify_expurgation(
            ch,
            prior,
            cfg.codewords,
            cfg.n,
            cfg.samples,
            cfg.seed,
            cfg.r,
            threads=cfg.threads,
        )
        report["expurgation"] = result
        passed = passed and result.passed
    report["passed"] = passed

    _emit(_dump(VerifyReportSchema().dump(report)), cfg.out)
    write_metrics()
    if not passed:
        log.warning("Verification failed")
        sys.exit(EXIT_VERIFICATION)


@cli.command()
@channel_option
@prior_option
@click.option("--M", "codewords", type=int, default=2, show_default=True)
@click.option("--n", "n", type=int, default=1, show_default=True)
@click.option("--s-grid", "s_grid", default="0.1:1.0:0.1", show_default=True)
@click.option("--sx-grid", "sx_grid", default="1:8:0.25", show_default=True)
@click.option("--pure-states", "pure_states", help="Pure-state channel to cross-check")
@out_option
@handle_errors
def classical(channel_path, prior, codewords, n, s_grid, sx_grid, pure_states, out):
    """Gallager and Bhattacharyya bounds of a classical channel"""
    cfg = load_run_config(
        command="classical",
        channel_path=channel_path,
        prior=prior,
        codewords=codewords,
        n=n,
        s_grid=s_grid,
        sx_grid=sx_grid,
        pure_states=pure_states,
        out=out,
    )
    if not cfg.channel_path:
        raise ValidationError("--channel is required")
    log.info(
        "classical: channel=%s, M=%d, n=%d", cfg.channel_path, cfg.codewords, cfg.n
    )
    dc, file_prior = commuting.load_classical_file(cfg.channel_path)
    if cfg.prior == "optimize":
        raise ValidationError("--prior optimize is not available for classical")
    prior = _resolve_prior(cfg, dc.alphabet_size)
    if prior is None:
        prior = file_prior

    grid, x_grid = parse_grid(cfg.s_grid), parse_grid(cfg.sx_grid)
    result = commuting.classical_report(dc, prior, cfg.codewords, cfg.n, grid, x_grid)
    if cfg.pure_states:
        ch = load_channel_file(cfg.pure_states)
        result.cross_check_deviation = commuting.pure_state_deviation(
            ch, None, cfg.codewords, cfg.n, grid, x_grid
        )
    _emit(_dump(ClassicalReportSchema().dump(result)), cfg.out)


if __name__ == "__main__":
    cli()
