"""
cli.py

Command-line surface of nitsche-lab.

Commands:
- means      radial profile of a map (CSV)
- verify     the acceptance suite, one line per check
- construct  harmonic homeomorphism A(1, R) -> A(1, R*) (AHM)
- minsurf    minimal-graph lift and the modulus bound (CSV)
- identity   both sides of the integral identity on an R grid (CSV)
- qforms     quadratic-form scan, or a map's per-index decomposition (CSV)
- chain      Jacobian-energy chain for boundary homeomorphisms (CSV)
- example51  the counterexample map: conditions, crossing, profile (CSV)
- gen        seeded random map (AHM)

Exit codes: 0 success, 1 failing verify check, 2 parse/format error,
3 domain error, 4 Nitsche bound violated, 5 no minimal lift.
"""


# Stdlib imports
import functools
import math
from dataclasses import dataclass
from pathlib import Path

# Third-party imports
import click
import numpy as np
import pandas as pd

# Internal imports
import src.config as config
import src.harmonic.defaults as defaults
from src.harmonic.acceptance import run_acceptance
from src.harmonic.annulus_core import AnnulusMap, format_ahm, read_ahm, write_ahm
from src.harmonic.circle_means import radial_profile
from src.harmonic.disk_maps import jacobian_energy_chain, poisson_extend, read_bhm
from src.harmonic.errors import DomainError, FormatError, NoHarmonicHomeomorphism, NoLiftError
from src.harmonic.gen_maps import make_rng, random_annulus_map, random_boundary_homeo
from src.harmonic.identity_engine import identity_table
from src.harmonic.minimal_surface import lift, lift_modulus, modulus_bound_check, surface_ratio, surface_samples
from src.harmonic.nitsche_family import (
    NitscheParams,
    check_initial_conditions,
    construct_harmonic_homeo,
    example_51_crossing,
    example_51_map,
    nitsche_map,
    nitsche_speed_for,
)
from src.harmonic.quadratic_forms import default_rho_grid, positivity_scan, qform_decomposition
from src.utils.logger import logger
from src.utils.table_helpers import csv_text, write_csv_atomic


@dataclass(frozen=True)
class RunConfig:
    map_path: Path | None
    out_path: Path | None
    tol: float
    seed: int
    rho_grid: tuple[float, float, int] | None
    quad: tuple[int, int] | None
    v: float | None
    R: float | None
    R_star: float | None
    a: float | None
    lam: float | None
    example51: bool

    @property
    def M(self) -> int | None:
        return self.quad[0] if self.quad else None

    @property
    def K(self) -> int | None:
        return self.quad[1] if self.quad else None

    def grid(self, lo: float, hi: float, steps: int) -> np.ndarray:
        """The --rho-grid values, or linspace(lo, hi, steps) when not given."""
        if self.rho_grid is None:
            return np.linspace(lo, hi, steps)
        return np.linspace(*self.rho_grid)


# OPTION PARSING
def _parse_rho_grid(ctx, param, value):
    if value is None:
        return None
    try:
        lo, hi, steps = value.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise click.BadParameter("expected lo:hi:steps, e.g. 1:2:50")
    if not (1.0 <= lo <= hi) or steps < 1:
        raise click.BadParameter("need 1 <= lo <= hi and steps >= 1")
    return lo, hi, steps


def _parse_quad(ctx, param, value):
    if value is None:
        return None
    try:
        M, K = (int(x) for x in value.split(","))
    except ValueError:
        raise click.BadParameter("expected M,K, e.g. 256,32")
    if M < 4 or K < 1:
        raise click.BadParameter("need M >= 4 and K >= 1")
    return M, K


def common_options(func):
    options = [
        click.option("--map", "map_path", type=click.Path(dir_okay=False, path_type=Path), help="AHM map file."),
        click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path), help="Output file."),
        click.option("--tol", type=float, default=config.DEFAULT_TOL, show_default=True),
        click.option("--seed", type=int, default=config.DEFAULT_SEED, show_default=True),
        click.option("--rho-grid", callback=_parse_rho_grid, help="lo:hi:steps"),
        click.option("--quad", callback=_parse_quad, help="M,K (angular nodes, radial nodes per unit)."),
        click.option("--nitsche-v", "v", type=float, help="Use the Nitsche map h_v."),
        click.option("--R", "R", type=float, help="Outer radius of the domain annulus."),
        click.option("--Rstar", "R_star", type=float, help="Outer radius of the target annulus."),
        click.option("--a", type=float, help="Parameter a of the counterexample map."),
        click.option("--lam", type=float, help="Log coefficient of the counterexample map."),
        click.option("--example51", is_flag=True, help="Use the counterexample map."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def exit_codes(func):
    """Translate library exceptions into the documented exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            common = {name: kwargs.pop(name) for name in RunConfig.__dataclass_fields__}
            return func(RunConfig(**common), **kwargs)
        except FormatError:
            logger.exception("Malformed input file")
            ctx.exit(2)
        except NoHarmonicHomeomorphism as e:
            logger.exception("Nitsche bound violated")
            click.echo(f"no harmonic homeomorphism: deficit {e.deficit:.17g}")
            ctx.exit(4)
        except NoLiftError as e:
            logger.exception("No minimal lift")
            click.echo(f"no lift: {e}")
            ctx.exit(5)
        except DomainError as e:
            logger.exception("Domain error")
            click.echo(f"domain error: {e}")
            ctx.exit(3)

    return wrapper


# HELPERS
def _load_map(cfg: RunConfig) -> AnnulusMap:
    if cfg.map_path is not None:
        if not cfg.map_path.exists():
            raise FormatError(f"No such map file: {cfg.map_path}")
        return read_ahm(cfg.map_path)
    if cfg.example51:
        return example_51_map(cfg.a if cfg.a is not None else 0.5, cfg.lam, cfg.R or 20.0)
    if cfg.v is not None:
        if cfg.R is None:
            raise click.UsageError("--nitsche-v needs --R")
        return nitsche_map(NitscheParams(v=cfg.v, R=cfg.R))
    raise click.UsageError("Give a map: --map PATH, --nitsche-v V --R R, or --example51")


def _emit(df: pd.DataFrame, cfg: RunConfig) -> None:
    if cfg.out_path is None:
        click.echo(csv_text(df), nl=False)
    else:
        write_csv_atomic(df, cfg.out_path)
        logger.info(f"Wrote {len(df)} rows to {cfg.out_path}")


# COMMANDS
@click.group()
def cli():
    """Spectral checks for harmonic maps between annuli."""


@cli.command()
@common_options
@exit_codes
def means(cfg: RunConfig):
    """Radial profile: U, its derivatives, L, energy and the Nitsche margin."""
    hmap = _load_map(cfg)
    _emit(radial_profile(hmap, cfg.grid(1.0, hmap.R, 50), cfg.M), cfg)


@cli.command()
@common_options
@exit_codes
def verify(cfg: RunConfig):
    """Run the acceptance suite; exit 1 if any check fails."""
    report = run_acceptance(cfg.seed, cfg.tol)
    for row in report.itertuples(index=False):
        status = "pass" if row.passed else "FAIL"
        click.echo(f"{row.check} {row.value:.17g} {row.threshold:.17g} {status}")
    if cfg.out_path is not None:
        write_csv_atomic(report, cfg.out_path)
    if not report["passed"].all():
        click.get_current_context().exit(1)


@cli.command()
@common_options
@exit_codes
def construct(cfg: RunConfig):
    """Harmonic homeomorphism A(1, R) -> A(1, R*) from the Nitsche family."""
    if cfg.R is None or cfg.R_star is None:
        raise click.UsageError("construct needs --R and --Rstar")

    hmap = construct_harmonic_homeo(cfg.R, cfg.R_star)
    a1, b1 = hmap.terms[1]
    margin = cfg.R_star - 0.5 * (cfg.R + 1.0 / cfg.R)

    click.echo(f"v {nitsche_speed_for(cfg.R, cfg.R_star):.17g}")
    click.echo(f"a1 {a1.real:.17g} b1 {b1.real:.17g}")
    if margin == 0.0:
        click.echo("equality: rigid family")
    else:
        click.echo(f"margin {margin:.17g}")

    if cfg.out_path is None:
        click.echo(format_ahm(hmap), nl=False)
    else:
        write_ahm(hmap, cfg.out_path)


@cli.command()
@common_options
@exit_codes
def minsurf(cfg: RunConfig):
    """Lift to a minimal graph and compare its modulus with the catenoid bound."""
    hmap = _load_map(cfg)
    n_rho = cfg.rho_grid[2] if cfg.rho_grid else 65
    result = lift(hmap, n_rho=n_rho, n_theta=cfg.M or 128)

    ratio = surface_ratio(hmap)
    holds, slack = modulus_bound_check(lift_modulus(result), ratio)
    click.echo(
        f"modulus {lift_modulus(result):.17g} ratio {ratio:.17g} slack {slack:.17g} "
        f"holds {str(holds).lower()} flat {str(result.flat).lower()}",
        err=cfg.out_path is None,
    )
    _emit(surface_samples(result), cfg)


@cli.command()
@common_options
@exit_codes
def identity(cfg: RunConfig):
    """Both sides of the integral identity for R_eval on the rho grid."""
    hmap = _load_map(cfg)
    R_grid = cfg.grid(1.0, hmap.R, 11)
    R_grid = R_grid[R_grid > 1.0]
    if R_grid.size == 0:
        raise DomainError("identity needs R_eval > 1")
    _emit(identity_table(hmap, R_grid, cfg.M), cfg)


@cli.command()
@common_options
@click.option("--n-min", type=int, default=defaults.qform_n_min, show_default=True)
@click.option("--n-max", type=int, default=defaults.qform_n_max, show_default=True)
@exit_codes
def qforms(cfg: RunConfig, n_min: int, n_max: int):
    """Positivity scan of (A_n, B_n, C_n), or Q_n(a_n, b_n) of a map with --map."""
    if cfg.map_path is not None or cfg.v is not None or cfg.example51:
        hmap = _load_map(cfg)
        rho = cfg.grid(hmap.R, hmap.R, 1)
        _emit(pd.concat([qform_decomposition(hmap, float(r)) for r in rho], ignore_index=True), cfg)
        return

    if n_min > n_max:
        raise DomainError(f"Empty index range [{n_min}, {n_max}]")
    rho = default_rho_grid() if cfg.rho_grid is None else np.linspace(*cfg.rho_grid)
    report = positivity_scan((n_min, n_max), rho)
    click.echo(
        f"min_A {report.min_A:.17g} min_B {report.min_B:.17g} "
        f"min_discriminant {report.min_discriminant:.17g} positive {str(report.positive).lower()}",
        err=cfg.out_path is None,
    )
    _emit(report.table, cfg)


@cli.command()
@common_options
@click.option("--bhm", "bhm_path", type=click.Path(dir_okay=False, path_type=Path), help="BHM boundary file.")
@click.option("--samples", type=int, default=defaults.verify_samples, show_default=True)
@exit_codes
def chain(cfg: RunConfig, bhm_path: Path | None, samples: int):
    """Jacobian-energy chain for a BHM file, or for seeded random boundary maps."""
    if bhm_path is not None:
        if not bhm_path.exists():
            raise FormatError(f"No such boundary file: {bhm_path}")
        boundaries = [read_bhm(bhm_path)]
    else:
        rng = make_rng(cfg.seed)
        boundaries = [random_boundary_homeo(rng) for _ in range(samples)]

    rows = []
    for k, bdry in enumerate(boundaries):
        result = jacobian_energy_chain(poisson_extend(bdry), cfg.M, cfg.tol)
        rows.append({"sample": k, **result._asdict()})
    df = pd.DataFrame(rows)
    _emit(df[defaults.chain_columns], cfg)


@cli.command()
@common_options
@exit_codes
def example51(cfg: RunConfig):
    """Counterexample map: conditions (I)-(III), bound crossing and profile."""
    a = cfg.a if cfg.a is not None else 0.5
    R = cfg.R or 20.0
    hmap = example_51_map(a, cfg.lam, R)
    ic = check_initial_conditions(hmap, cfg.M)
    crossing = example_51_crossing(a, cfg.lam, R)

    click.echo(
        f"I {str(ic.I).lower()} II {str(ic.II).lower()} III {str(ic.III).lower()} "
        f"mean_jacobian {ic.mean_jacobian:.17g} "
        f"crossing {crossing if crossing is not None else math.nan:.17g}",
        err=cfg.out_path is None,
    )
    _emit(radial_profile(hmap, cfg.grid(1.0, R, 100), cfg.M), cfg)


@cli.command()
@common_options
@click.option("--order", type=int, default=config.RANDOM_MAP_ORDER, show_default=True)
@click.option("--decay", type=float, default=config.RANDOM_DECAY, show_default=True)
@exit_codes
def gen(cfg: RunConfig, order: int, decay: float):
    """Seeded random map on A(1, R), written as AHM."""
    hmap = random_annulus_map(make_rng(cfg.seed), order, decay, cfg.R or 2.0)
    if cfg.out_path is None:
        click.echo(format_ahm(hmap), nl=False)
    else:
        write_ahm(hmap, cfg.out_path)
