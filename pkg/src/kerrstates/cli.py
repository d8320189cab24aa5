"""Command-line front end: states, distributions, sweeps, phase-space grids.

Every run writes its data file(s) plus a sidecar ``<base>.meta.json``
holding the full configuration, the tolerance profile, the library
version, and the wall time, so any output can be re-created from its
sidecar alone.  Data files are byte-deterministic for equal
configurations; the sidecar differs only in its wall-time entry.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .errors import NonConvergenceError, PoleError, TruncationError
from .phasespace import ClosedFormSpec, PhaseSpaceGrid, field_over_grid
from .specfun import SeriesTolerance
from .states import (ADDED_FAMILIES, DEFORMED_FAMILIES, FAMILIES, KerrParams,
                     make_state)
from .stats import (mandel_sweep, photon_distribution, write_distribution_csv,
                    write_mandel_csv)

PROFILE_ENV = "KERRSTATES_TOLERANCE_PROFILE"

PROFILES = {
    "default": SeriesTolerance(),
    "strict": SeriesTolerance(rel_tol=1e-14, max_terms=40_000),
    "fast": SeriesTolerance(rel_tol=1e-9, max_terms=4_000),
}

_COMMANDS = ("state", "dist", "mandel", "husimi", "wigner", "figure")
_DEFAULT_GRID = "-4:4:161"


class CliError(ValueError):
    """Configuration rejected before any computation ran."""


@dataclass
class RunConfig:
    """Validated inputs of one CLI invocation."""

    command: str
    family: str | None = None
    alpha: float = 0.0
    alpha_im: float = 0.0
    m: int = 0
    chi: float | None = None
    dim: int | None = None
    grid: str | None = None
    route: str = "generic"
    alpha_min: float = 0.0
    alpha_max: float = 5.0
    alpha_steps: int = 101
    fmt: str | None = None
    output: str | None = None
    plot: bool = False
    profile: str | None = None
    figure: int | None = None
    output_dir: str = "."


def _resolve_profile(name: str | None) -> tuple[str, SeriesTolerance]:
    chosen = name or os.environ.get(PROFILE_ENV) or "default"
    if chosen not in PROFILES:
        source = "--profile" if name else f"environment variable {PROFILE_ENV}"
        raise CliError(
            f"{source}: unknown tolerance profile {chosen!r}; "
            f"expected one of {sorted(PROFILES)}"
        )
    return chosen, PROFILES[chosen]


def validate(cfg: RunConfig) -> None:
    """Reject invalid flag combinations, naming the offending flag."""
    if cfg.command not in _COMMANDS:
        raise CliError(f"unknown command {cfg.command!r}")
    if cfg.command == "figure":
        if cfg.figure is None or not 1 <= cfg.figure <= 7:
            raise CliError("figure number must be between 1 and 7")
        if cfg.grid is not None:
            _parse_grid(cfg.grid)
        return
    if cfg.family is None:
        raise CliError("--family is required")
    if cfg.family not in FAMILIES:
        raise CliError(
            f"--family: unknown family {cfg.family!r}; expected one of "
            f"{', '.join(FAMILIES)}"
        )
    deformed = cfg.family in DEFORMED_FAMILIES
    if deformed and cfg.chi is None:
        raise CliError(f"--chi is required for the deformed family {cfg.family!r}")
    if not deformed and cfg.chi is not None:
        raise CliError(
            f"--chi does not apply to the undeformed family {cfg.family!r}"
        )
    if cfg.chi is not None and not 0.0 < cfg.chi < 1.0:
        raise CliError("--chi must lie in the open interval (0, 1)")
    if cfg.m < 0:
        raise CliError("--m must be nonnegative")
    if cfg.m > 0 and cfg.family not in ADDED_FAMILIES:
        raise CliError(f"--m does not apply to family {cfg.family!r}")
    if cfg.dim is not None and cfg.dim < 1:
        raise CliError("--dim must be positive")
    if cfg.fmt is not None and cfg.fmt not in ("csv", "json"):
        raise CliError("--format must be csv or json")
    if cfg.command == "mandel":
        if cfg.alpha_min < 0.0:
            raise CliError("--alpha-min must be nonnegative")
        if cfg.alpha_max <= cfg.alpha_min:
            raise CliError("--alpha-max must exceed --alpha-min")
        if cfg.alpha_steps < 2:
            raise CliError("--alpha-steps must be at least 2")
    if cfg.command in ("husimi", "wigner"):
        _parse_grid(cfg.grid or _DEFAULT_GRID)
        if cfg.route not in ("generic", "closed"):
            raise CliError("--route must be generic or closed")
        if cfg.route == "closed" and cfg.family not in ("dpancs-a", "dpancs-d"):
            raise CliError(
                "--route closed exists only for families dpancs-a and dpancs-d"
            )
    elif cfg.route != "generic":
        raise CliError(f"--route does not apply to command {cfg.command!r}")


def _parse_grid(spec: str) -> PhaseSpaceGrid:
    try:
        return PhaseSpaceGrid.from_spec(spec)
    except ValueError as exc:
        raise CliError(f"--grid: {exc}") from exc


def _params(cfg: RunConfig) -> KerrParams | None:
    return None if cfg.chi is None else KerrParams(cfg.chi)


def _alpha(cfg: RunConfig) -> complex:
    return complex(cfg.alpha, cfg.alpha_im)


def _default_fmt(cfg: RunConfig) -> str:
    if cfg.fmt is not None:
        return cfg.fmt
    return "json" if cfg.command == "state" else "csv"


def _out_base(cfg: RunConfig) -> str:
    if cfg.output:
        base, ext = os.path.splitext(cfg.output)
        return base if ext.lower() in (".csv", ".json") else cfg.output
    return cfg.command


def _write_json(obj, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _run_state(cfg: RunConfig) -> list[str]:
    state = make_state(cfg.family, _alpha(cfg), cfg.m, _params(cfg), cfg.dim)
    base, fmt = _out_base(cfg), _default_fmt(cfg)
    path = f"{base}.{fmt}"
    if fmt == "json":
        _write_json(state.to_json_dict(), path)
    else:
        import csv

        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "re", "im"])
            for n, c in enumerate(state.coefficients):
                w.writerow([n, repr(float(c.real)), repr(float(c.imag))])
    return [path]


def _dist_json(dist) -> dict:
    lab = dist.source_label
    return {
        "label": lab.to_dict() if lab is not None else None,
        "probabilities": [float(p) for p in dist.probabilities],
    }


def _run_dist(cfg: RunConfig) -> list[str]:
    state = make_state(cfg.family, _alpha(cfg), cfg.m, _params(cfg), cfg.dim)
    dist = photon_distribution(state)
    base, fmt = _out_base(cfg), _default_fmt(cfg)
    path = f"{base}.{fmt}"
    if fmt == "csv":
        write_distribution_csv([dist], path)
    else:
        _write_json({"distributions": [_dist_json(dist)]}, path)
    paths = [path]
    if cfg.plot:
        from .plotting import render_distribution

        render_distribution([dist], f"{base}.png")
        paths.append(f"{base}.png")
    return paths


def _sweep_json(s) -> dict:
    return {
        "family": s.family,
        "m": int(s.m),
        "chi_over_omega0": s.chi_over_omega0,
        "alphas": [float(x) for x in s.alphas],
        "q_paper": [float(q) for q in s.q_values],
        "q_standard": [float(q) - 1.0 for q in s.q_values],
        "flags": list(s.flags),
    }


def _run_mandel(cfg: RunConfig) -> list[str]:
    alphas = np.linspace(cfg.alpha_min, cfg.alpha_max, cfg.alpha_steps)
    sweep = mandel_sweep(cfg.family, cfg.m, _params(cfg), alphas)
    base, fmt = _out_base(cfg), _default_fmt(cfg)
    path = f"{base}.{fmt}"
    if fmt == "csv":
        write_mandel_csv([sweep], path)
    else:
        _write_json({"sweeps": [_sweep_json(sweep)]}, path)
    paths = [path]
    if cfg.plot:
        from .plotting import render_mandel

        render_mandel([sweep], f"{base}.png")
        paths.append(f"{base}.png")
    return paths


def _run_field(cfg: RunConfig, tol: SeriesTolerance) -> list[str]:
    grid = _parse_grid(cfg.grid or _DEFAULT_GRID)
    if cfg.route == "closed":
        source = ClosedFormSpec(cfg.family, _alpha(cfg), cfg.m, _params(cfg))
    else:
        source = make_state(cfg.family, _alpha(cfg), cfg.m, _params(cfg), cfg.dim)
    fld = field_over_grid(cfg.command, source, grid, tol)
    base, fmt = _out_base(cfg), _default_fmt(cfg)
    path = f"{base}.{fmt}"
    if fmt == "csv":
        fld.write_csv(path)
    else:
        _write_json(fld.to_json_dict(), path)
    paths = [path]
    if cfg.plot:
        from .plotting import render_field

        render_field(fld, f"{base}.png")
        paths.append(f"{base}.png")
    return paths


# --- figure presets ---------------------------------------------------------

_FIELD_PRESETS = {
    3: ("husimi", "dpancs-a", 1.1, 1, 0.15, "-4:4:161"),
    4: ("husimi", "dpancs-d", 1.1, 1, 0.15, "-4:4:161"),
    5: ("wigner", "dpancs-a", 1.1, 1, 0.15, "-4:4:161"),
    6: ("wigner", "dpancs-d", 1.1, 1, 0.15, "-4:4:161"),
    7: ("wigner", "dpancs-a", 0.5, 4, 0.15, "-3:3:161"),
}


def reproduce_figure(n: int, out_dir: str = ".", grid: str | None = None,
                     alpha_steps: int | None = None, plot: bool = True,
                     tol: SeriesTolerance | None = None) -> list[str]:
    """Write the data (and by default the rendering) for one preset figure.

    1: photon-number distributions, three added families, alpha=3, m=1,
       chi/omega0=0.1.
    2: Mandel sweeps for the three added families, m in {0, 1},
       chi/omega0=0.15, alpha in [0, 5].
    3/4: Husimi fields of the two deformed added families, alpha=1.1, m=1,
       chi/omega0=0.15, on [-4, 4]^2.
    5/6: Wigner fields of the same two states on [-4, 4]^2.
    7: Wigner field of the alpha=0.5, m=4 deformed-eigenstate family state
       on [-3, 3]^2.
    """
    if not 1 <= n <= 7:
        raise CliError("figure number must be between 1 and 7")
    os.makedirs(out_dir, exist_ok=True)
    base = os.path.join(out_dir, f"fig{n}")
    paths = [f"{base}.csv"]
    if n == 1:
        params = KerrParams(0.1)
        dists = [
            photon_distribution(make_state("pacs", 3.0, 1, None)),
            photon_distribution(make_state("dpancs-a", 3.0, 1, params)),
            photon_distribution(make_state("dpancs-d", 3.0, 1, params)),
        ]
        write_distribution_csv(dists, paths[0])
        if plot:
            from .plotting import render_distribution

            render_distribution(dists, f"{base}.png")
            paths.append(f"{base}.png")
    elif n == 2:
        params = KerrParams(0.15)
        alphas = np.linspace(0.0, 5.0, alpha_steps or 101)
        sweeps = [
            mandel_sweep(family, m, params if deformed else None, alphas)
            for family, deformed in (("pacs", False), ("dpancs-a", True),
                                     ("dpancs-d", True))
            for m in (0, 1)
        ]
        write_mandel_csv(sweeps, paths[0])
        if plot:
            from .plotting import render_mandel

            render_mandel(sweeps, f"{base}.png")
            paths.append(f"{base}.png")
    else:
        kind, family, alpha, m, chi, preset_grid = _FIELD_PRESETS[n]
        g = _parse_grid(grid or preset_grid)
        state = make_state(family, alpha, m, KerrParams(chi))
        fld = field_over_grid(kind, state, g, tol)
        fld.write_csv(paths[0])
        if plot:
            from .plotting import render_field

            render_field(fld, f"{base}.png")
            paths.append(f"{base}.png")
    return paths


def _run_figure(cfg: RunConfig, tol: SeriesTolerance) -> list[str]:
    return reproduce_figure(cfg.figure, cfg.output_dir, cfg.grid,
                            cfg.alpha_steps, cfg.plot, tol)


def run(cfg: RunConfig) -> int:
    """Validate, compute, write data files plus the metadata sidecar."""
    profile_name, tol = _resolve_profile(cfg.profile)
    validate(cfg)
    started = time.perf_counter()
    if cfg.command == "state":
        paths = _run_state(cfg)
    elif cfg.command == "dist":
        paths = _run_dist(cfg)
    elif cfg.command == "mandel":
        paths = _run_mandel(cfg)
    elif cfg.command in ("husimi", "wigner"):
        paths = _run_field(cfg, tol)
    else:
        paths = _run_figure(cfg, tol)
    wall = time.perf_counter() - started
    if cfg.command == "figure":
        meta_path = os.path.join(cfg.output_dir, f"fig{cfg.figure}.meta.json")
    else:
        meta_path = f"{_out_base(cfg)}.meta.json"
    _write_json({
        "command": cfg.command,
        "config": asdict(cfg),
        "tolerance_profile": profile_name,
        "tolerance": {
            "rel_tol": tol.rel_tol,
            "abs_tol": tol.abs_tol,
            "max_terms": tol.max_terms,
        },
        "version": __version__,
        "outputs": [os.path.basename(p) for p in paths],
        "wall_time_s": wall,
    }, meta_path)
    for p in paths + [meta_path]:
        print(f"wrote {p}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kerrstates",
        description="Photon statistics and phase-space maps of nonlinear "
                    "coherent states of a Kerr mode.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_state=True):
        sp.add_argument("--profile", choices=sorted(PROFILES), default=None,
                        help="series tolerance profile (default: "
                             f"${PROFILE_ENV} or 'default')")
        sp.add_argument("--output", default=None,
                        help="output path base (extension optional)")
        sp.add_argument("--format", dest="fmt", choices=["csv", "json"],
                        default=None)
        if with_state:
            sp.add_argument("--family", required=True, choices=list(FAMILIES))
            sp.add_argument("--m", type=int, default=0,
                            help="photon-addition order")
            sp.add_argument("--chi", type=float, default=None,
                            help="chi/omega0 for deformed families")

    sp = sub.add_parser("state", help="write one state's Fock coefficients")
    common(sp)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--alpha-im", type=float, default=0.0)
    sp.add_argument("--dim", type=int, default=None)

    sp = sub.add_parser("dist", help="photon-number distribution of one state")
    common(sp)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--alpha-im", type=float, default=0.0)
    sp.add_argument("--dim", type=int, default=None)
    sp.add_argument("--plot", action="store_true")

    sp = sub.add_parser("mandel", help="Mandel parameter sweep over alpha")
    common(sp)
    sp.add_argument("--alpha-min", type=float, default=0.0)
    sp.add_argument("--alpha-max", type=float, default=5.0)
    sp.add_argument("--alpha-steps", type=int, default=101)
    sp.add_argument("--plot", action="store_true")

    for kind in ("husimi", "wigner"):
        sp = sub.add_parser(kind, help=f"{kind} field over a phase-space grid")
        common(sp)
        sp.add_argument("--alpha", type=float, default=0.0)
        sp.add_argument("--alpha-im", type=float, default=0.0)
        sp.add_argument("--dim", type=int, default=None)
        sp.add_argument("--grid", default=None,
                        help=f"square grid spec lo:hi:n; write --grid=-4:4:161 "
                             f"when lo is negative (default {_DEFAULT_GRID})")
        sp.add_argument("--route", choices=["generic", "closed"],
                        default="generic")
        sp.add_argument("--plot", action="store_true")

    sp = sub.add_parser("figure", help="reproduce a preset figure's data")
    sp.add_argument("figure", type=int, metavar="N", help="figure number 1..7")
    sp.add_argument("--profile", choices=sorted(PROFILES), default=None)
    sp.add_argument("--output-dir", default=".")
    sp.add_argument("--grid", default=None,
                    help="override the preset grid, e.g. --grid=-4:4:41 "
                         "(fields only)")
    sp.add_argument("--alpha-steps", type=int, default=101,
                    help="override sweep length (figure 2 only)")
    sp.add_argument("--no-plot", dest="plot", action="store_false")
    sp.set_defaults(plot=True)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items()
                       if k in RunConfig.__dataclass_fields__})
    try:
        return run(cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NonConvergenceError, PoleError, TruncationError, OverflowError,
            ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
