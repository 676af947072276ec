"""Subcommand bodies behind the command line.

Each ``run_*`` function takes a :class:`RunConfig`, produces a Table or a
list of reports, emits it and returns the process exit status.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from tqdm import tqdm

from isospec.catalog import DeformedFamily, build_family, check_parameter, deformed_eigenfunction, get_model
from isospec.eigensolver import solve_spectrum
from isospec.emit import emit
from isospec.errors import InvalidArgumentError, UnsupportedError
from isospec.grid import make_uniform_grid
from isospec.models import RunConfig, Table
from isospec.verify import spectrum_compare, verification_suite

logger = logging.getLogger(__name__)

SCHEMAS = {
    "deform": ["x", "nu", "V_lambda"],
    "deform (sweep)": ["lambda", "x", "nu", "V_lambda"],
    "spectrum": ["level", "base", "deformed", "difference"],
    "verify": ["check_id", "verdict", "tolerance", "measured", "provenance"],
    "scan-lambda": ["lambda", "valid", "root_count", "roots"],
    "tabulate": ["x", "phi_<indices>", "psi_<indices>", "..."],
}


def _family(config: RunConfig, lam: float) -> DeformedFamily:
    return build_family(config.model, config.case, lam, config.domain, member=config.member,
                        seed_kind=config.seed_kind)


def _map(fn, items, workers: int, label: str) -> list:
    """Ordered parallel map with a progress bar on stderr."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in tqdm(items, desc=label, disable=len(items) <= 1)]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(tqdm(executor.map(fn, items), total=len(items), desc=label))


def deform_rows(config: RunConfig, lam: float) -> list:
    family = _family(config, lam)
    lower, upper = family.scan_domain
    x = make_uniform_grid(lower, upper, config.points).points
    nu = family.deformation.nu(x)
    potential = family.deformation.potential_change(x)
    return [(float(a), float(b), float(c)) for a, b, c in zip(x, nu, potential)]


def run_deform(config: RunConfig) -> int:
    lambdas = config.lambdas()
    logger.info(f"deforming {config.model} at {len(lambdas)} lambda value(s)")
    if config.sweep is None:
        table = Table(("x", "nu", "V_lambda"), tuple(deform_rows(config, lambdas[0])))
    else:
        blocks = _map(lambda lam: deform_rows(config, lam), lambdas, config.workers, "deform")
        rows = tuple((lam,) + row for lam, block in zip(lambdas, blocks) for row in block)
        table = Table(("lambda", "x", "nu", "V_lambda"), rows)
    emit(table, config.fmt, config.output)
    return 0


def run_spectrum(config: RunConfig) -> int:
    family = _family(config, config.lambdas()[0])
    lower, upper = family.domain
    grid = make_uniform_grid(lower, upper, config.points)

    # Step 1: base and deformed operators on the same grid
    base = solve_spectrum(family.base_operator, grid, config.levels)
    deformed = solve_spectrum(family.deformed_operator, grid, config.levels)

    # Step 2: level-by-level table and the comparison report
    rows = tuple(
        (i, float(a), float(b), float(b - a))
        for i, (a, b) in enumerate(zip(base.eigenvalues, deformed.eigenvalues))
    )
    report = spectrum_compare(base, deformed, config.tol or 2e-3, family.scheme.case,
                              check_id=f"spectrum:{family.label}")
    table = Table(("level", "base", "deformed", "difference"), rows, {"comparison": report.to_dict()})
    emit(table, config.fmt, config.output)
    return 0


def run_verify(config: RunConfig) -> int:
    family = _family(config, config.lambdas()[0])
    kwargs = {} if config.tol is None else {"tol": config.tol}
    reports = verification_suite(family, config.levels, **kwargs)
    emit(reports, config.fmt, config.output)
    failed = [report.check_id for report in reports if not report.passed]
    if failed:
        logger.error(f"{len(failed)} check(s) failed: {', '.join(failed)}")
        return 3
    return 0


def _valid_intervals(lambdas, parameters) -> list:
    intervals, start, previous = [], None, None
    for lam, parameter in zip(lambdas, parameters):
        if parameter.valid:
            start = lam if start is None else start
            previous = lam
        elif start is not None:
            intervals.append([start, previous])
            start = None
    if start is not None:
        intervals.append([start, previous])
    return intervals


def run_scan(config: RunConfig) -> int:
    lambdas = config.lambdas()
    get_model(config.model)

    def scan(lam):
        return check_parameter(config.model, config.case, lam, config.domain, member=config.member)

    parameters = _map(scan, lambdas, config.workers, "scan-lambda")
    rows = tuple(
        (lam, parameter.valid, len(parameter.roots), [root.location for root in parameter.roots])
        for lam, parameter in zip(lambdas, parameters)
    )
    intervals = _valid_intervals(lambdas, parameters)
    logger.info(f"scanned {len(lambdas)} lambda value(s), {len(intervals)} valid run(s)")
    table = Table(("lambda", "valid", "root_count", "roots"), rows, {"valid_intervals": intervals})
    emit(table, config.fmt, config.output)
    return 0


def _parse_indices(config: RunConfig, family: DeformedFamily) -> list:
    if config.indices:
        return [tuple(entry) for entry in config.indices]
    try:
        return family.ladder_indices(config.levels)
    except UnsupportedError:
        return family.sample_indices(config.levels)


def run_tabulate(config: RunConfig) -> int:
    family = _family(config, config.lambdas()[0])
    lower, upper = family.scan_domain
    x = make_uniform_grid(lower, upper, config.points).points
    columns, samples = ["x"], [x]
    for indices in _parse_indices(config, family):
        seed, _, canonical = family.seed(indices)
        tag = "-".join(f"{v:g}" for v in canonical)
        columns.extend([f"phi_{tag}", f"psi_{tag}"])
        samples.extend([seed(x), deformed_eigenfunction(family, canonical)(x)])
    rows = tuple(tuple(float(v) for v in row) for row in np.column_stack(samples))
    emit(Table(tuple(columns), rows), config.fmt, config.output)
    return 0


COMMANDS = {
    "deform": run_deform,
    "spectrum": run_spectrum,
    "verify": run_verify,
    "scan-lambda": run_scan,
    "tabulate": run_tabulate,
}


def run(config: RunConfig) -> int:
    """Run one subcommand and return its exit status."""
    try:
        command = COMMANDS[config.command]
    except KeyError:
        raise InvalidArgumentError(f"unknown command {config.command!r}") from None
    logger.info(f"running {config.command}: {config.describe()}")
    return command(config)
