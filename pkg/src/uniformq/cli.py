"""Command-line front end.

Subcommands chain the pipeline: generate -> full-bipartite -> uniform
fit/verify -> candidate synthesis + exact verification -> module
decomposition -> exact spectrum -> Q-polynomial ordering checks, with
machine-readable JSON reports.

Exit codes: 0 when every requested check passes (clean stage skips
included), 1 when a stage produces a mathematical fail or rejection,
2 for usage or I/O errors.  Reports are byte-deterministic; stage
timings are included only with --timings since they cannot be.
"""

from __future__ import annotations

import json
import sys
import time
from fractions import Fraction

import click

from .candidate import (
    SearchResult,
    candidate_search,
    dual_diagonal,
    verify_tridiagonal,
)
from .generators import FormSpec, SizeCapError, dual_polar, hamming, hypercube
from .graphs import (
    bfs_context,
    format_edge_list,
    full_bipartite,
    lfr_split,
    parse_edge_list,
)
from .spectra import (
    check_q_ordering,
    eigenspace_bases,
    even_odd_ordering,
    idempotent_pattern,
    natural_ordering,
    odd_even_ordering,
    spectrum_exact,
)
from .uniform import (
    UniformParams,
    decompose_modules,
    fit_uniform,
    fit_uniform_constant,
    verify_uniform,
)

USAGE_ERROR = 2
MATH_FAIL = 1


def _fail_usage(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(USAGE_ERROR)


def _emit(obj, out, as_json: bool = True) -> None:
    if as_json:
        text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    else:
        text = _render_text(obj) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(
            _render_text(v, indent) if isinstance(v, (dict, list))
            else f"{pad}- {v}"
            for v in obj
        )
    return f"{pad}{obj}"


def _load_graph(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        _fail_usage(f"cannot read {path}: {exc}")
    try:
        return parse_edge_list(text)
    except ValueError as exc:
        _fail_usage(f"bad edge list {path}: {exc}")


def _parse_theta(text: str) -> tuple[Fraction, Fraction]:
    try:
        parts = [Fraction(p.strip()) for p in text.split(",")]
    except (ValueError, ZeroDivisionError):
        _fail_usage(f"cannot parse theta pair {text!r}")
    if len(parts) != 2:
        _fail_usage("theta must be two comma-separated rationals, e.g. '-1,0'")
    return parts[0], parts[1]


@click.group()
def main() -> None:
    """Exact toolkit for uniform structures, dual adjacency matrix
    candidates and Q-polynomial certification on bipartite graphs."""


@main.command()
@click.argument("family",
                type=click.Choice(["dual-polar-C", "dual-polar-B",
                                   "hypercube", "hamming"]))
@click.option("--b", "field", type=int, default=None,
              help="Field size (prime) for dual polar families.")
@click.option("--D", "diameter", type=int, required=True,
              help="Diameter / word length.")
@click.option("--n", "alphabet", type=int, default=None,
              help="Alphabet size for the hamming family.")
@click.option("-o", "--out", type=click.Path(), default=None)
@click.option("--labels", type=click.Path(), default=None,
              help="Write vertex labels (subspace bases / words) as JSON.")
def gen(family, field, diameter, alphabet, out, labels) -> None:
    """Generate a named graph family as an edge list."""
    try:
        if family in ("dual-polar-C", "dual-polar-B"):
            if field is None:
                _fail_usage("dual polar families need --b")
            spec = FormSpec(family[-1], diameter, field)
            graph, label_table = dual_polar(spec)
        elif family == "hypercube":
            graph, label_table = hypercube(diameter)
        else:
            if alphabet is None:
                _fail_usage("hamming needs --n")
            graph, label_table = hamming(diameter, alphabet)
    except (SizeCapError, ValueError) as exc:
        _fail_usage(str(exc))
    text = format_edge_list(graph)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    if labels:
        with open(labels, "w") as fh:
            json.dump(label_table, fh, sort_keys=True)
            fh.write("\n")


@main.command()
@click.argument("input", type=click.Path())
@click.option("--base", type=int, default=0, show_default=True)
@click.option("-o", "--out", type=click.Path(), default=None)
def fb(input, base, out) -> None:
    """Full bipartite transform: drop edges within a level of the base."""
    g = _load_graph(input)
    try:
        result = full_bipartite(g, base)
    except ValueError as exc:
        _fail_usage(str(exc))
    text = format_edge_list(result)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _context_or_usage(g, base, require_bipartite: bool = False):
    try:
        ctx = bfs_context(g, base)
        split = lfr_split(g, ctx)
    except ValueError as exc:
        _fail_usage(str(exc))
    if require_bipartite and not split.is_bipartite():
        _fail_usage(
            "this command requires a bipartite graph; apply the full "
            "bipartite transform first (uniformq fb)"
        )
    return ctx, split


def _load_params(path: str) -> UniformParams:
    try:
        with open(path) as fh:
            return UniformParams.from_json(json.load(fh))
    except (OSError, ValueError, KeyError) as exc:
        _fail_usage(f"bad parameter file {path}: {exc}")


@main.command()
@click.argument("input", type=click.Path())
@click.option("--base", type=int, default=0, show_default=True)
@click.option("--fit", "fit_requested", is_flag=True,
              help="Fit the per-level solution sets (default).")
@click.option("--verify", "params_file", type=click.Path(), default=None,
              help="Verify the parameters in this JSON file instead.")
@click.option("-o", "--out", type=click.Path(), default=None)
@click.option("--json/--no-json", "as_json", default=True)
def uniform(input, base, fit_requested, params_file, out, as_json) -> None:
    """Fit or verify a uniform structure."""
    if fit_requested and params_file:
        _fail_usage("--fit and --verify are mutually exclusive")
    g = _load_graph(input)
    ctx, split = _context_or_usage(g, base, require_bipartite=True)
    report = {
        "epsilon": ctx.eccentricity,
        "levels": [len(lv) for lv in ctx.levels],
    }
    failed = False
    try:
        if params_file:
            params = _load_params(params_file)
            check = verify_uniform(split, params)
            report["uniform"] = dict(params.to_json(), verified=check.passed)
            if not check.passed:
                report["uniform"]["failed_level"] = check.level
                report["uniform"]["witness_vertex"] = check.witness
                failed = True
        else:
            fit = fit_uniform(split)
            constant = fit_uniform_constant(split)
            chosen = constant if constant is not None else fit.canonical
            section = {
                "feasible": fit.feasible,
                "per_level": [
                    {
                        "level": lf.level,
                        "consistent": lf.is_consistent(),
                        "canonical": [str(v) for v in lf.canonical]
                        if lf.canonical else None,
                    }
                    for lf in fit.levels
                ],
                "constant": constant.to_json() if constant else None,
            }
            if chosen is not None:
                check = verify_uniform(split, chosen)
                section.update(chosen.to_json(), verified=check.passed)
            else:
                section["verified"] = False
            report["uniform"] = section
            failed = not fit.feasible
    except ValueError as exc:
        _fail_usage(str(exc))
    _emit(report, out, as_json)
    sys.exit(MATH_FAIL if failed else 0)


@main.command()
@click.argument("input", type=click.Path())
@click.option("--base", type=int, default=0, show_default=True)
@click.option("--params", "params_file", type=click.Path(), default=None,
              help="Uniform parameters JSON; fitted from the graph if omitted.")
@click.option("--theta", default="-1,0", show_default=True,
              help="theta*_0,theta*_1 normalisation.")
@click.option("-o", "--out", type=click.Path(), default=None)
@click.option("--json/--no-json", "as_json", default=True)
def candidate(input, base, params_file, theta, out, as_json) -> None:
    """Synthesise a dual adjacency matrix candidate and verify it."""
    g = _load_graph(input)
    ctx, split = _context_or_usage(g, base, require_bipartite=True)
    theta0, theta1 = _parse_theta(theta)
    result, report = _candidate_stage(g, ctx, split, params_file, theta0, theta1)
    _emit(report, out, as_json)
    sys.exit(0 if result is not None and result.accepted
             and report.get("verified") else MATH_FAIL)


def _candidate_stage(g, ctx, split, params_file, theta0, theta1):
    if ctx.eccentricity < 3:
        return None, {
            "skipped": (
                f"candidate synthesis needs eccentricity >= 3, have "
                f"{ctx.eccentricity}"
            )
        }
    if params_file:
        params = _load_params(params_file)
    else:
        params = fit_uniform_constant(split)
        if params is None:
            fit = fit_uniform(split)
            if not fit.feasible:
                return None, {"skipped": "no uniform structure exists"}
            params = fit.canonical
    if not verify_uniform(split, params).passed:
        return None, {"skipped": "uniform parameters do not verify"}
    result = candidate_search(params, theta0, theta1)
    report = result.to_json()
    if result.accepted:
        astar = dual_diagonal(ctx, result.candidate.theta_star)
        tri = verify_tridiagonal(
            g.adjacency_matrix(), astar,
            result.candidate.beta, result.candidate.gamma,
            result.candidate.rho,
        )
        report["verified"] = tri.holds
    return result, report


@main.command()
@click.argument("input", type=click.Path())
@click.option("--base", type=int, default=0, show_default=True)
@click.option("--params", "params_file", type=click.Path(), default=None)
@click.option("-o", "--out", type=click.Path(), default=None)
@click.option("--json/--no-json", "as_json", default=True)
def modules(input, base, params_file, out, as_json) -> None:
    """Decompose the standard module into thin irreducible chains."""
    g = _load_graph(input)
    ctx, split = _context_or_usage(g, base, require_bipartite=True)
    if params_file:
        params = _load_params(params_file)
    else:
        params = fit_uniform_constant(split)
        if params is None:
            fit = fit_uniform(split)
            if not fit.feasible:
                _emit({"error": "no uniform structure exists"}, out, as_json)
                sys.exit(MATH_FAIL)
            params = fit.canonical
    try:
        dec = decompose_modules(split, params)
    except (ValueError, ArithmeticError) as exc:
        _emit({"error": str(exc)}, out, as_json)
        sys.exit(MATH_FAIL)
    report = {
        "epsilon": ctx.eccentricity,
        "levels": [len(lv) for lv in ctx.levels],
        "uniform": dict(params.to_json(), verified=True),
        "modules": dec.to_json(),
    }
    _emit(report, out, as_json)


@main.command()
@click.argument("input", type=click.Path())
@click.option("-o", "--out", type=click.Path(), default=None)
@click.option("--json/--no-json", "as_json", default=True)
def spectrum(input, out, as_json) -> None:
    """Exact adjacency spectrum over Q(sqrt(m))."""
    g = _load_graph(input)
    ctx = bfs_context(g, 0)
    split = lfr_split(g, ctx)
    try:
        spec = spectrum_exact(g.adjacency_matrix(), split.is_bipartite())
    except (ValueError, ArithmeticError) as exc:
        _emit({"error": str(exc)}, out, as_json)
        sys.exit(MATH_FAIL)
    _emit(spec.to_json(), out, as_json)


_ORDERING_BUILDERS = {
    "even-odd": even_odd_ordering,
    "odd-even": odd_even_ordering,
    "natural": natural_ordering,
}


@main.command()
@click.argument("input", type=click.Path())
@click.option("--base", type=int, default=0, show_default=True)
@click.option("--theta", default="-1,0", show_default=True)
@click.option("--ordering", "ordering_name", default="both",
              type=click.Choice(["both", "even-odd", "odd-even", "natural"]),
              show_default=True)
@click.option("-o", "--out", type=click.Path(), default=None)
@click.option("--json/--no-json", "as_json", default=True)
def qcheck(input, base, theta, ordering_name, out, as_json) -> None:
    """Check Q-polynomial orderings of the primitive idempotents."""
    g = _load_graph(input)
    ctx, split = _context_or_usage(g, base, require_bipartite=True)
    theta0, theta1 = _parse_theta(theta)
    result, cand_report = _candidate_stage(
        g, ctx, split, None, theta0, theta1
    )
    if result is None or not result.accepted:
        _emit({"candidate": cand_report,
               "skipped": "no verified candidate"}, out, as_json)
        sys.exit(MATH_FAIL)
    reports, ok = _run_orderings(g, ctx, result, ordering_name)
    _emit({"candidate": cand_report, "orderings": reports}, out, as_json)
    sys.exit(0 if ok else MATH_FAIL)


def _run_orderings(g, ctx, result: SearchResult, ordering_name: str):
    a = g.adjacency_matrix()
    spec = spectrum_exact(a, True)
    dec = eigenspace_bases(a, spec)
    astar = dual_diagonal(ctx, result.candidate.theta_star)
    pattern = idempotent_pattern(dec, astar)
    if ordering_name == "both":
        requested = [("even-odd", even_odd_ordering(dec), False),
                     ("odd-even", odd_even_ordering(dec), False),
                     ("natural", natural_ordering(dec), True)]
    else:
        requested = [(ordering_name,
                      _ORDERING_BUILDERS[ordering_name](dec), False)]
    reports = []
    ok = True
    for name, ordering, negative_control in requested:
        rep = check_q_ordering(dec, astar, ordering, pattern)
        entry = dict(rep.to_json(), name=name,
                     negative_control=negative_control)
        reports.append(entry)
        if not negative_control and not rep.tridiagonal:
            ok = False
    return reports, ok


@main.command()
@click.argument("input", type=click.Path())
@click.option("--base", type=int, default=0, show_default=True)
@click.option("--fb", "apply_fb", is_flag=True,
              help="Apply the full bipartite transform before the pipeline.")
@click.option("--verify-uniform", "params_file", type=click.Path(),
              default=None, help="Verify these parameters instead of fitting.")
@click.option("--candidate", "theta", default="-1,0", show_default=True,
              help="theta*_0,theta*_1 for candidate synthesis.")
@click.option("--qcheck", "ordering_name", default="both",
              type=click.Choice(["both", "even-odd", "odd-even", "natural"]),
              show_default=True)
@click.option("--no-modules", is_flag=True, help="Skip module decomposition.")
@click.option("--no-spectrum", is_flag=True,
              help="Skip the spectrum and ordering stages.")
@click.option("--timings", is_flag=True,
              help="Include wall-clock stage timings (breaks byte determinism).")
@click.option("-o", "--out", type=click.Path(), default=None)
@click.option("--json/--no-json", "as_json", default=True)
def pipeline(input, base, apply_fb, params_file, theta, ordering_name,
             no_modules, no_spectrum, timings, out, as_json) -> None:
    """Run the full chain: uniform -> candidate -> modules -> spectrum ->
    Q-polynomial ordering checks."""
    g = _load_graph(input)
    theta0, theta1 = _parse_theta(theta)
    if apply_fb:
        try:
            g = full_bipartite(g, base)
        except ValueError as exc:
            _fail_usage(str(exc))
    ctx, split = _context_or_usage(g, base)
    report = {
        "graph": {"n": g.n, "m": g.num_edges, "source": input},
        "base": base,
        "epsilon": ctx.eccentricity,
        "levels": [len(lv) for lv in ctx.levels],
        "bipartite": split.is_bipartite(),
        "skipped": {},
    }
    clock: dict[str, float] = {}
    failed = False

    def timed(name):
        class _T:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                clock[name] = round(time.perf_counter() - self.t0, 6)

        return _T()

    if not split.is_bipartite():
        report["skipped"]["all"] = "pipeline requires a bipartite graph"
        _emit(report, out, as_json)
        sys.exit(MATH_FAIL)

    # uniform stage
    params = None
    with timed("uniform"):
        if params_file:
            params = _load_params(params_file)
            check = verify_uniform(split, params)
            report["uniform"] = dict(params.to_json(), verified=check.passed)
            if not check.passed:
                failed = True
                params = None
        else:
            constant = fit_uniform_constant(split)
            if constant is not None:
                params = constant
                source = "fit-constant"
            else:
                fit = fit_uniform(split)
                params = fit.canonical if fit.feasible else None
                source = "fit-per-level"
            if params is None:
                report["uniform"] = {"verified": False}
                failed = True
            else:
                check = verify_uniform(split, params)
                report["uniform"] = dict(
                    params.to_json(), verified=check.passed, source=source
                )
                if not check.passed:
                    failed = True
                    params = None

    # candidate stage
    result = None
    with timed("candidate"):
        if params is None:
            report["skipped"]["candidate"] = "no verified uniform structure"
        elif ctx.eccentricity < 3:
            report["skipped"]["candidate"] = (
                f"candidate synthesis needs eccentricity >= 3, have "
                f"{ctx.eccentricity}; stage skipped cleanly"
            )
        else:
            result = candidate_search(params, theta0, theta1)
            cand_report = result.to_json()
            if result.accepted:
                astar = dual_diagonal(ctx, result.candidate.theta_star)
                tri = verify_tridiagonal(
                    g.adjacency_matrix(), astar,
                    result.candidate.beta, result.candidate.gamma,
                    result.candidate.rho,
                )
                cand_report["verified"] = tri.holds
                if not tri.holds:
                    failed = True
            else:
                failed = True
            report["candidate"] = cand_report

    # modules stage
    with timed("modules"):
        if no_modules:
            report["skipped"]["modules"] = "disabled"
        elif params is None:
            report["skipped"]["modules"] = "no verified uniform structure"
        else:
            try:
                dec = decompose_modules(split, params)
                report["modules"] = dec.to_json()
            except (ValueError, ArithmeticError) as exc:
                report["modules"] = {"error": str(exc)}
                failed = True

    # spectrum + ordering stages
    with timed("spectrum"):
        if no_spectrum:
            report["skipped"]["spectrum"] = "disabled"
        else:
            try:
                spec = spectrum_exact(g.adjacency_matrix(), True)
                report["spectrum"] = spec.to_json()
            except (ValueError, ArithmeticError) as exc:
                report["spectrum"] = {"error": str(exc)}
                spec = None
                failed = True

    with timed("qcheck"):
        if no_spectrum:
            report["skipped"]["qcheck"] = "disabled"
        elif result is None or not result.accepted:
            report["skipped"]["qcheck"] = "no verified candidate"
        elif spec is not None:
            reports, ok = _run_orderings(g, ctx, result, ordering_name)
            report["ordering"] = reports
            if not ok:
                failed = True

    if timings:
        report["timings"] = clock
    _emit(report, out, as_json)
    sys.exit(MATH_FAIL if failed else 0)


if __name__ == "__main__":
    main()
