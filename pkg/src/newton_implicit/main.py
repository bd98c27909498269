"""Entry point: `python -m newton_implicit.main` or the packaged
`newton-implicit` script.

Sub-commands: predict, verify, enumerate, implicitize and plot. Reports go
to stdout as JSON (or text with --format text); logs go to stderr and to
the rotating log file.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional

from newton_implicit.core.errors import (
    ContainmentViolated,
    KernelDimensionNotOne,
    NewtonImplicitError,
)
from newton_implicit.core.logging_setup import configure_logging, set_run_context
from newton_implicit.core.models import CurveClass, ParametricCurve, SelectionKind
from newton_implicit.core.paths import default_log_dir, default_settings_path
from newton_implicit.core.settings import SettingsStore, resolve_seed
from newton_implicit.curves import (
    as_different_denominators,
    derive_diff_denom,
    derive_same_denom,
    normalize,
    parse_curve,
)
from newton_implicit.geometry import LatticePolygon, contains, lattice_points, shape_check
from newton_implicit.oracle import (
    ImplicitPolynomial,
    implicitize_interpolation,
    implicitize_sylvester,
    newton_polygon,
    random_generic_coefficients,
)
from newton_implicit.predictor import (
    PredictedPolygon,
    degree_bounds,
    extreme_coefficients,
    mixed_volume_check,
    predict,
)
from newton_implicit.subdivisions import (
    enumerate_staircases,
    exponent_from_subdivision,
    exponents_from_staircase,
    sample_lifting_hull,
    sample_liftings,
    tight_subdivision,
)
from newton_implicit.utils.format import (
    dump_json,
    format_polynomial,
    format_report,
    format_selection,
    render_svg,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_IO = 7

# interpolation over more candidate monomials than this is skipped in verify
INTERPOLATION_LIMIT = 80


@dataclass
class RunReport:
    command: str
    curve: ParametricCurve
    predicted: Optional[PredictedPolygon] = None
    oracle: Optional[LatticePolygon] = None
    phi: Optional[ImplicitPolynomial] = None
    sections: Dict[str, object] = field(default_factory=dict)
    timing: Optional[Dict[str, float]] = None

    def verdicts(self) -> Dict[str, bool]:
        if self.predicted is None or self.oracle is None:
            return {}
        outer = self.predicted.polygon
        return {
            "contains": contains(outer, self.oracle),
            "equals": outer == self.oracle,
        }

    def to_dict(self) -> dict:
        data = {"command": self.command, "curve": self.curve.to_dict()}
        if self.predicted is not None:
            data["case"] = self.predicted.case
            data["predicted"] = self.predicted.to_dict()
        if self.oracle is not None:
            data["oracle"] = self.oracle.to_dict()
            data["verdicts"] = self.verdicts()
        if self.phi is not None:
            data["phi"] = {"text": format_polynomial(self.phi.terms), **self.phi.to_dict()}
        data.update(self.sections)
        if self.timing is not None:
            data["timing"] = dict(self.timing)
        return data


class _Timer:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.steps: Dict[str, float] = {}

    @contextmanager
    def step(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.steps[name] = time.perf_counter() - start

    def result(self) -> Optional[Dict[str, float]]:
        return dict(self.steps) if self.enabled else None


# -- shared plumbing -----------------------------------------------------

def _read_curve(args) -> ParametricCurve:
    if args.json:
        with open(args.json, "r", encoding="utf-8") as f:
            text = f.read()
    else:
        text = args.curve
    curve = normalize(parse_curve(text))
    logger.info("Curve class %s%s", curve.curve_class.value,
                " (supports only)" if curve.supports_only else "")
    return curve


def _predict(curve: ParametricCurve, args, settings) -> PredictedPolygon:
    return predict(curve, route=args.route, cap=settings["enumeration_cap"], force=args.force)


def _shape_class(curve: ParametricCurve, route: str) -> CurveClass:
    return CurveClass.DIFFERENT_DENOMINATORS if route == "diff" else curve.curve_class


def _emit(data: dict, fmt: str) -> None:
    print(format_report(data) if fmt == "text" else dump_json(data))


# -- commands ------------------------------------------------------------

def cmd_predict(args, settings) -> int:
    timer = _Timer(args.timing)
    curve = _read_curve(args)
    with timer.step("predict"):
        predicted = _predict(curve, args, settings)
    report = RunReport("predict", curve, predicted=predicted)
    report.sections["degree_bounds"] = degree_bounds(curve).to_dict()
    report.sections["shape"] = shape_check(predicted.polygon, _shape_class(curve, args.route)).to_dict()
    if curve.curve_class is CurveClass.SAME_DENOMINATOR and args.route != "diff":
        volumes = mixed_volume_check(derive_same_denom(curve))
        report.sections["mixed_volumes"] = {f"{i},{j}": v for (i, j), v in sorted(volumes.items())}
    if curve.curve_class is CurveClass.POLYNOMIAL and not curve.supports_only:
        x_coeff, y_coeff = extreme_coefficients(curve)
        report.sections["extreme_coefficients"] = {"x": str(x_coeff), "y": str(y_coeff)}
    report.timing = timer.result()
    logger.info("Predicted %s polygon %s", predicted.case, list(predicted.polygon.vertices))
    _emit(report.to_dict(), args.format)
    return EXIT_OK


def _concrete(curve: ParametricCurve, settings, seed: int, bound: int) -> ParametricCurve:
    if not curve.supports_only:
        return curve
    return random_generic_coefficients(curve, bound, seed, budget=settings["resample_budget"],
                                       height=settings["t_height"])


def _interpolation_check(concrete: ParametricCurve, predicted: PredictedPolygon,
                         phi: ImplicitPolynomial, settings, seed: int) -> dict:
    monomials = lattice_points(predicted.polygon)
    if len(monomials) > INTERPOLATION_LIMIT:
        logger.info("Skipping interpolation over %d monomials", len(monomials))
        return {"status": "skipped", "monomials": len(monomials)}
    try:
        interpolated = implicitize_interpolation(
            concrete, monomials, seed=seed, margin=settings["sample_margin"],
            held_out=settings["held_out_samples"], height=settings["t_height"])
    except KernelDimensionNotOne as e:
        logger.warning("Interpolation cross-check inconclusive: %s", e)
        return {"status": "kernel-dimension", "dimension": e.dimension}
    agrees = interpolated.same_up_to_scale(phi)
    if not agrees:
        logger.warning("Interpolation and resultant disagree")
    return {"status": "agrees" if agrees else "disagrees", "monomials": len(monomials)}


def cmd_verify(args, settings) -> int:
    timer = _Timer(args.timing)
    seed = resolve_seed(args.seed, settings)
    trials = args.trials if args.trials is not None else settings["trials"]
    bound = args.bound if args.bound is not None else settings["bound"]
    curve = _read_curve(args)

    with timer.step("predict"):
        predicted = _predict(curve, args, settings)

    draws = trials if curve.supports_only else 1
    for draw in range(draws):
        concrete = _concrete(curve, settings, seed + draw, bound)
        with timer.step("oracle"):
            phi = implicitize_sylvester(concrete, seed=seed, height=settings["t_height"])
        oracle = newton_polygon(phi)
        if oracle == predicted.polygon or not contains(predicted.polygon, oracle):
            break
        if draw + 1 < draws:
            logger.warning("Oracle polygon %s differs from the prediction on draw %d; redrawing",
                           list(oracle.vertices), draw)

    report = RunReport("verify", concrete, predicted=predicted, oracle=oracle, phi=phi)
    report.sections["coefficient_draws"] = draw + 1 if curve.supports_only else 0
    with timer.step("interpolation"):
        report.sections["interpolation"] = _interpolation_check(concrete, predicted, phi, settings, seed)

    if curve.curve_class is CurveClass.SAME_DENOMINATOR and args.route != "diff":
        with timer.step("liftings"):
            sampled = sample_lifting_hull(derive_same_denom(curve), trials, seed,
                                          grid=tuple(settings["lifting_grid"]),
                                          lift_range=settings["random_lift_range"])
        report.sections["lifting_hull"] = sampled.to_dict()
        if not contains(predicted.polygon, sampled):
            raise ContainmentViolated(f"sampled lifting hull {list(sampled.vertices)} leaves the prediction")

    report.timing = timer.result()
    verdicts = report.verdicts()
    logger.info("Verdicts for %s: %s", predicted.case, verdicts)
    _emit(report.to_dict(), args.format)

    if not verdicts["contains"]:
        logger.error("Oracle polygon %s is not contained in the prediction %s",
                     list(oracle.vertices), list(predicted.polygon.vertices))
        return ContainmentViolated.exit_code
    return EXIT_OK


def _staircase_certificates(curve: ParametricCurve, kind: SelectionKind, settings, force: bool):
    data = derive_diff_denom(as_different_denominators(curve))
    sel = data.selection(kind)
    logger.info("Enumerating staircases for A0 = %s, A1 = %s",
                format_selection(sel.marked(0)), format_selection(sel.marked(1)))
    for s in enumerate_staircases(data.a0, data.a1, cap=settings["enumeration_cap"], force=force):
        yield {"kind": "staircase", "staircase": s.to_dict(),
               "exponent": list(exponents_from_staircase(s, sel))}


def _subdivision_certificates(curve: ParametricCurve, trials: int, seed: int, settings):
    data = derive_same_denom(curve)
    seen = set()
    for omega in sample_liftings(data, trials, seed, grid=tuple(settings["lifting_grid"]),
                                 lift_range=settings["random_lift_range"]):
        sub = tight_subdivision(data, omega)
        if sub is None:
            continue
        key = tuple(sorted((c.kind.value, c.index, c.summands) for c in sub.cells))
        if key in seen:
            continue
        seen.add(key)
        yield {"kind": "subdivision", "subdivision": sub.to_dict(),
               "exponent": list(exponent_from_subdivision(sub))}


def cmd_enumerate(args, settings) -> int:
    curve = _read_curve(args)
    kind = SelectionKind.SELECTION1 if args.selection == 1 else SelectionKind.SELECTION2
    if curve.curve_class is CurveClass.SAME_DENOMINATOR and args.route != "diff":
        seed = resolve_seed(args.seed, settings)
        trials = args.trials if args.trials is not None else settings["trials"]
        certificates = _subdivision_certificates(curve, trials, seed, settings)
    else:
        certificates = _staircase_certificates(curve, kind, settings, args.force)

    count = 0
    for certificate in certificates:
        if args.limit is not None and count >= args.limit:
            break
        certificate["index"] = count
        if args.format == "text":
            print(f"{count}: {certificate['kind']} -> {tuple(certificate['exponent'])}")
        else:
            print(dump_json(certificate, compact=True))
        count += 1
    logger.info("Enumerated %d certificates", count)
    return EXIT_OK


def cmd_implicitize(args, settings) -> int:
    timer = _Timer(args.timing)
    seed = resolve_seed(args.seed, settings)
    bound = args.bound if args.bound is not None else settings["bound"]
    curve = _read_curve(args)
    concrete = _concrete(curve, settings, seed, bound)

    with timer.step(args.method):
        if args.method == "interpolation":
            support = lattice_points(_predict(curve, args, settings).polygon)
            phi = implicitize_interpolation(concrete, support, seed=seed, margin=settings["sample_margin"],
                                            held_out=settings["held_out_samples"],
                                            height=settings["t_height"])
        else:
            phi = implicitize_sylvester(concrete, seed=seed, height=settings["t_height"])

    report = RunReport("implicitize", concrete, oracle=newton_polygon(phi), phi=phi)
    report.sections["method"] = args.method
    report.timing = timer.result()
    _emit(report.to_dict(), args.format)
    return EXIT_OK


def cmd_plot(args, settings) -> int:
    curve = _read_curve(args)
    predicted = _predict(curve, args, settings)
    oracle_vertices = None
    if args.with_oracle:
        seed = resolve_seed(args.seed, settings)
        bound = args.bound if args.bound is not None else settings["bound"]
        phi = implicitize_sylvester(_concrete(curve, settings, seed, bound), seed=seed,
                                    height=settings["t_height"])
        oracle_vertices = newton_polygon(phi).vertices

    svg = render_svg(predicted.polygon.vertices, oracle_vertices,
                     scale=settings["svg_scale"], margin=settings["svg_margin"])
    with open(args.out, "w", encoding="utf-8") as f:
        f.write(svg)
    logger.info("Wrote %s", args.out)
    return EXIT_OK


COMMANDS = {
    "predict": cmd_predict,
    "verify": cmd_verify,
    "enumerate": cmd_enumerate,
    "implicitize": cmd_implicitize,
    "plot": cmd_plot,
}


def _save_run_defaults(store: SettingsStore, settings: dict, args) -> None:
    overrides = {key: value for key, value in
                 (("seed", args.seed), ("trials", args.trials), ("bound", args.bound)) if value is not None}
    settings.update(overrides)
    store.save(settings)
    logger.info("Saved run defaults %s to %s", overrides, store.settings_file)


# -- argument parsing ----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group(required=True)
    source.add_argument("--curve", help='shorthand, e.g. "x=(3t^2)/(1+t^3); y=(3t)/(1+t^3)"')
    source.add_argument("--json", metavar="FILE", help="curve description as JSON")
    common.add_argument("--route", choices=("auto", "diff"), default="auto",
                        help="diff treats every curve as having different denominators")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--bound", type=int, default=None)
    common.add_argument("--force", action="store_true", help="run enumerations beyond the cap")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--timing", action="store_true")
    common.add_argument("--log-dir", default=None)
    common.add_argument("--settings", default=None, metavar="FILE")
    common.add_argument("--save-settings", action="store_true",
                        help="store the given --seed, --trials and --bound as run defaults")
    common.add_argument("--verbose", action="store_true")
    common.add_argument("--debug", action="store_true")

    parser = argparse.ArgumentParser(
        prog="newton-implicit",
        description="Predict and verify Newton polygons of implicit equations of parametric curves.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("predict", parents=[common], help="closed-form implicit polygon")
    sub.add_parser("verify", parents=[common], help="compare the prediction with an exact oracle")

    enum_parser = sub.add_parser("enumerate", parents=[common], help="stream certificates")
    enum_parser.add_argument("--selection", type=int, choices=(1, 2), default=1)
    enum_parser.add_argument("--limit", type=int, default=None)

    impl_parser = sub.add_parser("implicitize", parents=[common], help="compute the implicit equation")
    impl_parser.add_argument("--method", choices=("sylvester", "interpolation"), default="sylvester")

    plot_parser = sub.add_parser("plot", parents=[common], help="render the polygon as SVG")
    plot_parser.add_argument("--out", required=True, metavar="FILE")
    plot_parser.add_argument("--with-oracle", action="store_true", help="overlay the oracle polygon")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    console_level = logging.DEBUG if args.debug else logging.INFO if args.verbose else logging.WARNING
    try:
        log_path = configure_logging(args.log_dir or default_log_dir(), console_level=console_level)
        store = SettingsStore(args.settings or default_settings_path())
        settings = store.load()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    set_run_context(args.command, resolve_seed(args.seed, settings))
    logger.debug("newton-implicit %s, logging to %s", args.command, log_path)
    if args.save_settings:
        _save_run_defaults(store, settings, args)

    try:
        return COMMANDS[args.command](args, settings)
    except NewtonImplicitError as e:
        logger.error("%s failed: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.error("I/O error: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except Exception:
        logger.exception("Unexpected failure in %s", args.command)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
