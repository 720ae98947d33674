import argparse
from collections.abc import Callable, Sequence
import logging
from pathlib import Path
import sys
import typing

import pydantic

from .algebra import (
    NotLeibnizError,
    NotRotaBaxterError,
    RBLeibnizAlgebra,
    Violation,
    check_leibniz,
    check_rota_baxter,
    check_star_morphism,
    induced_bracket_star,
    iterated_bracket,
    iterated_bracket_closed,
    nilpotency_degree,
    verify_nilpotent_vanishing,
)
from .cohomology import (
    ComplexKind,
    cohomology_dimensions,
    differential,
    is_cocycle,
    rbla_coords,
    verify_complex,
)
from .config import ConfigError, Settings
from .deformations import (
    InvalidDeformationError,
    check_deformation,
    check_infinitesimal_cocycle,
    extension_residual,
    infinitesimal,
    rigidity_certificate,
)
from .document import AlgebraDocument, DocumentError, Entry, Grid, entries_of, parse_document
from .extensions import (
    InvalidExtensionError,
    check_extension,
    default_section,
    extension_cocycle,
    section_induced_actions,
)
from .linalg import RatMatrix, format_rational
from .representations import (
    InvalidRepresentationError,
    Representation,
    check_rb_representation,
    check_representation,
    dual_representation,
    induced_representation,
    self_representation,
    validate_rb_representation,
)

l = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED_VERDICT = 1
EXIT_INPUT_ERROR = 2

_INPUT_ERRORS = (
    DocumentError,
    ConfigError,
    NotLeibnizError,
    NotRotaBaxterError,
    InvalidRepresentationError,
    InvalidDeformationError,
    InvalidExtensionError,
)


class Report(pydantic.BaseModel):
    """Everything a subcommand prints, in insertion order."""

    model_config: typing.ClassVar[pydantic.ConfigDict] = pydantic.ConfigDict(
        strict=True, extra="forbid"
    )

    command: list[str]
    verdicts: dict[str, bool] = {}
    violations: list[str] = []
    facts: dict[str, str] = {}
    dimensions: dict[str, list[int]] = {}
    tensors: dict[str, list[Entry]] = {}
    grids: dict[str, Grid] = {}
    matrices: dict[str, Grid] | None = None

    def verdict(self, name: str, violations: Sequence[Violation]):
        self.verdicts[name] = not violations
        self.violations += [f"{name}: {v.describe()}" for v in violations]

    def exit_code(self) -> int:
        return EXIT_OK if all(self.verdicts.values()) else EXIT_FAILED_VERDICT

    def render_json(self) -> str:
        return self.model_dump_json(indent=4, exclude_none=True)

    def render_text(self) -> str:
        lines = [f"command: {' '.join(self.command)}"]
        verdicts = [f"{name}: {'ok' if ok else 'FAILED'}" for name, ok in self.verdicts.items()]
        if verdicts:
            lines.append(", ".join(verdicts))
        lines += [f"violation: {v}" for v in self.violations]
        lines += [f"{name}: {value}" for name, value in self.facts.items()]
        for name, dims in self.dimensions.items():
            lines.append(f"{name}:")
            lines += [f"  H^{n} = {d}" for n, d in enumerate(dims)]
        for name, entries in self.tensors.items():
            lines.append(f"{name}:")
            lines += [f"  ({i},{j},{k}) = {format_rational(v)}" for i, j, k, v in entries]
        for section in (self.grids, self.matrices or {}):
            for name, grid in section.items():
                lines.append(f"{name}:")
                lines += ["  [" + " ".join(format_rational(x) for x in row) + "]" for row in grid]
        return "\n".join(lines) + "\n"


def _load(path: Path) -> AlgebraDocument:
    try:
        text = path.read_bytes()
    except OSError as e:
        raise DocumentError(f"Cannot read {path}: {e.strerror}") from None
    return parse_document(text)


def _valid_algebra(doc: AlgebraDocument) -> RBLeibnizAlgebra:
    a = doc.algebra()
    return RBLeibnizAlgebra.validated(a.alg, a.t)


def _valid_representation(doc: AlgebraDocument, a: RBLeibnizAlgebra) -> Representation:
    r = doc.representation_for()
    if r is None:
        return self_representation(a)
    validate_rb_representation(a, r)
    return r


def _grid(m: RatMatrix) -> Grid:
    return m.to_rows()


def _validate(
    args: argparse.Namespace, doc: AlgebraDocument, settings: Settings, report: Report
):
    a = doc.algebra()
    report.verdict("leibniz", check_leibniz(a.bracket))
    report.verdict("rota-baxter", check_rota_baxter(a.alg, a.t))
    if report.verdicts["leibniz"]:
        report.facts["lie"] = "yes" if a.alg.is_lie() else "no"
    if (r := doc.representation_for()) is not None:
        report.verdict("representation", check_representation(a.alg, r))
        report.verdict("rb-representation", check_rb_representation(a, r))
    if (d := doc.deformation_for()) is not None:
        report.verdict("deformation", check_deformation(d))
    if (e := doc.extension_for()) is not None:
        report.verdict("extension", check_extension(e))


def _cohomology(
    args: argparse.Namespace, doc: AlgebraDocument, settings: Settings, report: Report
):
    a = _valid_algebra(doc)
    r = _valid_representation(doc, a)
    kind = ComplexKind(args.complex)
    max_degree = settings.max_degree if args.max_degree is None else args.max_degree
    report.dimensions[f"H_{kind.value}"] = cohomology_dimensions(a, r, kind, max_degree, settings)
    if max_degree >= 1:
        report.verdicts["complex"] = verify_complex(a, r, kind, max_degree, settings)
    if args.emit_matrices:
        report.matrices = {
            f"d^{n}": _grid(differential(a, r, kind, n, settings)) for n in range(max_degree + 1)
        }


def _induced(
    args: argparse.Namespace, doc: AlgebraDocument, settings: Settings, report: Report
):
    a = _valid_algebra(doc)
    star = induced_bracket_star(a)
    report.verdict("star-leibniz", check_leibniz(star.bracket))
    report.verdict("star-rota-baxter", check_rota_baxter(star.alg, star.t))
    report.verdict("star-morphism", check_star_morphism(a))
    iterated = iterated_bracket(a, args.power)
    report.verdicts["closed-form"] = iterated == iterated_bracket_closed(a, args.power)
    report.tensors["star bracket"] = entries_of(star.bracket)
    report.tensors[f"bracket_{args.power}"] = entries_of(iterated)
    if (r := doc.representation_for()) is not None:
        validate_rb_representation(a, r)
        induced = induced_representation(a, r)
        report.tensors["induced left"] = entries_of(induced.left)
        report.tensors["induced right"] = entries_of(induced.right)


def _dual(
    args: argparse.Namespace, doc: AlgebraDocument, settings: Settings, report: Report
):
    a = _valid_algebra(doc)
    dual = dual_representation(a, _valid_representation(doc, a))
    report.verdict("representation", check_representation(a.alg, dual))
    report.verdict("rb-representation", check_rb_representation(a, dual))
    report.tensors["dual left"] = entries_of(dual.left)
    report.tensors["dual right"] = entries_of(dual.right)
    report.grids["dual t_v"] = _grid(dual.t_v.m)


def _nilpotency(
    args: argparse.Namespace, doc: AlgebraDocument, settings: Settings, report: Report
):
    a = _valid_algebra(doc)
    degree = nilpotency_degree(a.t)
    if degree is None:
        report.facts["nilpotency"] = "not nilpotent"
        return
    report.facts["nilpotency"] = f"degree {degree}"
    report.verdicts["vanishing"] = all(
        verify_nilpotent_vanishing(a, k) for k in range(2 * degree + 1, 2 * degree + 4)
    )


def _deform(
    args: argparse.Namespace, doc: AlgebraDocument, settings: Settings, report: Report
):
    _ = _valid_algebra(doc)
    d = doc.deformation_for()
    if d is None:
        raise DocumentError("The deform command needs a deformation block")
    up_to = d.order if args.order is None else min(args.order, d.order)
    violations = check_deformation(d, up_to)
    report.verdict("deformation", violations)
    inf = infinitesimal(d)
    report.facts["infinitesimal"] = "none" if inf is None else f"degree {inf.degree}"
    if inf is not None and inf.degree <= up_to and not check_deformation(d, inf.degree):
        report.verdicts["infinitesimal-cocycle"] = check_infinitesimal_cocycle(d, settings)
    if not violations and up_to == d.order:
        residual = extension_residual(d)
        report.facts["residual"] = (
            f"order {residual.order} {'zero' if residual.is_zero() else 'nonzero'}"
        )
    certificate = rigidity_certificate(d.base, settings)
    report.facts["rigid"] = (
        "no certificate (H^2 != 0)"
        if certificate is None
        else f"H^2 = 0 (rank d^1 = {certificate.rank_d1}, rank d^2 = {certificate.rank_d2})"
    )


def _extension(
    args: argparse.Namespace, doc: AlgebraDocument, settings: Settings, report: Report
):
    a = _valid_algebra(doc)
    e = doc.extension_for()
    if e is None:
        raise DocumentError("The extension command needs an extension block")
    report.verdict("extension", check_extension(e))
    if not report.verdicts["extension"]:
        return
    s = default_section(e)
    r = section_induced_actions(e, s)
    report.verdict("representation", check_representation(a.alg, r))
    report.verdict("rb-representation", check_rb_representation(a, r))
    psi, chi = extension_cocycle(e, s)
    if report.verdicts["representation"] and report.verdicts["rb-representation"]:
        report.verdicts["cocycle"] = is_cocycle(
            a, r, 2, ComplexKind.RBLA, rbla_coords(psi, chi), settings
        )
    report.grids["section"] = _grid(s.s.m)
    report.tensors["psi"] = entries_of(psi.to_bilinear())
    report.grids["chi"] = _grid(chi.to_operator().m)


type Handler = Callable[[argparse.Namespace, AlgebraDocument, Settings, Report], None]

_HANDLERS: dict[str, Handler] = {
    "validate": _validate,
    "cohomology": _cohomology,
    "induced": _induced,
    "dual": _dual,
    "nilpotency": _nilpotency,
    "deform": _deform,
    "extension": _extension,
}


def _count(minimum: int) -> Callable[[str], int]:
    def parse(value: str) -> int:
        parsed = int(value)
        if parsed < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}")
        return parsed

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbleibniz",
        description="Exact computations with Rota-Baxter Leibniz algebras",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug messages")
    parser.add_argument("--format", choices=["text", "json"], default="text")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, summary: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=summary)
        sub.add_argument("file", type=Path)
        return sub

    command("validate", "check the Leibniz, Rota-Baxter and optional block axioms")
    cohomology = command("cohomology", "dimensions of H^0..H^N")
    cohomology.add_argument("--max-degree", type=_count(0), default=None)
    cohomology.add_argument(
        "--complex", choices=[kind.value for kind in ComplexKind], default=ComplexKind.RBLA.value
    )
    cohomology.add_argument("--emit-matrices", action="store_true")
    induced = command("induced", "the induced bracket and the iterated bracket of a given power")
    induced.add_argument("--power", type=_count(1), default=1)
    command("dual", "the dual representation")
    command("nilpotency", "the nilpotency degree of the operator")
    deform = command("deform", "check a truncated deformation")
    deform.add_argument("--order", type=_count(1), default=None)
    command("extension", "the cocycle of an abelian extension")
    return parser


def run(args: argparse.Namespace, environ: dict[str, str] | None = None) -> int:
    report = Report(command=[args.command, str(args.file)])
    try:
        settings = Settings.from_env(environ)
        doc = _load(args.file)
        _HANDLERS[args.command](args, doc, settings, report)
    except _INPUT_ERRORS as e:
        l.error(f"{args.file}: {e}")
        return EXIT_INPUT_ERROR
    output = report.render_json() if args.format == "json" else report.render_text()
    _ = sys.stdout.write(output)
    return report.exit_code()


def main(argv: Sequence[str] | None = None, environ: dict[str, str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return run(args, environ)
