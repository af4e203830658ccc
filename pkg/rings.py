"""Ring-definition files and the built-in example registry."""

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple, Union

from config import ResourceCaps
from conditions import IdealTower, QGorensteinData, build_parameter_tower, build_qgorenstein_tower
from errors import ParseError, RingFileError, ValidationError
from groebner import IdealHandle
from polyring import PolynomialRing, RingPresentation, TermOrder, parse_polynomial, parse_polynomial_list

DATA_DIR = Path(__file__).resolve().parent / "data"

# optional Q-Gorenstein data: J, h, a with x_2 J ⊆ aR, x_1..x_d, a_3..a_d and c for J^(n) = (J^n : c^∞)
QGORENSTEIN_KEYS = ("canonical", "index", "principal", "parameters", "higher_principal", "saturating")
QGORENSTEIN_REQUIRED = ("canonical", "index", "principal", "parameters", "saturating")
POLYNOMIAL_KEYS = ("canonical", "principal", "parameters", "higher_principal", "saturating")

RING_FILE_KEYS = ("p", "vars", "relation", "label", "dimension") + QGORENSTEIN_KEYS


@dataclass(frozen=True)
class RingDefinition:
    p: int
    variables: Tuple[str, ...]
    relations: Tuple[str, ...] = ()
    label: str = ""
    dimension: Optional[int] = None
    qgorenstein: Tuple[Tuple[str, str], ...] = ()

    def presentation(self, caps: Optional[ResourceCaps] = None,
                     order: Optional[TermOrder] = None) -> RingPresentation:
        ring = RingPresentation.from_strings(self.p, self.variables, self.relations, self.label)
        return ring.with_settings(caps, order)

    def qgorenstein_data(self, ring: RingPresentation) -> Optional[QGorensteinData]:
        if not self.qgorenstein:
            return None
        keys = dict(self.qgorenstein)
        params = parse_polynomial_list(keys["parameters"], ring)
        higher = parse_polynomial_list(keys.get("higher_principal", ""), ring)
        if len(params) < 2:
            raise ValidationError(f"Q-Gorenstein data needs at least two parameters, got {len(params)}")
        if len(higher) != len(params) - 2:
            raise ValidationError(
                f"{len(params)} parameters need {len(params) - 2} higher_principal elements, got {len(higher)}")
        return QGorensteinData(
            ring=ring,
            J=IdealHandle(ring, parse_polynomial_list(keys["canonical"], ring), "J"),
            h=int(keys["index"]),
            a=parse_polynomial(keys["principal"], ring),
            x1=params[0],
            x2=params[1],
            higher=tuple(zip(higher, params[2:])),
            saturating=parse_polynomial(keys["saturating"], ring),
            label=self.label,
        )


def _check_polynomials(text: str, ambient: PolynomialRing, source: str, what: str, line: int, column: int):
    """Parse each comma-separated piece, mapping errors to the file position"""
    offset = 0
    for piece in text.split(","):
        if piece.strip():
            try:
                parse_polynomial(piece, ambient)
            except ParseError as err:
                raise RingFileError(f"{source}: bad {what}: {err}", line=line,
                                    column=column + offset + (err.position or 0)) from err
        offset += len(piece) + 1


def parse_ring_text(text: str, source: str = "<ring>") -> RingDefinition:
    """Parse `key = value` lines; `#` starts a comment"""
    values: Dict[str, Tuple[str, int, int]] = {}
    relations = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if "=" not in line:
            raise RingFileError(f"{source}: expected 'key = value'", line=lineno,
                                column=len(raw) - len(raw.lstrip()) + 1)
        key_part, value_part = line.split("=", 1)
        key = key_part.strip()
        value = value_part.strip()
        column = len(key_part) + 1 + (len(value_part) - len(value_part.lstrip())) + 1
        if key not in RING_FILE_KEYS:
            raise RingFileError(f"{source}: unknown key {key!r}", line=lineno,
                                column=len(key_part) - len(key_part.lstrip()) + 1)
        if key == "relation":
            relations.append((value, lineno, column))
        elif key in values:
            raise RingFileError(f"{source}: duplicate key {key!r}", line=lineno, column=1)
        else:
            values[key] = (value, lineno, column)

    for required in ("p", "vars"):
        if required not in values:
            raise RingFileError(f"{source}: missing required key {required!r}")

    p_text, p_line, p_column = values["p"]
    try:
        p = int(p_text)
    except ValueError:
        raise RingFileError(f"{source}: p must be an integer, got {p_text!r}", line=p_line,
                            column=p_column) from None
    variables = tuple(name.strip() for name in values["vars"][0].split(","))
    if any(not name for name in variables):
        raise RingFileError(f"{source}: empty variable name", line=values["vars"][1],
                            column=values["vars"][2])
    dimension = None
    if "dimension" in values:
        d_text, d_line, d_column = values["dimension"]
        try:
            dimension = int(d_text)
        except ValueError:
            raise RingFileError(f"{source}: dimension must be an integer", line=d_line,
                                column=d_column) from None

    # NotPrimeError and bad variable names surface from the ring constructor
    ambient = PolynomialRing.create(p, variables)
    for text_value, lineno, column in relations:
        _check_polynomials(text_value, ambient, source, "relation", lineno, column)

    present = [key for key in QGORENSTEIN_KEYS if key in values]
    if present:
        for required in QGORENSTEIN_REQUIRED:
            if required not in values:
                first_line = min(values[key][1] for key in present)
                raise RingFileError(f"{source}: Q-Gorenstein data is missing {required!r}", line=first_line)
        for key in POLYNOMIAL_KEYS:
            if key in values:
                text_value, lineno, column = values[key]
                _check_polynomials(text_value, ambient, source, key, lineno, column)
        h_text, h_line, h_column = values["index"]
        try:
            int(h_text)
        except ValueError:
            raise RingFileError(f"{source}: index must be an integer", line=h_line,
                                column=h_column) from None
    qgorenstein = tuple((key, values[key][0]) for key in present)

    label = values.get("label", (Path(source).stem,))[0]
    return RingDefinition(p, variables, tuple(r for r, _, _ in relations), label, dimension, qgorenstein)


def load_ring_file(path: Union[str, Path]) -> RingDefinition:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as err:
        raise ValidationError(f"cannot read ring file {path}: {err}") from err
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as err:
        head = raw[:err.start]
        line = head.count(b"\n") + 1
        column = len(head) - (head.rfind(b"\n") + 1) + 1
        raise RingFileError(f"{path}: not valid UTF-8 ({err.reason})", line=line, column=column) from None
    return parse_ring_text(text, str(path))


# Built-in examples

@dataclass(frozen=True)
class ExampleRing:
    name: str
    description: str
    ring: RingPresentation
    dimension: int
    parameters: Tuple[str, ...] = ()
    base_socle: Optional[str] = None
    qgorenstein: Optional[QGorensteinData] = None

    def tower(self) -> IdealTower:
        if self.qgorenstein is not None:
            return build_qgorenstein_tower(self.qgorenstein)
        params = [parse_polynomial(x, self.ring) for x in self.parameters]
        u = parse_polynomial(self.base_socle, self.ring) if self.base_socle else None
        return build_parameter_tower(self.ring, params, u, label=self.name)


@dataclass(frozen=True)
class _Settings:
    p: int
    n: int
    caps: Optional[ResourceCaps]
    order: Optional[TermOrder]

    def ring(self, variables, relations=(), label="") -> RingPresentation:
        ring = RingPresentation.from_strings(self.p, variables, relations, label)
        return ring.with_settings(self.caps, self.order)


def _regular2(s: _Settings) -> ExampleRing:
    ring = s.ring(("x", "y"), label="regular-2")
    return ExampleRing("regular-2", "polynomial ring in two variables", ring, 2, ("x", "y"), "1")


def _regular3(s: _Settings) -> ExampleRing:
    ring = s.ring(("x", "y", "z"), label="regular-3")
    return ExampleRing("regular-3", "polynomial ring in three variables", ring, 3, ("x", "y", "z"), "1")


def _a1(s: _Settings) -> ExampleRing:
    ring = s.ring(("x", "y", "z"), ["x*y - z^2"], "a1")
    return ExampleRing("a1", "A_1 surface singularity xy = z^2", ring, 2, ("x", "y"), "z")


def _an(s: _Settings) -> ExampleRing:
    n = s.n
    if n < 1:
        raise ValidationError(f"A_n needs n >= 1, got {n}")
    ring = s.ring(("x", "y", "z"), [f"x*y - z^{n + 1}"], f"a{n}")
    return ExampleRing("an", f"A_{n} surface singularity xy = z^{n + 1}", ring, 2, ("x", "y"), f"z^{n}")


def _nodal_line(s: _Settings) -> ExampleRing:
    ring = s.ring(("x", "y"), ["x*y"], "nodal-line")
    return ExampleRing("nodal-line", "two crossing lines xy = 0, not strongly F-regular",
                       ring, 1, ("x + y",), "x")


def _veronese2(s: _Settings) -> ExampleRing:
    ring = s.ring(("a", "b", "c"), ["a*c - b^2"], "veronese-2")
    return ExampleRing("veronese-2", "second Veronese of the plane, ac = b^2", ring, 2, ("a", "c"), "b")


def _qgor_demo(s: _Settings) -> ExampleRing:
    ring = s.ring(("a", "b", "c", "d"), ["a*c - b^2", "a*d - b*c", "b*d - c^2"], "qgor-demo")
    a, b, c, d = ring.ambient.gens
    # J = (a, b) has height one and J^(3) = (a^2) is principal
    data = QGorensteinData(
        ring=ring,
        J=IdealHandle(ring, [a, b], "J"),
        h=3,
        a=b,
        x1=a,
        x2=d,
        higher=(),
        saturating=d,
        label="qgor-demo",
    )
    return ExampleRing("qgor-demo", "cone over the twisted cubic, Q-Gorenstein but not Gorenstein",
                       ring, 2, ("a", "d"), None, data)


EXAMPLES: Dict[str, Tuple[int, Callable[[_Settings], ExampleRing]]] = {
    "regular-2": (2, _regular2),
    "regular-3": (2, _regular3),
    "a1": (3, _a1),
    "an": (3, _an),
    "nodal-line": (2, _nodal_line),
    "veronese-2": (3, _veronese2),
    "qgor-demo": (2, _qgor_demo),
}

DEFAULT_AN_N = 2


def load_example(name: str, p: Optional[int] = None, an_n: int = DEFAULT_AN_N,
                 caps: Optional[ResourceCaps] = None, order: Optional[TermOrder] = None) -> ExampleRing:
    try:
        default_p, builder = EXAMPLES[name]
    except KeyError:
        raise ValidationError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}") from None
    return builder(_Settings(p or default_p, an_n, caps, order))
