# Standard library
import math
import re
from dataclasses import dataclass

# Local
from canonicalwebteam.curveasym.asymptote import (
    EPSILON,
    SEQUENCE_MODES,
    WINDOW,
)
from canonicalwebteam.curveasym.curve import KINDS, Curve
from canonicalwebteam.curveasym.exceptions import (
    ConfigError,
    DomainEvaluationError,
    ExpressionSyntaxError,
    InputError,
)
from canonicalwebteam.curveasym.models import SequenceSpec
from canonicalwebteam.curveasym.parsers.expression import parse
from canonicalwebteam.curveasym.support import N_GRID, SupportConfig


# key = value, with an optional trailing # comment
LINE_MATCH = re.compile(
    r"^\s*(?P<key>[A-Za-z_][\w.]*)\s*=\s*(?P<value>.*?)\s*$"
)
INFINITIES = {"inf": math.inf, "+inf": math.inf, "-inf": -math.inf}

# Expression keys each curve kind needs
CURVE_KEYS = {
    "cartesian": ("x", "y"),
    "polar": ("rho",),
    "graph": ("f",),
}
EXPRESSION_KEYS = tuple(
    key for keys in CURVE_KEYS.values() for key in keys
)
NUMBER_KEYS = (
    "a",
    "b",
    "sequence.r",
    "sequence.s",
    "sequence.start",
    "sequence.count",
    "grid.n",
    "refine_tol",
    "window",
    "cutoff",
    "epsilon",
    "start.x",
    "start.y",
)
KNOWN_KEYS = (
    {"kind", "name", "sequence.mode"}
    | set(EXPRESSION_KEYS)
    | set(NUMBER_KEYS)
)
INTEGER_KEYS = ("sequence.count", "grid.n", "window")


@dataclass(frozen=True)
class RunConfig:
    """
    Everything one `analyze` or `arclength` run needs
    """

    curve: Curve
    sequence: SequenceSpec
    support: SupportConfig
    window: int = WINDOW
    epsilon: float = EPSILON


class ConfigParser:
    """
    Reads a curve configuration file of `key = value` lines.

    Blank lines and `#` comments are skipped. Numbers may be constant
    expressions (`-pi`, `2*e`) or `inf`/`-inf`. A repeated key is
    recorded in `warnings` and the last value wins; anything else
    wrong raises ConfigError with the path and line number.
    """

    def __init__(self, path="<config>"):
        self.path = path
        self.warnings = []
        self.values = {}
        self.line_numbers = {}

    def _error(self, message, key=None):
        return ConfigError(
            self.path,
            line_number=self.line_numbers.get(key),
            message=message,
        )

    def read(self):
        with open(self.path, encoding="utf-8") as config_file:
            return self.parse(config_file.read())

    def parse(self, text):
        self.values = {}
        self.line_numbers = {}

        for line_number, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0]

            if not line.strip():
                continue

            match = LINE_MATCH.match(line)

            if not match:
                raise ConfigError(
                    self.path,
                    line_number=line_number,
                    message=f"Expected 'key = value', got {line.strip()!r}",
                )

            key, value = match.group("key"), match.group("value")

            if key not in KNOWN_KEYS:
                raise ConfigError(
                    self.path,
                    line_number=line_number,
                    message=f"Unknown key {key!r}",
                )

            if key in self.values:
                self.warnings.append(
                    f"{self.path}:{line_number}: {key} repeated, "
                    f"overriding line {self.line_numbers[key]}"
                )

            self.values[key] = value
            self.line_numbers[key] = line_number

        return self._build()

    def _require(self, key):
        if not self.values.get(key):
            raise self._error(f"Missing required key {key!r}")

        return self.values[key]

    def _number(self, key, default=None):
        text = self.values.get(key)

        if text is None:
            return default

        if text.strip().lower() in INFINITIES:
            value = INFINITIES[text.strip().lower()]
        else:
            value = self._constant(key, text)

        if key in INTEGER_KEYS:
            if not math.isfinite(value) or value != int(value):
                raise self._error(f"{key} must be a finite integer", key)
            return int(value)

        return value

    def _constant(self, key, text):
        try:
            expr = parse(text)
        except ExpressionSyntaxError as error:
            raise self._error(f"{key}: {error}", key)

        if not expr.is_constant:
            raise self._error(f"{key} must not depend on t", key)

        try:
            return expr(0.0)
        except DomainEvaluationError as error:
            raise self._error(f"{key}: {error}", key)

    def _expression(self, key):
        try:
            return parse(self._require(key))
        except ExpressionSyntaxError as error:
            raise self._error(f"{key}: {error}", key)

    def _curve(self, a, b):
        kind = self._require("kind")

        if kind not in KINDS:
            raise self._error(
                f"kind must be one of {', '.join(KINDS)}, got {kind!r}",
                "kind",
            )

        foreign = set(EXPRESSION_KEYS) - set(CURVE_KEYS[kind])

        extra = sorted(foreign & set(self.values))

        if extra:
            raise self._error(f"{extra[0]} doesn't apply to {kind}", extra[0])

        name = self.values.get("name") or self.path
        start = None

        if "start.x" in self.values or "start.y" in self.values:
            start = (
                self._number("start.x", 0.0),
                self._number("start.y", 0.0),
            )

        if math.isfinite(a) and start is not None:
            self.warnings.append(
                f"{self.path}: start.x/start.y ignored, the curve starts at a"
            )
            start = None

        if kind == "polar":
            if start is not None:
                raise self._error(
                    "A polar curve starts at the pole; drop start.x/start.y",
                    "start.x" if "start.x" in self.values else "start.y",
                )

            return Curve.polar(self._expression("rho"), (a, b), name=name)

        if not math.isfinite(a) and start is None:
            raise self._error("a = -inf needs start.x and start.y", "a")

        if kind == "graph":
            return Curve.graph(
                self._expression("f"), (a, b), start_point=start, name=name
            )

        return Curve.cartesian(
            self._expression("x"),
            self._expression("y"),
            (a, b),
            start_point=start,
            name=name,
        )

    def _sequence(self, a, b):
        mode = self.values.get("sequence.mode") or (
            "geometric_to_finite"
            if math.isfinite(a)
            else "exponential_to_minus_inf"
        )

        if mode not in SEQUENCE_MODES:
            raise self._error(
                f"sequence.mode must be one of {', '.join(SEQUENCE_MODES)}",
                "sequence.mode",
            )

        if "sequence.r" in self.values and "sequence.s" in self.values:
            raise self._error(
                "Give either sequence.r or sequence.s", "sequence.s"
            )

        if mode == "geometric_to_finite":
            ratio = self._number("sequence.r", self._number("sequence.s", 0.7))
            start = self._number(
                "sequence.start", min(a + 1.0, (a + b) / 2.0)
            )
        else:
            ratio = self._number("sequence.s", self._number("sequence.r", 1.5))
            start = self._number("sequence.start", 1.0)

        return SequenceSpec(
            mode,
            start,
            ratio,
            self._number("sequence.count", 48),
            a=a,
            b=b,
        )

    def _build(self):
        a = self._number("a")

        if a is None:
            raise self._error("Missing required key 'a'")

        b = self._number("b", math.inf)

        try:
            curve = self._curve(a, b)
            support = SupportConfig(
                n_grid=self._number("grid.n", N_GRID),
                refine_tol=self._number("refine_tol"),
                cutoff=self._number("cutoff"),
            )
        except ConfigError:
            raise
        except InputError as error:
            raise ConfigError(self.path, message=str(error))

        window = self._number("window", WINDOW)

        if window < 3:
            raise self._error("window must be at least 3", "window")

        return RunConfig(
            curve=curve,
            sequence=self._sequence(a, b),
            support=support,
            window=window,
            epsilon=self._number("epsilon", EPSILON),
        )


def read_config(path):
    """
    Parse the file at `path`; returns (RunConfig, warnings)
    """

    parser = ConfigParser(path)
    config = parser.read()

    return config, parser.warnings
