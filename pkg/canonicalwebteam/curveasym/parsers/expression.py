# Standard library
import re
from dataclasses import dataclass

# Packages
import numpy as np

# Local
from canonicalwebteam.curveasym.exceptions import (
    DomainEvaluationError,
    ExpressionSyntaxError,
    UnknownIdentifierError,
)

# Regex that matches one token, skipping leading whitespace
TOKEN_MATCH = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),])"
    r")"
)

VARIABLE = "t"

CONSTANTS = {"pi": np.pi, "e": np.e}

# name: arity
FUNCTIONS = {
    "sin": 1,
    "cos": 1,
    "tan": 1,
    "exp": 1,
    "ln": 1,
    "sqrt": 1,
    "abs": 1,
    "arccot": 1,
    "pow": 2,
}


def _first_offender(mask, values):
    values = np.broadcast_to(values, np.shape(mask))
    return float(np.asarray(values)[np.asarray(mask)].flat[0])


def _finite(name, result, argument):
    bad = ~np.isfinite(result)

    if np.any(bad):
        raise DomainEvaluationError(name, _first_offender(bad, argument))

    return result


def _power(base, exponent):
    base, exponent = np.broadcast_arrays(base, exponent)
    integral = np.equal(np.mod(exponent, 1.0), 0.0)

    # Non-integer exponents only for non-negative bases
    bad = (~integral & (base < 0)) | ((base == 0) & (exponent < 0))

    if np.any(bad):
        raise DomainEvaluationError("^", _first_offender(bad, base))

    return _finite("^", np.power(base, exponent), base)


def _arccot(x):
    # Range (0, pi): arccot(-x) = pi - arccot(x)
    return np.pi / 2.0 - np.arctan(x)


def _apply(name, args):
    if name == "pow":
        return _power(*args)

    (x,) = args

    if name == "ln":
        if np.any(x <= 0):
            raise DomainEvaluationError("ln", _first_offender(x <= 0, x))
        return np.log(x)

    if name == "sqrt":
        if np.any(x < 0):
            raise DomainEvaluationError("sqrt", _first_offender(x < 0, x))
        return np.sqrt(x)

    if name == "arccot":
        return _arccot(x)

    function = {
        "sin": np.sin,
        "cos": np.cos,
        "tan": np.tan,
        "exp": np.exp,
        "abs": np.abs,
    }[name]

    return _finite(name, function(x), x)


def _byte_offset(text, offset):
    # Offsets in errors count UTF-8 bytes
    return len(text[:offset].encode())


@dataclass(frozen=True)
class Number:
    value: float

    def evaluate(self, t):
        return np.float64(self.value)

    def __str__(self):
        return repr(float(self.value))


@dataclass(frozen=True)
class Variable:
    def evaluate(self, t):
        return t

    def __str__(self):
        return VARIABLE


@dataclass(frozen=True)
class Constant:
    name: str

    def evaluate(self, t):
        return np.float64(CONSTANTS[self.name])

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Negate:
    operand: object

    def evaluate(self, t):
        return -self.operand.evaluate(t)

    def __str__(self):
        return f"(-{self.operand})"


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: object
    right: object

    def evaluate(self, t):
        left = self.left.evaluate(t)
        right = self.right.evaluate(t)

        if self.op == "+":
            return _finite("+", left + right, left)
        if self.op == "-":
            return _finite("-", left - right, left)
        if self.op == "*":
            return _finite("*", left * right, left)
        if self.op == "/":
            if np.any(np.equal(right, 0)):
                raise DomainEvaluationError("/", 0.0)
            return _finite("/", left / right, left)

        return _power(left, right)

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple

    def evaluate(self, t):
        return _apply(self.name, [arg.evaluate(t) for arg in self.args])

    def __str__(self):
        return f"{self.name}({', '.join(str(arg) for arg in self.args)})"


class Expr:
    """
    A parsed expression of the single variable `t`.

    Calling it evaluates at a float or at a numpy array of values;
    points where it has no finite real value raise
    DomainEvaluationError instead of returning nan or inf.
    """

    def __init__(self, root, text=None):
        self.root = root
        self.text = text if text is not None else str(root)

    def __call__(self, t):
        return eval_expr(self, t)

    def __eq__(self, other):
        return isinstance(other, Expr) and self.root == other.root

    def __hash__(self):
        return hash(self.root)

    def __str__(self):
        return str(self.root)

    def __repr__(self):
        return f"Expr({self.text!r})"

    @property
    def is_constant(self):
        return VARIABLE not in _names(self.root)


def _names(node):
    if isinstance(node, Variable):
        return {VARIABLE}
    if isinstance(node, Negate):
        return _names(node.operand)
    if isinstance(node, BinaryOp):
        return _names(node.left) | _names(node.right)
    if isinstance(node, Call):
        return set().union(*(_names(arg) for arg in node.args))

    return set()


class ExpressionParser:
    """
    Recursive descent over the token stream of one expression.

    Precedence, from loosest to tightest: `+ -`, `* /`, unary minus,
    `^` (right-associative). There is no implicit multiplication.
    """

    def __init__(self, text):
        self.text = text
        self.tokens = self._tokenize(text)
        self.position = 0

    def parse(self):
        if not self.tokens:
            raise ExpressionSyntaxError(
                self.text, 0, message="Empty expression"
            )

        root = self._parse_sum()

        if self.position < len(self.tokens):
            kind, value, offset = self.tokens[self.position]
            raise ExpressionSyntaxError(
                self.text, offset, message=f"Unexpected {value!r}"
            )

        return root

    def _tokenize(self, text):
        tokens = []
        offset = 0

        while offset < len(text):
            if text[offset:].strip() == "":
                break

            match = TOKEN_MATCH.match(text, offset)

            if not match or match.end() == offset:
                start = offset + len(text[offset:]) - len(
                    text[offset:].lstrip()
                )
                raise ExpressionSyntaxError(
                    text,
                    _byte_offset(text, start),
                    message=f"Unexpected character {text[start]!r}",
                )

            kind = match.lastgroup
            start = _byte_offset(text, match.start(kind))
            tokens.append((kind, match.group(kind), start))
            offset = match.end()

        return tokens

    def _peek(self):
        if self.position < len(self.tokens):
            return self.tokens[self.position]

        return (None, None, _byte_offset(self.text, len(self.text)))

    def _take(self):
        token = self._peek()
        self.position += 1
        return token

    def _expect(self, op):
        kind, value, offset = self._take()

        if kind != "op" or value != op:
            found = "end of input" if kind is None else repr(value)
            raise ExpressionSyntaxError(
                self.text, offset, message=f"Expected {op!r}, found {found}"
            )

    def _parse_sum(self):
        node = self._parse_product()

        while self._peek()[0] == "op" and self._peek()[1] in "+-":
            op = self._take()[1]
            node = BinaryOp(op, node, self._parse_product())

        return node

    def _parse_product(self):
        node = self._parse_unary()

        while self._peek()[0] == "op" and self._peek()[1] in "*/":
            op = self._take()[1]
            node = BinaryOp(op, node, self._parse_unary())

        return node

    def _parse_unary(self):
        kind, value, offset = self._peek()

        if kind == "op" and value == "-":
            self._take()
            return Negate(self._parse_unary())

        if kind == "op" and value == "+":
            self._take()
            return self._parse_unary()

        return self._parse_power()

    def _parse_power(self):
        base = self._parse_atom()

        if self._peek()[0] == "op" and self._peek()[1] == "^":
            self._take()
            return BinaryOp("^", base, self._parse_unary())

        return base

    def _parse_atom(self):
        kind, value, offset = self._take()

        if kind == "number":
            return Number(float(value))

        if kind == "name":
            return self._parse_name(value, offset)

        if kind == "op" and value == "(":
            node = self._parse_sum()
            self._expect(")")
            return node

        found = "end of input" if kind is None else repr(value)
        raise ExpressionSyntaxError(
            self.text, offset, message=f"Unexpected {found}"
        )

    def _parse_name(self, name, offset):
        if name == VARIABLE:
            return Variable()

        if name in CONSTANTS:
            return Constant(name)

        if name not in FUNCTIONS:
            raise UnknownIdentifierError(self.text, offset, name)

        self._expect("(")
        args = [self._parse_sum()]

        while self._peek()[0] == "op" and self._peek()[1] == ",":
            self._take()
            args.append(self._parse_sum())

        self._expect(")")

        if len(args) != FUNCTIONS[name]:
            raise ExpressionSyntaxError(
                self.text,
                offset,
                message=(
                    f"{name} takes {FUNCTIONS[name]} argument(s), "
                    f"got {len(args)}"
                ),
            )

        return Call(name, tuple(args))


def parse(text):
    """
    Parse expression text into an Expr
    """

    if not isinstance(text, str) or not text.strip():
        raise ExpressionSyntaxError(
            text or "", 0, message="Empty expression"
        )

    return Expr(ExpressionParser(text).parse(), text)


def eval_expr(expr, t):
    """
    Evaluate an Expr at a float (returns a float)
    or at a numpy array (returns an array of the same shape)
    """

    values = np.asarray(t, dtype=float)

    with np.errstate(all="ignore"):
        result = expr.root.evaluate(values)

    result = np.asarray(result, dtype=float)

    if values.ndim == 0:
        return float(result)

    return np.broadcast_to(result, values.shape).copy()
