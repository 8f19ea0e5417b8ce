"""
Exactly differentiable one-variable profile functions.

A Profile is a closed expression tree over constants, the identity, sums,
products, negation, real powers, exp and log, plus two non-elementary nodes:
antiderivatives (evaluated by adaptive quadrature) and jet nodes (callables
returning exact value/first/second derivative triples, used for ODE output).

Evaluation propagates second-order jets through the tree, so the first and
second derivatives are exact for the tree rather than finite differences.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, NamedTuple, Optional, Tuple

from scipy import integrate

from .errors import ConfigError, ConstructionError, ProfileDomainError

logger = logging.getLogger(__name__)

PROFILE_SCHEMA = "profile-v1"
DEFAULT_QUAD_TOL = 1e-12
CACHE_SIZE = 4096

INF = math.inf


class Jet(NamedTuple):
    """Value with exact first and second derivatives."""
    value: float
    d1: float
    d2: float


#########################
# Expression nodes
#########################

class Node:
    """Base class of the expression tree."""

    portable_exact = True

    def jet(self, t: float) -> Jet:
        raise NotImplementedError

    def diff(self) -> "Node":
        raise NotImplementedError

    def to_json(self) -> Dict[str, Any]:
        raise NotImplementedError

    def children(self) -> Tuple["Node", ...]:
        return ()

    def walk(self):
        yield self
        for child in self.children():
            yield from child.walk()


@dataclass(frozen=True)
class Const(Node):
    value: float

    def jet(self, t: float) -> Jet:
        return Jet(self.value, 0.0, 0.0)

    def diff(self) -> Node:
        return ZERO

    def to_json(self) -> Dict[str, Any]:
        return {"op": "const", "const": self.value}


@dataclass(frozen=True)
class Identity(Node):

    def jet(self, t: float) -> Jet:
        return Jet(t, 1.0, 0.0)

    def diff(self) -> Node:
        return ONE

    def to_json(self) -> Dict[str, Any]:
        return {"op": "id"}


ZERO = Const(0.0)
ONE = Const(1.0)


@dataclass(frozen=True)
class Sum(Node):
    args: Tuple[Node, ...]

    def jet(self, t: float) -> Jet:
        v = d1 = d2 = 0.0
        for arg in self.args:
            a = arg.jet(t)
            v += a.value
            d1 += a.d1
            d2 += a.d2
        return Jet(v, d1, d2)

    def diff(self) -> Node:
        return add(*(arg.diff() for arg in self.args))

    def children(self) -> Tuple[Node, ...]:
        return self.args

    def to_json(self) -> Dict[str, Any]:
        return {"op": "sum", "args": [a.to_json() for a in self.args]}


@dataclass(frozen=True)
class Product(Node):
    args: Tuple[Node, ...]

    def jet(self, t: float) -> Jet:
        v, d1, d2 = 1.0, 0.0, 0.0
        for arg in self.args:
            a = arg.jet(t)
            v, d1, d2 = (
                v * a.value,
                d1 * a.value + v * a.d1,
                d2 * a.value + 2.0 * d1 * a.d1 + v * a.d2,
            )
        return Jet(v, d1, d2)

    def diff(self) -> Node:
        terms = []
        for i, arg in enumerate(self.args):
            factors = list(self.args)
            factors[i] = arg.diff()
            terms.append(mul(*factors))
        return add(*terms)

    def children(self) -> Tuple[Node, ...]:
        return self.args

    def to_json(self) -> Dict[str, Any]:
        return {"op": "product", "args": [a.to_json() for a in self.args]}


@dataclass(frozen=True)
class Neg(Node):
    arg: Node

    def jet(self, t: float) -> Jet:
        a = self.arg.jet(t)
        return Jet(-a.value, -a.d1, -a.d2)

    def diff(self) -> Node:
        return neg(self.arg.diff())

    def children(self) -> Tuple[Node, ...]:
        return (self.arg,)

    def to_json(self) -> Dict[str, Any]:
        return {"op": "neg", "args": [self.arg.to_json()]}


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: float

    def jet(self, t: float) -> Jet:
        b = self.base.jet(t)
        p = self.exponent
        if b.value < 0.0 and not float(p).is_integer():
            raise ProfileDomainError(f"complex power: base {b.value!r} ** {p!r} at t={t!r}")
        if b.value == 0.0 and p < 2.0 and not (float(p).is_integer() and p >= 0.0):
            raise ProfileDomainError(f"singular power: 0 ** {p!r} at t={t!r}")
        try:
            v = b.value ** p
            dv1 = p * b.value ** (p - 1.0) if p != 0.0 else 0.0
            dv2 = p * (p - 1.0) * b.value ** (p - 2.0) if p not in (0.0, 1.0) else 0.0
        except OverflowError:
            raise ProfileDomainError(f"power overflow: base {b.value!r} ** {p!r} at t={t!r}")
        return Jet(v, dv1 * b.d1, dv2 * b.d1 * b.d1 + dv1 * b.d2)

    def diff(self) -> Node:
        return mul(Const(self.exponent), power(self.base, self.exponent - 1.0), self.base.diff())

    def children(self) -> Tuple[Node, ...]:
        return (self.base,)

    def to_json(self) -> Dict[str, Any]:
        return {"op": "pow", "args": [self.base.to_json()], "const": self.exponent}


@dataclass(frozen=True)
class Exp(Node):
    arg: Node

    def jet(self, t: float) -> Jet:
        a = self.arg.jet(t)
        try:
            e = math.exp(a.value)
        except OverflowError:
            raise ProfileDomainError(f"exp overflow at t={t!r}")
        return Jet(e, e * a.d1, e * (a.d2 + a.d1 * a.d1))

    def diff(self) -> Node:
        return mul(self, self.arg.diff())

    def children(self) -> Tuple[Node, ...]:
        return (self.arg,)

    def to_json(self) -> Dict[str, Any]:
        return {"op": "exp", "args": [self.arg.to_json()]}


@dataclass(frozen=True)
class Log(Node):
    arg: Node

    def jet(self, t: float) -> Jet:
        a = self.arg.jet(t)
        if a.value <= 0.0:
            raise ProfileDomainError(f"log of non-positive value {a.value!r} at t={t!r}")
        r = a.d1 / a.value
        return Jet(math.log(a.value), r, a.d2 / a.value - r * r)

    def diff(self) -> Node:
        return mul(self.arg.diff(), power(self.arg, -1.0))

    def children(self) -> Tuple[Node, ...]:
        return (self.arg,)

    def to_json(self) -> Dict[str, Any]:
        return {"op": "log", "args": [self.arg.to_json()]}


@dataclass(frozen=True)
class Antiderivative(Node):
    """ref_value + ∫_ref^t integrand; d1 and d2 come from the integrand's jet."""
    integrand: Node
    ref: float = 0.0
    ref_value: float = 0.0
    tol: float = DEFAULT_QUAD_TOL
    _cache: Dict[float, float] = field(default_factory=dict, compare=False, repr=False)

    portable_exact = False

    def jet(self, t: float) -> Jet:
        inner = self.integrand.jet(t)
        return Jet(self.ref_value + self.integral(t), inner.value, inner.d1)

    def integral(self, t: float) -> float:
        if t == self.ref:
            return 0.0
        cached = self._cache.get(t)
        if cached is not None:
            return cached
        value = self._quad(t)
        if len(self._cache) >= CACHE_SIZE:
            self._cache.clear()
        self._cache[t] = value
        return value

    def _quad(self, t: float) -> float:
        integrand = self.integrand
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", integrate.IntegrationWarning)
            value, abserr = integrate.quad(
                lambda s: integrand.jet(s).value,
                self.ref,
                t,
                epsabs=self.tol,
                epsrel=self.tol,
                limit=200,
            )
        for w in caught:
            logger.warning(f"Quadrature on [{self.ref}, {t}] (abserr {abserr:.3e}): {w.message}")
        return value

    def diff(self) -> Node:
        return self.integrand

    def children(self) -> Tuple[Node, ...]:
        return (self.integrand,)

    def to_json(self) -> Dict[str, Any]:
        return {
            "op": "antiderivative",
            "args": [self.integrand.to_json()],
            "ref": self.ref,
            "ref_value": self.ref_value,
            "tol": self.tol,
            "portable_exact": False,
        }


@dataclass(frozen=True, eq=False)
class JetNode(Node):
    """Callable-backed node: fn(t) returns an exact (value, d1, d2) triple."""
    fn: Callable[[float], Tuple[float, float, float]]
    label: str = "jet"
    data: Dict[str, Any] = field(default_factory=dict)

    portable_exact = False

    def jet(self, t: float) -> Jet:
        v, d1, d2 = self.fn(t)
        return Jet(float(v), float(d1), float(d2))

    def diff(self) -> Node:
        raise ConstructionError(f"jet node '{self.label}' has no structural derivative")

    def to_json(self) -> Dict[str, Any]:
        return {"op": "jet", "label": self.label, "data": self.data, "portable_exact": False}


#########################
# Folding constructors
#########################

def _const_value(node: Node) -> Optional[float]:
    return node.value if isinstance(node, Const) else None


def add(*args: Node) -> Node:
    flat = []
    total = 0.0
    for arg in args:
        parts = arg.args if isinstance(arg, Sum) else (arg,)
        for part in parts:
            c = _const_value(part)
            if c is None:
                flat.append(part)
            else:
                total += c
    if total != 0.0 or not flat:
        flat.append(Const(total))
    return flat[0] if len(flat) == 1 else Sum(tuple(flat))


def mul(*args: Node) -> Node:
    flat = []
    scale = 1.0
    for arg in args:
        parts = arg.args if isinstance(arg, Product) else (arg,)
        for part in parts:
            c = _const_value(part)
            if c is None:
                flat.append(part)
            else:
                scale *= c
    if scale == 0.0:
        return ZERO
    if not flat:
        return Const(scale)
    if scale == -1.0:
        inner = flat[0] if len(flat) == 1 else Product(tuple(flat))
        return Neg(inner)
    if scale != 1.0:
        flat.insert(0, Const(scale))
    return flat[0] if len(flat) == 1 else Product(tuple(flat))


def neg(arg: Node) -> Node:
    c = _const_value(arg)
    if c is not None:
        return Const(-c)
    if isinstance(arg, Neg):
        return arg.arg
    return Neg(arg)


def power(base: Node, exponent: float) -> Node:
    exponent = float(exponent)
    if exponent == 0.0:
        return ONE
    if exponent == 1.0:
        return base
    c = _const_value(base)
    if c is not None:
        if c < 0.0 and not exponent.is_integer():
            raise ProfileDomainError(f"complex power: {c!r} ** {exponent!r}")
        if c == 0.0 and exponent < 0.0:
            raise ProfileDomainError(f"singular power: 0 ** {exponent!r}")
        return Const(c ** exponent)
    return Pow(base, exponent)


def exp_node(arg: Node) -> Node:
    c = _const_value(arg)
    return Const(math.exp(c)) if c is not None else Exp(arg)


def log_node(arg: Node) -> Node:
    c = _const_value(arg)
    if c is not None:
        if c <= 0.0:
            raise ProfileDomainError(f"log of non-positive constant {c!r}")
        return Const(math.log(c))
    return Log(arg)


def affine_coefficients(node: Node) -> Optional[Tuple[float, float]]:
    """Return (a, b) when node == a*t + b, else None."""
    if isinstance(node, Const):
        return 0.0, node.value
    if isinstance(node, Identity):
        return 1.0, 0.0
    if isinstance(node, Neg):
        inner = affine_coefficients(node.arg)
        return None if inner is None else (-inner[0], -inner[1])
    if isinstance(node, Sum):
        a = b = 0.0
        for arg in node.args:
            part = affine_coefficients(arg)
            if part is None:
                return None
            a, b = a + part[0], b + part[1]
        return a, b
    if isinstance(node, Product):
        scale = 1.0
        linear = None
        for arg in node.args:
            c = _const_value(arg)
            if c is not None:
                scale *= c
            elif linear is None:
                linear = affine_coefficients(arg)
                if linear is None:
                    return None
            else:
                return None
        if linear is None:
            return 0.0, scale
        return scale * linear[0], scale * linear[1]
    return None


def _positive_region(node: Node) -> Tuple[float, float]:
    coeffs = affine_coefficients(node)
    if coeffs is None or coeffs[0] == 0.0:
        return -INF, INF
    a, b = coeffs
    root = -b / a
    return (root, INF) if a > 0.0 else (-INF, root)


def _intersect(d1: Tuple[float, float], d2: Tuple[float, float]) -> Tuple[float, float]:
    lo, hi = max(d1[0], d2[0]), min(d1[1], d2[1])
    if not lo < hi:
        raise ProfileDomainError(f"empty domain ({lo}, {hi})")
    return lo, hi


def _merge_variable(a: str, b: str) -> str:
    if a == "t":
        return b
    if b != "t" and b != a:
        raise ProfileDomainError(f"cannot combine profiles of '{a}' and '{b}'")
    return a


#########################
# Profile
#########################

@dataclass(frozen=True)
class Profile:
    """A scalar function of one real variable on an open interval."""
    expr: Node
    domain: Tuple[float, float] = (-INF, INF)
    variable: str = "t"

    def __post_init__(self):
        lo, hi = self.domain
        if not lo < hi:
            raise ProfileDomainError(f"empty domain ({lo}, {hi})")

    # Construction helpers

    @classmethod
    def identity(cls, variable: str = "t") -> "Profile":
        return cls(Identity(), variable=variable)

    @classmethod
    def constant(cls, value: float, variable: str = "t") -> "Profile":
        return cls(Const(float(value)), variable=variable)

    def on(self, lo: float, hi: float) -> "Profile":
        """Restrict to (lo, hi) intersected with the current domain."""
        return Profile(self.expr, _intersect(self.domain, (lo, hi)), self.variable)

    def with_variable(self, variable: str) -> "Profile":
        return Profile(self.expr, self.domain, variable)

    # Evaluation

    def contains(self, t: float) -> bool:
        return self.domain[0] < t < self.domain[1]

    def eval(self, t: float) -> Jet:
        """Return (value, d1, d2) at t; raise ProfileDomainError outside the domain."""
        t = float(t)
        if not self.contains(t):
            raise ProfileDomainError(f"t={t!r} outside domain {self.domain}")
        out = self.expr.jet(t)
        if not all(math.isfinite(x) for x in out):
            raise ProfileDomainError(f"non-finite evaluation {tuple(out)} at t={t!r}")
        return out

    def __call__(self, t: float) -> float:
        return self.eval(t).value

    def derivative(self) -> "Profile":
        return Profile(self.expr.diff(), self.domain, self.variable)

    @property
    def is_constant(self) -> bool:
        return isinstance(self.expr, Const)

    @property
    def is_closed_form(self) -> bool:
        return all(node.portable_exact for node in self.expr.walk())

    # Arithmetic

    def _combine(self, other, builder) -> "Profile":
        if not isinstance(other, Profile):
            return Profile(builder(self.expr, Const(float(other))), self.domain, self.variable)
        return Profile(
            builder(self.expr, other.expr),
            _intersect(self.domain, other.domain),
            _merge_variable(self.variable, other.variable),
        )

    def __add__(self, other):
        return self._combine(other, add)

    def __radd__(self, other):
        return self._combine(other, lambda a, b: add(b, a))

    def __sub__(self, other):
        return self._combine(other, lambda a, b: add(a, neg(b)))

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: add(b, neg(a)))

    def __mul__(self, other):
        return self._combine(other, mul)

    def __rmul__(self, other):
        return self._combine(other, lambda a, b: mul(b, a))

    def __truediv__(self, other):
        if isinstance(other, Profile):
            return self * other ** -1.0
        return self._combine(other, lambda a, b: mul(a, power(b, -1.0)))

    def __rtruediv__(self, other):
        return (self ** -1.0) * other

    def __neg__(self):
        return Profile(neg(self.expr), self.domain, self.variable)

    def __pow__(self, exponent: float):
        exponent = float(exponent)
        domain = self.domain
        if not exponent.is_integer():
            domain = _intersect(domain, _positive_region(self.expr))
        return Profile(power(self.expr, exponent), domain, self.variable)

    # Serialization

    def to_json(self) -> Dict[str, Any]:
        lo, hi = self.domain
        return {
            "schema": PROFILE_SCHEMA,
            "variable": self.variable,
            "domain": [None if math.isinf(lo) else lo, None if math.isinf(hi) else hi],
            "portable_exact": self.is_closed_form,
            "expr": self.expr.to_json(),
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "Profile":
        if data.get("schema", PROFILE_SCHEMA) != PROFILE_SCHEMA:
            raise ConfigError(f"Unsupported profile schema: {data.get('schema')}")
        lo, hi = data.get("domain", [None, None])
        return cls(
            node_from_json(data["expr"]),
            (-INF if lo is None else float(lo), INF if hi is None else float(hi)),
            data.get("variable", "t"),
        )


def exp(p: Profile) -> Profile:
    return Profile(exp_node(p.expr), p.domain, p.variable)


def log(p: Profile) -> Profile:
    domain = _intersect(p.domain, _positive_region(p.expr))
    return Profile(log_node(p.expr), domain, p.variable)


def sqrt(p: Profile) -> Profile:
    return p ** 0.5


def antiderivative(
    integrand: Profile,
    ref: float = 0.0,
    ref_value: float = 0.0,
    tol: float = DEFAULT_QUAD_TOL,
) -> Profile:
    """Profile whose derivative is `integrand` and whose value at `ref` is `ref_value`."""
    if not integrand.contains(ref):
        raise ProfileDomainError(f"reference point {ref!r} outside domain {integrand.domain}")
    node = Antiderivative(integrand.expr, float(ref), float(ref_value), float(tol))
    return Profile(node, integrand.domain, integrand.variable)


def jet_profile(
    fn: Callable[[float], Tuple[float, float, float]],
    domain: Tuple[float, float] = (-INF, INF),
    variable: str = "t",
    label: str = "jet",
    data: Optional[Dict[str, Any]] = None,
) -> Profile:
    return Profile(JetNode(fn, label, data or {}), domain, variable)


_UNARY = {"neg": neg, "exp": exp_node, "log": log_node}


def node_from_json(data: Dict[str, Any]) -> Node:
    op = data.get("op")
    args = [node_from_json(a) for a in data.get("args", [])]
    if op == "const":
        return Const(float(data["const"]))
    if op == "id":
        return Identity()
    if op == "sum":
        return add(*args)
    if op == "product":
        return mul(*args)
    if op in _UNARY:
        return _UNARY[op](args[0])
    if op == "pow":
        return power(args[0], float(data["const"]))
    if op == "antiderivative":
        return Antiderivative(
            args[0],
            float(data.get("ref", 0.0)),
            float(data.get("ref_value", 0.0)),
            float(data.get("tol", DEFAULT_QUAD_TOL)),
        )
    if op == "jet":
        raise ConfigError(f"jet node '{data.get('label')}' is not portable and cannot be loaded")
    raise ConfigError(f"Unknown profile op: {op}")
